#pragma once

#include <string>
#include <vector>

#include "treecut/augmented_eval.hpp"
#include "treecut/diameter_core.hpp"

namespace treecut {

// Compressed view of a tree seen from its backbone: the backbone polyline,
// the two primary heights, and one pendant (arc, height) per secondary
// sub-tree.  Shortcut endpoints are given as arc positions s <= t measured
// from a.  Evaluation costs O(k) for k secondary sub-trees.
class CaterpillarView {
public:
    struct Pendant {
        double arc;
        double height;
        int index;  // index into BackboneDecomposition::secondary
    };

    // One candidate distance in T+pq.
    struct Term {
        double value = 0.0;
        PairSubType subtype = PairSubType::XY;
        unsigned paths = 0;  // bit mask over PathType
        int i = -1;          // pendant indices (secondary index), -1 if n/a
        int j = -1;
    };

    struct Families {
        double s = 0.0, t = 0.0;
        double ell = 0.0;    // |pq|
        double cycle = 0.0;  // |pq| + d_T(p,q)
        double xy = 0.0;
        double xb = 0.0;     // x-▲ and x-•
        double by = 0.0;     // ▲-y and •-y
        double sc = 0.0;     // ▲-• (antipode on the tree)
        double so = 0.0;     // ▲-o (antipode inside pq)
        double ss_pq = 0.0;  // ▲-pq-▲ with both roots on the cycle
        double ss_tree = 0.0;
        double diameter = 0.0;
    };

    CaterpillarView(const GeometricTree& tree, const BackboneDecomposition& dec);

    // Same caterpillar read from b toward a; arcs map to length - arc.
    CaterpillarView mirrored() const;

    double length() const { return length_; }
    double center_arc() const { return center_arc_; }
    double delta() const { return delta_; }
    double tol() const { return tol_; }
    double h_x() const { return h_x_; }
    double h_y() const { return h_y_; }
    const std::vector<double>& vertex_arcs() const { return arcs_; }
    const std::vector<Pendant>& pendants() const { return pendants_; }
    bool is_mirrored() const { return mirrored_; }

    Vec2 at(double arc) const;
    double chord(double s, double t) const;

    Families evaluate(double s, double t) const;
    // All terms within tolerance of the diameter.
    std::vector<Term> tight_terms(double s, double t) const;
    // Bit 4 * subtype + path type set for every tight term; f must come from
    // evaluate(s, t).
    unsigned tight_mask(double s, double t, const Families& f) const;

private:
    CaterpillarView() = default;
    void prepare();
    template <class Visit>
    void visit_terms(double s, double t, double ell, Visit&& visit) const;

    std::vector<double> arcs_;
    std::vector<Vec2> points_;
    std::vector<Pendant> pendants_;
    // best pair sum among pendants [0, m) and (m, end] on one side of p / q
    std::vector<double> prefix_pair_;
    std::vector<double> prefix_reach_;  // max (height - arc) over [0, m)
    std::vector<double> suffix_pair_;
    std::vector<double> suffix_reach_;  // max (height + arc) over [m, end)
    double length_ = 0.0;
    double center_arc_ = 0.0;
    double h_x_ = 0.0;
    double h_y_ = 0.0;
    double delta_ = 0.0;
    double tol_ = 0.0;
    bool mirrored_ = false;
};

unsigned path_bit(PathType t);
unsigned term_bit(PairSubType sub, PathType path);
std::vector<PathType> paths_of(unsigned mask);

}  // namespace treecut
