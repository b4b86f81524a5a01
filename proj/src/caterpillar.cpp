#include "treecut/caterpillar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace treecut {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class Family { XY, XB, BY, SC, SO, SSPQ, SSTREE, SSOTHER };

struct CycleNode {
    double theta;
    double weight;
    int index;  // secondary index, -1 for a compressed side node
};

struct CyclePairs {
    double tree = kNegInf;
    double around = kNegInf;
    int tree_i = -1, tree_j = -1;
    int around_i = -1, around_j = -1;
};

// Maximum of w_i + w_j + cyclic distance over pairs i < j of nodes sorted by
// theta, split by whether the shorter way stays on the tree side
// (theta_j - theta_i <= C/2) or goes around through the shortcut.
CyclePairs cycle_pairs(const std::vector<CycleNode>& nodes, double cyc) {
    CyclePairs r;
    const double half = cyc / 2.0;
    std::deque<std::size_t> window;  // tree-side candidates, decreasing w - theta
    double around_best = kNegInf;
    int around_arg = -1;
    std::size_t split = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (j > 0) {
            std::size_t k = j - 1;
            double key = nodes[k].weight - nodes[k].theta;
            while (!window.empty() && nodes[window.back()].weight - nodes[window.back()].theta <= key) window.pop_back();
            window.push_back(k);
        }
        while (split < j && nodes[j].theta - nodes[split].theta > half) {
            double key = nodes[split].weight + nodes[split].theta;
            if (key > around_best) {
                around_best = key;
                around_arg = static_cast<int>(split);
            }
            ++split;
        }
        while (!window.empty() && window.front() < split) window.pop_front();
        const auto& nj = nodes[j];
        if (!window.empty()) {
            const auto& ni = nodes[window.front()];
            double v = ni.weight - ni.theta + nj.weight + nj.theta;
            if (v > r.tree) {
                r.tree = v;
                r.tree_i = static_cast<int>(window.front());
                r.tree_j = static_cast<int>(j);
            }
        }
        if (around_arg >= 0) {
            double v = around_best + nj.weight + cyc - nj.theta;
            if (v > r.around) {
                r.around = v;
                r.around_i = around_arg;
                r.around_j = static_cast<int>(j);
            }
        }
    }
    return r;
}

unsigned both_tree_and_pq() { return path_bit(PathType::ViaTree) | path_bit(PathType::ViaShortcut); }

// min of a tree route and a shortcut route, with the tight route mask
std::pair<double, unsigned> shorter(double tree_len, double via_len, double tol) {
    double v = std::min(tree_len, via_len);
    unsigned m = 0;
    if (tree_len <= v + tol) m |= path_bit(PathType::ViaTree);
    if (via_len <= v + tol) m |= path_bit(PathType::ViaShortcut);
    return {v, m};
}

}  // namespace

unsigned path_bit(PathType t) { return 1u << static_cast<unsigned>(t); }

unsigned term_bit(PairSubType sub, PathType path) {
    return 1u << (4u * static_cast<unsigned>(sub) + static_cast<unsigned>(path));
}

std::vector<PathType> paths_of(unsigned mask) {
    std::vector<PathType> out;
    for (PathType t : {PathType::ViaShortcut, PathType::ViaTree, PathType::ViaP, PathType::ViaQ})
        if (mask & path_bit(t)) out.push_back(t);
    return out;
}

CaterpillarView::CaterpillarView(const GeometricTree& tree, const BackboneDecomposition& dec) {
    for (std::size_t k = 0; k < dec.backbone_vertices.size(); ++k) {
        arcs_.push_back(dec.backbone_arc[k]);
        points_.push_back(tree.position(dec.backbone_vertices[k]));
    }
    for (std::size_t i = 0; i < dec.secondary.size(); ++i)
        pendants_.push_back({dec.secondary[i].arc, dec.secondary[i].height, static_cast<int>(i)});
    std::sort(pendants_.begin(), pendants_.end(), [](const Pendant& l, const Pendant& r) { return l.arc < r.arc; });
    length_ = dec.length;
    center_arc_ = dec.center_arc;
    h_x_ = dec.h_x;
    h_y_ = dec.h_y;
    delta_ = dec.delta;
    tol_ = tree.tol();
    prepare();
}

void CaterpillarView::prepare() {
    const std::size_t k = pendants_.size();
    prefix_pair_.assign(k + 1, kNegInf);
    prefix_reach_.assign(k + 1, kNegInf);
    for (std::size_t m = 0; m < k; ++m) {
        const auto& pm = pendants_[m];
        prefix_pair_[m + 1] = std::max(prefix_pair_[m], pm.height + pm.arc + prefix_reach_[m]);
        prefix_reach_[m + 1] = std::max(prefix_reach_[m], pm.height - pm.arc);
    }
    suffix_pair_.assign(k + 1, kNegInf);
    suffix_reach_.assign(k + 1, kNegInf);
    for (std::size_t m = k; m-- > 0;) {
        const auto& pm = pendants_[m];
        suffix_pair_[m] = std::max(suffix_pair_[m + 1], pm.height - pm.arc + suffix_reach_[m + 1]);
        suffix_reach_[m] = std::max(suffix_reach_[m + 1], pm.height + pm.arc);
    }
}

CaterpillarView CaterpillarView::mirrored() const {
    CaterpillarView m;
    m.length_ = length_;
    for (std::size_t k = arcs_.size(); k-- > 0;) {
        m.arcs_.push_back(length_ - arcs_[k]);
        m.points_.push_back(points_[k]);
    }
    for (std::size_t k = pendants_.size(); k-- > 0;) {
        auto p = pendants_[k];
        p.arc = length_ - p.arc;
        m.pendants_.push_back(p);
    }
    m.center_arc_ = length_ - center_arc_;
    m.h_x_ = h_y_;
    m.h_y_ = h_x_;
    m.delta_ = delta_;
    m.tol_ = tol_;
    m.mirrored_ = !mirrored_;
    m.prepare();
    return m;
}

Vec2 CaterpillarView::at(double arc) const {
    if (arcs_.size() == 1) return points_[0];
    arc = std::clamp(arc, 0.0, length_);
    auto it = std::upper_bound(arcs_.begin(), arcs_.end(), arc);
    std::size_t k = it == arcs_.end() ? arcs_.size() - 1 : static_cast<std::size_t>(it - arcs_.begin());
    if (k == 0) k = 1;
    double w = arcs_[k] - arcs_[k - 1];
    double f = w > 0.0 ? (arc - arcs_[k - 1]) / w : 0.0;
    const Vec2 &u = points_[k - 1], &v = points_[k];
    return {u.x + f * (v.x - u.x), u.y + f * (v.y - u.y)};
}

double CaterpillarView::chord(double s, double t) const { return std::min(norm(at(s), at(t)), std::abs(t - s)); }

template <class Visit>
void CaterpillarView::visit_terms(double s, double t, double ell, Visit&& visit) const {
    const double tol = tol_;
    const double span = t - s;
    const double cyc = ell + span, half = cyc / 2.0;
    const double ex = h_x_ + s, ey = h_y_ + length_ - t;
    const unsigned both = both_tree_and_pq();

    {
        auto [v, m] = shorter(h_x_ + length_ + h_y_, ex + ell + ey, tol);
        visit(Family::XY, Term{v, PairSubType::XY, m, -1, -1});
    }
    visit(Family::XB, Term{ex + half, PairSubType::XC, both, -1, -1});
    visit(Family::BY, Term{ey + half, PairSubType::CY, both, -1, -1});

    const auto k = pendants_.size();
    const std::size_t left_end =
        static_cast<std::size_t>(std::lower_bound(pendants_.begin(), pendants_.end(), s,
                                                  [](const Pendant& p, double v) { return p.arc < v; }) -
                                 pendants_.begin());
    const std::size_t right_begin =
        static_cast<std::size_t>(std::upper_bound(pendants_.begin(), pendants_.end(), t,
                                                  [](double v, const Pendant& p) { return v < p.arc; }) -
                                 pendants_.begin());

    std::vector<CycleNode> on_cycle;
    on_cycle.reserve(right_begin > left_end ? right_begin - left_end : 0);
    for (std::size_t m = 0; m < k; ++m) {
        const auto& pd = pendants_[m];
        const double h = pd.height, rho = pd.arc;
        const int id = pd.index;
        if (m < left_end) {
            visit(Family::XB, Term{h_x_ + rho + h, PairSubType::XS, path_bit(PathType::ViaTree), id, -1});
            auto [v, msk] = shorter(h + length_ - rho + h_y_, h + s - rho + ell + ey, tol);
            visit(Family::BY, Term{v, PairSubType::SY, msk, id, -1});
            visit(Family::SC, Term{h + s - rho + half, PairSubType::SC, both, id, -1});
        } else if (m >= right_begin) {
            auto [v, msk] = shorter(h_x_ + rho + h, ex + ell + rho - t + h, tol);
            visit(Family::XB, Term{v, PairSubType::XS, msk, id, -1});
            visit(Family::BY, Term{h + length_ - rho + h_y_, PairSubType::SY, path_bit(PathType::ViaTree), id, -1});
            visit(Family::SC, Term{h + rho - t + half, PairSubType::SC, both, id, -1});
        } else {
            const double alpha = rho - s;
            auto [vx, mx] = shorter(ex + alpha + h, ex + ell + t - rho + h, tol);
            visit(Family::XB, Term{vx, PairSubType::XS, mx, id, -1});
            auto [vy, my] = shorter(h + t - rho + ey, h + alpha + ell + ey, tol);
            visit(Family::BY, Term{vy, PairSubType::SY, my, id, -1});
            const double theta = alpha + half;
            const bool inside = ell > 0.0 && theta > span && theta < cyc;
            if (inside)
                visit(Family::SO, Term{h + half, PairSubType::SO, path_bit(PathType::ViaP) | path_bit(PathType::ViaQ), id, -1});
            else
                visit(Family::SC, Term{h + half, PairSubType::SC, both, id, -1});
            on_cycle.push_back({alpha, h, id});
        }
    }

    auto pair_mask = [&](double d) {
        unsigned msk = 0;
        if (d <= cyc - d + tol) msk |= path_bit(PathType::ViaTree);
        if (cyc - d <= d + tol) msk |= path_bit(PathType::ViaShortcut);
        return msk;
    };
    auto emit_pairs = [&](const std::vector<CycleNode>& nodes, const CyclePairs& cp, Family tree_f, Family around_f) {
        if (cp.tree_i >= 0) {
            const auto &a = nodes[cp.tree_i], &b = nodes[cp.tree_j];
            visit(tree_f, Term{cp.tree, PairSubType::SS, pair_mask(b.theta - a.theta), a.index, b.index});
        }
        if (cp.around_i >= 0) {
            const auto &a = nodes[cp.around_i], &b = nodes[cp.around_j];
            visit(around_f, Term{cp.around, PairSubType::SS, pair_mask(b.theta - a.theta), a.index, b.index});
        }
    };
    emit_pairs(on_cycle, cycle_pairs(on_cycle, cyc), Family::SSTREE, Family::SSPQ);

    // pairs that involve pendants hanging off the far side of p or q
    if (left_end > 0 || right_begin < k) {
        std::vector<CycleNode> all;
        all.reserve(on_cycle.size() + 2);
        if (left_end > 0) all.push_back({0.0, s + prefix_reach_[left_end], -1});
        for (auto& nd : on_cycle) all.push_back(nd);
        if (right_begin < k) all.push_back({span, suffix_reach_[right_begin] - t, -1});
        emit_pairs(all, cycle_pairs(all, cyc), Family::SSOTHER, Family::SSOTHER);
        if (left_end > 1)
            visit(Family::SSOTHER, Term{prefix_pair_[left_end], PairSubType::SS, path_bit(PathType::ViaTree), -1, -1});
        if (k - right_begin > 1)
            visit(Family::SSOTHER, Term{suffix_pair_[right_begin], PairSubType::SS, path_bit(PathType::ViaTree), -1, -1});
    }
}

CaterpillarView::Families CaterpillarView::evaluate(double s, double t) const {
    Families f;
    f.s = s;
    f.t = t;
    f.ell = chord(s, t);
    f.cycle = f.ell + (t - s);
    f.xy = f.xb = f.by = f.sc = f.so = f.ss_pq = f.ss_tree = kNegInf;
    double other = kNegInf;
    visit_terms(s, t, f.ell, [&](Family fam, const Term& term) {
        double* slot = nullptr;
        switch (fam) {
            case Family::XY: slot = &f.xy; break;
            case Family::XB: slot = &f.xb; break;
            case Family::BY: slot = &f.by; break;
            case Family::SC: slot = &f.sc; break;
            case Family::SO: slot = &f.so; break;
            case Family::SSPQ: slot = &f.ss_pq; break;
            case Family::SSTREE: slot = &f.ss_tree; break;
            case Family::SSOTHER: slot = &other; break;
        }
        *slot = std::max(*slot, term.value);
    });
    f.diameter = std::max({f.xy, f.xb, f.by, f.sc, f.so, f.ss_pq, f.ss_tree, other, f.cycle / 2.0, delta_});
    return f;
}

std::vector<CaterpillarView::Term> CaterpillarView::tight_terms(double s, double t) const {
    const auto f = evaluate(s, t);
    std::vector<Term> out;
    visit_terms(s, t, f.ell, [&](Family, const Term& term) {
        if (term.value >= f.diameter - tol_) out.push_back(term);
    });
    return out;
}

unsigned CaterpillarView::tight_mask(double s, double t, const Families& f) const {
    unsigned mask = 0;
    visit_terms(s, t, f.ell, [&](Family, const Term& term) {
        if (term.value < f.diameter - tol_) return;
        for (PathType pt : paths_of(term.paths)) mask |= term_bit(term.subtype, pt);
    });
    return mask;
}

}  // namespace treecut
