#pragma once

#include <set>
#include <string>
#include <vector>

#include "treecut/diameter_core.hpp"
#include "treecut/tree_model.hpp"

namespace treecut {

struct Shortcut {
    TreePoint p;
    TreePoint q;
};

enum class PairType { XY, XB, BY, BB, BO };
enum class PairSubType { XY, XS, XC, SY, CY, SS, SC, SO };
enum class PathType { ViaShortcut, ViaTree, ViaP, ViaQ };

// Display names use the conventional symbols: ■ any non-primary point,
// ▲ leaf of a secondary sub-tree, • cycle point on the tree, o point inside pq.
const char* to_string(PairType t);
const char* to_string(PairSubType t);
const char* to_string(PathType t);
PairType pair_type_of(PairSubType t);

struct Endpoint {
    enum class Kind { Leaf, CyclePoint, ShortcutPoint };
    Kind kind = Kind::Leaf;
    int vertex = -1;        // leaf index for Kind::Leaf
    TreePoint point;        // location on the tree for Leaf and CyclePoint
    double along_pq = 0.0;  // distance from p along the shortcut for ShortcutPoint
    Vec2 coords;
};

struct AchievingPair {
    Endpoint u;
    Endpoint v;
    PairSubType subtype = PairSubType::XY;
    std::set<PathType> paths;
    double length = 0.0;
};

struct AugmentedDiagnosis {
    double diameter = 0.0;
    double candidate_max = 0.0;  // diameter before flooring at delta
    double shortcut_length = 0.0;
    double tree_distance_pq = 0.0;
    double cycle_length = 0.0;
    TreePoint p_bar;
    TreePoint q_bar;
    std::vector<AchievingPair> pairs;
    std::set<PairType> pair_state;
    std::set<PairSubType> pair_substate;
    std::set<std::string> path_state;
};

enum class UsefulnessKind { Useful, Indifferent, Useless };
const char* to_string(UsefulnessKind k);

struct Usefulness {
    UsefulnessKind kind = UsefulnessKind::Indifferent;
    double diameter_before = 0.0;
    double diameter_after = 0.0;
};

// Whether the shortcut shortens the ordered pair (u,v) when entered at p,
// and the reverse orientation (entered at q).
struct PairUsefulness {
    bool forward = false;   // d(u,p) + |pq| + d(q,v) < d(u,v)
    bool backward = false;  // d(u,q) + |pq| + d(p,v) < d(u,v)
    bool indifferent() const { return !forward && !backward; }
};

AugmentedDiagnosis augmented_diameter(const GeometricTree& tree, const BackboneDecomposition& dec, const Shortcut& pq);
Usefulness classify_usefulness(const GeometricTree& tree, const Shortcut& pq);
bool has_useful_shortcut(const BackboneDecomposition& dec);
PairUsefulness pair_is_useful(const GeometricTree& tree, const Shortcut& pq, TreePoint u, TreePoint v);

// Path-state descriptor such as "x-pq-y" or "▲-p-o".
std::string path_descriptor(PairSubType t, PathType path);

}  // namespace treecut
