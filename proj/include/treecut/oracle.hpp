#pragma once

#include <stdexcept>
#include <string>

#include "treecut/augmented_eval.hpp"

namespace treecut {

struct GridResult {
    Shortcut shortcut;
    double diameter = 0.0;
    double h = 0.0;
    long long evaluations = 0;
    bool restricted = false;
};

class ResolutionTooCoarse : public std::invalid_argument {
public:
    explicit ResolutionTooCoarse(const std::string& what) : std::invalid_argument(what) {}
};

// Exhaustive search over shortcut placements on an arc-length grid of
// spacing at most h.  Restricted mode pairs points of the a-c half of the
// backbone with points of the c-b half.  The degenerate shortcut cc is always
// evaluated.  Ties go to the placement enumerated first.  Worker count is
// capped by TREECUT_THREADS when set.
GridResult grid_search(const GeometricTree& tree, double h, bool restrict_to_backbone);

enum class TreeShape { Uniform, Caterpillar, Balanced };
TreeShape parse_tree_shape(const std::string& name);
const char* to_string(TreeShape s);

// Deterministic pseudo-random tree; coordinates are rounded to 1e-12.
GeometricTree random_tree(unsigned long long seed, int n, TreeShape shape);

// Caterpillar with 8l+5 vertices and 2l short pendants on a backbone that
// alternates straight and sharply bent stretches.
GeometricTree stress_family(int l);

}  // namespace treecut
