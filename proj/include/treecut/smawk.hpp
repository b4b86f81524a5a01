#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treecut/augmented_eval.hpp"
#include "treecut/diameter_core.hpp"

namespace treecut {

// Matrix given by an entry callback; entry(j, i) is row j, column i.
struct ImplicitMatrix {
    int rows = 0;
    int cols = 0;
    std::function<double(int, int)> entry;
};

struct RowMax {
    int col = -1;
    double value = 0.0;
};

class EmptyMatrix : public std::invalid_argument {
public:
    EmptyMatrix() : std::invalid_argument("row maxima of an empty matrix") {}
};

// Leftmost maximum of every row of a totally monotone matrix in
// O(rows + cols) entry evaluations.
std::vector<RowMax> row_maxima(const ImplicitMatrix& m);

struct WedgePath {
    double length = 0.0;
    int i = -1;  // secondary entered from p
    int j = -1;  // secondary reached from q
};

// Longest path between leaves of two secondary sub-trees rooted on the
// p-q stretch of the backbone that is routed through the shortcut.  Both
// endpoints must lie on the backbone.
std::optional<WedgePath> longest_wedge_path(const GeometricTree& tree, const BackboneDecomposition& dec,
                                            const Shortcut& pq);

// Same search in backbone coordinates: p at arc s, q at arc t, s <= t.
std::optional<WedgePath> longest_wedge_path(const BackboneDecomposition& dec, double s, double t, double ell);

}  // namespace treecut
