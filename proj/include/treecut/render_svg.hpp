#pragma once

#include <string>

#include "treecut/augmented_eval.hpp"

namespace treecut {

// Static SVG 1.1 picture of a tree: edges as lines, the backbone highlighted,
// an optional dashed shortcut and markers on the endpoints of the diametral
// pairs of an optional diagnosis.  Output is byte-identical for identical input.
std::string render_svg(const GeometricTree& tree, const Shortcut* shortcut = nullptr,
                       const AugmentedDiagnosis* diagnosis = nullptr);

}  // namespace treecut
