#pragma once

#include <utility>
#include <vector>

#include "treecut/tree_model.hpp"

namespace treecut {

struct DiameterResult {
    double diameter = 0.0;
    // leaf index pairs within tolerance of the maximum
    std::vector<std::pair<int, int>> diametral_leaf_pairs;
};

struct CenterResult {
    TreePoint center;
    double eccentricity = 0.0;
};

struct SubtreeInfo {
    int root = -1;          // backbone vertex the sub-tree hangs from
    double arc = 0.0;       // d_T(a, root)
    double height = 0.0;    // d_T(root, far_leaf)
    int far_leaf = -1;      // one representative farthest leaf
    double diameter = 0.0;  // diameter of the sub-tree including its root
};

// Which part of the decomposition a vertex belongs to.
enum : int { kOwnerX = -1, kOwnerY = -2, kOwnerBackbone = -3 };

struct BackboneDecomposition {
    double diameter = 0.0;
    int a_vertex = -1;
    int b_vertex = -1;
    TreePoint a;
    TreePoint b;
    PathTrace backbone_path;
    std::vector<int> backbone_vertices;  // a ... b
    std::vector<double> backbone_arc;    // d_T(a, .) for each backbone vertex
    double length = 0.0;                 // d_T(a, b)
    bool is_point = false;
    bool is_straight = false;

    TreePoint center;
    double center_arc = 0.0;  // d_T(a, c)
    double eccentricity = 0.0;

    SubtreeInfo x_tree;  // primary sub-tree at a (root a, arc 0)
    SubtreeInfo y_tree;  // primary sub-tree at b (root b, arc length)
    double h_x = 0.0;
    double h_y = 0.0;
    std::vector<SubtreeInfo> secondary;  // ordered by arc from a
    double delta = 0.0;
    double h_max_secondary = 0.0;

    // per vertex: kOwnerX, kOwnerY, kOwnerBackbone or a secondary index
    std::vector<int> owner;
};

DiameterResult continuous_diameter(const GeometricTree& tree);
CenterResult absolute_center(const GeometricTree& tree);
BackboneDecomposition backbone(const GeometricTree& tree);

// Point at arc length s from a along the backbone.
TreePoint backbone_point(const GeometricTree& tree, const BackboneDecomposition& dec, double s);
// Arc position of a point lying on the backbone, or a negative value if it
// is not on the backbone (within tolerance).
double backbone_arc_of(const GeometricTree& tree, const BackboneDecomposition& dec, TreePoint pt);

}  // namespace treecut
