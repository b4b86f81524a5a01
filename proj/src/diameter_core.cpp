#include "treecut/diameter_core.hpp"

#include <algorithm>
#include <cmath>

namespace treecut {

namespace {

int farthest_vertex(const std::vector<double>& dist) {
    return static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
}

// Everything the three public entry points share: one diametral path x0..y0,
// the center on it, and a labelling of every vertex by the branch at c it
// belongs to.
struct CenterAnalysis {
    double diameter = 0.0;
    int x0 = 0;
    int y0 = 0;
    TreePoint center;
    std::vector<double> from_center;
    std::vector<int> branch;         // branch id per vertex, -1 for c itself
    std::vector<int> branch_start;   // first vertex of each branch
    std::vector<int> parent;         // parent pointer toward c, -1 at the anchors
    std::vector<double> branch_depth;
    std::vector<char> far_leaf;      // leaf that is part of some diametral pair
};

TreePoint point_along(const GeometricTree& tree, const std::vector<int>& path, double s) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        double w = tree.edge_length(path[k], path[k + 1]);
        if (s <= acc + w) {
            double lam = std::clamp((s - acc) / w, 0.0, 1.0);
            return tree.canonical({path[k], path[k + 1], lam});
        }
        acc += w;
    }
    return TreePoint::at_vertex(path.back());
}

CenterAnalysis analyze(const GeometricTree& tree) {
    CenterAnalysis an;
    const int n = static_cast<int>(tree.vertex_count());
    an.x0 = farthest_vertex(distances_from(tree, TreePoint::at_vertex(0)));
    auto dx = distances_from(tree, TreePoint::at_vertex(an.x0));
    an.y0 = farthest_vertex(dx);
    an.diameter = dx[an.y0];
    auto path = tree.vertex_path(an.x0, an.y0);
    an.center = point_along(tree, path, an.diameter / 2.0);
    // rounding in the arm lengths must not move c off a vertex it sits on
    if (!an.center.is_vertex()) {
        const double w = tree.edge_length(an.center.u, an.center.v);
        if (an.center.lambda * w <= tree.tol())
            an.center = TreePoint::at_vertex(an.center.u);
        else if ((1.0 - an.center.lambda) * w <= tree.tol())
            an.center = TreePoint::at_vertex(an.center.v);
    }
    an.from_center = distances_from(tree, an.center);

    an.branch.assign(n, -1);
    an.parent.assign(n, -1);
    std::vector<int> stack;
    auto open_branch = [&](int w) {
        an.branch[w] = static_cast<int>(an.branch_start.size());
        an.branch_start.push_back(w);
        stack.push_back(w);
    };
    int c_vertex = -1;
    if (an.center.is_vertex()) {
        c_vertex = an.center.u;
        for (auto [z, len] : tree.adjacent(c_vertex)) {
            open_branch(z);
            an.parent[z] = c_vertex;
        }
    } else {
        open_branch(an.center.u);
        open_branch(an.center.v);
        an.parent[an.center.u] = an.center.v;
        an.parent[an.center.v] = an.center.u;
    }
    std::vector<int> order;
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        order.push_back(w);
        for (auto [z, len] : tree.adjacent(w)) {
            if (z == an.parent[w] || z == c_vertex) continue;
            an.parent[z] = w;
            an.branch[z] = an.branch[w];
            stack.push_back(z);
        }
    }
    // anchors of an interior center point at each other; cut that link
    if (!an.center.is_vertex()) {
        an.parent[an.center.u] = -1;
        an.parent[an.center.v] = -1;
    } else {
        for (auto [z, len] : tree.adjacent(c_vertex)) an.parent[z] = -1;
    }

    const int nb = static_cast<int>(an.branch_start.size());
    an.branch_depth.assign(nb, 0.0);
    for (int w : order) an.branch_depth[an.branch[w]] = std::max(an.branch_depth[an.branch[w]], an.from_center[w]);
    // best and second best branch depth, to test each leaf against the others
    int top = -1;
    for (int i = 0; i < nb; ++i)
        if (top < 0 || an.branch_depth[i] > an.branch_depth[top]) top = i;
    double second = 0.0;
    for (int i = 0; i < nb; ++i)
        if (i != top) second = std::max(second, an.branch_depth[i]);
    an.far_leaf.assign(n, 0);
    const double tol = tree.tol();
    for (int w : order) {
        if (!tree.is_leaf(w)) continue;
        double other = an.branch[w] == top ? second : an.branch_depth[top];
        if (an.from_center[w] + other >= an.diameter - tol) an.far_leaf[w] = 1;
    }
    return an;
}

// Height, farthest leaf and diameter of the part of the tree reached from
// `root` through the neighbours in `starts` without touching `blocked`.
SubtreeInfo profile(const GeometricTree& tree, int root, const std::vector<int>& starts,
                    const std::vector<char>& blocked, std::vector<int>& owner, int label) {
    SubtreeInfo info;
    info.root = root;
    info.far_leaf = root;
    struct Node {
        int w;
        int parent_pos;
        double up_len;
        double h1 = 0.0, h2 = 0.0;
        int leaf;
    };
    std::vector<Node> nodes{{root, -1, 0.0, 0.0, 0.0, root}};
    std::vector<std::pair<int, int>> stack;  // (vertex, parent position)
    for (int s : starts) stack.push_back({s, 0});
    while (!stack.empty()) {
        auto [w, pp] = stack.back();
        stack.pop_back();
        int parent_vertex = nodes[pp].w;
        nodes.push_back({w, pp, tree.edge_length(w, parent_vertex), 0.0, 0.0, w});
        int pos = static_cast<int>(nodes.size()) - 1;
        owner[w] = label;
        for (auto [z, len] : tree.adjacent(w))
            if (z != parent_vertex && !blocked[z]) stack.push_back({z, pos});
    }
    double best = 0.0;
    for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i) {
        Node& nd = nodes[i];
        best = std::max(best, nd.h1 + nd.h2);
        if (nd.parent_pos < 0) continue;
        Node& par = nodes[nd.parent_pos];
        double h = nd.h1 + nd.up_len;
        if (h > par.h1) {
            par.h2 = par.h1;
            par.h1 = h;
            par.leaf = nd.leaf;
        } else if (h > par.h2) {
            par.h2 = h;
        }
    }
    info.height = nodes[0].h1;
    info.far_leaf = nodes[0].leaf;
    info.diameter = best;
    return info;
}

}  // namespace

DiameterResult continuous_diameter(const GeometricTree& tree) {
    DiameterResult res;
    if (tree.vertex_count() < 2) return res;
    auto an = analyze(tree);
    res.diameter = an.diameter;
    std::vector<int> far;
    for (int w = 0; w < static_cast<int>(tree.vertex_count()); ++w)
        if (an.far_leaf[w]) far.push_back(w);
    const double tol = tree.tol();
    for (std::size_t i = 0; i < far.size(); ++i)
        for (std::size_t j = i + 1; j < far.size(); ++j) {
            int u = far[i], v = far[j];
            if (an.branch[u] == an.branch[v]) continue;
            if (an.from_center[u] + an.from_center[v] >= an.diameter - tol)
                res.diametral_leaf_pairs.push_back({std::min(u, v), std::max(u, v)});
        }
    std::sort(res.diametral_leaf_pairs.begin(), res.diametral_leaf_pairs.end());
    return res;
}

CenterResult absolute_center(const GeometricTree& tree) {
    if (tree.vertex_count() < 2) return {TreePoint::at_vertex(0), 0.0};
    auto an = analyze(tree);
    return {an.center, an.diameter / 2.0};
}

BackboneDecomposition backbone(const GeometricTree& tree) {
    BackboneDecomposition dec;
    const int n = static_cast<int>(tree.vertex_count());
    dec.owner.assign(n, kOwnerBackbone);
    if (n < 2) {
        dec.a_vertex = dec.b_vertex = 0;
        dec.a = dec.b = dec.center = TreePoint::at_vertex(0);
        dec.backbone_vertices = {0};
        dec.backbone_arc = {0.0};
        dec.backbone_path.points = {dec.a};
        dec.is_point = true;
        dec.x_tree.root = dec.y_tree.root = 0;
        return dec;
    }
    auto an = analyze(tree);
    dec.diameter = an.diameter;
    dec.eccentricity = an.diameter / 2.0;
    dec.center = an.center;

    // far-leaf counts per subtree, rooted toward c
    std::vector<int> far_count(n, 0);
    {
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int l, int r) { return an.from_center[l] > an.from_center[r]; });
        for (int w : order) {
            far_count[w] += an.far_leaf[w];
            if (an.parent[w] >= 0) far_count[an.parent[w]] += far_count[w];
        }
    }
    std::vector<int> far_branches;
    for (int b = 0; b < static_cast<int>(an.branch_start.size()); ++b)
        if (far_count[an.branch_start[b]] > 0) far_branches.push_back(b);

    auto descend = [&](int start) {
        int w = start;
        while (!an.far_leaf[w]) {
            int next = -1, count = 0;
            for (auto [z, len] : tree.adjacent(w)) {
                if (an.parent[z] != w || far_count[z] == 0) continue;
                ++count;
                next = z;
            }
            if (count != 1) break;
            w = next;
        }
        return w;
    };

    const double tol = tree.tol();
    std::vector<char> blocked(n, 0);
    dec.is_point = an.center.is_vertex() && far_branches.size() >= 3;
    if (dec.is_point) {
        int c = an.center.u;
        dec.a_vertex = dec.b_vertex = c;
        dec.backbone_vertices = {c};
        dec.backbone_arc = {0.0};
        blocked[c] = 1;
        int bx = an.branch[an.x0], by = an.branch[an.y0];
        std::vector<int> xs{an.branch_start[bx]}, ys{an.branch_start[by]};
        dec.x_tree = profile(tree, c, xs, blocked, dec.owner, kOwnerX);
        dec.y_tree = profile(tree, c, ys, blocked, dec.owner, kOwnerY);
        for (int b = 0; b < static_cast<int>(an.branch_start.size()); ++b) {
            if (b == bx || b == by) continue;
            int label = static_cast<int>(dec.secondary.size());
            dec.secondary.push_back(profile(tree, c, {an.branch_start[b]}, blocked, dec.owner, label));
        }
        dec.owner[c] = kOwnerBackbone;
    } else {
        int ba = an.branch[an.x0];
        int bb = far_branches[0] == ba ? far_branches[1] : far_branches[0];
        dec.a_vertex = descend(an.branch_start[ba]);
        dec.b_vertex = descend(an.branch_start[bb]);
        // deterministic orientation: a is the end with the smaller index
        if (dec.b_vertex < dec.a_vertex) std::swap(dec.a_vertex, dec.b_vertex);
        dec.backbone_vertices = tree.vertex_path(dec.a_vertex, dec.b_vertex);
        dec.backbone_arc.assign(dec.backbone_vertices.size(), 0.0);
        for (std::size_t k = 1; k < dec.backbone_vertices.size(); ++k)
            dec.backbone_arc[k] = dec.backbone_arc[k - 1] +
                                  tree.edge_length(dec.backbone_vertices[k - 1], dec.backbone_vertices[k]);
        for (int w : dec.backbone_vertices) blocked[w] = 1;
        const int m = static_cast<int>(dec.backbone_vertices.size()) - 1;
        auto side_starts = [&](int k) {
            std::vector<int> s;
            for (auto [z, len] : tree.adjacent(dec.backbone_vertices[k]))
                if (!blocked[z]) s.push_back(z);
            return s;
        };
        dec.x_tree = profile(tree, dec.a_vertex, side_starts(0), blocked, dec.owner, kOwnerX);
        dec.y_tree = profile(tree, dec.b_vertex, side_starts(m), blocked, dec.owner, kOwnerY);
        dec.owner[dec.a_vertex] = kOwnerX;
        dec.owner[dec.b_vertex] = kOwnerY;
        for (int k = 1; k < m; ++k) {
            auto starts = side_starts(k);
            if (starts.empty()) continue;
            int label = static_cast<int>(dec.secondary.size());
            SubtreeInfo s = profile(tree, dec.backbone_vertices[k], starts, blocked, dec.owner, label);
            s.arc = dec.backbone_arc[k];
            dec.secondary.push_back(s);
        }
    }
    dec.x_tree.arc = 0.0;
    dec.length = dec.backbone_arc.back();
    dec.y_tree.arc = dec.length;
    dec.h_x = dec.x_tree.height;
    dec.h_y = dec.y_tree.height;
    dec.a = TreePoint::at_vertex(dec.a_vertex);
    dec.b = TreePoint::at_vertex(dec.b_vertex);
    dec.backbone_path.length = dec.length;
    for (int w : dec.backbone_vertices) dec.backbone_path.points.push_back(TreePoint::at_vertex(w));
    dec.center_arc = dec.is_point ? 0.0 : network_distance(tree, dec.a, dec.center);
    dec.is_straight = !dec.is_point &&
                      norm(tree.position(dec.a_vertex), tree.position(dec.b_vertex)) >= dec.length - tol;
    dec.delta = std::max(dec.x_tree.diameter, dec.y_tree.diameter);
    for (auto& s : dec.secondary) {
        dec.delta = std::max(dec.delta, s.diameter);
        dec.h_max_secondary = std::max(dec.h_max_secondary, s.height);
    }
    return dec;
}

TreePoint backbone_point(const GeometricTree& tree, const BackboneDecomposition& dec, double s) {
    return point_along(tree, dec.backbone_vertices, std::clamp(s, 0.0, dec.length));
}

double backbone_arc_of(const GeometricTree& tree, const BackboneDecomposition& dec, TreePoint pt) {
    pt = tree.canonical(pt);
    const auto& bv = dec.backbone_vertices;
    auto index = [&](int w) {
        auto it = std::find(bv.begin(), bv.end(), w);
        return it == bv.end() ? -1 : static_cast<int>(it - bv.begin());
    };
    if (pt.is_vertex()) {
        int k = index(pt.u);
        return k < 0 ? -1.0 : dec.backbone_arc[k];
    }
    int ku = index(pt.u), kv = index(pt.v);
    if (ku < 0 || kv < 0 || std::abs(ku - kv) != 1) return -1.0;
    double w = tree.edge_length(pt.u, pt.v);
    return ku < kv ? dec.backbone_arc[ku] + pt.lambda * w : dec.backbone_arc[kv] + (1.0 - pt.lambda) * w;
}

}  // namespace treecut
