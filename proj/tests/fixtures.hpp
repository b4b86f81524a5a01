#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "treecut/tree_model.hpp"

namespace fixtures {

using treecut::GeometricTree;

inline GeometricTree make_tree(const std::vector<std::pair<double, double>>& xy,
                               const std::vector<std::pair<int, int>>& edges) {
    std::vector<GeometricTree::Vertex> vs;
    for (std::size_t i = 0; i < xy.size(); ++i)
        vs.push_back({static_cast<long long>(i), {xy[i].first, xy[i].second}});
    return GeometricTree(std::move(vs), edges);
}

// v0=(0,0), v1=(1,0), v2=(1,1)
inline GeometricTree t_l() { return make_tree({{0, 0}, {1, 0}, {1, 1}}, {{0, 1}, {1, 2}}); }

// p0=0, r=1, q0=2, t=3
inline GeometricTree t_hook() {
    return make_tree({{0, 0}, {4, 0}, {4, 4}, {4, -4}}, {{0, 1}, {1, 2}, {1, 3}});
}

// x=0, m=1, b=2, y1=3, y2=4
inline GeometricTree t_forkbent() {
    return make_tree({{0, 0}, {2, 1}, {4, 0}, {5, 1}, {5, -1}}, {{0, 1}, {1, 2}, {2, 3}, {2, 4}});
}

inline GeometricTree straight_segment() { return make_tree({{0, 0}, {2, 0}}, {{0, 1}}); }

// Random tree for test-side use only: each new vertex hangs off a random
// earlier one, at a random offset.
inline GeometricTree random_test_tree(unsigned seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::pair<double, double>> xy{{0.0, 0.0}};
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i) {
        int par = static_cast<int>(rng() % i);
        double dx = unit(rng), dy = unit(rng);
        if (std::abs(dx) + std::abs(dy) < 0.05) dx += 0.5;
        xy.push_back({xy[par].first + dx, xy[par].second + dy});
        edges.push_back({par, i});
    }
    return make_tree(xy, edges);
}

// Dijkstra on an explicit weighted graph.
inline std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& g, int src) {
    std::vector<double> d(g.size(), 1e300);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[src] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        auto [du, u] = pq.top();
        pq.pop();
        if (du > d[u]) continue;
        for (auto [v, w] : g[u])
            if (du + w < d[v]) {
                d[v] = du + w;
                pq.push({d[v], v});
            }
    }
    return d;
}

inline std::vector<std::vector<std::pair<int, double>>> vertex_graph(const GeometricTree& t) {
    std::vector<std::vector<std::pair<int, double>>> g(t.vertex_count());
    for (auto [u, v] : t.edges()) {
        double w = treecut::norm(t.position(u), t.position(v));
        g[u].push_back({v, w});
        g[v].push_back({u, w});
    }
    return g;
}

}  // namespace fixtures

namespace fixtures {

// Dense-sample ground truth for diam(T+pq): every edge and the shortcut are
// cut into `per_edge` pieces, the subdivided graph is searched from every
// sample, and the largest shortest-path distance is returned together with
// the largest piece length (the sample spacing).
struct DenseResult {
    double diameter = 0.0;
    double spacing = 0.0;
};

inline DenseResult dense_augmented_diameter(const GeometricTree& t, treecut::TreePoint p, treecut::TreePoint q,
                                            int per_edge = 25) {
    p = t.canonical(p);
    q = t.canonical(q);
    std::vector<std::vector<std::pair<int, double>>> g(t.vertex_count());
    DenseResult res;
    auto add_node = [&]() {
        g.emplace_back();
        return static_cast<int>(g.size()) - 1;
    };
    auto link = [&](int a, int b, double w) {
        g[a].push_back({b, w});
        g[b].push_back({a, w});
        res.spacing = std::max(res.spacing, w);
    };
    int node_p = p.is_vertex() ? p.u : -1, node_q = q.is_vertex() ? q.u : -1;
    for (auto [u, v] : t.edges()) {
        double len = t.edge_length(u, v);
        std::vector<std::pair<double, int>> pts{{0.0, u}, {1.0, v}};
        for (int k = 1; k < per_edge; ++k) pts.push_back({static_cast<double>(k) / per_edge, add_node()});
        auto place = [&](treecut::TreePoint a, int& node) {
            if (a.is_vertex()) return;
            double lam = -1.0;
            if (a.u == u && a.v == v) lam = a.lambda;
            if (a.u == v && a.v == u) lam = 1.0 - a.lambda;
            if (lam < 0.0) return;
            if (node < 0) node = add_node();
            pts.push_back({lam, node});
        };
        place(p, node_p);
        if (!(q.u == p.u && q.v == p.v && q.lambda == p.lambda) &&
            !(q.u == p.v && q.v == p.u && q.lambda == 1.0 - p.lambda))
            place(q, node_q);
        else if (!p.is_vertex())
            node_q = node_p;
        std::sort(pts.begin(), pts.end());
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
            if (pts[k].second != pts[k + 1].second) link(pts[k].second, pts[k + 1].second, (pts[k + 1].first - pts[k].first) * len);
    }
    double ell = treecut::euclidean_distance(t, p, q);
    if (ell > 0.0) {
        int prev = node_p;
        for (int k = 1; k < per_edge; ++k) {
            int nd = add_node();
            link(prev, nd, ell / per_edge);
            prev = nd;
        }
        link(prev, node_q, ell / per_edge);
    }
    for (int s = 0; s < static_cast<int>(g.size()); ++s) {
        auto d = dijkstra(g, s);
        for (double x : d) res.diameter = std::max(res.diameter, x);
    }
    return res;
}

}  // namespace fixtures
