#include "treecut/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace treecut {

namespace {

struct Best {
    double diameter = 0.0;
    long long index = -1;
    bool better_than(const Best& o) const {
        if (o.index < 0) return index >= 0;
        if (index < 0) return false;
        return diameter < o.diameter || (diameter == o.diameter && index < o.index);
    }
};

unsigned worker_count(long long jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("TREECUT_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
    return static_cast<unsigned>(std::min<long long>(n, std::max(1LL, jobs / 64)));
}

// Evaluates placements 0..count-1 in parallel and returns the best one.
template <class Placement>
Best parallel_min(long long count, const Placement& placement, const GeometricTree& tree,
                  const BackboneDecomposition& dec) {
    const unsigned workers = worker_count(count);
    std::vector<Best> local(workers);
    std::atomic<long long> next{0};
    auto work = [&](unsigned w) {
        constexpr long long kChunk = 32;
        for (;;) {
            long long begin = next.fetch_add(kChunk);
            if (begin >= count) break;
            for (long long k = begin; k < std::min(count, begin + kChunk); ++k) {
                Best b{augmented_diameter(tree, dec, placement(k)).diameter, k};
                if (b.better_than(local[w])) local[w] = b;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();
    Best best;
    for (auto& b : local)
        if (b.better_than(best)) best = b;
    return best;
}

double round12(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

GridResult grid_search(const GeometricTree& tree, double h, bool restrict_to_backbone) {
    if (!(h > 0.0)) throw std::invalid_argument("grid resolution must be positive");
    auto dec = backbone(tree);
    if (h > dec.diameter / 4.0) throw ResolutionTooCoarse("grid resolution exceeds a quarter of the diameter");
    GridResult res;
    res.h = h;
    res.restricted = restrict_to_backbone;

    std::vector<TreePoint> side_p, side_q;
    if (restrict_to_backbone) {
        int mp = std::max(1, static_cast<int>(std::ceil(dec.center_arc / h)));
        int mq = std::max(1, static_cast<int>(std::ceil((dec.length - dec.center_arc) / h)));
        for (int k = mp; k >= 0; --k) side_p.push_back(backbone_point(tree, dec, dec.center_arc * k / mp));
        for (int k = 0; k <= mq; ++k)
            side_q.push_back(backbone_point(tree, dec, dec.center_arc + (dec.length - dec.center_arc) * k / mq));
        // the placement cc is side_p.back() x side_q.front()
    } else {
        for (int v = 0; v < static_cast<int>(tree.vertex_count()); ++v) side_p.push_back(TreePoint::at_vertex(v));
        for (auto [u, v] : tree.edges()) {
            int m = static_cast<int>(std::ceil(tree.edge_length(u, v) / h));
            for (int k = 1; k < m; ++k) side_p.push_back(tree.canonical({u, v, static_cast<double>(k) / m}));
        }
        side_p.push_back(dec.center);
        side_q = side_p;
    }

    long long count;
    std::function<Shortcut(long long)> placement;
    if (restrict_to_backbone) {
        const long long nq = static_cast<long long>(side_q.size());
        count = static_cast<long long>(side_p.size()) * nq;
        placement = [&, nq](long long k) { return Shortcut{side_p[k / nq], side_q[k % nq]}; };
    } else {
        // unordered pairs i <= j, enumerated row by row
        const long long n = static_cast<long long>(side_p.size());
        std::vector<long long> row_start(n + 1, 0);
        for (long long i = 0; i < n; ++i) row_start[i + 1] = row_start[i] + (n - i);
        count = row_start[n];
        placement = [&, row_start, n](long long k) {
            long long i = std::upper_bound(row_start.begin(), row_start.end(), k) - row_start.begin() - 1;
            long long j = i + (k - row_start[i]);
            (void)n;
            return Shortcut{side_p[i], side_q[j]};
        };
    }
    Best best = parallel_min(count, placement, tree, dec);
    res.evaluations = count;
    res.shortcut = placement(best.index);
    res.diameter = best.diameter;
    return res;
}

TreeShape parse_tree_shape(const std::string& name) {
    if (name == "uniform") return TreeShape::Uniform;
    if (name == "caterpillar") return TreeShape::Caterpillar;
    if (name == "balanced") return TreeShape::Balanced;
    throw std::invalid_argument("unknown tree shape: " + name);
}

const char* to_string(TreeShape s) {
    switch (s) {
        case TreeShape::Uniform: return "uniform";
        case TreeShape::Caterpillar: return "caterpillar";
        case TreeShape::Balanced: return "balanced";
    }
    return "?";
}

GeometricTree random_tree(unsigned long long seed, int n, TreeShape shape) {
    if (n < 2) throw std::invalid_argument("random trees need at least two vertices");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double pi = std::acos(-1.0);
    std::vector<Vec2> pos{{0.0, 0.0}};
    std::vector<std::pair<int, int>> edges;
    auto attach = [&](int parent, double angle, double len) {
        pos.push_back({round12(pos[parent].x + len * std::cos(angle)), round12(pos[parent].y + len * std::sin(angle))});
        edges.push_back({parent, static_cast<int>(pos.size()) - 1});
    };
    switch (shape) {
        case TreeShape::Uniform:
            for (int i = 1; i < n; ++i) {
                int parent = static_cast<int>(rng() % static_cast<unsigned long long>(i));
                attach(parent, 2.0 * pi * u01(rng), 0.5 + u01(rng));
            }
            break;
        case TreeShape::Caterpillar: {
            // backbone of about half the vertices, turning by up to 70 degrees
            // per vertex; short pendants on interior backbone vertices
            int spine = n <= 3 ? n : std::max(3, (n + 1) / 2);
            double heading = 2.0 * pi * u01(rng);
            for (int i = 1; i < spine; ++i) {
                attach(i - 1, heading, 0.8 + 0.6 * u01(rng));
                heading += (u01(rng) - 0.5) * 2.0 * (70.0 * pi / 180.0);
            }
            for (int i = spine; i < n; ++i) {
                int root = 1 + static_cast<int>(rng() % static_cast<unsigned long long>(spine - 2));
                attach(root, 2.0 * pi * u01(rng), 0.1 + 0.4 * u01(rng));
            }
            break;
        }
        case TreeShape::Balanced:
            for (int i = 1; i < n; ++i) {
                int parent = (i - 1) / 2;
                int depth = static_cast<int>(std::floor(std::log2(static_cast<double>(i + 1))));
                double len = std::pow(0.75, depth) * (0.8 + 0.4 * u01(rng));
                double base = (i % 2 == 1 ? -1.0 : 1.0) * pi / 4.0;
                attach(parent, pi / 2.0 * depth + base + (u01(rng) - 0.5) * 0.6, len);
            }
            break;
    }
    std::vector<GeometricTree::Vertex> vs;
    for (std::size_t i = 0; i < pos.size(); ++i) vs.push_back({static_cast<long long>(i), pos[i]});
    return GeometricTree(std::move(vs), edges);
}

GeometricTree stress_family(int l) {
    if (l < 1) throw std::invalid_argument("stress family needs l >= 1");
    // Point-symmetric about the origin.  Each arm runs straight along the
    // x axis from the origin to radius r_hi, carrying l short pendants, and
    // then zig-zags between the circles of radius r_lo and r_hi.  While the
    // shortcut endpoints travel the zig-zag, |pq| = 2 r(p) alternately grows
    // and shrinks, so the cycle antipodes of p and q sweep back and forth
    // over the pendants near the origin.
    const double r_lo = 2.0, r_hi = r_lo + l;
    const double step = std::acos(-1.0) / (3.0 * (l + 1));  // angle per zig-zag edge
    std::vector<Vec2> pos;
    std::vector<std::pair<int, int>> edges;
    auto add = [&](Vec2 v) {
        pos.push_back({round12(v.x), round12(v.y)});
        return static_cast<int>(pos.size()) - 1;
    };
    const int centre = add({0.0, 0.0});
    std::vector<int> leaves;
    for (double side : {1.0, -1.0}) {
        int prev = centre;
        for (int i = 0; i < l; ++i) {
            double r = r_lo + 0.5 + i;
            int root = add({side * r, 0.0});
            edges.push_back({prev, root});
            prev = root;
            double h = 0.2 + 0.05 * i / l;
            int leaf = add({side * r, side * h});
            edges.push_back({root, leaf});
        }
        for (int k = 0; k <= 2 * l + 1; ++k) {
            double r = k % 2 == 0 ? r_hi : r_lo;
            double ang = k * step;
            int v = add({side * r * std::cos(ang), side * r * std::sin(ang)});
            edges.push_back({prev, v});
            prev = v;
        }
    }
    std::vector<GeometricTree::Vertex> vs;
    for (std::size_t i = 0; i < pos.size(); ++i) vs.push_back({static_cast<long long>(i), pos[i]});
    return GeometricTree(std::move(vs), edges);
}

}  // namespace treecut
