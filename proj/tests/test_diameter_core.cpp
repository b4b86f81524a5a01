#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "treecut/diameter_core.hpp"

using namespace treecut;

namespace {

double all_pairs_leaf_diameter(const GeometricTree& t) {
    double best = 0.0;
    auto g = fixtures::vertex_graph(t);
    for (int u : t.leaves()) {
        auto d = fixtures::dijkstra(g, u);
        for (int v : t.leaves()) best = std::max(best, d[v]);
    }
    return best;
}

bool on_path(const GeometricTree& t, TreePoint p, int u, int v) {
    double direct = network_distance(t, TreePoint::at_vertex(u), TreePoint::at_vertex(v));
    double via = network_distance(t, TreePoint::at_vertex(u), p) + network_distance(t, p, TreePoint::at_vertex(v));
    return via <= direct + 1e-9 * t.scale();
}

}  // namespace

TEST_CASE("diameter of the fixtures") {
    auto tl = fixtures::t_l();
    auto dl = continuous_diameter(tl);
    CHECK(dl.diameter == doctest::Approx(2.0));
    REQUIRE(dl.diametral_leaf_pairs.size() == 1);
    CHECK(dl.diametral_leaf_pairs[0] == std::pair<int, int>{0, 2});

    auto hook = fixtures::t_hook();
    auto dh = continuous_diameter(hook);
    CHECK(dh.diameter == doctest::Approx(8.0));
    CHECK(dh.diametral_leaf_pairs == std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {2, 3}});

    auto fb = fixtures::t_forkbent();
    auto df = continuous_diameter(fb);
    CHECK(df.diameter == doctest::Approx(5.8863495).epsilon(1e-8));
    CHECK(df.diametral_leaf_pairs == std::vector<std::pair<int, int>>{{0, 3}, {0, 4}});
}

TEST_CASE("absolute center of the fixtures") {
    auto tl = fixtures::t_l();
    auto cl = absolute_center(tl);
    CHECK(cl.center.is_vertex());
    CHECK(cl.center.u == 1);
    CHECK(cl.eccentricity == doctest::Approx(1.0));

    auto hook = fixtures::t_hook();
    auto ch = absolute_center(hook);
    CHECK(ch.center.is_vertex());
    CHECK(ch.center.u == 1);
    CHECK(ch.eccentricity == doctest::Approx(4.0));

    auto fb = fixtures::t_forkbent();
    auto cf = absolute_center(fb);
    REQUIRE_FALSE(cf.center.is_vertex());
    double lam = cf.center.u == 1 ? cf.center.lambda : 1.0 - cf.center.lambda;
    CHECK(lam == doctest::Approx(0.3162278).epsilon(1e-7));
    CHECK(cf.eccentricity == doctest::Approx(2.9431748).epsilon(1e-7));
}

TEST_CASE("backbone decomposition of the fixtures") {
    auto tl = fixtures::t_l();
    auto bl = backbone(tl);
    CHECK(bl.a_vertex == 0);
    CHECK(bl.b_vertex == 2);
    CHECK(bl.backbone_vertices == std::vector<int>{0, 1, 2});
    CHECK_FALSE(bl.is_point);
    CHECK_FALSE(bl.is_straight);
    CHECK(bl.secondary.empty());
    CHECK(bl.delta == 0.0);
    CHECK(bl.h_x == 0.0);
    CHECK(bl.h_y == 0.0);
    CHECK(bl.center_arc == doctest::Approx(1.0));

    auto hook = fixtures::t_hook();
    auto bh = backbone(hook);
    CHECK(bh.is_point);
    CHECK(bh.a_vertex == 1);
    CHECK(bh.b_vertex == 1);
    CHECK(same_point(hook, bh.center, TreePoint::at_vertex(1)));

    auto fb = fixtures::t_forkbent();
    auto bf = backbone(fb);
    CHECK(bf.a_vertex == 0);
    CHECK(bf.b_vertex == 2);
    CHECK(bf.backbone_vertices == std::vector<int>{0, 1, 2});
    CHECK(bf.h_x == 0.0);
    CHECK(bf.h_y == doctest::Approx(std::sqrt(2.0)));
    CHECK(bf.secondary.empty());
    CHECK_FALSE(bf.is_straight);
    CHECK(bf.delta == doctest::Approx(2.0 * std::sqrt(2.0)));

    auto seg = fixtures::straight_segment();
    auto bs = backbone(seg);
    CHECK(bs.is_straight);
    CHECK_FALSE(bs.is_point);
}

TEST_CASE("diameter, center and backbone properties on random trees") {
    for (unsigned seed = 1; seed <= 60; ++seed) {
        int n = 2 + static_cast<int>((seed * 7) % 49);
        auto t = fixtures::random_test_tree(seed, n);
        const double tol = t.tol();
        auto dr = continuous_diameter(t);
        CHECK(dr.diameter == doctest::Approx(all_pairs_leaf_diameter(t)).epsilon(1e-12));
        for (auto [u, v] : dr.diametral_leaf_pairs)
            CHECK(network_distance(t, TreePoint::at_vertex(u), TreePoint::at_vertex(v)) >= dr.diameter - tol);

        auto cr = absolute_center(t);
        auto dc = distances_from(t, cr.center);
        CHECK(*std::max_element(dc.begin(), dc.end()) == doctest::Approx(dr.diameter / 2.0).epsilon(1e-12));
        // no sampled point has a smaller eccentricity
        for (auto [u, v] : t.edges())
            for (int k = 0; k <= 100; ++k) {
                auto d = distances_from(t, t.canonical({u, v, k / 100.0}));
                CHECK(*std::max_element(d.begin(), d.end()) >= cr.eccentricity - tol);
            }

        auto dec = backbone(t);
        CHECK(dec.delta <= dr.diameter + tol);
        if (!dec.is_point) {
            for (auto& s : dec.secondary) CHECK(s.diameter < dr.diameter);
            for (std::size_t i = 1; i < dec.secondary.size(); ++i)
                CHECK(dec.secondary[i].arc > dec.secondary[i - 1].arc);
            CHECK(dec.center_arc >= 0.0);
            CHECK(dec.center_arc <= dec.length + tol);
        }
        for (auto [u, v] : dr.diametral_leaf_pairs) {
            CHECK(on_path(t, dec.a, u, v));
            CHECK(on_path(t, dec.b, u, v));
            CHECK(on_path(t, dec.center, u, v));
            if (!dec.is_point) {
                // one leaf in X, the other in Y
                bool xy = (dec.owner[u] == kOwnerX && dec.owner[v] == kOwnerY) ||
                          (dec.owner[u] == kOwnerY && dec.owner[v] == kOwnerX);
                CHECK(xy);
            }
        }
        // maximality: each neighbour of a outside the backbone leaves some diametral path
        if (!dec.is_point) {
            for (int end : {dec.a_vertex, dec.b_vertex}) {
                for (auto [z, len] : t.adjacent(end)) {
                    if (std::find(dec.backbone_vertices.begin(), dec.backbone_vertices.end(), z) !=
                        dec.backbone_vertices.end())
                        continue;
                    bool left_some = false;
                    for (auto [u, v] : dr.diametral_leaf_pairs)
                        if (!on_path(t, TreePoint::at_vertex(z), u, v)) left_some = true;
                    CHECK(left_some);
                }
            }
        }
    }
}

TEST_CASE("backbone points map back to their arc positions") {
    auto fb = fixtures::t_forkbent();
    auto dec = backbone(fb);
    for (double s : {0.0, 0.5, dec.center_arc, 3.0, dec.length}) {
        auto p = backbone_point(fb, dec, s);
        CHECK(backbone_arc_of(fb, dec, p) == doctest::Approx(s).epsilon(1e-12));
    }
    CHECK(backbone_arc_of(fb, dec, TreePoint::at_vertex(3)) < 0.0);
}

TEST_CASE("arms equal up to rounding meet in a point backbone") {
    // four bent arms of equal length whose computed lengths differ in the last bits
    const double R = 3.0062656768760984;
    std::vector<std::pair<double, double>> xy{{0.0, 0.0}};
    std::vector<std::pair<int, int>> edges;
    std::vector<int> leaves;
    for (int arm = 0; arm < 4; ++arm) {
        double heading = 0.37 + 1.5 * arm, x = 0.0, y = 0.0;
        int prev = 0, pieces = 1 + arm % 3;
        for (int piece = 0; piece < pieces; ++piece) {
            if (piece > 0) heading += 0.41 * (arm + 1);
            x += R / pieces * std::cos(heading);
            y += R / pieces * std::sin(heading);
            xy.push_back({x, y});
            edges.push_back({prev, static_cast<int>(xy.size()) - 1});
            prev = static_cast<int>(xy.size()) - 1;
        }
        leaves.push_back(prev);
    }
    auto t = fixtures::make_tree(xy, edges);
    bool differ = false;
    for (int l : leaves) differ = differ || t.vertex_distance(0, l) != t.vertex_distance(0, leaves[0]);
    REQUIRE(differ);
    auto dec = backbone(t);
    CHECK(dec.is_point);
    CHECK(dec.center.is_vertex());
    CHECK(dec.center.u == 0);
    CHECK(continuous_diameter(t).diametral_leaf_pairs.size() == 6);
}
