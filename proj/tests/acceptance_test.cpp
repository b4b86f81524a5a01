// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "treecut/augmented_eval.hpp"
#include "treecut/diameter_core.hpp"
#include "treecut/oracle.hpp"
#include "treecut/smawk.hpp"
#include "treecut/sweep_engine.hpp"

using namespace treecut;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    int failures = 0;

    void expect(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures++ < 3) detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double diameter_at(const GeometricTree& t, const BackboneDecomposition& dec, double s, double q) {
    s = std::clamp(s, 0.0, dec.length);
    q = std::clamp(q, 0.0, dec.length);
    return augmented_diameter(t, dec, {backbone_point(t, dec, s), backbone_point(t, dec, q)}).diameter;
}

// ---------------------------------------------------------------------------
// test-side tree generators with a known backbone shape

using Builder = std::pair<std::vector<std::pair<double, double>>, std::vector<std::pair<int, int>>>;

// Pendant path of total length len hanging off vertex at (x, y).
void add_pendant(Builder& b, int at, double len, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    int pieces = 1 + static_cast<int>(rng() % 2);
    int prev = at;
    for (int k = 0; k < pieces; ++k) {
        double a = ang(rng), step = len / pieces;
        auto [x, y] = b.first[prev];
        b.first.push_back({x + step * std::cos(a), y + step * std::sin(a)});
        b.second.push_back({prev, static_cast<int>(b.first.size()) - 1});
        prev = static_cast<int>(b.first.size()) - 1;
    }
}

// Spine from arc 0 to arc L through interior vertices; bent spines turn by
// 25 to 150 degrees at every interior vertex.  Pendants stay shorter than
// the arc to the nearer spine end so the spine ends remain the only
// diametral pair.
GeometricTree spine_tree(unsigned seed, bool bent) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int inner = 2 + static_cast<int>(rng() % 4);
    const double L = 4.0 + 4.0 * u01(rng);
    std::vector<double> arcs{0.0, L};
    for (int k = 0; k < inner; ++k) arcs.push_back(L * (0.1 + 0.8 * u01(rng)));
    std::sort(arcs.begin(), arcs.end());
    Builder b;
    double heading = 2.0 * std::numbers::pi * u01(rng), x = 0.0, y = 0.0;
    b.first.push_back({x, y});
    for (std::size_t k = 1; k < arcs.size(); ++k) {
        if (bent && k > 1) {
            double turn = (25.0 + 125.0 * u01(rng)) * std::numbers::pi / 180.0;
            heading += (rng() % 2 ? turn : -turn);
        }
        double step = arcs[k] - arcs[k - 1];
        x += step * std::cos(heading);
        y += step * std::sin(heading);
        b.first.push_back({x, y});
        b.second.push_back({static_cast<int>(k) - 1, static_cast<int>(k)});
    }
    for (std::size_t k = 1; k + 1 < arcs.size(); ++k) {
        const double room = std::min(arcs[k], L - arcs[k]);
        if (u01(rng) < 0.7) add_pendant(b, static_cast<int>(k), room * (0.1 + 0.7 * u01(rng)), rng);
    }
    return fixtures::make_tree(b.first, b.second);
}

// Three or four arms of equal length R meet at the origin, plus shorter
// arms; every diametral path passes through the origin only.
GeometricTree star_tree(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int full = 3 + static_cast<int>(rng() % 2), extra = static_cast<int>(rng() % 3);
    const double R = 2.0 + 2.0 * u01(rng);
    Builder b;
    b.first.push_back({0.0, 0.0});
    const int arms = full + extra;
    for (int k = 0; k < arms; ++k) {
        double heading = 2.0 * std::numbers::pi * (k + 0.3 * u01(rng)) / arms;
        double len = k < full ? R : R * (0.2 + 0.6 * u01(rng));
        int pieces = 1 + static_cast<int>(rng() % 3);
        int prev = 0;
        double x = 0.0, y = 0.0;
        for (int s = 0; s < pieces; ++s) {
            if (s > 0) heading += (u01(rng) - 0.5) * std::numbers::pi / 1.5;
            double step = len / pieces;
            x += step * std::cos(heading);
            y += step * std::sin(heading);
            b.first.push_back({x, y});
            b.second.push_back({prev, static_cast<int>(b.first.size()) - 1});
            prev = static_cast<int>(b.first.size()) - 1;
        }
    }
    return fixtures::make_tree(b.first, b.second);
}

GeometricTree corpus_tree(unsigned seed) { return random_tree(seed, 4 + seed % 11, static_cast<TreeShape>(seed % 3)); }

// Endpoint arcs of a returned shortcut: p on a..c and q on c..b.
void check_shape(Outcome& o, const std::string& name, const GeometricTree& t, const OptimizeResult& r) {
    auto dec = backbone(t);
    const double tol = t.tol();
    double sp = backbone_arc_of(t, dec, r.shortcut.p), sq = backbone_arc_of(t, dec, r.shortcut.q);
    bool on = sp >= 0.0 && sq >= 0.0;
    double lo = std::min(sp, sq), hi = std::max(sp, sq);
    bool around = lo <= dec.center_arc + tol && hi >= dec.center_arc - tol && lo >= -tol && hi <= dec.length + tol;
    o.expect(on && around, name + fmt(" arcs %.6g %.6g c %.6g", sp, sq, dec.center_arc));
}

void check_blocked(Outcome& o, const std::string& name, const GeometricTree& t, const OptimizeResult& r) {
    auto dec = backbone(t);
    const double h = 1e-4 * t.scale(), tol = 1e-9 * t.scale();
    const double base = diameter_at(t, dec, r.p_arc, r.q_arc);
    // in, out, toward x, toward y
    const double dirs[4][2] = {{1, -1}, {-1, 1}, {-1, -1}, {1, 1}};
    for (auto& d : dirs) {
        double v = diameter_at(t, dec, r.p_arc + d[0] * h, r.q_arc + d[1] * h);
        o.expect(v >= base - tol, name + fmt(" improves by %.3g", base - v));
    }
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    double worst = -1e300;
    for (unsigned seed = 1; seed <= 200; ++seed) {
        auto t = corpus_tree(seed);
        auto dec = backbone(t);
        auto r = optimize(t);
        auto g = grid_search(t, dec.diameter / 200.0, true);
        const std::string name = "seed " + std::to_string(seed);
        o.expect(r.diameter_after <= g.diameter + 4 * g.h, name + fmt(" %.9g > grid %.9g", r.diameter_after, g.diameter));
        o.expect(r.diameter_after >= dec.delta - 1e-9 * t.scale(), name + " below delta");
        worst = std::max(worst, (r.diameter_after - g.diameter) / g.h);
    }
    const double secs = seconds_since(t0);
    o.expect(secs <= 300.0, fmt("took %.0f s", secs));
    if (o.pass) o.detail = fmt("200 trees, worst (opt-grid)/h %.3f, %.1f s", worst, secs);
    return o;
}

Outcome criterion2() {
    Outcome o;
    auto t = fixtures::t_l();
    const double star = 2.0 / (4.0 - std::sqrt(2.0));
    const double closed = 1.0 + star * std::sqrt(2.0) / 2.0;
    // the closed form is checked against the grid before the sweep is
    auto g = grid_search(t, 1e-3, false);
    o.expect(std::abs(g.diameter - closed) <= 4 * g.h, fmt("grid %.9g vs closed form %.9g", g.diameter, closed));
    auto r = optimize(t);
    o.expect(std::abs(r.diameter_after - 1.5469182) <= 1e-6, fmt("diameter %.9g", r.diameter_after));
    // p on edge (0,1) at lambda from vertex 0, q on edge (1,2) at lambda from vertex 1
    Vec2 a = point_coordinates(t, r.shortcut.p), b = point_coordinates(t, r.shortcut.q);
    if (a.y > b.y) std::swap(a, b);
    const double lam_p = a.x, lam_q = b.y;
    o.expect(std::abs(lam_p - 0.2265410) <= 1e-5 && std::abs(a.y) <= 1e-9, fmt("p lambda %.9g", lam_p));
    o.expect(std::abs(lam_q - 0.7734590) <= 1e-5 && std::abs(b.x - 1.0) <= 1e-9, fmt("q lambda %.9g", lam_q));
    if (o.pass) o.detail = fmt("diameter %.9f, lambda %.7f / %.7f", r.diameter_after, lam_p, lam_q);
    return o;
}

Outcome criterion3() {
    Outcome o;
    int degenerate = 0, useful = 0;
    double worst_gain = 0.0;
    for (unsigned k = 0; k < 50; ++k) {
        const bool point = k % 2 == 1;
        auto t = point ? star_tree(500 + k) : spine_tree(500 + k, false);
        auto dec = backbone(t);
        const std::string name = std::string(point ? "star " : "straight ") + std::to_string(k);
        o.expect(point ? dec.is_point : dec.is_straight, name + " generator shape");
        auto r = optimize(t);
        bool cc = !r.useful && same_point(t, r.shortcut.p, r.shortcut.q) &&
                  std::abs(r.diameter_after - dec.diameter) <= t.tol();
        o.expect(cc, name + " not degenerate");
        degenerate += cc;
        auto g = grid_search(t, dec.diameter / 200.0, false);
        worst_gain = std::max(worst_gain, (dec.diameter - g.diameter) / g.h);
        o.expect(g.diameter >= dec.diameter - 4 * g.h, name + fmt(" grid improves by %.3g", dec.diameter - g.diameter));
    }
    for (unsigned k = 0; k < 50; ++k) {
        auto t = spine_tree(700 + k, true);
        auto dec = backbone(t);
        const std::string name = "bent " + std::to_string(k);
        o.expect(!dec.is_straight && !dec.is_point, name + " generator shape");
        auto r = optimize(t);
        bool ok = r.useful && r.diameter_after < dec.diameter - t.tol();
        o.expect(ok, name + " not useful");
        useful += ok;
    }
    if (o.pass)
        o.detail = fmt("%.0f/50 degenerate (grid gain <= %.3fh), %.0f/50 useful", degenerate, worst_gain, useful);
    return o;
}

Outcome criterion4() {
    Outcome o;
    int n = 0;
    auto visit = [&](const std::string& name, const GeometricTree& t) {
        check_shape(o, name, t, optimize(t));
        ++n;
    };
    visit("T_L", fixtures::t_l());
    visit("T_HOOK", fixtures::t_hook());
    visit("FORKBENT", fixtures::t_forkbent());
    visit("segment", fixtures::straight_segment());
    for (unsigned seed = 1; seed <= 200; ++seed) visit("seed " + std::to_string(seed), corpus_tree(seed));
    for (unsigned k = 0; k < 50; ++k) visit("straight/star", k % 2 ? star_tree(500 + k) : spine_tree(500 + k, false));
    for (unsigned k = 0; k < 50; ++k) visit("bent", spine_tree(700 + k, true));
    for (int l : {1, 2, 3, 5}) visit("stress", stress_family(l));
    if (o.pass) o.detail = fmt("%.0f trees", n);
    return o;
}

Outcome criterion5() {
    Outcome o;
    int segments = 0, sideways = 0, out = 0, probes = 0;
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 400 && segments < 20; ++seed) {
        auto t = corpus_tree(seed);
        auto dec = backbone(t);
        OptimizeOptions opt;
        opt.probes_per_segment = 10;
        auto r = optimize(t, opt);
        int taken = 0;
        for (auto& sg : r.segments) {
            if (!sg.law || sg.phase == Phase::I || taken == 2 || segments == 20) continue;
            // prefer a mix of sideways and out-shift segments
            const bool is_out = sg.phase == Phase::III;
            if (is_out && out >= 12) continue;
            if (!is_out && sideways >= 12) continue;
            ++taken;
            ++segments;
            (is_out ? out : sideways)++;
            const double d0 = diameter_at(t, dec, sg.p0, sg.t0);
            auto ell = [&](double s, double q) {
                return norm(point_coordinates(t, backbone_point(t, dec, s)), point_coordinates(t, backbone_point(t, dec, q)));
            };
            const double l0 = ell(sg.p0, sg.t0);
            for (auto [pp, tt] : sg.probes) {
                double dp, dq;
                if (!sg.leader_is_q) {
                    dp = sg.p0 - pp;
                    dq = is_out ? tt - sg.t0 : sg.t0 - tt;
                } else {
                    dp = tt - sg.t0;
                    dq = is_out ? sg.p0 - pp : pp - sg.p0;
                }
                const double dl = l0 - ell(pp, tt);
                const double act = d0 - diameter_at(t, dec, pp, tt);
                const double err = std::abs(sg.law->delta_diameter(dp, dl) - act) / t.scale();
                worst = std::max(worst, err);
                o.expect(err <= 1e-6, "seed " + std::to_string(seed) + " " + sg.law->name + fmt(" err %.3g", err));
                o.expect(std::abs(sg.law->dq(dp, dl) - dq) <= 1e-6 * t.scale(), "seed " + std::to_string(seed) + " dq");
                ++probes;
            }
        }
    }
    o.expect(segments == 20, fmt("only %.0f segments", segments));
    if (o.pass)
        o.detail = fmt("%.0f segments (%.0f sideways, %.0f out-shift), %.0f probes", segments, sideways, out, probes) +
                   fmt(", worst error %.2g x scale", worst);
    return o;
}

Outcome criterion6() {
    Outcome o;
    int n = 0;
    for (unsigned seed = 1; seed <= 200; ++seed, ++n) {
        auto t = corpus_tree(seed);
        check_blocked(o, "seed " + std::to_string(seed), t, optimize(t));
    }
    for (unsigned k = 0; k < 50; ++k, ++n) {
        auto t = spine_tree(700 + k, true);
        check_blocked(o, "bent " + std::to_string(k), t, optimize(t));
    }
    for (int l : {1, 2, 3, 5}) {
        auto t = stress_family(l);
        check_blocked(o, "stress " + std::to_string(l), t, optimize(t));
        ++n;
    }
    check_blocked(o, "T_L", fixtures::t_l(), optimize(fixtures::t_l()));
    check_blocked(o, "FORKBENT", fixtures::t_forkbent(), optimize(fixtures::t_forkbent()));
    if (o.pass) o.detail = fmt("%.0f shortcuts x 4 directions", n + 2);
    return o;
}

Outcome criterion7() {
    Outcome o;
    auto t = fixtures::t_hook();
    Shortcut pq{TreePoint::at_vertex(0), TreePoint::at_vertex(2)};
    auto d = augmented_diameter(t, backbone(t), pq);
    auto u = classify_usefulness(t, pq);
    const double want = 8.0 + 2.0 * std::sqrt(2.0);
    o.expect(std::abs(d.diameter - want) <= 1e-9, fmt("diameter %.12g", d.diameter));
    o.expect(u.kind == UsefulnessKind::Useless, std::string("classified ") + to_string(u.kind));
    if (o.pass) o.detail = fmt("diameter %.10f, useless", d.diameter);
    return o;
}

// Leftmost row maxima by exhaustive scan.
std::vector<RowMax> exhaustive(const ImplicitMatrix& m) {
    std::vector<RowMax> out(m.rows);
    for (int j = 0; j < m.rows; ++j)
        for (int i = 0; i < m.cols; ++i) {
            double v = m.entry(j, i);
            if (out[j].col < 0 || v > out[j].value) out[j] = {i, v};
        }
    return out;
}

// Longest wedge path by brute force over all secondary pairs.
std::optional<WedgePath> brute_wedge(const GeometricTree& t, const BackboneDecomposition& dec, const Shortcut& pq) {
    double ell = std::min(euclidean_distance(t, pq.p, pq.q), network_distance(t, pq.p, pq.q));
    double s = backbone_arc_of(t, dec, pq.p), r = backbone_arc_of(t, dec, pq.q);
    std::optional<WedgePath> best;
    for (std::size_t i = 0; i < dec.secondary.size(); ++i)
        for (std::size_t j = 0; j < dec.secondary.size(); ++j) {
            const auto &si = dec.secondary[i], &sj = dec.secondary[j];
            if (i == j || si.arc < s || si.arc > r || sj.arc < s || sj.arc > r) continue;
            auto ri = TreePoint::at_vertex(si.root), rj = TreePoint::at_vertex(sj.root);
            double via = network_distance(t, ri, pq.p) + ell + network_distance(t, pq.q, rj);
            if (!(via < network_distance(t, ri, rj))) continue;
            double len = t.vertex_distance(si.far_leaf, si.root) + via + t.vertex_distance(sj.far_leaf, sj.root);
            if (!best || len > best->length) best = WedgePath{len, static_cast<int>(i), static_cast<int>(j)};
        }
    return best;
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 50), cols = 1 + static_cast<int>(rng() % 50);
        // w_i - (x_j - y_i)^2 with sorted x and y is totally monotone
        std::vector<double> x(rows), y(cols), w(cols);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        for (auto& v : w) v = u(rng);
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        ImplicitMatrix m{rows, cols, [&](int j, int i) { return w[i] - (x[j] - y[i]) * (x[j] - y[i]); }};
        auto fast = row_maxima(m), slow = exhaustive(m);
        for (int j = 0; j < rows; ++j)
            o.expect(fast[j].col == slow[j].col && fast[j].value == slow[j].value,
                     "matrix " + std::to_string(trial) + " row " + std::to_string(j));
    }
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int instances = 0, nontrivial = 0;
    double worst_ulps = 0.0;
    for (unsigned trial = 0; nontrivial < 100 && trial < 5000; ++trial) {
        auto t = random_tree(3000 + trial, 10 + trial % 40, TreeShape::Caterpillar);
        auto dec = backbone(t);
        if (dec.is_point) continue;
        ++instances;
        double s = u01(rng) * dec.center_arc;
        double r = dec.center_arc + u01(rng) * (dec.length - dec.center_arc);
        Shortcut pq{backbone_point(t, dec, s), backbone_point(t, dec, r)};
        auto fast = longest_wedge_path(t, dec, pq);
        auto slow = brute_wedge(t, dec, pq);
        const std::string name = "wedge " + std::to_string(trial);
        o.expect(fast.has_value() == slow.has_value(), name + " existence");
        if (!fast || !slow) continue;
        ++nontrivial;
        // exact up to the order in which the same terms are added
        const double ulps = std::abs(fast->length - slow->length) / (std::numeric_limits<double>::epsilon() * slow->length);
        o.expect(ulps <= 4.0, name + fmt(" %.17g vs %.17g", fast->length, slow->length));
        worst_ulps = std::max(worst_ulps, ulps);
    }
    o.expect(nontrivial == 100, fmt("only %.0f wedge instances with a path", nontrivial));
    if (o.pass)
        o.detail = fmt("500 matrices, 100 wedge instances with a path out of %.0f, worst %.0f ulp", instances,
                       worst_ulps);
    return o;
}

Outcome criterion9() {
    Outcome o;
    OptimizeOptions plain;
    plain.trace = false;
    OptimizeOptions diag = plain;
    diag.diagnostic = true;
    std::string counts;
    for (int l : {5, 10, 20}) {
        auto t = stress_family(l);
        const long long n = static_cast<long long>(t.vertex_count());
        auto r = optimize(t, plain), d = optimize(t, diag);
        o.expect(r.counters.events <= 40 * n, fmt("stress l=%.0f events %.0f", l, r.counters.events));
        o.expect(d.counters.phase3_state_changes >= 3LL * l * l - 2LL * l,
                 fmt("stress l=%.0f diagnostic %.0f", l, d.counters.phase3_state_changes));
        o.expect(r.counters.phase3_state_changes <= 8LL * l, fmt("stress l=%.0f modified %.0f", l, r.counters.phase3_state_changes));
        counts += fmt(" l=%.0f:%.0f/%.0f", l, r.counters.phase3_state_changes, d.counters.phase3_state_changes);
    }
    std::vector<double> times;
    std::string events;
    for (int n : {1000, 2000, 4000, 8000}) {
        auto t = random_tree(7, n, TreeShape::Uniform);
        double best = 1e300;
        OptimizeResult r;
        for (int rep = 0; rep < 3; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            r = optimize(t, plain);
            best = std::min(best, seconds_since(t0));
        }
        times.push_back(best);
        o.expect(r.counters.events <= 40LL * n, fmt("n=%.0f events %.0f", n, r.counters.events));
        events += fmt(" %.0f", r.counters.events);
    }
    std::string ratios;
    for (std::size_t k = 1; k < times.size(); ++k) ratios += fmt(" %.2f", times[k] / times[k - 1]);
    if (o.pass)
        o.detail = "phase-III changes modified/diagnostic" + counts + "; random events" + events +
                   "; time doubling ratios" + ratios + " (informative)";
    return o;
}

Outcome criterion10() {
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (unsigned k = 0; k < 100; ++k) {
        auto t = fixtures::random_test_tree(900 + k, 3 + static_cast<int>(k % 10));
        auto pick = [&]() {
            auto [u, v] = t.edges()[rng() % t.edge_count()];
            return t.canonical({u, v, u01(rng)});
        };
        Shortcut pq{pick(), pick()};
        auto fast = augmented_diameter(t, backbone(t), pq);
        auto dense = fixtures::dense_augmented_diameter(t, pq.p, pq.q, 25);
        const double gap = std::abs(fast.diameter - dense.diameter);
        worst = std::max(worst, gap / dense.spacing);
        o.expect(gap <= 3 * dense.spacing, "instance " + std::to_string(k) + fmt(" gap %.3g", gap));
    }
    if (o.pass) o.detail = fmt("100 instances, worst gap %.3f spacings", worst);
    return o;
}

}  // namespace

int main() {
    struct Item {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Item> items = {
        {1, "oracle optimality", criterion1},
        {2, "T_L closed form", criterion2},
        {3, "useful shortcut characterization", criterion3},
        {4, "endpoints on the backbone around c", criterion4},
        {5, "speed laws", criterion5},
        {6, "local blocking", criterion6},
        {7, "useless shortcut on T_HOOK", criterion7},
        {8, "SMAWK and wedge paths", criterion8},
        {9, "event counts and scaling", criterion9},
        {10, "evaluator ground truth", criterion10},
    };
    int failed = 0;
    for (auto& it : items) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", it.id, it.name, o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
