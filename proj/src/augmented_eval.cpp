#include "treecut/augmented_eval.hpp"

#include <algorithm>
#include <cmath>

namespace treecut {

const char* to_string(PairType t) {
    switch (t) {
        case PairType::XY: return "x-y";
        case PairType::XB: return "x-■";
        case PairType::BY: return "■-y";
        case PairType::BB: return "■-■";
        case PairType::BO: return "■-o";
    }
    return "?";
}

const char* to_string(PairSubType t) {
    switch (t) {
        case PairSubType::XY: return "x-y";
        case PairSubType::XS: return "x-▲";
        case PairSubType::XC: return "x-•";
        case PairSubType::SY: return "▲-y";
        case PairSubType::CY: return "•-y";
        case PairSubType::SS: return "▲-▲";
        case PairSubType::SC: return "▲-•";
        case PairSubType::SO: return "▲-o";
    }
    return "?";
}

const char* to_string(PathType t) {
    switch (t) {
        case PathType::ViaShortcut: return "pq";
        case PathType::ViaTree: return "T";
        case PathType::ViaP: return "p";
        case PathType::ViaQ: return "q";
    }
    return "?";
}

const char* to_string(UsefulnessKind k) {
    switch (k) {
        case UsefulnessKind::Useful: return "useful";
        case UsefulnessKind::Indifferent: return "indifferent";
        case UsefulnessKind::Useless: return "useless";
    }
    return "?";
}

PairType pair_type_of(PairSubType t) {
    switch (t) {
        case PairSubType::XY: return PairType::XY;
        case PairSubType::XS:
        case PairSubType::XC: return PairType::XB;
        case PairSubType::SY:
        case PairSubType::CY: return PairType::BY;
        case PairSubType::SS:
        case PairSubType::SC: return PairType::BB;
        case PairSubType::SO: return PairType::BO;
    }
    return PairType::XY;
}

std::string path_descriptor(PairSubType t, PathType path) {
    std::string name = to_string(t);
    auto dash = name.find('-');
    return name.substr(0, dash) + "-" + to_string(path) + "-" + name.substr(dash + 1);
}

bool has_useful_shortcut(const BackboneDecomposition& dec) { return !dec.is_point && !dec.is_straight; }

namespace {

Shortcut checked(const GeometricTree& tree, const Shortcut& pq) {
    try {
        return {tree.canonical(pq.p), tree.canonical(pq.q)};
    } catch (const TreeError& e) {
        throw TreeError(TreeErrorKind::PointsNotOnTree, std::string("shortcut endpoint is not on the tree: ") + e.what());
    }
}

// Point at distance s from the first point of a path trace.
TreePoint along_trace(const GeometricTree& tree, const PathTrace& tr, double s) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < tr.points.size(); ++k) {
        double w = network_distance(tree, tr.points[k], tr.points[k + 1]);
        if (s <= acc + w && w > 0.0) {
            double f = std::clamp((s - acc) / w, 0.0, 1.0);
            // both points lie on one edge (or are its endpoints)
            TreePoint u = tr.points[k], v = tr.points[k + 1];
            int eu, ev;
            double lu, lv;
            if (u.is_vertex() && v.is_vertex()) {
                eu = u.u;
                ev = v.u;
                lu = 0.0;
                lv = 1.0;
            } else if (u.is_vertex()) {
                eu = v.u == u.u ? v.u : v.v;
                ev = eu == v.u ? v.v : v.u;
                lu = 0.0;
                lv = eu == v.u ? v.lambda : 1.0 - v.lambda;
            } else {
                eu = u.u;
                ev = u.v;
                lu = u.lambda;
                lv = v.is_vertex() ? (v.u == ev ? 1.0 : 0.0) : (v.u == eu ? v.lambda : 1.0 - v.lambda);
            }
            return tree.canonical({eu, ev, lu + f * (lv - lu)});
        }
        acc += w;
    }
    return tr.points.back();
}

char leaf_class(const BackboneDecomposition& dec, int w) {
    if (dec.owner[w] == kOwnerX) return 'x';
    if (dec.owner[w] == kOwnerY) return 'y';
    return 's';
}

bool same_subtree(const BackboneDecomposition& dec, int u, int v) {
    return dec.owner[u] == dec.owner[v] && dec.owner[u] != kOwnerBackbone;
}

PairSubType leaf_pair_subtype(char cu, char cv, bool& swap) {
    swap = false;
    if (cu == 'y' || (cu == 's' && cv == 'x')) {
        std::swap(cu, cv);
        swap = true;
    }
    if (cu == 'x' && cv == 'y') return PairSubType::XY;
    if (cu == 'x') return PairSubType::XS;
    if (cv == 'y') return PairSubType::SY;
    return PairSubType::SS;
}

}  // namespace

AugmentedDiagnosis augmented_diameter(const GeometricTree& tree, const BackboneDecomposition& dec, const Shortcut& in) {
    const Shortcut pq = checked(tree, in);
    const double tol = tree.tol();
    AugmentedDiagnosis out;
    out.shortcut_length = euclidean_distance(tree, pq.p, pq.q);
    out.tree_distance_pq = network_distance(tree, pq.p, pq.q);
    out.shortcut_length = std::min(out.shortcut_length, out.tree_distance_pq);
    const double ell = out.shortcut_length, dpq = out.tree_distance_pq;
    const double cyc = ell + dpq;
    out.cycle_length = cyc;
    const PathTrace p_to_q = tree_path(tree, pq.p, pq.q);
    out.p_bar = along_trace(tree, p_to_q, cyc / 2.0);
    out.q_bar = along_trace(tree, p_to_q, dpq - cyc / 2.0);

    const auto dp = distances_from(tree, pq.p);
    const auto dq = distances_from(tree, pq.q);
    const auto leaves = tree.leaves();
    const Vec2 cp = point_coordinates(tree, pq.p), cq = point_coordinates(tree, pq.q);

    std::vector<AchievingPair> cands;
    auto leaf_endpoint = [&](int w) {
        Endpoint e;
        e.kind = Endpoint::Kind::Leaf;
        e.vertex = w;
        e.point = TreePoint::at_vertex(w);
        e.coords = tree.position(w);
        return e;
    };

    // (i) leaf pairs
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        for (std::size_t j = i + 1; j < leaves.size(); ++j) {
            int u = leaves[i], v = leaves[j];
            if (same_subtree(dec, u, v)) continue;
            double dt = tree.vertex_distance(u, v);
            double via = std::min(dp[u] + ell + dq[v], dq[u] + ell + dp[v]);
            AchievingPair ap;
            ap.length = std::min(dt, via);
            bool swap;
            ap.subtype = leaf_pair_subtype(leaf_class(dec, u), leaf_class(dec, v), swap);
            ap.u = leaf_endpoint(swap ? v : u);
            ap.v = leaf_endpoint(swap ? u : v);
            if (dt <= ap.length + tol) ap.paths.insert(PathType::ViaTree);
            if (via <= ap.length + tol) ap.paths.insert(PathType::ViaShortcut);
            cands.push_back(ap);
        }
    }

    // (ii) each leaf against its antipodal point on the cycle
    for (int u : leaves) {
        double hang = std::max(0.0, (dp[u] + dq[u] - dpq) / 2.0);
        double alpha = std::clamp(dp[u] - hang, 0.0, dpq);  // attachment along p->q
        double theta = alpha + cyc / 2.0;                  // cycle coordinate of the antipode
        if (theta >= cyc) theta -= cyc;
        AchievingPair ap;
        ap.length = hang + cyc / 2.0;
        Endpoint far;
        if (theta <= dpq || ell <= 0.0) {
            far.kind = Endpoint::Kind::CyclePoint;
            far.point = along_trace(tree, p_to_q, std::min(theta, dpq));
            far.coords = point_coordinates(tree, far.point);
        } else if (theta - dpq >= ell) {
            far.kind = Endpoint::Kind::CyclePoint;
            far.point = pq.p;
            far.coords = cp;
        } else {
            far.kind = Endpoint::Kind::ShortcutPoint;
            far.along_pq = ell - (theta - dpq);
            double f = far.along_pq / ell;
            far.coords = {cp.x + f * (cq.x - cp.x), cp.y + f * (cq.y - cp.y)};
            if (far.along_pq <= 0.0 || far.along_pq >= ell) {
                far.kind = Endpoint::Kind::CyclePoint;
                far.point = far.along_pq <= 0.0 ? pq.p : pq.q;
            }
        }
        // a cycle point that is itself a leaf is covered by the leaf pairs
        if (far.kind == Endpoint::Kind::CyclePoint && far.point.is_vertex() && tree.is_leaf(far.point.u)) continue;
        char cu = leaf_class(dec, u);
        if (far.kind == Endpoint::Kind::ShortcutPoint) {
            ap.subtype = PairSubType::SO;
            ap.paths = {PathType::ViaP, PathType::ViaQ};
            ap.u = leaf_endpoint(u);
            ap.v = far;
        } else {
            ap.paths = {PathType::ViaShortcut, PathType::ViaTree};
            if (cu == 'y') {
                ap.subtype = PairSubType::CY;
                ap.u = far;
                ap.v = leaf_endpoint(u);
            } else {
                ap.subtype = cu == 'x' ? PairSubType::XC : PairSubType::SC;
                ap.u = leaf_endpoint(u);
                ap.v = far;
            }
        }
        cands.push_back(ap);
    }

    double best = cyc / 2.0;
    for (auto& c : cands) best = std::max(best, c.length);
    out.candidate_max = best;
    out.diameter = std::max(best, dec.delta);
    for (auto& c : cands) {
        if (c.length < out.diameter - tol) continue;
        out.pair_state.insert(pair_type_of(c.subtype));
        out.pair_substate.insert(c.subtype);
        for (PathType pt : c.paths) out.path_state.insert(path_descriptor(c.subtype, pt));
        out.pairs.push_back(c);
    }
    return out;
}

Usefulness classify_usefulness(const GeometricTree& tree, const Shortcut& pq) {
    auto dec = backbone(tree);
    auto diag = augmented_diameter(tree, dec, pq);
    Usefulness u;
    u.diameter_before = dec.diameter;
    u.diameter_after = diag.diameter;
    const double tol = tree.tol();
    if (diag.diameter < dec.diameter - tol)
        u.kind = UsefulnessKind::Useful;
    else if (diag.diameter > dec.diameter + tol)
        u.kind = UsefulnessKind::Useless;
    else
        u.kind = UsefulnessKind::Indifferent;
    return u;
}

PairUsefulness pair_is_useful(const GeometricTree& tree, const Shortcut& in, TreePoint u, TreePoint v) {
    const Shortcut pq = checked(tree, in);
    try {
        u = tree.canonical(u);
        v = tree.canonical(v);
    } catch (const TreeError& e) {
        throw TreeError(TreeErrorKind::PointsNotOnTree, e.what());
    }
    const double tol = tree.tol();
    double ell = std::min(euclidean_distance(tree, pq.p, pq.q), network_distance(tree, pq.p, pq.q));
    double duv = network_distance(tree, u, v);
    PairUsefulness r;
    r.forward = network_distance(tree, u, pq.p) + ell + network_distance(tree, pq.q, v) < duv - tol;
    r.backward = network_distance(tree, u, pq.q) + ell + network_distance(tree, pq.p, v) < duv - tol;
    return r;
}

}  // namespace treecut
