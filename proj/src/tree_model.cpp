#include "treecut/tree_model.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "json.hpp"

namespace treecut {

using nlohmann::json;

const char* to_string(TreeErrorKind kind) {
    switch (kind) {
        case TreeErrorKind::ParseError: return "ParseError";
        case TreeErrorKind::NotATree: return "NotATree";
        case TreeErrorKind::ZeroLengthEdge: return "ZeroLengthEdge";
        case TreeErrorKind::DuplicateVertexId: return "DuplicateVertexId";
        case TreeErrorKind::InvalidEdgeReference: return "InvalidEdgeReference";
        case TreeErrorKind::PointsNotOnTree: return "PointsNotOnTree";
    }
    return "Unknown";
}

GeometricTree::GeometricTree(std::vector<Vertex> vertices, const std::vector<std::pair<int, int>>& edges_by_index)
    : vertices_(std::move(vertices)) {
    const int n = static_cast<int>(vertices_.size());
    if (n == 0) throw TreeError(TreeErrorKind::NotATree, "tree has no vertices");
    for (int i = 0; i < n; ++i) {
        if (!id_index_.emplace(vertices_[i].id, i).second)
            throw TreeError(TreeErrorKind::DuplicateVertexId, "duplicate vertex id " + std::to_string(vertices_[i].id));
    }
    if (static_cast<int>(edges_by_index.size()) != n - 1)
        throw TreeError(TreeErrorKind::NotATree, "a tree on " + std::to_string(n) + " vertices needs " +
                                                     std::to_string(n - 1) + " edges");
    adj_.assign(n, {});
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges_by_index) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw TreeError(TreeErrorKind::InvalidEdgeReference, "edge references an unknown vertex");
        if (u == v) throw TreeError(TreeErrorKind::NotATree, "self-loop");
        if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
            throw TreeError(TreeErrorKind::NotATree, "parallel edge");
        double w = norm(vertices_[u].pos, vertices_[v].pos);
        if (!(w > 0.0))
            throw TreeError(TreeErrorKind::ZeroLengthEdge, "edge between coincident vertices " +
                                                               std::to_string(vertices_[u].id) + " and " +
                                                               std::to_string(vertices_[v].id));
        adj_[u].push_back({v, w});
        adj_[v].push_back({u, w});
        edges_.push_back({u, v});
    }

    parent_.assign(n, -1);
    depth_.assign(n, 0);
    root_dist_.assign(n, 0.0);
    std::vector<int> order{0};
    std::vector<char> visited(n, 0);
    visited[0] = 1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        int w = order[k];
        for (auto [z, len] : adj_[w]) {
            if (visited[z]) {
                if (z != parent_[w]) throw TreeError(TreeErrorKind::NotATree, "graph contains a cycle");
                continue;
            }
            visited[z] = 1;
            parent_[z] = w;
            depth_[z] = depth_[w] + 1;
            root_dist_[z] = root_dist_[w] + len;
            order.push_back(z);
        }
    }
    if (static_cast<int>(order.size()) != n) throw TreeError(TreeErrorKind::NotATree, "graph is disconnected");

    int levels = 1;
    while ((1 << levels) < n) ++levels;
    up_.assign(levels, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) up_[0][i] = parent_[i] < 0 ? i : parent_[i];
    for (int j = 1; j < levels; ++j)
        for (int i = 0; i < n; ++i) up_[j][i] = up_[j - 1][up_[j - 1][i]];

    double lo_x = vertices_[0].pos.x, hi_x = lo_x, lo_y = vertices_[0].pos.y, hi_y = lo_y;
    for (auto& vx : vertices_) {
        lo_x = std::min(lo_x, vx.pos.x);
        hi_x = std::max(hi_x, vx.pos.x);
        lo_y = std::min(lo_y, vx.pos.y);
        hi_y = std::max(hi_y, vx.pos.y);
    }
    scale_ = std::hypot(hi_x - lo_x, hi_y - lo_y);
    if (scale_ <= 0.0) scale_ = 1.0;
}

std::vector<int> GeometricTree::leaves() const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(adj_.size()); ++i)
        if (adj_[i].size() <= 1) out.push_back(i);
    return out;
}

bool GeometricTree::has_edge(int u, int v) const {
    if (u < 0 || u >= static_cast<int>(adj_.size())) return false;
    for (auto [z, len] : adj_[u])
        if (z == v) return true;
    return false;
}

double GeometricTree::edge_length(int u, int v) const {
    for (auto [z, len] : adj_.at(u))
        if (z == v) return len;
    throw TreeError(TreeErrorKind::InvalidEdgeReference, "no edge between the given vertices");
}

int GeometricTree::index_of(long long id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) throw TreeError(TreeErrorKind::InvalidEdgeReference, "unknown vertex id " + std::to_string(id));
    return it->second;
}

TreePoint GeometricTree::canonical(TreePoint a) const {
    const int n = static_cast<int>(adj_.size());
    if (a.u < 0 || a.v < 0 || a.u >= n || a.v >= n)
        throw TreeError(TreeErrorKind::InvalidEdgeReference, "point references an unknown vertex");
    if (a.u == a.v) return TreePoint::at_vertex(a.u);
    if (!has_edge(a.u, a.v)) throw TreeError(TreeErrorKind::InvalidEdgeReference, "point references a missing edge");
    if (!(a.lambda >= 0.0 && a.lambda <= 1.0))
        throw TreeError(TreeErrorKind::InvalidEdgeReference, "lambda outside [0,1]");
    if (a.lambda <= 0.0) return TreePoint::at_vertex(a.u);
    if (a.lambda >= 1.0) return TreePoint::at_vertex(a.v);
    return a;
}

TreePoint GeometricTree::point_on_edge(int u, int v, double lambda) const { return canonical({u, v, lambda}); }

int GeometricTree::lca(int a, int b) const {
    if (depth_[a] < depth_[b]) std::swap(a, b);
    int diff = depth_[a] - depth_[b];
    for (int j = 0; diff; ++j, diff >>= 1)
        if (diff & 1) a = up_[j][a];
    if (a == b) return a;
    for (int j = static_cast<int>(up_.size()) - 1; j >= 0; --j) {
        if (up_[j][a] != up_[j][b]) {
            a = up_[j][a];
            b = up_[j][b];
        }
    }
    return parent_[a];
}

double GeometricTree::vertex_distance(int a, int b) const {
    if (a == b) return 0.0;
    int c = lca(a, b);
    return (root_dist_[a] - root_dist_[c]) + (root_dist_[b] - root_dist_[c]);
}

std::vector<int> GeometricTree::vertex_path(int a, int b) const {
    int c = lca(a, b);
    std::vector<int> head, tail;
    for (int w = a; w != c; w = parent_[w]) head.push_back(w);
    head.push_back(c);
    for (int w = b; w != c; w = parent_[w]) tail.push_back(w);
    head.insert(head.end(), tail.rbegin(), tail.rend());
    return head;
}

namespace {

GeometricTree::Vertex parse_vertex(const json& j) {
    if (!j.is_object() || !j.contains("id") || !j.contains("x") || !j.contains("y"))
        throw TreeError(TreeErrorKind::ParseError, "vertex needs id, x and y");
    if (!j["id"].is_number_integer() || !j["x"].is_number() || !j["y"].is_number())
        throw TreeError(TreeErrorKind::ParseError, "vertex fields have the wrong type");
    double x = j["x"].get<double>(), y = j["y"].get<double>();
    if (!std::isfinite(x) || !std::isfinite(y)) throw TreeError(TreeErrorKind::ParseError, "non-finite coordinate");
    return {j["id"].get<long long>(), {x, y}};
}

// Edges sharing the same endpoints (forward or backward) for a point: the
// caller supplies endpoints and per-endpoint offsets.
struct Anchor {
    int w;
    double off;
};

std::vector<Anchor> anchors(const GeometricTree& tree, TreePoint a) {
    if (a.is_vertex()) return {{a.u, 0.0}};
    double w = tree.edge_length(a.u, a.v);
    return {{a.u, a.lambda * w}, {a.v, (1.0 - a.lambda) * w}};
}

bool same_edge(TreePoint a, TreePoint b) {
    return !a.is_vertex() && !b.is_vertex() &&
           ((a.u == b.u && a.v == b.v) || (a.u == b.v && a.v == b.u));
}

double lambda_from(TreePoint a, int u) { return a.u == u ? a.lambda : 1.0 - a.lambda; }

}  // namespace

GeometricTree load_tree(const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw TreeError(TreeErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") || !j["vertices"].is_array() ||
        !j["edges"].is_array())
        throw TreeError(TreeErrorKind::ParseError, "tree document needs vertices and edges arrays");
    std::vector<GeometricTree::Vertex> vertices;
    std::map<long long, int> index;
    for (auto& jv : j["vertices"]) {
        vertices.push_back(parse_vertex(jv));
        if (!index.emplace(vertices.back().id, static_cast<int>(vertices.size()) - 1).second)
            throw TreeError(TreeErrorKind::DuplicateVertexId, "duplicate vertex id " + std::to_string(vertices.back().id));
    }
    std::vector<std::pair<int, int>> edges;
    for (auto& je : j["edges"]) {
        if (je.is_object()) throw TreeError(TreeErrorKind::ParseError, "explicit edge weights are not accepted");
        if (!je.is_array() || je.size() != 2 || !je[0].is_number_integer() || !je[1].is_number_integer())
            throw TreeError(TreeErrorKind::ParseError, "edge must be a pair of vertex ids");
        auto iu = index.find(je[0].get<long long>()), iv = index.find(je[1].get<long long>());
        if (iu == index.end() || iv == index.end())
            throw TreeError(TreeErrorKind::ParseError, "edge references an unknown vertex id");
        edges.push_back({iu->second, iv->second});
    }
    return GeometricTree(std::move(vertices), edges);
}

std::string dump_tree(const GeometricTree& tree) {
    json out;
    out["vertices"] = json::array();
    for (auto& v : tree.vertices()) out["vertices"].push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}});
    out["edges"] = json::array();
    for (auto [u, v] : tree.edges()) out["edges"].push_back({tree.vertex(u).id, tree.vertex(v).id});
    return out.dump();
}

TreePoint parse_tree_point(const GeometricTree& tree, const std::string& document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw TreeError(TreeErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("edge") || !j["edge"].is_array() || j["edge"].size() != 2)
        throw TreeError(TreeErrorKind::ParseError, "tree point needs an edge pair");
    double lambda = j.value("lambda", 0.0);
    int u = tree.index_of(j["edge"][0].get<long long>());
    int v = tree.index_of(j["edge"][1].get<long long>());
    if (u != v && !tree.has_edge(u, v)) throw TreeError(TreeErrorKind::InvalidEdgeReference, "tree point edge is missing");
    return tree.canonical({u, v, lambda});
}

std::string dump_tree_point(const GeometricTree& tree, TreePoint a) {
    a = tree.canonical(a);
    json j;
    j["edge"] = {tree.vertex(a.u).id, tree.vertex(a.v).id};
    j["lambda"] = a.lambda;
    return j.dump();
}

Vec2 point_coordinates(const GeometricTree& tree, TreePoint a) {
    a = tree.canonical(a);
    Vec2 pu = tree.position(a.u), pv = tree.position(a.v);
    return {(1.0 - a.lambda) * pu.x + a.lambda * pv.x, (1.0 - a.lambda) * pu.y + a.lambda * pv.y};
}

double network_distance(const GeometricTree& tree, TreePoint a, TreePoint b) {
    a = tree.canonical(a);
    b = tree.canonical(b);
    if (same_edge(a, b)) {
        double dl = std::abs(a.lambda - lambda_from(b, a.u));
        return dl <= 1e-14 ? 0.0 : dl * tree.edge_length(a.u, a.v);
    }
    double best = std::numeric_limits<double>::infinity();
    for (auto ea : anchors(tree, a))
        for (auto eb : anchors(tree, b)) best = std::min(best, ea.off + tree.vertex_distance(ea.w, eb.w) + eb.off);
    return best;
}

double euclidean_distance(const GeometricTree& tree, TreePoint a, TreePoint b) {
    return norm(point_coordinates(tree, a), point_coordinates(tree, b));
}

PathTrace tree_path(const GeometricTree& tree, TreePoint a, TreePoint b) {
    a = tree.canonical(a);
    b = tree.canonical(b);
    PathTrace trace;
    trace.points.push_back(a);
    if (same_point(tree, a, b)) return trace;
    if (same_edge(a, b)) {
        trace.points.push_back(b);
        trace.length = network_distance(tree, a, b);
        return trace;
    }
    double best = std::numeric_limits<double>::infinity();
    Anchor ba{}, bb{};
    for (auto ea : anchors(tree, a))
        for (auto eb : anchors(tree, b)) {
            double d = ea.off + tree.vertex_distance(ea.w, eb.w) + eb.off;
            if (d < best) {
                best = d;
                ba = ea;
                bb = eb;
            }
        }
    for (int w : tree.vertex_path(ba.w, bb.w)) {
        TreePoint pw = TreePoint::at_vertex(w);
        if (!same_point(tree, pw, trace.points.back())) trace.points.push_back(pw);
    }
    if (!same_point(tree, b, trace.points.back())) trace.points.push_back(b);
    trace.length = best;
    return trace;
}

std::vector<double> distances_from(const GeometricTree& tree, TreePoint a) {
    a = tree.canonical(a);
    const int n = static_cast<int>(tree.vertex_count());
    std::vector<double> dist(n, -1.0);
    std::vector<int> stack;
    for (auto e : anchors(tree, a)) {
        dist[e.w] = e.off;
        stack.push_back(e.w);
    }
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (auto [z, len] : tree.adjacent(w)) {
            if (dist[z] >= 0.0) continue;
            dist[z] = dist[w] + len;
            stack.push_back(z);
        }
    }
    return dist;
}

std::map<long long, double> distances_by_id(const GeometricTree& tree, TreePoint a) {
    auto d = distances_from(tree, a);
    std::map<long long, double> out;
    for (int i = 0; i < static_cast<int>(d.size()); ++i) out[tree.vertex(i).id] = d[i];
    return out;
}

bool same_point(const GeometricTree& tree, TreePoint a, TreePoint b) {
    a = tree.canonical(a);
    b = tree.canonical(b);
    if (a.is_vertex() || b.is_vertex()) return a.is_vertex() && b.is_vertex() && a.u == b.u;
    if (!same_edge(a, b)) return false;
    return std::abs(a.lambda - lambda_from(b, a.u)) <= 1e-14;
}

}  // namespace treecut
