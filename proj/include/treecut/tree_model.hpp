#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace treecut {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double norm(Vec2 a, Vec2 b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

enum class TreeErrorKind {
    ParseError,
    NotATree,
    ZeroLengthEdge,
    DuplicateVertexId,
    InvalidEdgeReference,
    PointsNotOnTree,
};

class TreeError : public std::runtime_error {
public:
    TreeError(TreeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    TreeErrorKind kind() const { return kind_; }

private:
    TreeErrorKind kind_;
};

const char* to_string(TreeErrorKind kind);

// A point on an edge, addressed by internal vertex indices.  A point sitting
// on a vertex is stored with u == v and lambda == 0 after canonicalization.
struct TreePoint {
    int u = 0;
    int v = 0;
    double lambda = 0.0;

    static TreePoint at_vertex(int w) { return {w, w, 0.0}; }
    bool is_vertex() const { return u == v; }
};

struct PathTrace {
    std::vector<TreePoint> points;
    double length = 0.0;
};

class GeometricTree {
public:
    struct Vertex {
        long long id;
        Vec2 pos;
    };

    GeometricTree(std::vector<Vertex> vertices, const std::vector<std::pair<int, int>>& edges_by_index);

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const Vertex& vertex(int i) const { return vertices_[i]; }
    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    Vec2 position(int i) const { return vertices_[i].pos; }

    // neighbors of i with the corresponding edge length
    const std::vector<std::pair<int, double>>& adjacent(int i) const { return adj_[i]; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }
    bool is_leaf(int i) const { return adj_[i].size() <= 1; }
    std::vector<int> leaves() const;

    bool has_edge(int u, int v) const;
    double edge_length(int u, int v) const;
    int index_of(long long id) const;

    double scale() const { return scale_; }
    double tol() const { return tol_scale_ * scale_; }
    void set_tolerance_scale(double s) { tol_scale_ = s; }

    TreePoint canonical(TreePoint a) const;
    TreePoint point_on_edge(int u, int v, double lambda) const;

    // rooted-at-0 structure used for O(log n) distance queries
    int parent(int i) const { return parent_[i]; }
    int depth(int i) const { return depth_[i]; }
    double root_distance(int i) const { return root_dist_[i]; }
    int lca(int a, int b) const;
    double vertex_distance(int a, int b) const;
    // vertices of the unique path from a to b, inclusive
    std::vector<int> vertex_path(int a, int b) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::map<long long, int> id_index_;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<double> root_dist_;
    std::vector<std::vector<int>> up_;
    double scale_ = 1.0;
    double tol_scale_ = 1e-9;
};

GeometricTree load_tree(const std::string& document);
std::string dump_tree(const GeometricTree& tree);

// {"edge":[u_id,v_id],"lambda":f}
TreePoint parse_tree_point(const GeometricTree& tree, const std::string& document);
std::string dump_tree_point(const GeometricTree& tree, TreePoint a);

Vec2 point_coordinates(const GeometricTree& tree, TreePoint a);
double network_distance(const GeometricTree& tree, TreePoint a, TreePoint b);
double euclidean_distance(const GeometricTree& tree, TreePoint a, TreePoint b);
PathTrace tree_path(const GeometricTree& tree, TreePoint a, TreePoint b);
std::vector<double> distances_from(const GeometricTree& tree, TreePoint a);
std::map<long long, double> distances_by_id(const GeometricTree& tree, TreePoint a);

bool same_point(const GeometricTree& tree, TreePoint a, TreePoint b);

}  // namespace treecut
