#include "treecut/render_svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "treecut/diameter_core.hpp"

namespace treecut {

namespace {

constexpr double kWidth = 800.0;
constexpr double kMargin = 20.0;

struct Frame {
    double min_x = 0.0, max_y = 0.0, zoom = 1.0;
    double width = kWidth, height = kWidth;

    std::string x(double v) const { return fmt(kMargin + (v - min_x) * zoom); }
    std::string y(double v) const { return fmt(kMargin + (max_y - v) * zoom); }

    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return buf;
    }
};

Frame frame_of(const GeometricTree& tree) {
    double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x, lo_y = lo_x, hi_y = -lo_x;
    for (auto& v : tree.vertices()) {
        lo_x = std::min(lo_x, v.pos.x);
        hi_x = std::max(hi_x, v.pos.x);
        lo_y = std::min(lo_y, v.pos.y);
        hi_y = std::max(hi_y, v.pos.y);
    }
    Frame f;
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    f.zoom = (kWidth - 2 * kMargin) / span;
    f.min_x = lo_x;
    f.max_y = hi_y;
    f.width = 2 * kMargin + (hi_x - lo_x) * f.zoom;
    f.height = 2 * kMargin + (hi_y - lo_y) * f.zoom;
    return f;
}

}  // namespace

std::string render_svg(const GeometricTree& tree, const Shortcut* shortcut, const AugmentedDiagnosis* diagnosis) {
    const Frame f = frame_of(tree);
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << Frame::fmt(f.width)
        << "\" height=\"" << Frame::fmt(f.height) << "\" viewBox=\"0 0 " << Frame::fmt(f.width) << ' '
        << Frame::fmt(f.height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    out << "<g class=\"edges\" stroke=\"#555555\" stroke-width=\"2\">\n";
    for (auto [u, v] : tree.edges()) {
        Vec2 a = tree.position(u), b = tree.position(v);
        out << "<line class=\"edge\" x1=\"" << f.x(a.x) << "\" y1=\"" << f.y(a.y) << "\" x2=\"" << f.x(b.x)
            << "\" y2=\"" << f.y(b.y) << "\"/>\n";
    }
    out << "</g>\n";

    const BackboneDecomposition dec = backbone(tree);
    out << "<polyline class=\"backbone\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"5\" stroke-opacity=\"0.6\" "
           "points=\"";
    for (std::size_t k = 0; k < dec.backbone_path.points.size(); ++k) {
        Vec2 c = point_coordinates(tree, dec.backbone_path.points[k]);
        out << (k ? " " : "") << f.x(c.x) << ',' << f.y(c.y);
    }
    out << "\"/>\n";

    if (shortcut) {
        Vec2 p = point_coordinates(tree, shortcut->p), q = point_coordinates(tree, shortcut->q);
        out << "<line class=\"shortcut\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"8 5\" x1=\""
            << f.x(p.x) << "\" y1=\"" << f.y(p.y) << "\" x2=\"" << f.x(q.x) << "\" y2=\"" << f.y(q.y) << "\"/>\n";
    }

    if (diagnosis && !diagnosis->pairs.empty()) {
        out << "<g class=\"pairs\" fill=\"#ff7f0e\" stroke=\"black\" stroke-width=\"1\">\n";
        for (auto& pr : diagnosis->pairs)
            for (const Endpoint* e : {&pr.u, &pr.v})
                out << "<circle class=\"pair-end\" cx=\"" << f.x(e->coords.x) << "\" cy=\"" << f.y(e->coords.y)
                    << "\" r=\"5\"/>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace treecut
