#include "treecut/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "treecut/augmented_eval.hpp"
#include "treecut/diameter_core.hpp"
#include "treecut/oracle.hpp"
#include "treecut/render_svg.hpp"
#include "treecut/sweep_engine.hpp"

namespace treecut {

namespace {

using nlohmann::json;

// Bad user input: exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A result that contradicts a library guarantee: exit code 1.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

void round_numbers(json& j) {
    if (j.is_number_float()) {
        j = round12(j.get<double>());
    } else if (j.is_structured()) {
        for (auto& child : j) round_numbers(child);
    }
}

std::string read_source(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file) throw InputError("cannot open " + path);
    buf << file.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) throw InputError("cannot write " + path);
}

json point_json(const GeometricTree& t, TreePoint a) { return json::parse(dump_tree_point(t, a)); }

json shortcut_json(const GeometricTree& t, const Shortcut& s) {
    return {{"p", point_json(t, s.p)}, {"q", point_json(t, s.q)}};
}

Shortcut parse_shortcut(const GeometricTree& t, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed shortcut: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("q"))
        throw InputError("shortcut needs \"p\" and \"q\" tree points");
    return {parse_tree_point(t, j["p"].dump()), parse_tree_point(t, j["q"].dump())};
}

json endpoint_json(const GeometricTree& t, const Endpoint& e) {
    json j;
    switch (e.kind) {
        case Endpoint::Kind::Leaf:
            j["kind"] = "leaf";
            j["vertex"] = t.vertex(e.vertex).id;
            break;
        case Endpoint::Kind::CyclePoint:
            j["kind"] = "cycle";
            j["point"] = point_json(t, e.point);
            break;
        case Endpoint::Kind::ShortcutPoint:
            j["kind"] = "shortcut";
            j["along_pq"] = e.along_pq;
            break;
    }
    j["x"] = e.coords.x;
    j["y"] = e.coords.y;
    return j;
}

json diagnosis_json(const GeometricTree& t, const AugmentedDiagnosis& d) {
    json j;
    j["diameter"] = d.diameter;
    j["shortcut_length"] = d.shortcut_length;
    j["tree_distance_pq"] = d.tree_distance_pq;
    j["cycle_length"] = d.cycle_length;
    j["pair_state"] = json::array();
    for (auto p : d.pair_state) j["pair_state"].push_back(to_string(p));
    j["path_state"] = d.path_state;
    j["pairs"] = json::array();
    for (auto& pr : d.pairs) {
        json paths = json::array();
        for (auto p : pr.paths) paths.push_back(to_string(p));
        j["pairs"].push_back({{"u", endpoint_json(t, pr.u)},
                              {"v", endpoint_json(t, pr.v)},
                              {"subtype", to_string(pr.subtype)},
                              {"paths", paths},
                              {"length", pr.length}});
    }
    return j;
}

json analyze_json(const GeometricTree& t) {
    const DiameterResult dr = continuous_diameter(t);
    const CenterResult cr = absolute_center(t);
    const BackboneDecomposition dec = backbone(t);
    json j;
    j["vertices"] = t.vertex_count();
    j["diameter"] = dr.diameter;
    j["diametral_leaf_pairs"] = json::array();
    for (auto [u, v] : dr.diametral_leaf_pairs) j["diametral_leaf_pairs"].push_back({t.vertex(u).id, t.vertex(v).id});
    j["center"] = point_json(t, cr.center);
    j["eccentricity"] = cr.eccentricity;
    json bb;
    bb["a"] = point_json(t, dec.a);
    bb["b"] = point_json(t, dec.b);
    bb["length"] = dec.length;
    bb["is_point"] = dec.is_point;
    bb["is_straight"] = dec.is_straight;
    bb["vertices"] = json::array();
    for (int v : dec.backbone_vertices) bb["vertices"].push_back(t.vertex(v).id);
    bb["center_arc"] = dec.center_arc;
    j["backbone"] = bb;
    j["h_x"] = dec.h_x;
    j["h_y"] = dec.h_y;
    j["delta"] = dec.delta;
    j["secondary"] = json::array();
    for (auto& s : dec.secondary)
        j["secondary"].push_back(
            {{"root", t.vertex(s.root).id}, {"arc", s.arc}, {"height", s.height}, {"diameter", s.diameter}});
    j["useful_shortcut_exists"] = has_useful_shortcut(dec);
    return j;
}

json event_json(const Event& e) {
    return {{"kind", to_string(e.kind)},
            {"phase", to_string(e.phase)},
            {"parameter", e.parameter},
            {"p_arc", e.p_arc},
            {"q_arc", e.q_arc},
            {"diameter", e.diameter},
            {"best_diameter", e.best_diameter},
            {"payload", e.payload},
            {"path_state", e.path_state},
            {"reason", to_string(e.reason)}};
}

json optimize_json(const GeometricTree& t, const OptimizeResult& r, bool with_trace) {
    json j;
    j["shortcut"] = shortcut_json(t, r.shortcut);
    j["p_arc"] = r.p_arc;
    j["q_arc"] = r.q_arc;
    j["diameter_before"] = r.diameter_before;
    j["diameter_after"] = r.diameter_after;
    j["useful"] = r.useful;
    j["final_phase"] = to_string(r.final_phase);
    j["reason"] = to_string(r.reason);
    j["counters"] = {{"events", r.counters.events},
                     {"phase3_state_changes", r.counters.phase3_state_changes},
                     {"grow_shrink_switches", r.counters.grow_shrink_switches},
                     {"segments", r.counters.segments},
                     {"evaluations", r.counters.evaluations}};
    if (with_trace) {
        j["trace"] = json::array();
        for (auto& e : r.trace) j["trace"].push_back(event_json(e));
    }
    return j;
}

GeometricTree rounded(const GeometricTree& t) {
    std::vector<GeometricTree::Vertex> vs = t.vertices();
    for (auto& v : vs) v.pos = {round12(v.pos.x), round12(v.pos.y)};
    return GeometricTree(std::move(vs), t.edges());
}

struct Config {
    std::string input = "-";
    std::string output;
    std::string svg;
    std::string shortcut;
    std::string shape = "uniform";
    bool trace = false;
    bool restrict_backbone = false;
    std::optional<double> resolution;
    std::optional<double> tolerance_scale;
    unsigned long long seed = 1;
    int size = 12;
};

GeometricTree load_input(const Config& c, std::istream& in) {
    GeometricTree t = load_tree(read_source(c.input, in));
    if (c.tolerance_scale) t.set_tolerance_scale(*c.tolerance_scale);
    return t;
}

void render_to(const Config& c, const GeometricTree& t, const Shortcut* s) {
    if (c.svg.empty()) return;
    std::optional<AugmentedDiagnosis> diag;
    if (s) diag = augmented_diameter(t, backbone(t), *s);
    write_file(c.svg, render_svg(t, s, diag ? &*diag : nullptr));
}

// Returns the JSON text to emit.
std::string dispatch(const std::string& cmd, const Config& c, std::istream& in) {
    if (cmd == "gen") {
        GeometricTree t = c.shape == "stress" ? stress_family(c.size)
                                              : random_tree(c.seed, c.size, parse_tree_shape(c.shape));
        GeometricTree r = rounded(t);
        render_to(c, r, nullptr);
        return dump_tree(r);
    }

    GeometricTree t = load_input(c, in);
    json j;
    if (cmd == "analyze") {
        j = analyze_json(t);
        render_to(c, t, nullptr);
    } else if (cmd == "evaluate") {
        if (c.shortcut.empty()) throw InputError("evaluate needs --shortcut");
        Shortcut s = parse_shortcut(t, c.shortcut);
        AugmentedDiagnosis d = augmented_diameter(t, backbone(t), s);
        Usefulness u = classify_usefulness(t, s);
        j = diagnosis_json(t, d);
        j["shortcut"] = shortcut_json(t, s);
        j["diameter_before"] = u.diameter_before;
        j["diameter_after"] = d.diameter;
        j["usefulness"] = to_string(u.kind);
        render_to(c, t, &s);
    } else if (cmd == "optimize") {
        OptimizeOptions o;
        o.trace = c.trace;
        OptimizeResult r = optimize(t, o);
        if (r.diameter_after > r.diameter_before + t.tol())
            throw InternalError("optimized diameter exceeds the diameter of the tree");
        j = optimize_json(t, r, c.trace);
        render_to(c, t, &r.shortcut);
    } else if (cmd == "oracle") {
        const double h = c.resolution ? *c.resolution : continuous_diameter(t).diameter / 200.0;
        GridResult g = grid_search(t, h, c.restrict_backbone);
        j["shortcut"] = shortcut_json(t, g.shortcut);
        j["diameter"] = g.diameter;
        j["h"] = g.h;
        j["evaluations"] = g.evaluations;
        j["restricted"] = g.restricted;
        render_to(c, t, &g.shortcut);
    } else if (cmd == "render") {
        if (c.svg.empty()) throw InputError("render needs --svg PATH");
        std::optional<Shortcut> s;
        if (!c.shortcut.empty()) s = parse_shortcut(t, c.shortcut);
        render_to(c, t, s ? &*s : nullptr);
        j["svg"] = c.svg;
        j["shortcut"] = s ? shortcut_json(t, *s) : json(nullptr);
    }
    round_numbers(j);
    return j.dump(2);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal shortcut for the continuous diameter of a geometric tree", "treecut"};
    app.require_subcommand(1);
    Config c;

    auto input_opt = [&](CLI::App* sub) { sub->add_option("input", c.input, "tree JSON file, - for standard input"); };
    auto common = [&](CLI::App* sub) {
        sub->add_option("--output", c.output, "write JSON here instead of standard output");
        sub->add_option("--svg", c.svg, "also write an SVG picture to this path");
        sub->add_option("--tolerance-scale", c.tolerance_scale, "relative tolerance (default 1e-9)")
            ->check(CLI::PositiveNumber);
    };
    auto* analyze = app.add_subcommand("analyze", "diameter, center and backbone decomposition");
    auto* evaluate = app.add_subcommand("evaluate", "diameter of the tree with a given shortcut");
    auto* optimize_cmd = app.add_subcommand("optimize", "optimal shortcut");
    auto* oracle = app.add_subcommand("oracle", "grid-search reference optimum");
    auto* gen = app.add_subcommand("gen", "generate a tree");
    auto* render = app.add_subcommand("render", "draw a tree as SVG");
    for (auto* sub : {analyze, evaluate, optimize_cmd, oracle, render}) {
        input_opt(sub);
        common(sub);
    }
    common(gen);
    for (auto* sub : {evaluate, render})
        sub->add_option("--shortcut", c.shortcut, R"(shortcut as {"p":{"edge":[u,v],"lambda":f},"q":{...}})");
    optimize_cmd->add_flag("--trace", c.trace, "include the event trace");
    oracle->add_option("--resolution", c.resolution, "grid spacing h along edges")->check(CLI::PositiveNumber);
    oracle->add_flag("--restrict-backbone", c.restrict_backbone, "search pairs across the center on the backbone");
    gen->add_option("--seed", c.seed, "random seed");
    gen->add_option("--shape", c.shape, "uniform, caterpillar, balanced or stress")
        ->check(CLI::IsMember({"uniform", "caterpillar", "balanced", "stress"}));
    gen->add_option("--size", c.size, "vertex count, or l for the stress shape")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInput;
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        std::string text = dispatch(cmd, c, in) + "\n";
        if (c.output.empty())
            out << text;
        else
            write_file(c.output, text);
        return kExitOk;
    } catch (const InternalError& e) {
        err << "treecut: internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const InputError& e) {
        err << "treecut: " << e.what() << '\n';
        return kExitInput;
    } catch (const TreeError& e) {
        err << "treecut: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        err << "treecut: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "treecut: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace treecut
