#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "json.hpp"
#include "treecut/cli.hpp"
#include "treecut/render_svg.hpp"
#include "treecut/sweep_engine.hpp"

using namespace treecut;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("treecut_test_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int count(const std::string& text, const std::string& needle) {
    int n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

const std::string kTL = dump_tree(fixtures::t_l());
const std::string kHook = dump_tree(fixtures::t_hook());

}  // namespace

TEST_CASE("optimize on T_L") {
    auto r = run({"optimize", "-"}, kTL);
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(std::abs(j["diameter_after"].get<double>() - 1.5469182) <= 1e-6);
    CHECK(j["useful"].get<bool>());
    CHECK_FALSE(j.contains("trace"));
    auto t = run({"optimize", "-", "--trace"}, kTL);
    CHECK(json::parse(t.out)["trace"].size() >= 2);
}

TEST_CASE("analyze on T_HOOK") {
    auto r = run({"analyze", "-"}, kHook);
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(j["backbone"]["is_point"].get<bool>());
    CHECK(j["delta"].get<double>() == doctest::Approx(4.0));
    CHECK(j["center"]["edge"][0] == 1);
    CHECK(j["center"]["edge"][1] == 1);
    CHECK_FALSE(j["useful_shortcut_exists"].get<bool>());
}

TEST_CASE("evaluate on T_HOOK with the useless shortcut") {
    auto r = run({"evaluate", "-", "--shortcut", R"({"p":{"edge":[0,1],"lambda":0},"q":{"edge":[1,2],"lambda":1}})"},
                 kHook);
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    CHECK(j["usefulness"] == "useless");
    CHECK(std::abs(j["diameter_after"].get<double>() - (8.0 + 2.0 * std::sqrt(2.0))) <= 1e-9);
    CHECK(j["diameter_before"].get<double>() == doctest::Approx(8.0));
}

TEST_CASE("numbers carry at most 12 significant digits") {
    auto r = run({"optimize", "-", "--trace"}, kTL);
    std::regex number(R"((-?)(\d+)\.(\d+)(e[-+]?\d+)?)");
    int seen = 0;
    for (std::sregex_iterator it(r.out.begin(), r.out.end(), number), end; it != end; ++it) {
        std::string digits = (*it)[2].str() + (*it)[3].str();
        digits.erase(0, digits.find_first_not_of('0'));
        CHECK(digits.size() <= 12);
        ++seen;
    }
    CHECK(seen > 5);
}

TEST_CASE("gen output round-trips and is deterministic") {
    for (std::string shape : {"uniform", "caterpillar", "balanced", "stress"}) {
        CAPTURE(shape);
        auto a = run({"gen", "--shape", shape, "--seed", "7", "--size", "9"});
        auto b = run({"gen", "--shape", shape, "--seed", "7", "--size", "9"});
        REQUIRE(a.code == kExitOk);
        CHECK(a.out == b.out);
        std::string doc = a.out.substr(0, a.out.size() - 1);
        CHECK(dump_tree(load_tree(doc)) == doc);
    }
}

TEST_CASE("input errors exit with 2") {
    CHECK(run({}).code == kExitInput);
    CHECK(run({"optimize", temp_path("does_not_exist.json")}).code == kExitInput);
    CHECK(run({"analyze", "-"}, "{\"vertices\": [").code == kExitInput);
    CHECK(run({"analyze", "-"}, R"({"vertices":[{"id":0,"x":0,"y":0},{"id":0,"x":1,"y":0}],"edges":[]})").code ==
          kExitInput);
    CHECK(run({"oracle", "-", "--resolution", "-1"}, kTL).code == kExitInput);
    CHECK(run({"oracle", "-", "--resolution", "0"}, kTL).code == kExitInput);
    CHECK(run({"evaluate", "-"}, kTL).code == kExitInput);
    CHECK(run({"render", "-"}, kTL).code == kExitInput);
    CHECK(run({"gen", "--shape", "spiral"}).code == kExitInput);
    auto r = run({"analyze", "-"}, "not json");
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
}

TEST_CASE("--output writes the document to a file") {
    const std::string path = temp_path("out.json");
    auto r = run({"analyze", "-", "--output", path}, kTL);
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    CHECK(json::parse(slurp(path))["diameter"].get<double>() == doctest::Approx(2.0));
    std::filesystem::remove(path);
}

TEST_CASE("optimize and the restricted oracle agree within 4h") {
    for (unsigned seed = 1; seed <= 6; ++seed) {
        CAPTURE(seed);
        auto g = run({"gen", "--seed", std::to_string(seed), "--size", "10"});
        auto o = json::parse(run({"optimize", "-"}, g.out).out);
        auto q = json::parse(run({"oracle", "-", "--restrict-backbone"}, g.out).out);
        const double h = q["h"].get<double>();
        CHECK(o["diameter_after"].get<double>() <= q["diameter"].get<double>() + 4 * h);
        CHECK(q["diameter"].get<double>() <= o["diameter_after"].get<double>() + 4 * h);
    }
}

TEST_CASE("render_svg element counts") {
    auto t = fixtures::t_l();
    std::string plain = render_svg(t);
    CHECK(count(plain, "<line class=\"edge\"") == 2);
    CHECK(count(plain, "class=\"backbone\"") == 1);
    CHECK(count(plain, "stroke-dasharray") == 0);

    auto r = optimize(t);
    auto dec = backbone(t);
    auto diag = augmented_diameter(t, dec, r.shortcut);
    std::string full = render_svg(t, &r.shortcut, &diag);
    CHECK(count(full, "stroke-dasharray") == 1);
    CHECK(count(full, "<circle class=\"pair-end\"") >= 2);
}

TEST_CASE("render_svg is deterministic and ignores an empty diagnosis") {
    auto t = fixtures::t_forkbent();
    auto r = optimize(t);
    AugmentedDiagnosis empty;
    CHECK(render_svg(t, &r.shortcut, &empty) == render_svg(t, &r.shortcut));
    auto diag = augmented_diameter(t, backbone(t), r.shortcut);
    CHECK(render_svg(t, &r.shortcut, &diag) == render_svg(t, &r.shortcut, &diag));
}

TEST_CASE("render subcommand writes the same SVG twice") {
    const std::string a = temp_path("a.svg"), b = temp_path("b.svg");
    REQUIRE(run({"render", "-", "--svg", a}, kTL).code == kExitOk);
    REQUIRE(run({"render", "-", "--svg", b}, kTL).code == kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("<?xml", 0) == 0);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
