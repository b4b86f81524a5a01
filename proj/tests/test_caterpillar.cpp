#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "treecut/caterpillar.hpp"

using namespace treecut;

TEST_CASE("caterpillar view agrees with the full evaluator on backbone shortcuts") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int compared = 0;
    for (unsigned seed = 1; seed <= 120; ++seed) {
        auto t = fixtures::random_test_tree(seed + 4000, 3 + static_cast<int>(seed % 12));
        auto dec = backbone(t);
        if (dec.is_point) continue;
        CaterpillarView view(t, dec);
        auto mirror = view.mirrored();
        for (int k = 0; k < 15; ++k) {
            double s = u01(rng) * dec.length, r = u01(rng) * dec.length;
            if (s > r) std::swap(s, r);
            if (k == 0) s = r = dec.center_arc;
            auto full = augmented_diameter(t, dec, {backbone_point(t, dec, s), backbone_point(t, dec, r)});
            auto fam = view.evaluate(s, r);
            INFO("seed " << seed << " s " << s << " t " << r);
            CHECK(fam.diameter == doctest::Approx(full.diameter).epsilon(1e-11));
            auto fm = mirror.evaluate(dec.length - r, dec.length - s);
            CHECK(fm.diameter == doctest::Approx(full.diameter).epsilon(1e-11));
            CHECK(fm.xb == doctest::Approx(fam.by).epsilon(1e-11));
            ++compared;

            // the pair types found by both evaluators coincide
            std::set<PairType> types;
            for (auto& term : view.tight_terms(s, r)) types.insert(pair_type_of(term.subtype));
            for (PairType pt : {PairType::XY, PairType::XB, PairType::BY, PairType::BO})
                CHECK(types.count(pt) == full.pair_state.count(pt));
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("caterpillar families on the L") {
    auto t = fixtures::t_l();
    auto dec = backbone(t);
    CaterpillarView view(t, dec);
    const double ts = 2.0 / (4.0 - std::sqrt(2.0));
    auto f = view.evaluate(1.0 - ts, 1.0 + ts);
    CHECK(f.xy == doctest::Approx(1.5469182).epsilon(1e-7));
    CHECK(f.xb == doctest::Approx(f.xy).epsilon(1e-12));
    CHECK(f.by == doctest::Approx(f.xy).epsilon(1e-12));
    CHECK(view.chord(0.0, 2.0) == doctest::Approx(std::sqrt(2.0)));
}
