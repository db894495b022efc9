#include <doctest.h>

#include <set>

#include "coxinv/groups.hpp"
#include "test_helpers.hpp"

using namespace coxinv;
using G = GroupData<Rational>;

TEST_CASE("B2 group data") {
    auto g = G::build(GroupSpec::parse_label("B2"));
    CHECK(g.dim() == 2);
    CHECK(g.degrees() == std::vector<int>{2, 4});
    CHECK(g.coxeter_number() == 4);
    CHECK(g.d() == 4);
    CHECK(g.reflection_count() == 4);
    CHECK(g.order() == 8);
    CHECK(g.order_by_closure() == 8);
    // reflection set {x=0, y=0, x=y, x=-y} as unnormalized forms
    std::set<std::vector<Rational>> forms;
    for (int i = 0; i < 4; ++i) forms.insert(g.normal(i));
    std::set<std::vector<Rational>> expect{{1, 0}, {0, 1}, {1, -1}, {1, 1}};
    CHECK(forms == expect);
}

TEST_CASE("A2 acts on R^3 with a fixed line") {
    auto g = G::build(GroupSpec::parse_label("A2"));
    CHECK(g.dim() == 3);
    CHECK(g.degrees() == std::vector<int>{1, 2, 3});
    CHECK(g.coxeter_number() == 3);
    CHECK(g.d() == 3);
    CHECK(g.order() == 6);
    CHECK(g.order_by_closure() == 6);
}

TEST_CASE("I2(m) data") {
    auto g = GroupData<double>::build(GroupSpec::parse_label("I2(3)"));
    CHECK(g.degrees() == std::vector<int>{2, 3});
    CHECK(g.coxeter_number() == 3);
    CHECK(g.d() == 3);
    CHECK(g.order() == 6);
    CHECK(g.order_by_closure() == 6);
    // the rational dihedral case
    auto g4 = G::build(GroupSpec::parse_label("I2(4)"));
    CHECK(g4.order_by_closure() == 8);
    CHECK_THROWS_AS(G::build(GroupSpec::parse_label("I2(5)")), ConfigError);
}

TEST_CASE("degree product equals closure order for small ranks") {
    for (const char* label : {"A1", "A2", "A3", "A4", "B2", "B3", "B4", "D3", "D4"}) {
        auto g = G::build(GroupSpec::parse_label(label));
        BigInt prod = 1;
        for (int k : g.degrees()) prod *= k;
        CHECK_MESSAGE(prod == g.order_by_closure(), label);
        CHECK_MESSAGE(g.order() == prod, label);
        int dsum = 0;
        for (int k : g.degrees()) dsum += k - 1;
        CHECK_MESSAGE(dsum == g.d(), label);
        CHECK_MESSAGE(g.reflection_count() == g.d(), label);
    }
    for (int m = 3; m <= 8; ++m) {
        auto g = GroupData<double>::build({{{FactorType::I2, m}}, 0});
        CHECK(g.order_by_closure() == 2 * m);
        CHECK(g.d() == m);
    }
}

TEST_CASE("D4 order via closure") {
    auto g = G::build(GroupSpec::parse_label("D4"));
    CHECK(g.order() == 192);
    CHECK(g.order_by_closure() == 192);
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(GroupSpec::parse_label("E8"), UnsupportedType);
    CHECK_THROWS_AS(GroupSpec::parse_label("D2"), RankOutOfRange);
    CHECK_THROWS_AS(GroupSpec::parse_label("B1"), RankOutOfRange);
    CHECK_THROWS_AS(GroupSpec::parse_label("A0"), RankOutOfRange);
    CHECK_THROWS_AS(GroupSpec::parse_label("I2(2)"), RankOutOfRange);
}

TEST_CASE("orbits") {
    auto g = G::build(GroupSpec::parse_label("B2"));
    auto orb = g.orbit({1, 2});
    CHECK(orb.size() == 8);
    // all signed permutations of (1, 2)
    std::set<std::vector<Rational>> os(orb.begin(), orb.end());
    CHECK(os.count({1, 2}) == 1);
    CHECK(os.count({-2, 1}) == 1);
    CHECK(os.count({-1, -2}) == 1);

    CHECK(g.orbit({0, 0}).size() == 1);
    CHECK(g.orbit({1, 1}).size() == 4);

    // orbit size divides the group order
    auto ga = G::build(GroupSpec::parse_label("A3"));
    coxinv::testing::TestRng rng(2);
    for (int t = 0; t < 5; ++t) {
        auto x = rng.point(4, 2, 2);
        auto o = ga.orbit(x);
        CHECK(ga.order() % BigInt(o.size()) == 0);
    }

    // applying any reflection permutes the orbit
    for (int i = 0; i < g.reflection_count(); ++i) {
        std::set<std::vector<Rational>> mapped;
        for (const auto& p : orb) mapped.insert(g.reflect(i, p));
        CHECK(std::set<std::vector<Rational>>(orb.begin(), orb.end()) == mapped);
    }
}

TEST_CASE("orbit cap") {
    auto g = G::build(GroupSpec::parse_label("B4"));
    coxinv::testing::TestRng rng(4);
    CHECK_THROWS_AS(g.orbit(rng.point(4, 9, 3), 10), OrbitCapExceeded);
}

TEST_CASE("apply_element") {
    auto g = G::build(GroupSpec::parse_label("B2"));
    // find the x=y swap (normal (1,-1))
    int swap_idx = -1;
    for (int i = 0; i < 4; ++i)
        if (g.normal(i) == std::vector<Rational>{1, -1}) swap_idx = i;
    REQUIRE(swap_idx >= 0);
    CHECK(g.apply_word({swap_idx}, {1, 2}) == std::vector<Rational>{2, 1});
    CHECK(g.apply_word({}, {1, 2}) == std::vector<Rational>{1, 2});
    CHECK(g.apply_word({swap_idx, swap_idx}, {1, 2}) == std::vector<Rational>{1, 2});
    CHECK_THROWS_AS(g.apply_word({9}, {1, 2}), IndexOutOfRange);
}

TEST_CASE("reflections are involutions fixing their hyperplanes") {
    for (const char* label : {"A2", "B3", "D3"}) {
        auto g = G::build(GroupSpec::parse_label(label));
        coxinv::testing::TestRng rng(17);
        for (int i = 0; i < g.reflection_count(); ++i) {
            auto x = rng.point(g.dim(), 5, 3);
            CHECK(g.reflect(i, g.reflect(i, x)) == x);
            // project x onto the hyperplane and check it is fixed
            const auto& nu = g.normal(i);
            Rational num = 0, den = 0;
            for (int j = 0; j < g.dim(); ++j) {
                num += nu[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
                den += nu[static_cast<size_t>(j)] * nu[static_cast<size_t>(j)];
            }
            auto proj = x;
            for (int j = 0; j < g.dim(); ++j) proj[static_cast<size_t>(j)] -= num / den * nu[static_cast<size_t>(j)];
            CHECK(g.reflect(i, proj) == proj);
        }
    }
    // float path: I2(5) reflections, 1e-12 tolerance
    auto g = GroupData<double>::build(GroupSpec::parse_label("I2(5)"));
    coxinv::testing::TestRng rng(19);
    for (int i = 0; i < g.reflection_count(); ++i) {
        std::vector<double> x{rng.range(-9, 9) / 4.0, rng.range(-9, 9) / 4.0};
        auto y = g.reflect(i, g.reflect(i, x));
        CHECK(std::abs(y[0] - x[0]) < 1e-12);
        CHECK(std::abs(y[1] - x[1]) < 1e-12);
    }
}

TEST_CASE("conjugation preserves the reflection set") {
    for (const char* label : {"B2", "A2", "D3"}) {
        auto g = G::build(GroupSpec::parse_label(label));
        for (int i = 0; i < g.reflection_count(); ++i)
            for (int j = 0; j < g.reflection_count(); ++j) {
                // conjugated normal r_i(nu_j) must be parallel to some normal
                auto nu = g.reflect(i, g.normal(j));
                bool found = false;
                for (int k = 0; k < g.reflection_count() && !found; ++k) {
                    const auto& cand = g.normal(k);
                    // parallel test: nu x cand == 0 componentwise
                    bool parallel = true;
                    for (int a = 0; a < g.dim() && parallel; ++a)
                        for (int b = a + 1; b < g.dim() && parallel; ++b)
                            parallel = (nu[static_cast<size_t>(a)] * cand[static_cast<size_t>(b)] ==
                                        nu[static_cast<size_t>(b)] * cand[static_cast<size_t>(a)]);
                    found = parallel;
                }
                CHECK(found);
            }
    }
}

TEST_CASE("reducible products and fixed blocks") {
    auto g = G::build(GroupSpec::parse_label("R2xB2xA1"));
    CHECK(g.dim() == 5);
    CHECK(g.degrees() == std::vector<int>{1, 1, 2, 4, 2});
    CHECK(g.coxeter_number() == 4);
    CHECK(g.d() == 5);
    CHECK(g.order() == 16);
    // fixed block coordinates never move
    auto y = g.apply_word({0, 1, 2}, {5, 7, 1, 2, 3});
    CHECK(y[0] == Rational(5));
    CHECK(y[1] == Rational(7));
}

TEST_CASE("group spec json label round trip") {
    for (const char* label : {"B2", "A3", "I2(6)", "R1xD4", "A2xA1"}) {
        auto spec = GroupSpec::parse_label(label);
        CHECK(spec.label() == label);
    }
}
