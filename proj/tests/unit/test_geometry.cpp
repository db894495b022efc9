#include <doctest.h>

#include "coxinv/geometry.hpp"
#include "test_helpers.hpp"

using namespace coxinv;
using coxinv::testing::TestRng;

namespace {
GroupData<Rational> make_group(const char* label) {
    return GroupData<Rational>::build(GroupSpec::parse_label(label));
}
}  // namespace

TEST_CASE("stratify B2") {
    auto g = make_group("B2");
    // (0,3): single active wall, A1 isotropy, h_S = 2
    auto s = stratify(g, {0, 3});
    CHECK(s.active.size() == 1);
    CHECK(s.isotropy_degrees == std::vector<int>{1, 2});
    CHECK(s.h_S == 2);
    CHECK(s.isotropy_order == 2);

    // regular point
    auto sr = stratify(g, {1, 2});
    CHECK(sr.active.empty());
    CHECK(sr.isotropy_degrees == std::vector<int>{1, 1});
    CHECK(sr.h_S == 1);

    // origin: everything active
    auto s0 = stratify(g, {0, 0});
    CHECK(s0.active.size() == 4);
    CHECK(s0.isotropy_degrees == std::vector<int>{2, 4});
    CHECK(s0.h_S == 4);
    CHECK(s0.isotropy_order == 8);

    // diagonal wall
    auto sd = stratify(g, {2, 2});
    CHECK(sd.active.size() == 1);
    CHECK(sd.h_S == 2);
}

TEST_CASE("stratify on float path with tolerance") {
    auto g = GroupData<double>::build(GroupSpec::parse_label("B2"));
    auto s = stratify(g, {1e-12, 3.0}, 1e-9);
    CHECK(s.active.size() == 1);
    CHECK(s.h_S == 2);
    // a tolerance that merges non-intersecting walls is rejected
    CHECK_THROWS_AS(stratify(g, {0.005, 0.005}, 0.006), AmbiguousStratum);
}

TEST_CASE("stratify classifies nested types") {
    auto g3 = make_group("B3");
    // (0, 0, 5): B2 x A1-free part
    auto s = stratify(g3, {0, 0, 5});
    CHECK(s.isotropy_degrees == std::vector<int>{1, 2, 4});
    CHECK(s.isotropy_order == 8);
    // (2, 2, 2): A2 from the equal coordinates
    auto s2 = stratify(g3, {2, 2, 2});
    CHECK(s2.isotropy_degrees == std::vector<int>{1, 2, 3});
    // (2, -2, 0): one zero and a signed pair
    auto s3 = stratify(g3, {2, -2, 0});
    CHECK(s3.isotropy_order == 4);

    auto d4 = make_group("D4");
    // two zeros in D4 give the D2 = A1 x A1 pattern
    auto sd = stratify(d4, {0, 0, 1, 2});
    CHECK(sd.isotropy_degrees == std::vector<int>{1, 1, 2, 2});
    // single zero in D activates nothing
    auto sd1 = stratify(d4, {0, 1, 2, 3});
    CHECK(sd1.active.empty());

    auto a2 = make_group("A2");
    auto sa = stratify(a2, {1, 1, 4});
    CHECK(sa.isotropy_degrees == std::vector<int>{1, 1, 2});

    // dihedral walls
    auto i5 = GroupData<double>::build(GroupSpec::parse_label("I2(5)"));
    auto si = stratify(i5, {2.0, 0.0}, 1e-9);
    CHECK(si.isotropy_degrees == std::vector<int>{1, 2});
    auto si0 = stratify(i5, {0.0, 0.0}, 1e-9);
    CHECK(si0.isotropy_degrees == std::vector<int>{2, 5});
}

TEST_CASE("isotropy degrees never exceed the global ones") {
    TestRng rng(3);
    for (const char* label : {"B3", "D4", "A3"}) {
        auto g = make_group(label);
        for (int t = 0; t < 20; ++t) {
            auto x = rng.point(g.dim(), 2, 1);  // coarse grid to hit many strata
            auto s = stratify(g, x);
            auto global = g.degrees();
            std::sort(global.begin(), global.end());
            REQUIRE(s.isotropy_degrees.size() == global.size());
            for (size_t i = 0; i < global.size(); ++i) {
                CHECK(s.isotropy_degrees[i] <= global[i]);
                CHECK(s.h_S <= g.coxeter_number());
            }
        }
    }
}

TEST_CASE("fundamental domain representatives") {
    auto b2 = make_group("B2");
    CHECK(fundamental_domain_rep(b2, {-2, 1}) == std::vector<Rational>{2, 1});
    CHECK(fundamental_domain_rep(b2, {3, 1}) == std::vector<Rational>{3, 1});  // already canonical

    auto d3 = make_group("D3");
    CHECK(fundamental_domain_rep(d3, {-1, -2, 3}) == std::vector<Rational>{3, 2, 1});
    // odd sign pattern keeps one negative entry (the smallest)
    CHECK(fundamental_domain_rep(d3, {1, -2, 3}) == std::vector<Rational>{3, 2, -1});
    // a zero absorbs the sign
    CHECK(fundamental_domain_rep(d3, {0, -2, 3}) == std::vector<Rational>{3, 2, 0});

    auto a2 = make_group("A2");
    CHECK(fundamental_domain_rep(a2, {1, 5, 3}) == std::vector<Rational>{5, 3, 1});
}

TEST_CASE("representative lies in the orbit with equal invariants") {
    TestRng rng(5);
    for (const char* label : {"A2", "B3", "D3", "I2(4)"}) {
        auto g = make_group(label);
        auto map = basic_invariants(g);
        for (int t = 0; t < 10; ++t) {
            auto x = rng.point(g.dim(), 4, 2);
            auto rep = fundamental_domain_rep(g, x);
            CHECK_MESSAGE(map.eval(rep) == map.eval(x), label);
            auto orbit = g.orbit(x);
            bool found = false;
            for (const auto& p : orbit) found = found || p == rep;
            CHECK_MESSAGE(found, label);
            // chamber inequalities at the generators
            for (int i : g.generators()) CHECK_MESSAGE(g.lambda(i, rep) >= 0, label);
            // matching isotropy orders
            CHECK(stratify(g, rep).isotropy_order == stratify(g, x).isotropy_order);
        }
    }
    // float path for a dihedral group
    auto g5 = GroupData<double>::build(GroupSpec::parse_label("I2(5)"));
    TestRng rng2(7);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> x{rng2.range(-8, 8) / 3.0, rng2.range(-8, 8) / 3.0};
        auto rep = fundamental_domain_rep(g5, x);
        for (int i : g5.generators()) CHECK(g5.lambda(i, rep) >= -1e-12);
        auto orbit = g5.orbit(x);
        bool found = false;
        for (const auto& p : orbit) found = found || points_equal(p, rep, 1e-9);
        CHECK(found);
    }
}

TEST_CASE("regularity probe: identity control and stability") {
    // identity map on R^2 via a pure fixed block: convex image, ratio ~ 1
    auto id2 = basic_invariants(GroupData<double>::build(GroupSpec{{}, 2}));
    RegularityProbeOptions opts;
    opts.samples = 600;
    opts.seed = 7;
    auto rep = regularity_probe(id2, opts);
    CHECK(rep.max_ratio >= 1.0 - 1e-9);
    CHECK(rep.max_ratio <= 1.05);

    // deterministic for a fixed seed
    auto rep2 = regularity_probe(id2, opts);
    CHECK(rep.max_ratio == rep2.max_ratio);

    // B2 image: finite ratio, modest under refinement
    auto b2 = basic_invariants(GroupData<double>::build(GroupSpec::parse_label("B2")));
    RegularityProbeOptions ob;
    ob.samples = 800;
    ob.seed = 11;
    ob.refine = true;
    auto repb = regularity_probe(b2, ob);
    CHECK(repb.max_ratio >= 1.0);
    CHECK(repb.max_ratio < 50.0);
    REQUIRE(repb.refinement.size() == 2);

    // disconnected graphs are reported
    RegularityProbeOptions od;
    od.samples = 400;
    od.seed = 3;
    od.k_neighbors = 1;
    CHECK_THROWS_AS(regularity_probe(b2, od), DisconnectedGraph);
}
