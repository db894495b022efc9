#include <doctest.h>

#include "coxinv/transfer.hpp"
#include "test_helpers.hpp"

using namespace coxinv;
using coxinv::testing::TestRng;
using P = Poly<Rational>;
using J = Jet<Rational>;

namespace {
ChevalleyMap<Rational> make_map(const char* label) {
    return basic_invariants(GroupData<Rational>::build(GroupSpec::parse_label(label)));
}

// Random F-jet of given order in p-space at P(a).
J random_F_jet(const ChevalleyMap<Rational>& map, const std::vector<Rational>& a, int order, TestRng& rng) {
    J F;
    F.base = map.eval(a);
    F.order = order;
    for (const auto& beta : multi_indices_up_to(map.dim(), order)) F.set_coeff(beta, rng.rational(6, 3));
    return F;
}
}  // namespace

TEST_CASE("compose_jet: the quadratic chain rule example") {
    // P = x^2, F(p) = p^2 truncated to order 1 at p = 1: (a0, a1) = (1, 2);
    // composing at a = 1 gives the order-2 jet (1, 4, 4).
    auto map = make_map("A1");
    J F;
    F.base = {1};
    F.order = 1;
    F.set_coeff(MultiIndex({0}), 1);
    F.set_coeff(MultiIndex({1}), 2);
    J f = compose_jet(map, F, {1});
    CHECK(f.order == 2);
    CHECK(f.coeff(MultiIndex({0})) == Rational(1));
    CHECK(f.coeff(MultiIndex({1})) == Rational(4));
    CHECK(f.coeff(MultiIndex({2})) == Rational(4));
}

TEST_CASE("compose_jet: constants and polynomial exactness") {
    auto map = make_map("B2");
    std::vector<Rational> a{1, 2};
    J F;
    F.base = map.eval(a);
    F.order = 2;
    F.set_coeff(MultiIndex({0, 0}), 7);
    J f = compose_jet(map, F, a);
    CHECK(f.coeffs.size() == 1);
    CHECK(f.coeff(MultiIndex({0, 0})) == Rational(7));

    // F = p2 coordinate, order 1: the composed jet is the full Taylor jet of
    // the degree-4 polynomial p2.
    J Fp2;
    Fp2.base = map.eval(a);
    Fp2.order = 1;
    Fp2.set_coeff(MultiIndex({0, 0}), Fp2.base[1]);
    Fp2.set_coeff(MultiIndex({0, 1}), 1);
    J f2 = compose_jet(map, Fp2, a);
    J direct = J::taylor_of(map.polys[1], a, 4);
    CHECK(f2.order == 4);
    CHECK(f2.coeffs == direct.coeffs);

    // wrong base point
    J bad = Fp2;
    bad.base = {0, 0};
    CHECK_THROWS_AS(compose_jet(map, bad, a), BasePointMismatch);
}

TEST_CASE("epsilon_beta hand values for the sign flip") {
    // d^2(F∘x^2)/dx^2 = 2 F'(p) + 4x^2 F''(p)
    auto map = make_map("A1");
    std::vector<Rational> x{3};
    CHECK(epsilon_beta(map, MultiIndex({2}), MultiIndex({1}), x) == Rational(2));
    CHECK(epsilon_beta(map, MultiIndex({2}), MultiIndex({2}), x) == Rational(36));  // 4 x^2 at x=3
    // beta with weighted degree below |alpha| carries no term
    CHECK(epsilon_beta(map, MultiIndex({4}), MultiIndex({1}), x) == Rational(0));
}

TEST_CASE("epsilon weights: symbolic matches pointwise and is homogeneous") {
    auto map = make_map("B2");
    SymbolicEpsilon<Rational> sym(map);
    TestRng rng(3);
    for (const auto& alpha : multi_indices_up_to(2, 4)) {
        if (alpha.degree() == 0) continue;
        for (const auto& beta : multi_indices_up_to(2, 3)) {
            if (beta.degree() == 0) continue;
            P w = sym.weight(alpha, beta);
            // homogeneity: either zero or homogeneous of degree sum(k b) - |alpha|
            int expected = 2 * static_cast<int>(beta[0]) + 4 * static_cast<int>(beta[1]) - alpha.degree();
            int deg = 0;
            if (!w.is_zero()) {
                CHECK(w.is_homogeneous(&deg));
                CHECK(deg == expected);
            }
            // pointwise agreement
            for (int t = 0; t < 3; ++t) {
                auto x = rng.point(2, 4, 2);
                CHECK(epsilon_beta(map, alpha, beta, x) == w.evaluate(x));
            }
        }
    }
}

TEST_CASE("first-order recovery: quadratic example and round trips") {
    auto map = make_map("A1");
    J F;
    F.base = {1};
    F.order = 1;
    F.set_coeff(MultiIndex({0}), 1);
    F.set_coeff(MultiIndex({1}), 2);
    J f = compose_jet(map, F, {1});
    auto values = lemma_recover_first_order(map, f);
    REQUIRE(values.size() == 1);
    CHECK(values[0] == Rational(2));  // F'(1) = 2 for F(p) = p^2

    // constant jets recover zero derivatives
    J c;
    c.base = {1};
    c.order = 1;
    c.set_coeff(MultiIndex({0}), 5);
    auto zeros = lemma_recover_first_order(map, compose_jet(map, c, {1}));
    CHECK(zeros[0] == Rational(0));

    // random order-1 jets on B2 recover exactly
    auto b2 = make_map("B2");
    TestRng rng(5);
    for (int t = 0; t < 20; ++t) {
        std::vector<Rational> a = rng.point(2, 4, 2);
        J rf = random_F_jet(b2, a, 1, rng);
        J composed = compose_jet(b2, rf, a);
        auto got = lemma_recover_first_order(b2, composed);
        CHECK(got[0] == rf.coeff(MultiIndex({1, 0})));
        CHECK(got[1] == rf.coeff(MultiIndex({0, 1})));
    }

    // jets that are not composed first-order fields are rejected
    J garbage = compose_jet(map, F, {1});
    garbage.set_coeff(MultiIndex({1}), garbage.coeff(MultiIndex({1})) + 1);
    CHECK_THROWS_AS(lemma_recover_first_order(map, garbage), NotInImage);
}

TEST_CASE("first-order recovery on D3 uses the mixed pivot") {
    auto map = make_map("D3");
    TestRng rng(7);
    for (int t = 0; t < 10; ++t) {
        std::vector<Rational> a = rng.point(3, 3, 2);
        J rf = random_F_jet(map, a, 1, rng);
        J composed = compose_jet(map, rf, a);
        auto got = lemma_recover_first_order(map, composed);
        for (int i = 0; i < 3; ++i) CHECK(got[static_cast<size_t>(i)] == rf.coeff(MultiIndex::unit(3, i)));
    }
}

TEST_CASE("recover_jet round trips") {
    TestRng rng(11);
    for (const char* label : {"A1", "A2", "B2", "D3"}) {
        auto map = make_map(label);
        for (int r : {1, 2}) {
            for (int t = 0; t < 5; ++t) {
                std::vector<Rational> a = rng.point(map.dim(), 3, 2);
                J F = random_F_jet(map, a, r, rng);
                JetField<Rational> field;
                field.order = map.h() * r;
                field.jets.push_back(compose_jet(map, F, a));
                J back = recover_jet(map, field, r, a);
                CHECK_MESSAGE(back.coeffs == F.coeffs, label, " r=", r);
            }
        }
    }
}

TEST_CASE("recover_jet edge cases") {
    auto map = make_map("B2");
    TestRng rng(13);
    std::vector<Rational> a{1, 2};

    // r = 0: only the value survives
    J F0;
    F0.base = map.eval(a);
    F0.order = 0;
    F0.set_coeff(MultiIndex({0, 0}), 9);
    JetField<Rational> field0;
    field0.order = 0;
    field0.jets.push_back(compose_jet(map, F0, a));
    J back0 = recover_jet(map, field0, 0, a);
    CHECK(back0.coeff(MultiIndex({0, 0})) == Rational(9));

    // F linear in p: recovery after one level, quadratic coefficients zero
    J F1;
    F1.base = map.eval(a);
    F1.order = 2;
    F1.set_coeff(MultiIndex({0, 0}), 3);
    F1.set_coeff(MultiIndex({1, 0}), 2);
    F1.set_coeff(MultiIndex({0, 1}), -1);
    JetField<Rational> field1;
    field1.order = map.h() * 2;
    field1.jets.push_back(compose_jet(map, F1, a));
    J back1 = recover_jet(map, field1, 2, a);
    CHECK(back1.coeffs == F1.coeffs);
    CHECK(back1.coeff(MultiIndex({2, 0})) == Rational(0));

    // unknown base point
    CHECK_THROWS_AS(recover_jet(map, field1, 2, {7, 7}), PointNotInField);

    // corrupted field fails the consistency check
    JetField<Rational> corrupted = field1;
    auto it = corrupted.jets[0].coeffs.find(MultiIndex({4, 0}));
    REQUIRE(it != corrupted.jets[0].coeffs.end());
    it->second += 1;
    CHECK_THROWS_AS(recover_jet(map, corrupted, 2, a), NotInImage);
}

TEST_CASE("cramer first derivatives: hand examples") {
    auto map = make_map("B2");
    std::vector<Rational> x{1, 2};
    // f = p2 = x^4 + y^4: gradient (4, 32)
    auto v = cramer_first_derivatives(map, {4, 32}, x);
    CHECK(v == std::vector<Rational>{0, 1});
    // f = p1: gradient (2x, 2y) = (2, 4)
    auto v1 = cramer_first_derivatives(map, {2, 4}, x);
    CHECK(v1 == std::vector<Rational>{1, 0});
    // f = x^2 y^2: gradient (2xy^2, 2x^2 y) = (8, 4); F = (p1^2 - p2)/2 gives
    // dF/dp1 = p1 = 5, dF/dp2 = -1/2
    auto v2 = cramer_first_derivatives(map, {8, 4}, x);
    CHECK(v2 == std::vector<Rational>{5, Rational(-1, 2)});

    // singular at the critical set
    CHECK_THROWS_AS(cramer_first_derivatives(map, {1, 1}, {1, 1}), SingularJacobian);
}

TEST_CASE("cramer minors: identity, degrees, divisibility") {
    for (const char* label : {"B2", "A2", "D3"}) {
        auto map = make_map(label);
        auto sys = build_cramer_system(map);
        const int n = map.dim();
        auto jac = map.jacobian_polys();
        // cofactor identity: sum_i (-1)^{i+j} M_{i,j} dp_l/dx_i = delta_{jl} det
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                P acc(n);
                for (int i = 0; i < n; ++i) {
                    P term = sys.minors[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                             jac[static_cast<size_t>(l)][static_cast<size_t>(i)];
                    if ((i + j) % 2 == 1) term = -term;
                    acc += term;
                }
                if (j == l)
                    CHECK_MESSAGE(acc == sys.jacobian_det, label);
                else
                    CHECK_MESSAGE(acc.is_zero(), label);
            }
        // homogeneity: deg M_{i,j} = s_j = sum_{i != j} (k_i - 1)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int sj = 0;
                for (int l = 0; l < n; ++l)
                    if (l != j) sj += map.degrees[static_cast<size_t>(l)] - 1;
                const P& m = sys.minors[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!m.is_zero()) {
                    int deg = 0;
                    CHECK(m.is_homogeneous(&deg));
                    CHECK_MESSAGE(deg == sj, label);
                }
            }
        // divisibility by the forms of reflections fixing the i-th axis
        for (int i = 0; i < n; ++i) {
            for (int t = 0; t < map.group.reflection_count(); ++t) {
                if (map.group.normal(t)[static_cast<size_t>(i)] != 0) continue;  // hyperplane must contain e_i
                for (int j = 0; j < n; ++j) {
                    const P& m = sys.minors[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    if (m.is_zero()) continue;
                    auto [q, rem] = m.divide_linear(map.group.normal(t));
                    CHECK_MESSAGE(rem.is_zero(), label);
                }
            }
        }
    }
}

TEST_CASE("cramer agrees with the symbolic rewrite gradient") {
    TestRng rng(17);
    for (const char* label : {"A2", "B2", "D3"}) {
        auto map = make_map(label);
        InvariantRewriter<Rational> rw(map);
        auto sys = build_cramer_system(map);
        const int n = map.dim();
        for (int t = 0; t < 10; ++t) {
            // random invariant f = F ∘ P
            P F = rng.poly(n, 2, 3);
            P f = F.compose(map.polys);
            // random regular point
            std::vector<Rational> x;
            for (int tries = 0; tries < 50; ++tries) {
                x = rng.point(n, 5, 2);
                if (sys.jacobian_det.evaluate(x) != 0) break;
            }
            REQUIRE(sys.jacobian_det.evaluate(x) != 0);
            std::vector<Rational> grad;
            for (int i = 0; i < n; ++i) grad.push_back(f.derivative(i).evaluate(x));
            auto via_jac = cramer_first_derivatives(map, grad, x);
            auto via_minors = cramer_via_minors(sys, grad, x);
            CHECK(via_jac == via_minors);
            // symbolic route: gradient of rewrite(f) in p, evaluated at P(x)
            P Fr = rw.rewrite(f);
            auto px = map.eval(x);
            for (int j = 0; j < n; ++j) CHECK_MESSAGE(via_jac[static_cast<size_t>(j)] == Fr.derivative(j).evaluate(px), label);
        }
    }
}

TEST_CASE("continuity ledger for B2 at r=1") {
    auto map = make_map("B2");
    auto entries = continuity_ledger(map, 1);
    // entries enumerate |beta| <= 4
    CHECK(entries.size() == 15);
    int continuous = 0;
    for (const auto& e : entries) {
        bool pred = 2 * e.beta[0] + 4 * e.beta[1] <= 4;
        CHECK((e.verdict == ContinuityVerdict::kContinuousEverywhere) == pred);
        CHECK(e.weighted_order == static_cast<int>(2 * e.beta[0] + 4 * e.beta[1]));
        if (pred) ++continuous;
    }
    CHECK(continuous == 4);  // (0,0), (1,0), (2,0), (0,1)

    // stratum {y=0}: isotropy degrees (1,2); beta=(0,2) becomes continuous
    auto stratum = stratify(map.group, {3, 0});
    CHECK(stratum.isotropy_degrees == std::vector<int>{1, 2});
    auto with_stratum = continuity_ledger(map, 1, &stratum);
    int stratum_continuous = 0;
    for (const auto& e : with_stratum) {
        REQUIRE(e.stratum_weighted_order.has_value());
        CHECK(*e.stratum_weighted_order == static_cast<int>(1 * e.beta[0] + 2 * e.beta[1]));
        bool local = *e.stratum_weighted_order <= 4;
        bool global = e.weighted_order <= 4;
        if (global) CHECK(e.verdict == ContinuityVerdict::kContinuousEverywhere);
        if (!global && local) CHECK(e.verdict == ContinuityVerdict::kContinuousAtStratum);
        if (!local) CHECK(e.verdict == ContinuityVerdict::kLost);
        if (local) ++stratum_continuous;
        // the stratum predicate never loses derivatives the global one keeps
        if (global) CHECK(local);
    }
    auto b02 = std::find_if(with_stratum.begin(), with_stratum.end(),
                            [](const LedgerEntry& e) { return e.beta == MultiIndex({0, 2}); });
    REQUIRE(b02 != with_stratum.end());
    CHECK(b02->verdict == ContinuityVerdict::kContinuousAtStratum);
    CHECK(stratum_continuous > continuous);
}

TEST_CASE("weighted seminorm") {
    auto map = make_map("B2");
    const int r = 1, hr = 4;
    // samples off the critical set plus one on a stratum
    std::vector<std::vector<Rational>> K{{1, 2}, {2, 3}, {3, 0}};

    // F = p2 coordinate: all derivatives bounded; total is finite and the
    // whitney part matches the plain seminorms of the truncation
    JetField<Rational> field;
    field.order = hr;
    P Fp2 = P::variable(1, 2);
    for (const auto& x : K) field.jets.push_back(J::taylor_of(Fp2, map.eval(x), hr));
    auto rep = weighted_seminorm(map, field, r, K);
    CHECK(rep.total == doctest::Approx(rep.whitney_r + rep.weighted_sup));
    CHECK(rep.weighted_sup > 0);

    // F = 0
    JetField<Rational> zero;
    zero.order = hr;
    for (const auto& x : K) zero.jets.push_back(J::taylor_of(P(2), map.eval(x), hr));
    auto rep0 = weighted_seminorm(map, zero, r, K);
    CHECK(rep0.total == 0.0);

    // missing heavy derivatives at interior samples
    JetField<Rational> low;
    low.order = 2;
    for (const auto& x : K) low.jets.push_back(J::taylor_of(Fp2, map.eval(x), 2));
    CHECK_THROWS_AS(weighted_seminorm(map, low, r, K), MissingDerivative);
}
