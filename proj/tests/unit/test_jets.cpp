#include <doctest.h>

#include <cmath>

#include "coxinv/jets.hpp"
#include "test_helpers.hpp"

using namespace coxinv;
using coxinv::testing::TestRng;
using P = Poly<Rational>;
using J = Jet<Rational>;

TEST_CASE("formal derivative") {
    // jet of x^4 at 0, order 4: only a_4 = 24
    J j = J::taylor_of(P::monomial(MultiIndex({4}), 1), {0}, 4);
    CHECK(j.coeff(MultiIndex({4})) == Rational(24));
    CHECK(j.coeff(MultiIndex({2})) == Rational(0));
    J d2 = j.formal_derivative(MultiIndex({2}));
    CHECK(d2.order == 2);
    CHECK(d2.coeff(MultiIndex({2})) == Rational(24));

    // q = 0 is the identity
    CHECK(j.formal_derivative(MultiIndex({0})).coeffs == j.coeffs);

    // constants give the zero jet
    J c;
    c.base = {0};
    c.order = 3;
    c.set_coeff(MultiIndex({0}), 5);
    J dc = c.formal_derivative(MultiIndex({1}));
    CHECK(dc.coeffs.empty());

    CHECK_THROWS_AS(c.formal_derivative(MultiIndex({4})), OrderExceeded);

    // composition of formal derivatives
    TestRng rng(2);
    for (int t = 0; t < 10; ++t) {
        J r = J::taylor_of(rng.poly(2, 6, 5), rng.point(2, 2, 2), 6);
        MultiIndex q1({1, 1}), q2({2, 0});
        CHECK(r.formal_derivative(q1).formal_derivative(q2).coeffs ==
              r.formal_derivative(q1 + q2).coeffs);
    }
}

TEST_CASE("whitney remainders vanish for exact polynomial fields") {
    TestRng rng(7);
    P p = rng.poly(2, 3, 5);
    JetField<Rational> field;
    field.order = 3;
    for (int i = 0; i < 5; ++i) field.jets.push_back(J::taylor_of(p, {Rational(i), Rational(i % 3)}, 3));
    for (const auto& q : multi_indices_up_to(2, 3))
        for (size_t a = 0; a < field.jets.size(); ++a)
            for (size_t b = 0; b < field.jets.size(); ++b) {
                if (a == b) continue;
                CHECK(whitney_remainder(field, q, field.jets[a].base, field.jets[b].base) == Rational(0));
            }
}

TEST_CASE("whitney remainder of truncated jets of x^2") {
    // order-1 jets of x^2 on {0, 1}: (R_0 A)(1) = 1
    P x2 = P::monomial(MultiIndex({2}), 1);
    JetField<Rational> field;
    field.order = 1;
    field.jets.push_back(J::taylor_of(x2, {0}, 1));
    field.jets.push_back(J::taylor_of(x2, {1}, 1));
    CHECK(whitney_remainder(field, MultiIndex({0}), {0}, {1}) == Rational(1));
    CHECK_THROWS_AS(whitney_remainder(field, MultiIndex({0}), {5}, {1}), PointNotInField);

    auto rep = seminorms(field, 1);
    // the q=0 quotient contributes 1; the q=1 first-derivative jump gives 2
    CHECK(rep.max_quotient == doctest::Approx(2.0));
    CHECK(!rep.quotients_all_zero);
    CHECK(rep.sup_norm == Rational(2));  // a_1(1) = 2
    CHECK(rep.whitney_norm == doctest::Approx(4.0));
    CHECK(rep.worst_q == MultiIndex({1}));
}

TEST_CASE("seminorms of constant and exact fields") {
    JetField<Rational> field;
    field.order = 2;
    for (int i = 0; i < 4; ++i) {
        J j;
        j.base = {Rational(i)};
        j.order = 2;
        j.set_coeff(MultiIndex({0}), 5);
        field.jets.push_back(j);
    }
    auto rep = seminorms(field, 2);
    CHECK(rep.sup_norm == Rational(5));
    CHECK(rep.max_quotient == 0.0);
    CHECK(rep.quotients_all_zero);
    CHECK(rep.whitney_norm == doctest::Approx(5.0));

    // exact Taylor field of a degree-r polynomial: whitney == sup
    TestRng rng(9);
    P p = rng.poly(1, 2, 3);
    JetField<Rational> exact;
    exact.order = 2;
    for (int i = 0; i < 5; ++i) exact.jets.push_back(J::taylor_of(p, {Rational(i, 2)}, 2));
    auto rep2 = seminorms(exact, 2);
    CHECK(rep2.quotients_all_zero);
    CHECK(rep2.whitney_norm == doctest::Approx(to_double(rep2.sup_norm)));
}

TEST_CASE("regularity probe slopes") {
    // exact order-1 jets of x^3 on a geometric grid: remainder scales like
    // |x - x'|^2, so the slope margin for q=0 is about +1.
    P x3 = P::monomial(MultiIndex({3}), 1);
    JetField<Rational> field;
    field.order = 1;
    for (int j = 0; j <= 11; ++j) {
        Rational x(1, 1);
        for (int t = 0; t < j; ++t) x /= 2;
        field.jets.push_back(J::taylor_of(x3, {x}, 1));
    }
    auto rep = r_regularity_probe(field, 1);
    for (const auto& e : rep.entries) {
        if (e.q.degree() == 0) {
            CHECK(!e.exact);
            CHECK(e.margin > 0.5);
        }
    }

    // |x|^{3/2} near 0: margin for q=0 is about 0.5
    JetField<double> g;
    g.order = 1;
    for (int j = 0; j <= 12; ++j) {
        double x = std::pow(2.0, -j);
        Jet<double> jet;
        jet.base = {x};
        jet.order = 1;
        jet.set_coeff(MultiIndex({0}), std::pow(x, 1.5));
        jet.set_coeff(MultiIndex({1}), 1.5 * std::sqrt(x));
        g.jets.push_back(jet);
    }
    auto repg = r_regularity_probe(g, 1);
    for (const auto& e : repg.entries)
        if (e.q.degree() == 0) CHECK(e.margin == doctest::Approx(0.5).epsilon(0.15));

    // polynomial of degree <= r: reported as exact
    JetField<Rational> h;
    h.order = 1;
    P lin(1);
    lin.add_term(MultiIndex({1}), 3);
    lin.add_term(MultiIndex({0}), 2);
    for (int j = 0; j <= 11; ++j) {
        Rational x(3, 1);
        for (int t = 0; t < j; ++t) x /= 2;
        h.jets.push_back(J::taylor_of(lin, {x}, 1));
    }
    auto reph = r_regularity_probe(h, 1);
    for (const auto& e : reph.entries) CHECK(e.exact);

    // too few scales
    JetField<Rational> tiny;
    tiny.order = 1;
    tiny.jets.push_back(J::taylor_of(x3, {0}, 1));
    tiny.jets.push_back(J::taylor_of(x3, {1}, 1));
    CHECK_THROWS_AS(r_regularity_probe(tiny, 1), InsufficientScales);
}

TEST_CASE("truncation remark: remainders differ by the discarded tail") {
    // For m > r the probe on A and on its truncation A^r differ by
    // sum_{|k| > r} a_k(x) (x'-x)^{k-q} / (k-q)!; exact on polynomial fields.
    TestRng rng(21);
    P p = rng.poly(2, 4, 6);
    JetField<Rational> field;
    field.order = 4;
    std::vector<std::vector<Rational>> pts{{0, 0}, {1, 0}, {Rational(1, 2), 1}, {2, Rational(3, 2)}};
    for (const auto& x : pts) field.jets.push_back(J::taylor_of(p, x, 4));
    JetField<Rational> trunc = field.truncated(2);
    const int r = 2;
    for (const auto& q : multi_indices_up_to(2, r))
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); ++b) {
                if (a == b) continue;
                Rational full = whitney_remainder(field, q, pts[a], pts[b]);
                Rational cut = whitney_remainder(trunc, q, pts[a], pts[b]);
                // tail from the jet at x (the x' term cancels since |q| <= r)
                Rational tail = 0;
                for (const auto& [k, ak] : field.jets[a].coeffs) {
                    if (k.degree() <= r || !k.dominates(q)) continue;
                    MultiIndex e = k - q;
                    Rational term = ak / e.factorial<Rational>();
                    for (int i = 0; i < 2; ++i) {
                        Rational diff = pts[b][static_cast<size_t>(i)] - pts[a][static_cast<size_t>(i)];
                        for (uint32_t rep = 0; rep < e[i]; ++rep) term *= diff;
                    }
                    tail += term;
                }
                CHECK(full - cut == -tail);
            }
}

TEST_CASE("field point lookup") {
    TestRng rng(33);
    JetField<Rational> field;
    field.order = 2;
    field.jets.push_back(J::taylor_of(rng.poly(2, 2, 3), {0, 0}, 2));
    field.jets.push_back(J::taylor_of(rng.poly(2, 2, 3), {1, 2}, 2));
    // round trip through the wire format lives in test_cli / json suite
    CHECK(field.find({1, 2}) == 1);
    CHECK(field.find({9, 9}) == -1);
}
