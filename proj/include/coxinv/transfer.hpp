#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "coxinv/chevalley.hpp"
#include "coxinv/errors.hpp"
#include "coxinv/geometry.hpp"
#include "coxinv/jets.hpp"
#include "coxinv/linalg.hpp"

namespace coxinv {

// Q_j(u) = p_j(a + u) - p_j(a), the ingredients of every composition here.
template <class T>
std::vector<Poly<T>> shifted_invariants(const ChevalleyMap<T>& map, const std::vector<T>& a) {
    const int n = map.dim();
    if (static_cast<int>(a.size()) != n) throw DimensionMismatch("shifted_invariants: point dimension mismatch");
    std::vector<Poly<T>> subs;
    subs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Poly<T> s = Poly<T>::variable(i, n);
        s.add_term(MultiIndex::zero(n), a[static_cast<size_t>(i)]);
        subs.push_back(std::move(s));
    }
    std::vector<Poly<T>> out;
    out.reserve(map.polys.size());
    for (const auto& p : map.polys) {
        Poly<T> q = p.compose(subs);
        T c0 = q.constant_term();
        if (!ScalarTraits<T>::is_zero(c0)) q.add_term(MultiIndex::zero(n), -c0);
        out.push_back(std::move(q));
    }
    return out;
}

// Truncated power products of the shifted invariants at one base point.
// marker(beta) = (1/beta!) prod_j Q_j^{beta_j}; the composed jet of an
// F-jet is sum a_beta * marker(beta), and epsilon weights are its
// coefficients.
template <class T>
class JetComposer {
  public:
    JetComposer(const ChevalleyMap<T>& map, std::vector<T> base, int trunc)
        : map_(map), base_(std::move(base)), trunc_(trunc), shifted_(shifted_invariants(map, base_)) {
        pow_cache_.resize(shifted_.size());
        for (size_t i = 0; i < shifted_.size(); ++i)
            pow_cache_[i].push_back(Poly<T>::constant(T(1), map.dim()));
    }

    const std::vector<T>& base() const { return base_; }
    int truncation() const { return trunc_; }

    const Poly<T>& marker(const MultiIndex& beta) {
        auto it = markers_.find(beta);
        if (it != markers_.end()) return it->second;
        Poly<T> m = Poly<T>::constant(T(1) / beta.template factorial<T>(), map_.dim());
        for (int j = 0; j < static_cast<int>(shifted_.size()) && !m.is_zero(); ++j) {
            if (beta[j] == 0) continue;
            m = m.mul_truncated(power(j, beta[j]), trunc_);
        }
        return markers_.emplace(beta, std::move(m)).first->second;
    }

    // epsilon_beta at this base point, for the derivative order alpha.
    T epsilon(const MultiIndex& alpha, const MultiIndex& beta) {
        if (alpha.degree() > trunc_) throw OrderExceeded("epsilon: alpha beyond composer truncation");
        if (beta.degree() > alpha.degree()) return T(0);
        return alpha.template factorial<T>() * marker(beta).coeff(alpha);
    }

  private:
    const Poly<T>& power(int j, uint32_t e) {
        auto& pc = pow_cache_[static_cast<size_t>(j)];
        while (pc.size() <= e) pc.push_back(pc.back().mul_truncated(shifted_[static_cast<size_t>(j)], trunc_));
        return pc[e];
    }

    const ChevalleyMap<T>& map_;
    std::vector<T> base_;
    int trunc_;
    std::vector<Poly<T>> shifted_;
    std::vector<std::vector<Poly<T>>> pow_cache_;
    std::map<MultiIndex, Poly<T>> markers_;
};

namespace detail {
template <class T>
void check_base_point(const ChevalleyMap<T>& map, const Jet<T>& F_jet, const std::vector<T>& a) {
    if (F_jet.dim() != map.dim()) throw DimensionMismatch("jet lives in the wrong space");
    auto img = map.eval(a);
    if constexpr (is_exact_v<T>) {
        if (img != F_jet.base) throw BasePointMismatch("jet base must equal P(a)");
    } else {
        double scale = 1.0;
        for (const auto& v : img) scale = std::max(scale, std::abs(to_double(v)));
        for (size_t i = 0; i < img.size(); ++i)
            if (std::abs(to_double(img[i]) - to_double(F_jet.base[i])) > 1e-9 * scale)
                throw BasePointMismatch("jet base must equal P(a)");
    }
}
}  // namespace detail

// The order-hr jet at a of (polynomial of F_jet) composed with P. Exact
// polynomial substitution; for polynomial F of degree <= r this is the full
// Taylor jet of F∘P.
template <class T>
Jet<T> compose_jet(const ChevalleyMap<T>& map, const Jet<T>& F_jet, const std::vector<T>& a) {
    detail::check_base_point(map, F_jet, a);
    const int hr = map.h() * F_jet.order;
    JetComposer<T> comp(map, a, hr);
    Poly<T> acc(map.dim());
    for (const auto& [beta, c] : F_jet.coeffs) acc += comp.marker(beta).scaled(c);
    return Jet<T>::from_offset_poly(acc, a, hr);
}

// Faà di Bruno weight of the derivative d^beta F inside d^alpha (F∘P),
// evaluated at x.
template <class T>
T epsilon_beta(const ChevalleyMap<T>& map, const MultiIndex& alpha, const MultiIndex& beta,
               const std::vector<T>& x) {
    if (alpha.size() != map.dim() || beta.size() != map.dim())
        throw DimensionMismatch("epsilon_beta: index dimension mismatch");
    int weighted = 0;
    for (int j = 0; j < map.dim(); ++j) weighted += static_cast<int>(beta[j]) * map.degrees[static_cast<size_t>(j)];
    if (weighted < alpha.degree() || beta.degree() > alpha.degree()) return T(0);
    JetComposer<T> comp(map, x, alpha.degree());
    return comp.epsilon(alpha, beta);
}

// Symbolic epsilon weights: polynomials in the base point. Internally works
// in 2n variables (offset u, base y) and extracts the u^alpha coefficient.
template <class T>
class SymbolicEpsilon {
  public:
    explicit SymbolicEpsilon(const ChevalleyMap<T>& map) : map_(map), n_(map.dim()) {
        std::vector<Poly<T>> subs;
        subs.reserve(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            Poly<T> s = Poly<T>::variable(i, 2 * n_);
            s += Poly<T>::variable(n_ + i, 2 * n_);
            subs.push_back(std::move(s));
        }
        for (const auto& p : map_.polys) {
            Poly<T> shifted = p.compose(subs);  // p(y + u)
            Poly<T> lifted(2 * n_);             // p(y)
            for (const auto& [k, c] : p.terms()) {
                MultiIndex kk(2 * n_);
                for (int i = 0; i < n_; ++i) kk[n_ + i] = k[i];
                lifted.add_term(kk, c);
            }
            shifted_.push_back(shifted - lifted);
        }
        pow_cache_.resize(shifted_.size());
        for (size_t i = 0; i < shifted_.size(); ++i)
            pow_cache_[i].push_back(Poly<T>::constant(T(1), 2 * n_));
    }

    // Weight as a polynomial in the base point; homogeneous of degree
    // sum(k_j beta_j) - |alpha| whenever nonzero.
    Poly<T> weight(const MultiIndex& alpha, const MultiIndex& beta) {
        if (alpha.size() != n_ || beta.size() != n_) throw DimensionMismatch("epsilon weight: index dimension");
        const Poly<T>& prod = product(beta);
        Poly<T> out(n_);
        for (const auto& [k, c] : prod.terms()) {
            bool match = true;
            for (int i = 0; i < n_ && match; ++i) match = (k[i] == alpha[i]);
            if (!match) continue;
            MultiIndex kk(n_);
            for (int i = 0; i < n_; ++i) kk[i] = k[n_ + i];
            out.add_term(kk, c);
        }
        return out.scaled(alpha.template factorial<T>() / beta.template factorial<T>());
    }

  private:
    const Poly<T>& product(const MultiIndex& beta) {
        auto it = products_.find(beta);
        if (it != products_.end()) return it->second;
        Poly<T> prod = Poly<T>::constant(T(1), 2 * n_);
        for (int j = 0; j < n_; ++j) {
            if (beta[j] == 0) continue;
            prod *= power(j, beta[j]);
        }
        return products_.emplace(beta, std::move(prod)).first->second;
    }
    const Poly<T>& power(int j, uint32_t e) {
        auto& pc = pow_cache_[static_cast<size_t>(j)];
        while (pc.size() <= e) pc.push_back(pc.back() * shifted_[static_cast<size_t>(j)]);
        return pc[e];
    }

    const ChevalleyMap<T>& map_;
    int n_;
    std::vector<Poly<T>> shifted_;
    std::vector<std::vector<Poly<T>>> pow_cache_;
    std::map<MultiIndex, Poly<T>> products_;
};

// First-order identification: from the order-h jet of f = F∘P at a (with F
// an order-1 field), recover the values dF/dp_i at P(a) by the triangular
// pivot system, solved by decreasing index.
template <class T>
std::vector<T> lemma_recover_first_order(const ChevalleyMap<T>& map, const Jet<T>& f_jet, double tol = 1e-9) {
    const int n = map.dim();
    if (f_jet.dim() != n) throw DimensionMismatch("first-order recovery: dimension mismatch");
    if (f_jet.order < map.h()) throw OrderExceeded("first-order recovery needs a jet of order h");
    const auto& a = f_jet.base;
    std::vector<T> values(static_cast<size_t>(n), T(0));
    for (int i = n - 1; i >= 0; --i) {
        if (ScalarTraits<T>::is_zero(map.pivot_values[static_cast<size_t>(i)]))
            throw SingularSystem("basic invariant without a pivot monomial");
        T rhs = f_jet.coeff(map.pivots[static_cast<size_t>(i)]);
        for (int s = i + 1; s < n; ++s) {
            Poly<T> ds = map.polys[static_cast<size_t>(s)].derivative(map.pivots[static_cast<size_t>(i)]);
            if (ds.is_zero()) continue;
            rhs -= values[static_cast<size_t>(s)] * ds.evaluate(a);
        }
        values[static_cast<size_t>(i)] = rhs / map.pivot_values[static_cast<size_t>(i)];
    }
    // Round trip: the order-1 F-jet built from the values must recompose to
    // the input jet.
    Jet<T> F1;
    F1.base = map.eval(a);
    F1.order = 1;
    F1.set_coeff(MultiIndex::zero(n), f_jet.coeff(MultiIndex::zero(n)));
    for (int i = 0; i < n; ++i) F1.set_coeff(MultiIndex::unit(n, i), values[static_cast<size_t>(i)]);
    Jet<T> composed = compose_jet(map, F1, a);
    double scale = 1.0;
    for (const auto& [k, c] : f_jet.coeffs) scale = std::max(scale, std::abs(to_double(c)));
    for (const auto& alpha : multi_indices_up_to(n, map.h())) {
        T diff = composed.coeff(alpha) - f_jet.coeff(alpha);
        if constexpr (is_exact_v<T>) {
            if (diff != 0) throw NotInImage("jet is not a composed first-order field");
        } else {
            if (std::abs(to_double(diff)) > tol * scale) throw NotInImage("jet is not a composed first-order field");
        }
    }
    return values;
}

// Recovers the order-r jet of F at P(a) from a composed field of order h*r.
// The identification matrix (epsilon weights at a) generalizes the
// first-order triangular system; its full column rank is the content of the
// recovery lemma, and rank problems or inconsistent data surface as errors.
template <class T>
Jet<T> recover_jet(const ChevalleyMap<T>& map, const JetField<T>& field, int r, const std::vector<T>& a,
                   double tol = 1e-9) {
    const int n = map.dim();
    if (r < 0) throw ConfigError("recover_jet: r must be >= 0");
    const int hr = map.h() * r;
    if (field.order < hr) throw OrderExceeded("recover_jet: field order below h*r");
    int idx = field.find(a, is_exact_v<T> ? 0.0 : 1e-12);
    if (idx < 0) throw PointNotInField("recover_jet: base point not in field");
    const Jet<T>& f_jet = field.jets[static_cast<size_t>(idx)];

    Jet<T> F;
    F.base = map.eval(a);
    F.order = r;
    F.set_coeff(MultiIndex::zero(n), f_jet.coeff(MultiIndex::zero(n)));
    if (r == 0) return F;
    if (r == 1) {
        auto values = lemma_recover_first_order(map, f_jet.truncated(map.h()), tol);
        for (int i = 0; i < n; ++i) F.set_coeff(MultiIndex::unit(n, i), values[static_cast<size_t>(i)]);
        return F;
    }

    JetComposer<T> comp(map, a, hr);
    std::vector<MultiIndex> gammas;
    for (const auto& g : multi_indices_up_to(n, r))
        if (g.degree() >= 1) gammas.push_back(g);
    std::vector<MultiIndex> alphas;
    for (const auto& al : multi_indices_up_to(n, hr))
        if (al.degree() >= 1) alphas.push_back(al);
    Matrix<T> E(static_cast<int>(alphas.size()), static_cast<int>(gammas.size()));
    std::vector<T> rhs(alphas.size());
    for (size_t ig = 0; ig < gammas.size(); ++ig) {
        const Poly<T>& m = comp.marker(gammas[ig]);
        for (size_t ia = 0; ia < alphas.size(); ++ia)
            E.at(static_cast<int>(ia), static_cast<int>(ig)) =
                alphas[ia].template factorial<T>() * m.coeff(alphas[ia]);
    }
    for (size_t ia = 0; ia < alphas.size(); ++ia) rhs[ia] = f_jet.coeff(alphas[ia]);
    auto sol = solve_overdetermined(E, rhs, tol);
    if (sol.status == LsqStatus::kRankDeficient)
        throw SingularSystem("identification system is rank-deficient");
    if (sol.status == LsqStatus::kInconsistent)
        throw NotInImage("field is not a composed jet field at the base point");
    for (size_t ig = 0; ig < gammas.size(); ++ig) F.set_coeff(gammas[ig], sol.x[ig]);

    // Round trip at a.
    Jet<T> composed = compose_jet(map, F, a);
    double scale = 1.0;
    for (const auto& [k, c] : f_jet.coeffs) scale = std::max(scale, std::abs(to_double(c)));
    for (const auto& alpha : multi_indices_up_to(n, hr)) {
        T diff = composed.coeff(alpha) - f_jet.coeff(alpha);
        if constexpr (is_exact_v<T>) {
            if (diff != 0) throw NotInImage("recovered jet fails the round trip");
        } else {
            if (std::abs(to_double(diff)) > tol * scale) throw NotInImage("recovered jet fails the round trip");
        }
    }
    return F;
}

// Cramer data for the first derivatives: M_{i,j} is the minor of the
// Jacobian with the row of p_j and the column of x_i removed, so that
// det(J) * dF/dp_j ∘ P = sum_i (-1)^{i+j} M_{i,j} df/dx_i.
template <class T>
struct CramerSystem {
    std::vector<std::vector<Poly<T>>> minors;  // [i][j]
    Poly<T> jacobian_det;
};

template <class T>
CramerSystem<T> build_cramer_system(const ChevalleyMap<T>& map) {
    const int n = map.dim();
    auto jac = map.jacobian_polys();
    CramerSystem<T> sys;
    sys.jacobian_det = determinant_poly(jac);
    sys.minors.assign(static_cast<size_t>(n), std::vector<Poly<T>>(static_cast<size_t>(n), Poly<T>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (n == 1) {
                sys.minors[static_cast<size_t>(i)][static_cast<size_t>(j)] = Poly<T>::constant(T(1), n);
                continue;
            }
            std::vector<std::vector<Poly<T>>> sub;
            sub.reserve(static_cast<size_t>(n) - 1);
            for (int l = 0; l < n; ++l) {
                if (l == j) continue;
                std::vector<Poly<T>> row;
                row.reserve(static_cast<size_t>(n) - 1);
                for (int m = 0; m < n; ++m)
                    if (m != i) row.push_back(jac[static_cast<size_t>(l)][static_cast<size_t>(m)]);
                sub.push_back(std::move(row));
            }
            sys.minors[static_cast<size_t>(i)][static_cast<size_t>(j)] = determinant_poly(sub);
        }
    return sys;
}

// Solves J_P^T v = grad_f at a regular point; v_j = dF/dp_j at P(x).
template <class T>
std::vector<T> cramer_first_derivatives(const ChevalleyMap<T>& map, const std::vector<T>& grad_f,
                                        const std::vector<T>& x) {
    const int n = map.dim();
    if (static_cast<int>(grad_f.size()) != n) throw DimensionMismatch("cramer: gradient dimension mismatch");
    Matrix<T> j = map.jacobian_at(x);
    Matrix<T> jt(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) jt.at(r, c) = j.at(c, r);
    auto sol = solve_square(jt, grad_f);
    if (!sol) throw SingularJacobian("Jacobian is singular at this point; recovery must go through jets");
    return *sol;
}

// Same values through the explicit minor formula (the dual route used by
// the tests).
template <class T>
std::vector<T> cramer_via_minors(const CramerSystem<T>& sys, const std::vector<T>& grad_f,
                                 const std::vector<T>& x) {
    const int n = static_cast<int>(sys.minors.size());
    T det = sys.jacobian_det.evaluate(x);
    if (ScalarTraits<T>::is_zero(det)) throw SingularJacobian("Jacobian determinant vanishes at this point");
    std::vector<T> v(static_cast<size_t>(n), T(0));
    for (int jj = 0; jj < n; ++jj) {
        T acc(0);
        for (int i = 0; i < n; ++i) {
            T m = sys.minors[static_cast<size_t>(i)][static_cast<size_t>(jj)].evaluate(x);
            if ((i + jj) % 2 == 1) m = -m;
            acc += m * grad_f[static_cast<size_t>(i)];
        }
        v[static_cast<size_t>(jj)] = acc / det;
    }
    return v;
}

enum class ContinuityVerdict { kContinuousEverywhere, kContinuousAtStratum, kLost };

inline const char* verdict_name(ContinuityVerdict v) {
    switch (v) {
        case ContinuityVerdict::kContinuousEverywhere: return "continuous-on-P(R^n)";
        case ContinuityVerdict::kContinuousAtStratum: return "continuous-at-stratum-only";
        case ContinuityVerdict::kLost: return "lost";
    }
    return "?";
}

struct LedgerEntry {
    MultiIndex beta;
    int weighted_order = 0;
    int threshold = 0;
    ContinuityVerdict verdict = ContinuityVerdict::kLost;
    std::optional<int> stratum_weighted_order;
};

// Enumerates all derivative orders beta with |beta| <= hr and records which
// survive on the image: globally when sum(beta_i k_i) <= hr, near a stratum
// when the same sum against the isotropy degrees stays below hr.
template <class T>
std::vector<LedgerEntry> continuity_ledger(const ChevalleyMap<T>& map, int r,
                                           const StratumInfo<T>* stratum = nullptr) {
    if (r < 0) throw ConfigError("ledger: r must be >= 0");
    const int n = map.dim();
    const int hr = map.h() * r;
    // Stable degree ordering to pair sorted isotropy degrees with the
    // matching global ones.
    std::vector<int> sigma(static_cast<size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::stable_sort(sigma.begin(), sigma.end(),
                     [&](int a, int b) { return map.degrees[static_cast<size_t>(a)] < map.degrees[static_cast<size_t>(b)]; });
    std::vector<LedgerEntry> out;
    for (const auto& beta : multi_indices_up_to(n, hr)) {
        LedgerEntry e;
        e.beta = beta;
        e.threshold = hr;
        for (int i = 0; i < n; ++i) e.weighted_order += static_cast<int>(beta[i]) * map.degrees[static_cast<size_t>(i)];
        if (stratum) {
            int sw = 0;
            for (int t = 0; t < n; ++t)
                sw += static_cast<int>(beta[sigma[static_cast<size_t>(t)]]) *
                      stratum->isotropy_degrees[static_cast<size_t>(t)];
            e.stratum_weighted_order = sw;
        }
        if (e.weighted_order <= hr)
            e.verdict = ContinuityVerdict::kContinuousEverywhere;
        else if (stratum && *e.stratum_weighted_order <= hr)
            e.verdict = ContinuityVerdict::kContinuousAtStratum;
        else
            e.verdict = ContinuityVerdict::kLost;
        out.push_back(std::move(e));
    }
    return out;
}

struct WeightedSeminormReport {
    double whitney_r = 0.0;    // ||F||^r over the image samples
    double weighted_sup = 0.0; // max |eps_beta * d^beta F ∘ P|
    double total = 0.0;
    MultiIndex worst_beta;
    int worst_sample = -1;
};

// The stratified seminorm: derivatives with weighted order <= hr enter with
// weight 1 everywhere; heavier ones only at chamber-interior samples,
// damped by the slowest-vanishing epsilon weight of order |alpha| = hr.
template <class T>
WeightedSeminormReport weighted_seminorm(const ChevalleyMap<T>& map, const JetField<T>& F_field, int r,
                                         const std::vector<std::vector<T>>& domain_samples) {
    const int n = map.dim();
    const int hr = map.h() * r;
    if (F_field.jets.size() != domain_samples.size())
        throw DimensionMismatch("weighted_seminorm: field and domain sample counts differ");
    if (F_field.order < r) throw OrderExceeded("weighted_seminorm: field order below r");
    WeightedSeminormReport rep;
    rep.worst_beta = MultiIndex::zero(n);

    std::vector<bool> interior(domain_samples.size(), false);
    bool any_interior = false;
    for (size_t i = 0; i < domain_samples.size(); ++i) {
        const auto& x = domain_samples[i];
        auto img = map.eval(x);
        if (!points_equal(img, F_field.jets[i].base, is_exact_v<T> ? 0.0 : 1e-9))
            throw BasePointMismatch("field jet is not based at P(sample)");
        double nx = 0;
        for (const auto& v : x) nx = std::max(nx, std::abs(to_double(v)));
        auto s = stratify(map.group, x, is_exact_v<T> ? 0.0 : 1e-9 * (1.0 + nx));
        interior[i] = s.active.empty();
        any_interior = any_interior || interior[i];
    }

    int light_order_needed = 0;
    std::vector<MultiIndex> betas = multi_indices_up_to(n, hr);
    std::vector<int> weighted(betas.size(), 0);
    for (size_t b = 0; b < betas.size(); ++b) {
        for (int i = 0; i < n; ++i)
            weighted[b] += static_cast<int>(betas[b][i]) * map.degrees[static_cast<size_t>(i)];
        if (weighted[b] <= hr) light_order_needed = std::max(light_order_needed, betas[b].degree());
    }
    if (F_field.order < light_order_needed)
        throw MissingDerivative("field order too low for the derivatives that must exist everywhere");
    if (any_interior && F_field.order < hr)
        throw MissingDerivative("interior samples require all derivatives up to order hr");

    std::vector<std::unique_ptr<JetComposer<T>>> composers(domain_samples.size());
    std::vector<MultiIndex> heavy_alphas;
    for (const auto& al : multi_indices_of_degree(n, hr)) heavy_alphas.push_back(al);

    for (size_t i = 0; i < domain_samples.size(); ++i) {
        for (size_t b = 0; b < betas.size(); ++b) {
            double value;
            if (weighted[b] <= hr) {
                value = std::abs(to_double(F_field.jets[i].coeff(betas[b])));
            } else if (interior[i]) {
                double eps_hat = 0.0;
                if (!composers[i]) composers[i] = std::make_unique<JetComposer<T>>(map, domain_samples[i], hr);
                for (const auto& al : heavy_alphas)
                    eps_hat = std::max(eps_hat, std::abs(to_double(composers[i]->epsilon(al, betas[b]))));
                value = eps_hat * std::abs(to_double(F_field.jets[i].coeff(betas[b])));
            } else {
                continue;  // vanishes on strata where the derivative is lost
            }
            if (value > rep.weighted_sup) {
                rep.weighted_sup = value;
                rep.worst_beta = betas[b];
                rep.worst_sample = static_cast<int>(i);
            }
        }
    }
    rep.whitney_r = seminorms(F_field.truncated(r), r).whitney_norm;
    rep.total = rep.whitney_r + rep.weighted_sup;
    return rep;
}

}  // namespace coxinv
