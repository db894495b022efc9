#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "coxinv/errors.hpp"
#include "coxinv/groups.hpp"
#include "coxinv/linalg.hpp"
#include "coxinv/poly.hpp"

namespace coxinv {

// The Chevalley mapping P = (p_1, ..., p_n) built from a fixed set of basic
// invariants. Polynomials are kept in block order; within a D block the
// product invariant comes last so that each p_i owns a private
// identification pivot (a multi-index where its derivative is a nonzero
// constant and all earlier polynomials vanish).
template <class T>
struct ChevalleyMap {
    GroupData<T> group;
    std::vector<Poly<T>> polys;
    std::vector<int> degrees;
    std::vector<MultiIndex> pivots;
    std::vector<T> pivot_values;

    int dim() const { return group.dim(); }
    int h() const { return group.coxeter_number(); }

    std::vector<T> eval(const std::vector<T>& x) const {
        std::vector<T> out;
        out.reserve(polys.size());
        for (const auto& p : polys) out.push_back(p.evaluate(x));
        return out;
    }

    // Entry (i, j) = d p_i / d x_j.
    std::vector<std::vector<Poly<T>>> jacobian_polys() const {
        const int n = dim();
        std::vector<std::vector<Poly<T>>> jac;
        jac.reserve(polys.size());
        for (const auto& p : polys) {
            std::vector<Poly<T>> row;
            row.reserve(static_cast<size_t>(n));
            for (int j = 0; j < n; ++j) row.push_back(p.derivative(j));
            jac.push_back(std::move(row));
        }
        return jac;
    }

    Matrix<T> jacobian_at(const std::vector<T>& x) const {
        const int n = dim();
        Matrix<T> m(n, n);
        auto jac = jacobian_polys();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = jac[static_cast<size_t>(i)][static_cast<size_t>(j)].evaluate(x);
        return m;
    }
};

namespace detail {

template <class T>
Poly<T> power_sum(int n, int off, int dim, int k) {
    Poly<T> p(n);
    for (int i = 0; i < dim; ++i) p.add_term(MultiIndex::unit(n, off + i, static_cast<uint32_t>(k)), T(1));
    return p;
}

template <class T>
Poly<T> coordinate_product(int n, int off, int dim) {
    MultiIndex k(n);
    for (int i = 0; i < dim; ++i) k[off + i] = 1;
    return Poly<T>::monomial(k, T(1));
}

template <class T>
MultiIndex block_ones(int n, int off, int dim) {
    MultiIndex k(n);
    for (int i = 0; i < dim; ++i) k[off + i] = 1;
    return k;
}

// sum_j (x cos(2 pi j/m) + y sin(2 pi j/m))^m, the degree-m dihedral
// invariant paired with x^2 + y^2.
inline Poly<double> dihedral_top_invariant(int n, int off, int m) {
    const double pi = 3.14159265358979323846;
    Poly<double> p(n);
    for (int j = 1; j <= m; ++j) {
        double c = std::cos(2.0 * pi * j / m), s = std::sin(2.0 * pi * j / m);
        // binomial expansion of (c x + s y)^m
        double binom = 1.0;
        for (int i = 0; i <= m; ++i) {
            MultiIndex k(n);
            k[off] = static_cast<uint32_t>(i);
            k[off + 1] = static_cast<uint32_t>(m - i);
            double coef = binom * std::pow(c, i) * std::pow(s, m - i);
            if (std::abs(coef) > 1e-14) p.add_term(k, coef);
            binom = binom * (m - i) / (i + 1.0);
        }
    }
    return p;
}

}  // namespace detail

template <class T>
ChevalleyMap<T> basic_invariants(const GroupData<T>& g) {
    const int n = g.dim();
    ChevalleyMap<T> map{g, {}, {}, {}, {}};
    auto push = [&](Poly<T> p, MultiIndex pivot) {
        Poly<T> dp = p.derivative(pivot);
        if (!dp.is_constant() || ScalarTraits<T>::is_zero(dp.constant_term()))
            throw SingularSystem("basic invariant lacks its pivot monomial");
        map.degrees.push_back(p.degree());
        map.polys.push_back(std::move(p));
        map.pivots.push_back(std::move(pivot));
        map.pivot_values.push_back(dp.constant_term());
    };
    for (const auto& blk : g.blocks()) {
        if (blk.factor_index < 0) {
            for (int i = 0; i < blk.dim; ++i)
                push(Poly<T>::variable(blk.offset + i, n), MultiIndex::unit(n, blk.offset + i));
            continue;
        }
        const Factor& f = g.spec().factors[static_cast<size_t>(blk.factor_index)];
        switch (f.type) {
            case FactorType::A: {
                if (f.rank == 1) {
                    push(detail::power_sum<T>(n, blk.offset, 1, 2), MultiIndex::unit(n, blk.offset, 2));
                } else {
                    for (int k = 1; k <= f.rank + 1; ++k)
                        push(detail::power_sum<T>(n, blk.offset, blk.dim, k),
                             MultiIndex::unit(n, blk.offset, static_cast<uint32_t>(k)));
                }
                break;
            }
            case FactorType::B: {
                for (int j = 1; j <= f.rank; ++j)
                    push(detail::power_sum<T>(n, blk.offset, blk.dim, 2 * j),
                         MultiIndex::unit(n, blk.offset, static_cast<uint32_t>(2 * j)));
                break;
            }
            case FactorType::D: {
                for (int j = 1; j <= f.rank - 1; ++j)
                    push(detail::power_sum<T>(n, blk.offset, blk.dim, 2 * j),
                         MultiIndex::unit(n, blk.offset, static_cast<uint32_t>(2 * j)));
                push(detail::coordinate_product<T>(n, blk.offset, blk.dim),
                     detail::block_ones<T>(n, blk.offset, blk.dim));
                break;
            }
            case FactorType::I2: {
                push(detail::power_sum<T>(n, blk.offset, 2, 2), MultiIndex::unit(n, blk.offset, 2));
                if constexpr (is_exact_v<T>) {
                    // m == 4: the trigonometric sum collapses to 2(x^4 + y^4).
                    Poly<T> p(n);
                    p.add_term(MultiIndex::unit(n, blk.offset, 4), T(2));
                    p.add_term(MultiIndex::unit(n, blk.offset + 1, 4), T(2));
                    push(std::move(p), MultiIndex::unit(n, blk.offset, 4));
                } else {
                    push(detail::dihedral_top_invariant(n, blk.offset, f.rank),
                         MultiIndex::unit(n, blk.offset, static_cast<uint32_t>(f.rank)));
                }
                break;
            }
        }
    }
    return map;
}

// p composed with reflection i of the group.
template <class T>
Poly<T> compose_with_reflection(const GroupData<T>& g, int i, const Poly<T>& p) {
    if (auto sp = g.reflection_signed_perm(i)) {
        // y[perm[j]] = sign[j] x[j] means variable x_j in p is replaced by
        // sign[j']^... ; invert the action: x_j -> sign[k] x_k with perm[k]=j.
        const auto& [perm, sign] = *sp;
        std::vector<int> inv_perm(perm.size()), inv_sign(perm.size());
        for (size_t k = 0; k < perm.size(); ++k) {
            inv_perm[static_cast<size_t>(perm[k])] = static_cast<int>(k);
            inv_sign[static_cast<size_t>(perm[k])] = sign[k];
        }
        return p.apply_signed_permutation(inv_perm, inv_sign);
    }
    const int n = g.dim();
    auto cols = g.reflection_matrix(i);
    std::vector<Poly<T>> subs;
    subs.reserve(static_cast<size_t>(n));
    for (int row = 0; row < n; ++row) {
        Poly<T> s(n);
        for (int col = 0; col < n; ++col) {
            const T& v = cols[static_cast<size_t>(col)][static_cast<size_t>(row)];
            if (!ScalarTraits<T>::is_zero(v)) s.add_term(MultiIndex::unit(n, col), v);
        }
        subs.push_back(std::move(s));
    }
    return p.compose(subs);
}

// Is p invariant under all generating reflections? Exact on the rational
// path; coefficientwise tolerance on floats.
template <class T>
bool is_invariant(const GroupData<T>& g, const Poly<T>& p, double tol = 1e-9) {
    for (int i : g.generators()) {
        Poly<T> q = compose_with_reflection(g, i, p);
        if constexpr (is_exact_v<T>) {
            if (!(q == p)) return false;
        } else {
            Poly<double> diff = q - p;
            if (diff.coeff_sup() > tol * (1.0 + p.coeff_sup())) return false;
        }
    }
    return true;
}

struct JacobianFactorization {
    bool exact;
    double residual_sup;  // coefficientwise sup of det - c * prod(lambda)
};

// Checks det J_P = c * prod of the reflection forms; returns c and the
// residual polynomial (exactly zero on the rational path).
template <class T>
std::pair<T, Poly<T>> verify_jacobian_factorization(const ChevalleyMap<T>& map) {
    const auto& g = map.group;
    Poly<T> det = determinant_poly(map.jacobian_polys());
    const double scale = det.coeff_sup();
    Poly<T> quotient = det;
    for (int i = 0; i < g.reflection_count(); ++i) {
        auto [q, r] = quotient.divide_linear(g.normal(i));
        if constexpr (is_exact_v<T>) {
            if (!r.is_zero()) throw FactorizationFailed("Jacobian determinant is not divisible by a reflection form");
        } else {
            if (r.coeff_sup() > 1e-9 * (1.0 + scale))
                throw FactorizationFailed("Jacobian determinant division residual above tolerance");
        }
        quotient = std::move(q);
    }
    T c;
    if constexpr (is_exact_v<T>) {
        if (!quotient.is_constant()) throw FactorizationFailed("Jacobian quotient is not a constant");
        c = quotient.constant_term();
    } else {
        Poly<T> rest = quotient - Poly<T>::constant(quotient.constant_term(), quotient.nvars());
        if (rest.coeff_sup() > 1e-9 * (1.0 + scale))
            throw FactorizationFailed("Jacobian quotient is not a constant");
        c = quotient.constant_term();
    }
    if (ScalarTraits<T>::is_zero(c)) throw FactorizationFailed("vanishing Jacobian constant");
    // Residual det - c * prod(lambda) for reporting.
    Poly<T> prod = Poly<T>::constant(c, det.nvars());
    for (int i = 0; i < g.reflection_count(); ++i) {
        Poly<T> lin(det.nvars());
        const auto& nu = g.normal(i);
        for (int j = 0; j < det.nvars(); ++j)
            if (!ScalarTraits<T>::is_zero(nu[static_cast<size_t>(j)]))
                lin.add_term(MultiIndex::unit(det.nvars(), j), nu[static_cast<size_t>(j)]);
        prod *= lin;
    }
    return {c, det - prod};
}

// Rewrites W-invariant polynomials as polynomials in the basic invariants.
// Each homogeneous degree is a linear system over the monomial basis; the
// factorized systems are cached so batches of rewrites stay cheap.
template <class T>
class InvariantRewriter {
  public:
    explicit InvariantRewriter(const ChevalleyMap<T>& map) : map_(map) {
        pow_cache_.resize(map.polys.size());
        for (size_t i = 0; i < map.polys.size(); ++i)
            pow_cache_[i].push_back(Poly<T>::constant(T(1), map.dim()));
    }

    // f lives in x-space; the result lives in p-space (same variable count).
    Poly<T> rewrite(const Poly<T>& f, double tol = 1e-9) {
        if (f.nvars() != map_.dim()) throw DimensionMismatch("rewrite: variable count mismatch");
        if (!is_invariant(map_.group, f, tol)) throw NotInvariant("polynomial is not W-invariant");
        Poly<T> result(map_.dim());
        std::map<int, Poly<T>> components;
        for (const auto& [k, c] : f.terms()) {
            auto [it, inserted] = components.emplace(k.degree(), Poly<T>(f.nvars()));
            it->second.add_term(k, c);
        }
        for (const auto& [deg, comp] : components) {
            Poly<T> part = rewrite_homogeneous(comp, deg, tol);
            result += part;
        }
        return result;
    }

    const ChevalleyMap<T>& map() const { return map_; }

    // Expansion of prod p_i^{beta_i} in x-space, cached.
    const Poly<T>& monomial_expansion(const MultiIndex& beta) {
        auto it = expansion_cache_.find(beta);
        if (it != expansion_cache_.end()) return it->second;
        Poly<T> e = Poly<T>::constant(T(1), map_.dim());
        for (int i = 0; i < static_cast<int>(map_.polys.size()); ++i) {
            if (beta[i] == 0) continue;
            e *= power(i, beta[i]);
        }
        return expansion_cache_.emplace(beta, std::move(e)).first->second;
    }

    // All beta with weighted degree sum(beta_i * k_i) == deg.
    std::vector<MultiIndex> weighted_exponents(int deg) const {
        std::vector<MultiIndex> out;
        MultiIndex cur(static_cast<int>(map_.polys.size()));
        enumerate(0, deg, cur, out);
        return out;
    }

  private:
    void enumerate(int pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) const {
        if (pos == static_cast<int>(map_.polys.size())) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int k = map_.degrees[static_cast<size_t>(pos)];
        for (int v = 0; v * k <= remaining; ++v) {
            cur[pos] = static_cast<uint32_t>(v);
            enumerate(pos + 1, remaining - v * k, cur, out);
        }
        cur[pos] = 0;
    }

    const Poly<T>& power(int i, uint32_t e) {
        auto& pc = pow_cache_[static_cast<size_t>(i)];
        while (pc.size() <= e) pc.push_back(pc.back() * map_.polys[static_cast<size_t>(i)]);
        return pc[e];
    }

    struct DegreeSystem {
        std::vector<MultiIndex> betas;
        std::vector<MultiIndex> pivot_monomials;
        Matrix<T> inverse;  // of the pivot submatrix
    };

    const DegreeSystem& system_for_degree(int deg) {
        auto it = systems_.find(deg);
        if (it != systems_.end()) return it->second;
        DegreeSystem sys;
        sys.betas = weighted_exponents(deg);
        if (!sys.betas.empty()) {
            // Row index = monomial, column = beta.
            std::map<MultiIndex, int> row_of;
            for (const auto& b : sys.betas)
                for (const auto& [k, c] : monomial_expansion(b).terms())
                    row_of.emplace(k, 0);
            int idx = 0;
            for (auto& [k, v] : row_of) v = idx++;
            Matrix<T> m(static_cast<int>(row_of.size()), static_cast<int>(sys.betas.size()));
            for (int col = 0; col < static_cast<int>(sys.betas.size()); ++col)
                for (const auto& [k, c] : monomial_expansion(sys.betas[static_cast<size_t>(col)]).terms())
                    m.at(row_of.at(k), col) = c;
            // Pick pivot rows by elimination on a working copy.
            Matrix<T> w = m;
            std::vector<bool> used(static_cast<size_t>(w.rows()), false);
            std::vector<int> pivot_rows;
            for (int col = 0; col < w.cols(); ++col) {
                int p = detail2_pick_pivot(w, col, used);
                if (p < 0) throw SolveFailed("basic invariant monomials are not independent");
                used[static_cast<size_t>(p)] = true;
                pivot_rows.push_back(p);
                for (int i = 0; i < w.rows(); ++i) {
                    if (used[static_cast<size_t>(i)] || ScalarTraits<T>::is_zero(w.at(i, col))) continue;
                    T f = w.at(i, col) / w.at(p, col);
                    for (int j = col; j < w.cols(); ++j) w.at(i, j) -= f * w.at(p, j);
                }
            }
            Matrix<T> sq(w.cols(), w.cols());
            for (int r = 0; r < w.cols(); ++r)
                for (int c = 0; c < w.cols(); ++c) sq.at(r, c) = m.at(pivot_rows[static_cast<size_t>(r)], c);
            auto inv = invert(sq);
            if (!inv) throw SolveFailed("singular rewrite system");
            sys.inverse = std::move(*inv);
            std::vector<MultiIndex> mono_of_row(row_of.size(), MultiIndex(0));
            for (const auto& [k, v] : row_of) mono_of_row[static_cast<size_t>(v)] = k;
            for (int r : pivot_rows) sys.pivot_monomials.push_back(mono_of_row[static_cast<size_t>(r)]);
        }
        return systems_.emplace(deg, std::move(sys)).first->second;
    }

    static int detail2_pick_pivot(const Matrix<T>& a, int col, const std::vector<bool>& used) {
        if constexpr (is_exact_v<T>) {
            for (int i = 0; i < a.rows(); ++i)
                if (!used[static_cast<size_t>(i)] && a.at(i, col) != 0) return i;
            return -1;
        } else {
            int best_i = -1;
            double best = 1e-12;
            for (int i = 0; i < a.rows(); ++i) {
                if (used[static_cast<size_t>(i)]) continue;
                double v = std::abs(to_double(a.at(i, col)));
                if (v > best) {
                    best = v;
                    best_i = i;
                }
            }
            return best_i;
        }
    }

    Poly<T> rewrite_homogeneous(const Poly<T>& comp, int deg, double tol) {
        const DegreeSystem& sys = system_for_degree(deg);
        if (sys.betas.empty()) {
            if constexpr (is_exact_v<T>) throw SolveFailed("no invariant monomials at this degree");
            if (comp.coeff_sup() > tol) throw SolveFailed("no invariant monomials at this degree");
            return Poly<T>(map_.dim());
        }
        const int nb = static_cast<int>(sys.betas.size());
        std::vector<T> rhs(static_cast<size_t>(nb));
        for (int r = 0; r < nb; ++r) rhs[static_cast<size_t>(r)] = comp.coeff(sys.pivot_monomials[static_cast<size_t>(r)]);
        std::vector<T> coefs(static_cast<size_t>(nb), T(0));
        for (int r = 0; r < nb; ++r)
            for (int c = 0; c < nb; ++c) coefs[static_cast<size_t>(r)] += sys.inverse.at(r, c) * rhs[static_cast<size_t>(c)];
        // Full residual check: comp - sum coefs * expansion must vanish.
        Poly<T> residual = comp;
        Poly<T> result(map_.dim());
        for (int c = 0; c < nb; ++c) {
            if (ScalarTraits<T>::is_zero(coefs[static_cast<size_t>(c)])) continue;
            residual -= monomial_expansion(sys.betas[static_cast<size_t>(c)]).scaled(coefs[static_cast<size_t>(c)]);
            result.add_term(sys.betas[static_cast<size_t>(c)], coefs[static_cast<size_t>(c)]);
        }
        if constexpr (is_exact_v<T>) {
            if (!residual.is_zero()) throw SolveFailed("rewrite residual is nonzero");
        } else {
            if (residual.coeff_sup() > tol * (1.0 + comp.coeff_sup()))
                throw SolveFailed("rewrite residual above tolerance");
        }
        return result;
    }

    const ChevalleyMap<T>& map_;
    std::vector<std::vector<Poly<T>>> pow_cache_;
    std::map<MultiIndex, Poly<T>> expansion_cache_;
    std::map<int, DegreeSystem> systems_;
};

// One-off convenience wrapper.
template <class T>
Poly<T> rewrite_invariant_polynomial(const ChevalleyMap<T>& map, const Poly<T>& f, double tol = 1e-9) {
    InvariantRewriter<T> rw(map);
    return rw.rewrite(f, tol);
}

template <class T>
ChevalleyMap<double> map_to_double(const ChevalleyMap<T>& map) {
    ChevalleyMap<double> out{group_to_double(map.group), {}, map.degrees, map.pivots, {}};
    for (const auto& p : map.polys) out.polys.push_back(poly_to_double(p));
    for (const auto& v : map.pivot_values) out.pivot_values.push_back(to_double(v));
    return out;
}

}  // namespace coxinv
