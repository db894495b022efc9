#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "coxinv/errors.hpp"
#include "coxinv/multi_index.hpp"
#include "coxinv/poly.hpp"
#include "coxinv/scalar.hpp"

namespace coxinv {

// Jet of order m at a point: the coefficients a_k of the polynomial
// A_x(x') = sum a_k (x'-x)^k / k!. Zero coefficients are implicit.
template <class T>
struct Jet {
    std::vector<T> base;
    int order = 0;
    std::map<MultiIndex, T> coeffs;

    int dim() const { return static_cast<int>(base.size()); }

    T coeff(const MultiIndex& k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? T(0) : it->second;
    }

    void set_coeff(const MultiIndex& k, const T& v) {
        if (k.size() != dim()) throw DimensionMismatch("jet coefficient dimension mismatch");
        if (k.degree() > order) throw OrderExceeded("jet coefficient beyond order");
        if (ScalarTraits<T>::is_zero(v))
            coeffs.erase(k);
        else
            coeffs[k] = v;
    }

    // The polynomial in the offset u = x' - x, coefficients a_k / k!.
    Poly<T> offset_poly() const {
        Poly<T> p(dim());
        for (const auto& [k, a] : coeffs) p.add_term(k, a / k.template factorial<T>());
        return p;
    }

    static Jet from_offset_poly(const Poly<T>& p, std::vector<T> base, int order) {
        Jet j;
        j.base = std::move(base);
        j.order = order;
        for (const auto& [k, c] : p.terms()) {
            if (k.degree() > order) continue;
            j.coeffs.emplace(k, c * k.template factorial<T>());
        }
        return j;
    }

    // Exact Taylor jet of a polynomial.
    static Jet taylor_of(const Poly<T>& p, const std::vector<T>& x, int order) {
        const int n = p.nvars();
        if (static_cast<int>(x.size()) != n) throw DimensionMismatch("taylor_of: point dimension mismatch");
        std::vector<Poly<T>> subs;
        subs.reserve(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            Poly<T> s = Poly<T>::variable(i, n);
            s.add_term(MultiIndex::zero(n), x[static_cast<size_t>(i)]);
            subs.push_back(std::move(s));
        }
        return from_offset_poly(p.compose(subs), x, order);
    }

    T eval_at(const std::vector<T>& xp) const {
        if (static_cast<int>(xp.size()) != dim()) throw DimensionMismatch("jet evaluation dimension mismatch");
        std::vector<T> u(xp);
        for (size_t i = 0; i < u.size(); ++i) u[i] -= base[i];
        return offset_poly().evaluate(u);
    }

    // (a_{q+k})_{|k| <= m - |q|}.
    Jet formal_derivative(const MultiIndex& q) const {
        if (q.size() != dim()) throw DimensionMismatch("formal derivative dimension mismatch");
        if (q.degree() > order) throw OrderExceeded("formal derivative order exceeds jet order");
        Jet j;
        j.base = base;
        j.order = order - q.degree();
        for (const auto& [k, a] : coeffs) {
            if (!k.dominates(q)) continue;
            j.coeffs.emplace(k - q, a);
        }
        return j;
    }

    Jet truncated(int r) const {
        Jet j;
        j.base = base;
        j.order = std::min(order, r);
        for (const auto& [k, a] : coeffs)
            if (k.degree() <= j.order) j.coeffs.emplace(k, a);
        return j;
    }
};

template <class T>
double point_distance(const std::vector<T>& a, const std::vector<T>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = to_double(a[i]) - to_double(b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

// Jets of one shared order on a finite sample set.
template <class T>
struct JetField {
    int order = 0;
    std::vector<Jet<T>> jets;

    int dim() const { return jets.empty() ? 0 : jets.front().dim(); }

    void validate() const {
        for (const auto& j : jets) {
            if (j.order != order) throw DimensionMismatch("jet field with mixed orders");
            if (j.dim() != dim()) throw DimensionMismatch("jet field with mixed dimensions");
        }
        for (size_t i = 0; i < jets.size(); ++i)
            for (size_t k = i + 1; k < jets.size(); ++k)
                if (points_equal(jets[i].base, jets[k].base, 0.0)) throw DimensionMismatch("duplicate sample point");
    }

    int find(const std::vector<T>& x, double tol = 0.0) const {
        for (size_t i = 0; i < jets.size(); ++i)
            if (points_equal(jets[i].base, x, tol)) return static_cast<int>(i);
        return -1;
    }

    JetField truncated(int r) const {
        JetField f;
        f.order = std::min(order, r);
        f.jets.reserve(jets.size());
        for (const auto& j : jets) f.jets.push_back(j.truncated(r));
        return f;
    }
};

// (R_x A)^q(x') = (D^q A)_{x'}(x') - (D^q A)_x(x').
template <class T>
T whitney_remainder(const JetField<T>& field, const MultiIndex& q, const std::vector<T>& x,
                    const std::vector<T>& xp, double tol = 0.0) {
    int ix = field.find(x, tol);
    int ixp = field.find(xp, tol);
    if (ix < 0 || ixp < 0) throw PointNotInField("whitney_remainder: point not in field");
    if (q.degree() > field.order) throw OrderExceeded("whitney_remainder: derivative order exceeds field order");
    const Jet<T>& jx = field.jets[static_cast<size_t>(ix)];
    const Jet<T>& jxp = field.jets[static_cast<size_t>(ixp)];
    T lead = jxp.coeff(q);
    T tail = jx.formal_derivative(q).eval_at(xp);
    return lead - tail;
}

template <class T>
struct SeminormReport {
    T sup_norm = T(0);            // |A|^m_K, exact on the rational path
    double whitney_norm = 0.0;    // |A| + max quotient
    double max_quotient = 0.0;
    bool quotients_all_zero = true;
    int worst_x = -1, worst_xp = -1;  // sample indices of the worst pair
    MultiIndex worst_q;
};

// Both Fréchet seminorm families over the finite sample set. Remainders are
// tested for zero exactly; quotient magnitudes are reported as doubles.
template <class T>
SeminormReport<T> seminorms(const JetField<T>& field, int r) {
    if (r > field.order) throw OrderExceeded("seminorms: r exceeds field order");
    if (r < 0) throw OrderExceeded("seminorms: negative r");
    SeminormReport<T> rep;
    rep.worst_q = MultiIndex::zero(field.dim());
    for (const auto& j : field.jets)
        for (const auto& [k, a] : j.coeffs) {
            T v = ScalarTraits<T>::abs(a);
            if (rep.sup_norm < v) rep.sup_norm = v;
        }
    const auto qs = multi_indices_up_to(field.dim(), r);
    const size_t n = field.jets.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t jdx = 0; jdx < n; ++jdx) {
            if (i == jdx) continue;
            const auto& x = field.jets[i].base;
            const auto& xp = field.jets[jdx].base;
            double dist = point_distance(x, xp);
            if (dist == 0.0) continue;
            for (const auto& q : qs) {
                T lead = field.jets[jdx].coeff(q);
                T tail = field.jets[i].formal_derivative(q).eval_at(xp);
                T rem = lead - tail;
                if (ScalarTraits<T>::is_zero(rem)) continue;
                rep.quotients_all_zero = false;
                double quotient = std::abs(to_double(rem)) / std::pow(dist, r - q.degree());
                if (quotient > rep.max_quotient) {
                    rep.max_quotient = quotient;
                    rep.worst_x = static_cast<int>(i);
                    rep.worst_xp = static_cast<int>(jdx);
                    rep.worst_q = q;
                }
            }
        }
    }
    rep.whitney_norm = to_double(rep.sup_norm) + rep.max_quotient;
    return rep;
}

struct RegularitySlope {
    MultiIndex q;
    bool exact = false;   // every remainder vanished
    double slope = 0.0;   // log-log fit of |remainder| against |x - x'|
    double margin = 0.0;  // slope - (r - |q|); positive is consistent with o()
    int pairs = 0;
};

struct RegularityProbeReport {
    std::vector<RegularitySlope> entries;
    double min_pair_distance = 0.0;
    double max_pair_distance = 0.0;
};

// Finite-sample surrogate of the Whitney conditions: o() cannot be
// certified, so slopes and margins are reported instead of booleans.
template <class T>
RegularityProbeReport r_regularity_probe(const JetField<T>& field, int r, double min_decades = 3.0) {
    if (r > field.order) throw OrderExceeded("regularity probe: r exceeds field order");
    const size_t n = field.jets.size();
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double d = point_distance(field.jets[i].base, field.jets[j].base);
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    if (n < 2 || dmin <= 0.0 || std::log10(dmax / dmin) < min_decades)
        throw InsufficientScales("regularity probe needs pairs spanning at least " + std::to_string(min_decades) +
                                 " distance decades");
    RegularityProbeReport rep;
    rep.min_pair_distance = dmin;
    rep.max_pair_distance = dmax;
    for (const auto& q : multi_indices_up_to(field.dim(), r)) {
        RegularitySlope entry;
        entry.q = q;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const auto& x = field.jets[i].base;
                const auto& xp = field.jets[j].base;
                T lead = field.jets[j].coeff(q);
                T tail = field.jets[i].formal_derivative(q).eval_at(xp);
                T rem = lead - tail;
                if (ScalarTraits<T>::is_zero(rem)) continue;
                double a = std::abs(to_double(rem));
                if (a < 1e-250) continue;
                double lx = std::log(point_distance(x, xp));
                double ly = std::log(a);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++m;
            }
        entry.pairs = m;
        if (m == 0) {
            entry.exact = true;
            entry.margin = std::numeric_limits<double>::infinity();
        } else {
            double denom = m * sxx - sx * sx;
            if (std::abs(denom) < 1e-12) throw InsufficientScales("regularity probe: degenerate distance distribution");
            entry.slope = (m * sxy - sx * sy) / denom;
            entry.margin = entry.slope - (r - q.degree());
        }
        rep.entries.push_back(std::move(entry));
    }
    return rep;
}

template <class T>
JetField<double> field_to_double(const JetField<T>& f) {
    JetField<double> out;
    out.order = f.order;
    for (const auto& j : f.jets) {
        Jet<double> jd;
        jd.order = j.order;
        for (const auto& v : j.base) jd.base.push_back(to_double(v));
        for (const auto& [k, a] : j.coeffs) jd.coeffs.emplace(k, to_double(a));
        out.jets.push_back(std::move(jd));
    }
    return out;
}

}  // namespace coxinv
