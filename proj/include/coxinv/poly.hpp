#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "coxinv/errors.hpp"
#include "coxinv/multi_index.hpp"
#include "coxinv/scalar.hpp"

namespace coxinv {

// Sparse multivariate polynomial over T (exact rationals or doubles).
// Terms are kept in graded-lex order and zero coefficients are never stored.
template <class T>
class Poly {
  public:
    using TermMap = std::map<MultiIndex, T>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(const T& c, int nvars) {
        Poly p(nvars);
        if (!ScalarTraits<T>::is_zero(c)) p.terms_.emplace(MultiIndex::zero(nvars), c);
        return p;
    }
    static Poly variable(int i, int nvars) {
        Poly p(nvars);
        p.terms_.emplace(MultiIndex::unit(nvars, i), T(1));
        return p;
    }
    static Poly monomial(const MultiIndex& k, const T& c) {
        Poly p(k.size());
        if (!ScalarTraits<T>::is_zero(c)) p.terms_.emplace(k, c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    // Degree of the zero polynomial is reported as -1.
    int degree() const {
        if (terms_.empty()) return -1;
        return terms_.rbegin()->first.degree();
    }

    bool is_constant() const { return terms_.empty() || degree() == 0; }
    T constant_term() const { return coeff(MultiIndex::zero(nvars_)); }

    T coeff(const MultiIndex& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? T(0) : it->second;
    }

    void add_term(const MultiIndex& k, const T& c) {
        if (k.size() != nvars_) throw DimensionMismatch("term dimension mismatch");
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (ScalarTraits<T>::is_zero(it->second)) terms_.erase(it);
        } else if (ScalarTraits<T>::is_zero(c)) {
            terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check_vars(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check_vars(o);
        for (const auto& [k, c] : o.terms_) add_term(k, T(-c));
        return *this;
    }
    Poly operator+(const Poly& o) const {
        Poly r(*this);
        r += o;
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r(*this);
        r -= o;
        return r;
    }
    Poly operator-() const {
        Poly r(*this);
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }

    Poly operator*(const Poly& o) const { return mul_truncated(o, -1); }
    Poly& operator*=(const Poly& o) {
        *this = *this * o;
        return *this;
    }

    // Product with all result terms of total degree > maxdeg dropped
    // (maxdeg < 0 keeps everything). Jet arithmetic lives on this.
    Poly mul_truncated(const Poly& o, int maxdeg) const {
        check_vars(o);
        Poly r(nvars_);
        for (const auto& [ka, ca] : terms_) {
            int da = ka.degree();
            if (maxdeg >= 0 && da > maxdeg) break;  // graded order: all later terms too big
            for (const auto& [kb, cb] : o.terms_) {
                if (maxdeg >= 0 && da + kb.degree() > maxdeg) break;
                r.add_term(ka + kb, ca * cb);
            }
        }
        return r;
    }

    Poly scaled(const T& s) const {
        Poly r(nvars_);
        if (ScalarTraits<T>::is_zero(s)) return r;
        for (const auto& [k, c] : terms_) {
            T v = c * s;
            if (!ScalarTraits<T>::is_zero(v)) r.terms_.emplace(k, v);
        }
        return r;
    }

    bool operator==(const Poly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // D^q p, exact.
    Poly derivative(const MultiIndex& q) const {
        if (q.size() != nvars_) throw DimensionMismatch("derivative order dimension mismatch");
        Poly r(nvars_);
        for (const auto& [k, c] : terms_) {
            if (!k.dominates(q)) continue;
            T factor(1);
            MultiIndex kk = k;
            for (int i = 0; i < nvars_; ++i)
                for (uint32_t j = 0; j < q[i]; ++j) factor *= T(static_cast<int>(k[i] - j));
            r.add_term(k - q, c * factor);
        }
        return r;
    }

    Poly derivative(int i) const { return derivative(MultiIndex::unit(nvars_, i)); }

    T evaluate(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("evaluation point dimension mismatch");
        // Per-variable power cache.
        std::vector<std::vector<T>> pows(static_cast<size_t>(nvars_));
        for (int i = 0; i < nvars_; ++i) pows[static_cast<size_t>(i)].push_back(T(1));
        T acc(0);
        for (const auto& [k, c] : terms_) {
            T t = c;
            for (int i = 0; i < nvars_; ++i) {
                auto& pw = pows[static_cast<size_t>(i)];
                while (pw.size() <= k[i]) pw.push_back(pw.back() * x[static_cast<size_t>(i)]);
                if (k[i] > 0) t *= pw[k[i]];
            }
            acc += t;
        }
        return acc;
    }

    // Substitute subs[i] for variable i. All substitution polynomials must
    // share a variable count; the result lives in that space.
    Poly compose(const std::vector<Poly>& subs, int maxdeg = -1) const {
        if (static_cast<int>(subs.size()) != nvars_) throw DimensionMismatch("compose: substitution count mismatch");
        int m = nvars_ == 0 ? 0 : subs.front().nvars();
        for (const auto& s : subs)
            if (s.nvars() != m) throw DimensionMismatch("compose: substitution variable mismatch");
        std::vector<std::vector<Poly>> pow_cache(subs.size());
        for (size_t i = 0; i < subs.size(); ++i) pow_cache[i].push_back(Poly::constant(T(1), m));
        Poly r(m);
        for (const auto& [k, c] : terms_) {
            Poly t = Poly::constant(c, m);
            for (int i = 0; i < nvars_ && !t.is_zero(); ++i) {
                if (k[i] == 0) continue;
                auto& pw = pow_cache[static_cast<size_t>(i)];
                while (pw.size() <= k[i]) {
                    pw.push_back(pw.back().mul_truncated(subs[static_cast<size_t>(i)], maxdeg));
                }
                t = t.mul_truncated(pw[k[i]], maxdeg);
            }
            r += t;
        }
        return r;
    }

    // Fast path for x_i -> sign_i * x_{perm_i} changes of variables
    // (covers every reflection of the classical types).
    Poly apply_signed_permutation(const std::vector<int>& perm, const std::vector<int>& signs) const {
        if (static_cast<int>(perm.size()) != nvars_ || static_cast<int>(signs.size()) != nvars_)
            throw DimensionMismatch("signed permutation size mismatch");
        Poly r(nvars_);
        for (const auto& [k, c] : terms_) {
            MultiIndex nk(nvars_);
            int flip = 1;
            for (int i = 0; i < nvars_; ++i) {
                nk[perm[static_cast<size_t>(i)]] = k[i];
                if (signs[static_cast<size_t>(i)] < 0 && (k[i] & 1u)) flip = -flip;
            }
            r.add_term(nk, flip < 0 ? T(-c) : c);
        }
        return r;
    }

    Poly truncated(int m) const {
        Poly r(nvars_);
        for (const auto& [k, c] : terms_) {
            if (k.degree() > m) break;
            r.terms_.emplace(k, c);
        }
        return r;
    }

    bool is_homogeneous(int* deg_out = nullptr) const {
        if (terms_.empty()) {
            if (deg_out) *deg_out = 0;
            return true;
        }
        int d = terms_.begin()->first.degree();
        for (const auto& [k, c] : terms_)
            if (k.degree() != d) return false;
        if (deg_out) *deg_out = d;
        return true;
    }

    // Largest absolute coefficient, as a double (diagnostics and float-path
    // tolerance scaling).
    double coeff_sup() const {
        double m = 0.0;
        for (const auto& [k, c] : terms_) m = std::max(m, std::abs(to_double(c)));
        return m;
    }

    // Divide by the linear form <normal, x>. Returns {quotient, remainder};
    // the remainder is free of the pivot variable. Exact over rationals.
    std::pair<Poly, Poly> divide_linear(const std::vector<T>& normal) const {
        if (static_cast<int>(normal.size()) != nvars_) throw DimensionMismatch("divide_linear dimension mismatch");
        int s = -1;
        if constexpr (is_exact_v<T>) {
            for (int i = 0; i < nvars_ && s < 0; ++i)
                if (!ScalarTraits<T>::is_zero(normal[static_cast<size_t>(i)])) s = i;
        } else {
            double best = 0;
            for (int i = 0; i < nvars_; ++i) {
                double a = std::abs(to_double(normal[static_cast<size_t>(i)]));
                if (a > best) {
                    best = a;
                    s = i;
                }
            }
        }
        if (s < 0) throw DimensionMismatch("divide_linear: zero form");
        const T a = normal[static_cast<size_t>(s)];
        // Tail of the form, free of x_s.
        Poly tail(nvars_);
        for (int i = 0; i < nvars_; ++i)
            if (i != s) tail.add_term(MultiIndex::unit(nvars_, i), normal[static_cast<size_t>(i)]);

        int top = 0;
        for (const auto& [k, c] : terms_) top = std::max(top, static_cast<int>(k[s]));
        // Slices by x_s exponent, each with that exponent zeroed out.
        std::vector<Poly> slice(static_cast<size_t>(top) + 1, Poly(nvars_));
        for (const auto& [k, c] : terms_) {
            MultiIndex kk = k;
            uint32_t d = kk[s];
            kk[s] = 0;
            slice[d].add_term(kk, c);
        }
        Poly quotient(nvars_);
        for (int d = top; d >= 1; --d) {
            Poly qd = slice[static_cast<size_t>(d)].scaled(T(1) / a);
            if (!qd.is_zero()) {
                slice[static_cast<size_t>(d) - 1] -= qd * tail;
                Poly shift = Poly::monomial(MultiIndex::unit(nvars_, s, static_cast<uint32_t>(d - 1)), T(1));
                quotient += qd * shift;
            }
        }
        return {quotient, slice[0]};
    }

    std::string str(const std::vector<std::string>& names = {}) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [k, c] = *it;
            if (!first) os << " + ";
            first = false;
            if constexpr (is_exact_v<T>) {
                os << c;
            } else {
                os << to_double(c);
            }
            for (int i = 0; i < nvars_; ++i) {
                if (k[i] == 0) continue;
                if (i < static_cast<int>(names.size()))
                    os << "*" << names[static_cast<size_t>(i)];
                else
                    os << "*x" << i;
                if (k[i] > 1) os << "^" << k[i];
            }
        }
        return os.str();
    }

  private:
    void check_vars(const Poly& o) const {
        if (nvars_ != o.nvars_) throw DimensionMismatch("polynomial variable count mismatch");
    }

    int nvars_;
    TermMap terms_;
};

template <class T>
Poly<double> poly_to_double(const Poly<T>& p) {
    Poly<double> r(p.nvars());
    for (const auto& [k, c] : p.terms()) r.add_term(k, to_double(c));
    return r;
}

}  // namespace coxinv
