#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "coxinv/errors.hpp"

namespace coxinv {

// Exponent vector with graded-lexicographic ordering. The grading makes
// std::map iteration enumerate monomials degree by degree, which is the
// order used for serialization.
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<uint32_t> exps) : e_(std::move(exps)) {}
    MultiIndex(std::initializer_list<uint32_t> exps) : e_(exps) {}
    explicit MultiIndex(int n) : e_(static_cast<size_t>(n), 0) {}

    static MultiIndex zero(int n) { return MultiIndex(n); }
    static MultiIndex unit(int n, int i, uint32_t k = 1) {
        MultiIndex m(n);
        m.e_[static_cast<size_t>(i)] = k;
        return m;
    }

    int size() const { return static_cast<int>(e_.size()); }
    uint32_t operator[](int i) const { return e_[static_cast<size_t>(i)]; }
    uint32_t& operator[](int i) { return e_[static_cast<size_t>(i)]; }
    const std::vector<uint32_t>& exponents() const { return e_; }

    int degree() const {
        return static_cast<int>(std::accumulate(e_.begin(), e_.end(), uint64_t{0}));
    }

    MultiIndex operator+(const MultiIndex& o) const {
        check_same(o);
        MultiIndex r(*this);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
        return r;
    }

    // Componentwise subtraction; caller must ensure *this >= o.
    MultiIndex operator-(const MultiIndex& o) const {
        check_same(o);
        MultiIndex r(*this);
        for (size_t i = 0; i < e_.size(); ++i) {
            if (r.e_[i] < o.e_[i]) throw DimensionMismatch("multi-index subtraction underflow");
            r.e_[i] -= o.e_[i];
        }
        return r;
    }

    bool dominates(const MultiIndex& o) const {
        check_same(o);
        for (size_t i = 0; i < e_.size(); ++i)
            if (e_[i] < o.e_[i]) return false;
        return true;
    }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }

    // Graded lex: lower total degree first, ties broken lexicographically.
    bool operator<(const MultiIndex& o) const {
        int da = degree(), db = o.degree();
        if (da != db) return da < db;
        return e_ < o.e_;
    }

    // alpha! = prod alpha_i!, computed in the scalar type (entries can make
    // the product overflow 64 bits on exact paths with big orders).
    template <class T>
    T factorial() const {
        T r(1);
        for (uint32_t ei : e_)
            for (uint32_t v = 2; v <= ei; ++v) r *= T(static_cast<int>(v));
        return r;
    }

  private:
    void check_same(const MultiIndex& o) const {
        if (e_.size() != o.e_.size()) throw DimensionMismatch("multi-index dimension mismatch");
    }
    std::vector<uint32_t> e_;
};

namespace detail {
inline void enumerate_exact_rec(int n, int pos, int remaining, std::vector<uint32_t>& cur,
                                std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[static_cast<size_t>(pos)] = static_cast<uint32_t>(remaining);
        out.emplace_back(cur);
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        cur[static_cast<size_t>(pos)] = static_cast<uint32_t>(v);
        enumerate_exact_rec(n, pos + 1, remaining - v, cur, out);
    }
}
}  // namespace detail

// All multi-indices in n variables of total degree exactly d.
inline std::vector<MultiIndex> multi_indices_of_degree(int n, int d) {
    std::vector<MultiIndex> out;
    if (n == 0) {
        if (d == 0) out.emplace_back(0);
        return out;
    }
    std::vector<uint32_t> cur(static_cast<size_t>(n), 0);
    detail::enumerate_exact_rec(n, 0, d, cur, out);
    return out;
}

// All multi-indices of total degree <= m, degree by degree.
inline std::vector<MultiIndex> multi_indices_up_to(int n, int m) {
    std::vector<MultiIndex> out;
    for (int d = 0; d <= m; ++d) {
        auto layer = multi_indices_of_degree(n, d);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

}  // namespace coxinv
