#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "coxinv/errors.hpp"
#include "coxinv/poly.hpp"
#include "coxinv/scalar.hpp"

namespace coxinv {

// Minimal dense matrix for desk-scale systems (n <= a few dozen).
template <class T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const T& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  private:
    int rows_, cols_;
    std::vector<T> data_;
};

namespace detail {
template <class T>
int pick_pivot(const Matrix<T>& a, int col, const std::vector<bool>& used_row) {
    int pivot = -1;
    if constexpr (is_exact_v<T>) {
        for (int i = 0; i < a.rows(); ++i)
            if (!used_row[static_cast<size_t>(i)] && a.at(i, col) != 0) return i;
    } else {
        double best = 0;
        for (int i = 0; i < a.rows(); ++i) {
            if (used_row[static_cast<size_t>(i)]) continue;
            double v = std::abs(to_double(a.at(i, col)));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best <= 1e-13) return -1;
    }
    return pivot;
}
}  // namespace detail

// Determinant by Gaussian elimination over the field T.
template <class T>
T determinant(Matrix<T> a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
    int n = a.rows();
    T det(1);
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<int> pivot_row(static_cast<size_t>(n), -1);
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(a, c, used);
        if (p < 0) return T(0);
        used[static_cast<size_t>(p)] = true;
        pivot_row[static_cast<size_t>(c)] = p;
        for (int i = 0; i < n; ++i) {
            if (used[static_cast<size_t>(i)]) continue;
            if (ScalarTraits<T>::is_zero(a.at(i, c))) continue;
            T f = a.at(i, c) / a.at(p, c);
            for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(p, j);
        }
    }
    // det = product of pivots, sign from the row permutation.
    std::vector<int> perm(pivot_row.begin(), pivot_row.end());
    int sign = 1;
    for (int i = 0; i < n; ++i) {
        while (perm[static_cast<size_t>(i)] != i) {
            std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
            sign = -sign;
        }
    }
    for (int c = 0; c < n; ++c) det *= a.at(pivot_row[static_cast<size_t>(c)], c);
    return sign < 0 ? T(-det) : det;
}

// Solve the square system A x = b; nullopt when A is singular.
template <class T>
std::optional<std::vector<T>> solve_square(Matrix<T> a, std::vector<T> b) {
    int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) throw DimensionMismatch("solve_square shape mismatch");
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<int> where(static_cast<size_t>(n), -1);
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(a, c, used);
        if (p < 0) return std::nullopt;
        used[static_cast<size_t>(p)] = true;
        where[static_cast<size_t>(c)] = p;
        T inv = T(1) / a.at(p, c);
        for (int j = c; j < n; ++j) a.at(p, j) *= inv;
        b[static_cast<size_t>(p)] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == p || ScalarTraits<T>::is_zero(a.at(i, c))) continue;
            T f = a.at(i, c);
            for (int j = c; j < n; ++j) a.at(i, j) -= f * a.at(p, j);
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(p)];
        }
    }
    std::vector<T> x(static_cast<size_t>(n), T(0));
    for (int c = 0; c < n; ++c) x[static_cast<size_t>(c)] = b[static_cast<size_t>(where[static_cast<size_t>(c)])];
    return x;
}

// Square matrix inverse (Gauss-Jordan); nullopt when singular.
template <class T>
std::optional<Matrix<T>> invert(Matrix<T> a) {
    int n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("invert: non-square");
    Matrix<T> inv(n, n);
    for (int i = 0; i < n; ++i) inv.at(i, i) = T(1);
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<int> where(static_cast<size_t>(n), -1);
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(a, c, used);
        if (p < 0) return std::nullopt;
        used[static_cast<size_t>(p)] = true;
        where[static_cast<size_t>(c)] = p;
        T s = T(1) / a.at(p, c);
        for (int j = 0; j < n; ++j) {
            a.at(p, j) *= s;
            inv.at(p, j) *= s;
        }
        for (int i = 0; i < n; ++i) {
            if (i == p || ScalarTraits<T>::is_zero(a.at(i, c))) continue;
            T f = a.at(i, c);
            for (int j = 0; j < n; ++j) {
                a.at(i, j) -= f * a.at(p, j);
                inv.at(i, j) -= f * inv.at(p, j);
            }
        }
    }
    // Undo the row permutation: row c of the answer is row where[c] of inv.
    Matrix<T> out(n, n);
    for (int c = 0; c < n; ++c)
        for (int j = 0; j < n; ++j) out.at(c, j) = inv.at(where[static_cast<size_t>(c)], j);
    return out;
}

// Overdetermined exact solver: finds x with A x = b when the columns of A
// are independent and the system is consistent. Reports failure kind so
// callers can map it onto their own error types.
enum class LsqStatus { kOk, kRankDeficient, kInconsistent };

template <class T>
struct LsqResult {
    LsqStatus status;
    std::vector<T> x;
};

template <class T>
LsqResult<T> solve_overdetermined(const Matrix<T>& a, const std::vector<T>& b, double tol = 0.0) {
    int m = a.rows(), n = a.cols();
    if (static_cast<int>(b.size()) != m) throw DimensionMismatch("solve_overdetermined shape mismatch");
    Matrix<T> w = a;
    std::vector<T> rhs = b;
    std::vector<bool> used(static_cast<size_t>(m), false);
    std::vector<int> pivot_of_col(static_cast<size_t>(n), -1);
    for (int c = 0; c < n; ++c) {
        int p = detail::pick_pivot(w, c, used);
        if (p < 0) return {LsqStatus::kRankDeficient, {}};
        used[static_cast<size_t>(p)] = true;
        pivot_of_col[static_cast<size_t>(c)] = p;
        T inv = T(1) / w.at(p, c);
        for (int j = c; j < n; ++j) w.at(p, j) *= inv;
        rhs[static_cast<size_t>(p)] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == p || ScalarTraits<T>::is_zero(w.at(i, c))) continue;
            T f = w.at(i, c);
            for (int j = c; j < n; ++j) w.at(i, j) -= f * w.at(p, j);
            rhs[static_cast<size_t>(i)] -= f * rhs[static_cast<size_t>(p)];
        }
    }
    // Every non-pivot row must have been annihilated.
    double scale = 0.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(to_double(b[static_cast<size_t>(i)])));
    for (int i = 0; i < m; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        if constexpr (is_exact_v<T>) {
            if (rhs[static_cast<size_t>(i)] != 0) return {LsqStatus::kInconsistent, {}};
        } else {
            if (std::abs(to_double(rhs[static_cast<size_t>(i)])) > tol * (1.0 + scale))
                return {LsqStatus::kInconsistent, {}};
        }
    }
    std::vector<T> x(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c) x[static_cast<size_t>(c)] = rhs[static_cast<size_t>(pivot_of_col[static_cast<size_t>(c)])];
    return {LsqStatus::kOk, std::move(x)};
}

// Basis of the null space of A (rows are constraints). Exact on rationals;
// float pivots below tol (relative to the largest entry) count as zero.
template <class T>
std::vector<std::vector<T>> null_space(Matrix<T> a, double tol = 1e-9) {
    const int m = a.rows(), n = a.cols();
    double scale = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(to_double(a.at(i, j))));
    auto is_negligible = [&](const T& v) {
        if constexpr (is_exact_v<T>)
            return v == 0;
        else
            return std::abs(to_double(v)) <= tol * (scale > 0 ? scale : 1.0);
    };
    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int p = -1;
        double best = 0;
        for (int i = row; i < m; ++i) {
            double v = std::abs(to_double(a.at(i, col)));
            if (!is_negligible(a.at(i, col)) && v > best) {
                best = v;
                p = i;
            }
        }
        if (p < 0) continue;
        for (int j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(row, j));
        T inv = T(1) / a.at(row, col);
        for (int j = 0; j < n; ++j) a.at(row, j) *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == row || is_negligible(a.at(i, col))) continue;
            T f = a.at(i, col);
            for (int j = 0; j < n; ++j) a.at(i, j) -= f * a.at(row, j);
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int c : pivot_col_of_row) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<T>> basis;
    for (int free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[static_cast<size_t>(free_col)]) continue;
        std::vector<T> v(static_cast<size_t>(n), T(0));
        v[static_cast<size_t>(free_col)] = T(1);
        for (size_t rr = 0; rr < pivot_col_of_row.size(); ++rr)
            v[static_cast<size_t>(pivot_col_of_row[rr])] = -a.at(static_cast<int>(rr), free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Determinant of a polynomial matrix by cofactor expansion along the first
// row (fine at n <= 5, which covers every supported Chevalley map).
template <class T>
Poly<T> determinant_poly(const std::vector<std::vector<Poly<T>>>& a) {
    size_t n = a.size();
    if (n == 0) throw DimensionMismatch("empty matrix");
    for (const auto& row : a)
        if (row.size() != n) throw DimensionMismatch("non-square polynomial matrix");
    if (n == 1) return a[0][0];
    int nv = a[0][0].nvars();
    Poly<T> det(nv);
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<Poly<T>>> minor;
        minor.reserve(n - 1);
        for (size_t i = 1; i < n; ++i) {
            std::vector<Poly<T>> row;
            row.reserve(n - 1);
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(std::move(row));
        }
        Poly<T> term = a[0][j] * determinant_poly(minor);
        if (j % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

}  // namespace coxinv
