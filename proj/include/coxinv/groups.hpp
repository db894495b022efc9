#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coxinv/errors.hpp"
#include "coxinv/scalar.hpp"

namespace coxinv {

enum class FactorType { A, B, D, I2 };

inline std::string factor_type_name(FactorType t) {
    switch (t) {
        case FactorType::A: return "A";
        case FactorType::B: return "B";
        case FactorType::D: return "D";
        case FactorType::I2: return "I2";
    }
    return "?";
}

struct Factor {
    FactorType type;
    int rank;  // the angle count m for I2
};

// Description of a finite reflection group: irreducible factors plus a
// pointwise-fixed subspace of dimension fixed_dim.
struct GroupSpec {
    std::vector<Factor> factors;
    int fixed_dim = 0;

    // Dimension of the coordinate block a factor occupies. A_r acts on
    // r+1 permuted coordinates (its own fixed line included) except A_1,
    // which is realized essentially as the sign flip on one coordinate.
    static int block_dim(const Factor& f) {
        switch (f.type) {
            case FactorType::A: return f.rank == 1 ? 1 : f.rank + 1;
            case FactorType::B:
            case FactorType::D: return f.rank;
            case FactorType::I2: return 2;
        }
        return 0;
    }

    int ambient_dim() const {
        int n = fixed_dim;
        for (const auto& f : factors) n += block_dim(f);
        return n;
    }

    void validate() const {
        if (fixed_dim < 0) throw RankOutOfRange("fixed_dim must be >= 0");
        for (const auto& f : factors) {
            switch (f.type) {
                case FactorType::A:
                    if (f.rank < 1) throw RankOutOfRange("A requires rank >= 1");
                    break;
                case FactorType::B:
                    if (f.rank < 2) throw RankOutOfRange("B requires rank >= 2 (B1 is A1)");
                    break;
                case FactorType::D:
                    if (f.rank < 3) throw RankOutOfRange("D requires rank >= 3 (D2 is A1xA1)");
                    break;
                case FactorType::I2:
                    if (f.rank < 3) throw RankOutOfRange("I2(m) requires m >= 3");
                    break;
            }
        }
        if (ambient_dim() == 0) throw RankOutOfRange("empty group specification");
    }

    bool requires_float() const {
        for (const auto& f : factors)
            if (f.type == FactorType::I2 && f.rank != 4) return true;
        return false;
    }

    // "B2", "A2xI2(5)", "R2xB2" (R<k> adds k fixed dimensions).
    static GroupSpec parse_label(const std::string& label);
    std::string label() const;
};

struct Block {
    int factor_index;  // -1 for the fixed block
    int offset;
    int dim;
};

// A reflection group with explicitly enumerated reflections. Immutable
// after build(); all queries are const.
template <class T>
class GroupData {
  public:
    static GroupData build(const GroupSpec& spec) {
        spec.validate();
        if constexpr (is_exact_v<T>) {
            for (const auto& f : spec.factors)
                if (f.type == FactorType::I2 && f.rank != 4)
                    throw ConfigError("exact arithmetic is unavailable for I2(" + std::to_string(f.rank) +
                                      "): the reflection data is irrational; use float mode");
        }
        GroupData g;
        g.spec_ = spec;
        const int n = spec.ambient_dim();
        int off = 0;
        if (spec.fixed_dim > 0) {
            g.blocks_.push_back({-1, 0, spec.fixed_dim});
            for (int i = 0; i < spec.fixed_dim; ++i) g.degrees_.push_back(1);
            off = spec.fixed_dim;
        }
        for (size_t fi = 0; fi < spec.factors.size(); ++fi) {
            const Factor& f = spec.factors[fi];
            const int dim = GroupSpec::block_dim(f);
            g.blocks_.push_back({static_cast<int>(fi), off, dim});
            g.append_factor_reflections(f, off, n);
            auto degs = factor_degree_list(f);
            g.factor_degrees_.push_back(degs);
            std::vector<int> block_degs = degs;
            if (f.type == FactorType::A && f.rank >= 2) block_degs.insert(block_degs.begin(), 1);
            std::sort(block_degs.begin(), block_degs.end());
            for (int k : block_degs) g.degrees_.push_back(k);
            off += dim;
        }
        g.h_ = 1;
        g.d_ = 0;
        for (int k : g.degrees_) {
            g.h_ = std::max(g.h_, k);
            g.d_ += k - 1;
        }
        return g;
    }

    // Irreducible degrees of one factor (the A-block's internal degree-1
    // invariant is accounted separately).
    static std::vector<int> factor_degree_list(const Factor& f) {
        std::vector<int> d;
        switch (f.type) {
            case FactorType::A:
                for (int k = 2; k <= f.rank + 1; ++k) d.push_back(k);
                break;
            case FactorType::B:
                for (int j = 1; j <= f.rank; ++j) d.push_back(2 * j);
                break;
            case FactorType::D:
                for (int j = 1; j <= f.rank - 1; ++j) d.push_back(2 * j);
                d.push_back(f.rank);
                std::sort(d.begin(), d.end());
                break;
            case FactorType::I2:
                d = {2, f.rank};
                break;
        }
        return d;
    }

    static int factor_coxeter_number(const Factor& f) {
        auto d = factor_degree_list(f);
        return *std::max_element(d.begin(), d.end());
    }

    static BigInt factor_order(const Factor& f) {
        BigInt o(1);
        switch (f.type) {
            case FactorType::A:
                for (int k = 2; k <= f.rank + 1; ++k) o *= k;
                break;
            case FactorType::B:
                for (int k = 1; k <= f.rank; ++k) o *= 2 * k;
                break;
            case FactorType::D:
                for (int k = 1; k <= f.rank; ++k) o *= k;
                for (int k = 1; k < f.rank; ++k) o *= 2;
                break;
            case FactorType::I2:
                o = 2 * f.rank;
                break;
        }
        return o;
    }

    const GroupSpec& spec() const { return spec_; }
    int dim() const { return spec_.ambient_dim(); }
    int reflection_count() const { return static_cast<int>(normals_.size()); }
    const std::vector<T>& normal(int i) const { return normals_.at(static_cast<size_t>(i)); }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<int>& degrees() const { return degrees_; }
    const std::vector<std::vector<int>>& factor_degrees() const { return factor_degrees_; }
    const std::vector<int>& generators() const { return generators_; }
    int reflection_block(int i) const { return reflection_block_.at(static_cast<size_t>(i)); }
    int coxeter_number() const { return h_; }
    int d() const { return d_; }

    BigInt order() const {
        BigInt o(1);
        for (const auto& f : spec_.factors) o *= factor_order(f);
        return o;
    }

    T lambda(int i, const std::vector<T>& x) const {
        check_point(x);
        const auto& nu = normal(i);
        T s(0);
        for (size_t j = 0; j < nu.size(); ++j) s += nu[j] * x[j];
        return s;
    }

    double normal_norm(int i) const {
        const auto& nu = normal(i);
        double s = 0;
        for (const auto& v : nu) s += to_double(v) * to_double(v);
        return std::sqrt(s);
    }

    std::vector<T> reflect(int i, const std::vector<T>& x) const {
        check_point(x);
        const auto& nu = normal(i);
        T num(0), den(0);
        for (size_t j = 0; j < nu.size(); ++j) {
            num += nu[j] * x[j];
            den += nu[j] * nu[j];
        }
        T f = T(2) * num / den;
        std::vector<T> y(x);
        for (size_t j = 0; j < nu.size(); ++j) y[j] -= f * nu[j];
        return y;
    }

    std::vector<T> apply_word(const std::vector<int>& word, const std::vector<T>& x) const {
        std::vector<T> y = x;
        for (int i : word) {
            if (i < 0 || i >= reflection_count()) throw IndexOutOfRange("reflection index out of range");
            y = reflect(i, y);
        }
        return y;
    }

    // Matrix of reflection i as column-major action columns[j] = r(e_j).
    std::vector<std::vector<T>> reflection_matrix(int i) const {
        const int n = dim();
        std::vector<std::vector<T>> cols;
        cols.reserve(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            std::vector<T> e(static_cast<size_t>(n), T(0));
            e[static_cast<size_t>(j)] = T(1);
            cols.push_back(reflect(i, e));
        }
        return cols;
    }

    // If reflection i acts as x_j -> sign_j * x_{perm_j}, return (perm, sign)
    // with the convention y[perm[j]] = sign[j] * x[j].
    std::optional<std::pair<std::vector<int>, std::vector<int>>> reflection_signed_perm(int i) const {
        const int n = dim();
        auto cols = reflection_matrix(i);
        std::vector<int> perm(static_cast<size_t>(n), -1), sign(static_cast<size_t>(n), 1);
        for (int j = 0; j < n; ++j) {
            int hit = -1;
            for (int k = 0; k < n; ++k) {
                double v = to_double(cols[static_cast<size_t>(j)][static_cast<size_t>(k)]);
                if (std::abs(v) < 1e-12) continue;
                if (hit >= 0) return std::nullopt;
                hit = k;
                if (std::abs(std::abs(v) - 1.0) > 1e-12) return std::nullopt;
                sign[static_cast<size_t>(j)] = v > 0 ? 1 : -1;
            }
            if (hit < 0) return std::nullopt;
            perm[static_cast<size_t>(j)] = hit;
        }
        return std::make_pair(perm, sign);
    }

    // Orbit of x under W, canonically ordered (lexicographically ascending).
    std::vector<std::vector<T>> orbit(const std::vector<T>& x, size_t cap = 1000000) const {
        check_point(x);
        const double tol = 1e-9 * (1.0 + point_norm(x));
        std::vector<std::vector<T>> pts;
        pts.push_back(x);
        std::deque<size_t> queue{0};
        while (!queue.empty()) {
            size_t idx = queue.front();
            queue.pop_front();
            for (int g : generators_) {
                auto y = reflect(g, pts[idx]);
                bool found = false;
                for (const auto& p : pts)
                    if (points_equal(p, y, tol)) {
                        found = true;
                        break;
                    }
                if (!found) {
                    if (pts.size() >= cap) throw OrbitCapExceeded("orbit exceeds cap");
                    pts.push_back(std::move(y));
                    queue.push_back(pts.size() - 1);
                }
            }
        }
        std::sort(pts.begin(), pts.end(), [](const std::vector<T>& a, const std::vector<T>& b) {
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i] < b[i]) return true;
                if (b[i] < a[i]) return false;
            }
            return false;
        });
        return pts;
    }

    // Group order by explicit closure over generator matrices. Intended for
    // rank <= 4 sanity checks; throws when the cap is exceeded.
    BigInt order_by_closure(size_t cap = 2000000) const {
        const int n = dim();
        auto mat_mul = [n](const std::vector<T>& a, const std::vector<T>& b) {
            std::vector<T> c(static_cast<size_t>(n) * n, T(0));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    const T& aik = a[static_cast<size_t>(i) * n + k];
                    if (ScalarTraits<T>::is_zero(aik)) continue;
                    for (int j = 0; j < n; ++j) c[static_cast<size_t>(i) * n + j] += aik * b[static_cast<size_t>(k) * n + j];
                }
            return c;
        };
        std::vector<std::vector<T>> gens;
        for (int g : generators_) {
            auto cols = reflection_matrix(g);
            std::vector<T> m(static_cast<size_t>(n) * n, T(0));
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) m[static_cast<size_t>(i) * n + j] = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
            gens.push_back(std::move(m));
        }
        std::vector<T> id(static_cast<size_t>(n) * n, T(0));
        for (int i = 0; i < n; ++i) id[static_cast<size_t>(i) * n + i] = T(1);

        if constexpr (is_exact_v<T>) {
            std::set<std::vector<T>> seen;
            std::deque<std::vector<T>> queue;
            seen.insert(id);
            queue.push_back(id);
            while (!queue.empty()) {
                auto e = queue.front();
                queue.pop_front();
                for (const auto& g : gens) {
                    auto p = mat_mul(g, e);
                    if (seen.insert(p).second) {
                        if (seen.size() > cap) throw OrbitCapExceeded("closure exceeds cap");
                        queue.push_back(std::move(p));
                    }
                }
            }
            return BigInt(seen.size());
        } else {
            std::vector<std::vector<T>> seen{id};
            std::deque<size_t> queue{0};
            auto contains = [&](const std::vector<T>& m) {
                for (const auto& s : seen)
                    if (points_equal(s, m, 1e-7)) return true;
                return false;
            };
            while (!queue.empty()) {
                size_t idx = queue.front();
                queue.pop_front();
                for (const auto& g : gens) {
                    auto p = mat_mul(g, seen[idx]);
                    if (!contains(p)) {
                        if (seen.size() >= cap) throw OrbitCapExceeded("closure exceeds cap");
                        seen.push_back(std::move(p));
                        queue.push_back(seen.size() - 1);
                    }
                }
            }
            return BigInt(seen.size());
        }
    }

  private:
    void check_point(const std::vector<T>& x) const {
        if (static_cast<int>(x.size()) != dim()) throw DimensionMismatch("point dimension mismatch");
    }

    static double point_norm(const std::vector<T>& x) {
        double s = 0;
        for (const auto& v : x) s += to_double(v) * to_double(v);
        return std::sqrt(s);
    }

    void push_normal(std::vector<T> nu, int block_index, bool generator) {
        normals_.push_back(std::move(nu));
        reflection_block_.push_back(block_index);
        if (generator) generators_.push_back(static_cast<int>(normals_.size()) - 1);
    }

    void append_factor_reflections(const Factor& f, int off, int n) {
        const int block_index = static_cast<int>(blocks_.size()) - 1;
        auto basis = [n](int i) {
            std::vector<T> e(static_cast<size_t>(n), T(0));
            e[static_cast<size_t>(i)] = T(1);
            return e;
        };
        auto diff = [n](int i, int j, int si, int sj) {
            std::vector<T> e(static_cast<size_t>(n), T(0));
            e[static_cast<size_t>(i)] = T(si);
            e[static_cast<size_t>(j)] = T(sj);
            return e;
        };
        switch (f.type) {
            case FactorType::A: {
                if (f.rank == 1) {
                    push_normal(basis(off), block_index, true);
                    break;
                }
                const int m = f.rank + 1;
                for (int i = 0; i < m; ++i)
                    for (int j = i + 1; j < m; ++j)
                        push_normal(diff(off + i, off + j, 1, -1), block_index, j == i + 1);
                break;
            }
            case FactorType::B: {
                for (int i = 0; i < f.rank; ++i) push_normal(basis(off + i), block_index, i == f.rank - 1);
                for (int i = 0; i < f.rank; ++i)
                    for (int j = i + 1; j < f.rank; ++j)
                        push_normal(diff(off + i, off + j, 1, -1), block_index, j == i + 1);
                for (int i = 0; i < f.rank; ++i)
                    for (int j = i + 1; j < f.rank; ++j)
                        push_normal(diff(off + i, off + j, 1, 1), block_index, false);
                break;
            }
            case FactorType::D: {
                for (int i = 0; i < f.rank; ++i)
                    for (int j = i + 1; j < f.rank; ++j)
                        push_normal(diff(off + i, off + j, 1, -1), block_index, j == i + 1);
                for (int i = 0; i < f.rank; ++i)
                    for (int j = i + 1; j < f.rank; ++j)
                        push_normal(diff(off + i, off + j, 1, 1), block_index, i == f.rank - 2 && j == f.rank - 1);
                break;
            }
            case FactorType::I2: {
                // Reflection lines at angles j*pi/m; normals orthogonal to them.
                if constexpr (is_exact_v<T>) {
                    // m == 4 (validated in build): primitive integer normals.
                    std::vector<std::vector<int>> nus = {{0, 1}, {1, -1}, {1, 0}, {1, 1}};
                    for (int j = 0; j < 4; ++j) {
                        std::vector<T> nu(static_cast<size_t>(n), T(0));
                        nu[static_cast<size_t>(off)] = T(nus[static_cast<size_t>(j)][0]);
                        nu[static_cast<size_t>(off) + 1] = T(nus[static_cast<size_t>(j)][1]);
                        push_normal(std::move(nu), block_index, j <= 1);
                    }
                } else {
                    const double pi = 3.14159265358979323846;
                    for (int j = 0; j < f.rank; ++j) {
                        double a = j * pi / f.rank;
                        std::vector<T> nu(static_cast<size_t>(n), T(0));
                        // j = 0 oriented inward for the sector [0, pi/m]
                        nu[static_cast<size_t>(off)] = j == 0 ? 0.0 : std::sin(a);
                        nu[static_cast<size_t>(off) + 1] = j == 0 ? 1.0 : -std::cos(a);
                        push_normal(std::move(nu), block_index, j <= 1);
                    }
                }
                break;
            }
        }
    }

    GroupSpec spec_;
    std::vector<Block> blocks_;
    std::vector<std::vector<T>> normals_;
    std::vector<int> reflection_block_;
    std::vector<int> generators_;
    std::vector<int> degrees_;
    std::vector<std::vector<int>> factor_degrees_;
    int h_ = 1;
    int d_ = 0;
};

template <class T>
GroupData<double> group_to_double(const GroupData<T>& g) {
    return GroupData<double>::build(g.spec());
}

}  // namespace coxinv
