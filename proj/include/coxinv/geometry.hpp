#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <vector>

#include "coxinv/chevalley.hpp"
#include "coxinv/errors.hpp"
#include "coxinv/groups.hpp"
#include "coxinv/linalg.hpp"
#include "coxinv/parallel.hpp"

namespace coxinv {

// Stratum data at a point: the reflections vanishing там, and the degrees
// of the basic invariants of the isotropy subgroup they generate.
template <class T>
struct StratumInfo {
    std::vector<T> point;
    std::vector<int> active;            // reflection indices
    std::vector<int> isotropy_degrees;  // sorted ascending, padded with 1s to dim
    int h_S = 1;
    BigInt isotropy_order = 1;
};

namespace detail {

// Deterministic "generic" coefficients for a point inside a stratum; the
// attempt index perturbs them when a coincidence is detected.
inline long genericity_weight(size_t k, int attempt) {
    static const long primary[] = {3, 17, 113, 919, 7919, 65537, 524287, 6700417};
    static const long secondary[] = {1, 5, 29, 151, 1031, 8191, 131071, 2097151};
    size_t i = k % 8;
    return primary[i] + static_cast<long>(attempt) * secondary[i] + static_cast<long>(k / 8) * 7907;
}

template <class T>
bool value_is_zero(const T& v, double tol) {
    if constexpr (is_exact_v<T>)
        return v == 0;
    else
        return std::abs(to_double(v)) <= tol;
}

template <class T>
bool values_equal(const T& a, const T& b, double tol) {
    if constexpr (is_exact_v<T>)
        return a == b;
    else
        return std::abs(to_double(a) - to_double(b)) <= tol;
}

// Partition block coordinates of y into classes of equal absolute value
// (with_signs) or equal value, ignoring zeros.
template <class T>
std::vector<int> value_classes(const std::vector<T>& y, int off, int dim, bool with_signs, double tol) {
    std::vector<int> sizes;
    std::vector<bool> seen(static_cast<size_t>(dim), false);
    for (int i = 0; i < dim; ++i) {
        if (seen[static_cast<size_t>(i)] || value_is_zero(y[static_cast<size_t>(off + i)], tol)) continue;
        int c = 1;
        seen[static_cast<size_t>(i)] = true;
        for (int j = i + 1; j < dim; ++j) {
            if (seen[static_cast<size_t>(j)]) continue;
            bool eq = values_equal(y[static_cast<size_t>(off + i)], y[static_cast<size_t>(off + j)], tol);
            if (with_signs && !eq)
                eq = values_equal(y[static_cast<size_t>(off + i)], T(-y[static_cast<size_t>(off + j)]), tol);
            if (eq) {
                seen[static_cast<size_t>(j)] = true;
                ++c;
            }
        }
        sizes.push_back(c);
    }
    return sizes;
}

}  // namespace detail

// Identifies the stratum of x: active reflections and the isotropy
// subgroup's invariant degrees, classified from the coordinate pattern of a
// generic point of the common kernel. Throws AmbiguousStratum when tol
// merges hyperplanes that do not intersect near x.
template <class T>
StratumInfo<T> stratify(const GroupData<T>& g, const std::vector<T>& x, double tol = 0.0) {
    if (tol < 0) throw ConfigError("stratify: tol must be >= 0");
    const int n = g.dim();
    if (static_cast<int>(x.size()) != n) throw DimensionMismatch("stratify: point dimension mismatch");
    StratumInfo<T> info;
    info.point = x;
    for (int i = 0; i < g.reflection_count(); ++i) {
        T lam = g.lambda(i, x);
        bool active;
        if constexpr (is_exact_v<T>)
            active = (lam == 0);
        else
            active = std::abs(to_double(lam)) / g.normal_norm(i) <= tol;
        if (active) info.active.push_back(i);
    }

    // Generic point of the intersection of the active hyperplanes.
    Matrix<T> constraints(static_cast<int>(info.active.size()), n);
    for (size_t r = 0; r < info.active.size(); ++r) {
        const auto& nu = g.normal(info.active[r]);
        for (int j = 0; j < n; ++j) constraints.at(static_cast<int>(r), j) = nu[static_cast<size_t>(j)];
    }
    auto basis = null_space(constraints);
    double yscale = 0;
    std::vector<T> y;
    const double ytol = 1e-7;
    bool consistent = false;
    for (int attempt = 0; attempt < 6 && !consistent; ++attempt) {
        y.assign(static_cast<size_t>(n), T(0));
        for (size_t b = 0; b < basis.size(); ++b) {
            T w(static_cast<int>(detail::genericity_weight(b, attempt)));
            for (int j = 0; j < n; ++j) y[static_cast<size_t>(j)] += w * basis[b][static_cast<size_t>(j)];
        }
        yscale = 0;
        for (const auto& v : y) yscale = std::max(yscale, std::abs(to_double(v)));
        consistent = true;
        for (int i = 0; i < g.reflection_count() && consistent; ++i) {
            bool in_active = std::binary_search(info.active.begin(), info.active.end(), i);
            T lam = g.lambda(i, y);
            bool vanishes = detail::value_is_zero(lam, ytol * (1.0 + yscale) * g.normal_norm(i));
            if (vanishes != in_active) consistent = false;
        }
    }
    if (!consistent)
        throw AmbiguousStratum("active reflections do not cut out a common stratum near the point; shrink tol");

    // Classify each block from the coordinate pattern of y.
    const double ctol = 1e-7 * (1.0 + yscale);
    std::vector<int> degrees;
    for (size_t blk_index = 0; blk_index < g.blocks().size(); ++blk_index) {
        const Block& blk = g.blocks()[blk_index];
        if (blk.factor_index < 0) continue;
        const Factor& f = g.spec().factors[static_cast<size_t>(blk.factor_index)];
        switch (f.type) {
            case FactorType::A: {
                if (f.rank == 1) {
                    if (detail::value_is_zero(y[static_cast<size_t>(blk.offset)], ctol)) degrees.push_back(2);
                    break;
                }
                for (int c : detail::value_classes(y, blk.offset, blk.dim, false, ctol))
                    for (int k = 2; k <= c; ++k) degrees.push_back(k);
                break;
            }
            case FactorType::B: {
                int z = 0;
                for (int i = 0; i < blk.dim; ++i)
                    if (detail::value_is_zero(y[static_cast<size_t>(blk.offset + i)], ctol)) ++z;
                for (int j = 1; j <= z; ++j) degrees.push_back(2 * j);
                for (int c : detail::value_classes(y, blk.offset, blk.dim, true, ctol))
                    for (int k = 2; k <= c; ++k) degrees.push_back(k);
                break;
            }
            case FactorType::D: {
                int z = 0;
                for (int i = 0; i < blk.dim; ++i)
                    if (detail::value_is_zero(y[static_cast<size_t>(blk.offset + i)], ctol)) ++z;
                if (z >= 2) {
                    for (int j = 1; j <= z - 1; ++j) degrees.push_back(2 * j);
                    degrees.push_back(z);
                }
                for (int c : detail::value_classes(y, blk.offset, blk.dim, true, ctol))
                    for (int k = 2; k <= c; ++k) degrees.push_back(k);
                break;
            }
            case FactorType::I2: {
                int cnt = 0;
                for (int i : info.active)
                    if (g.reflection_block(i) == static_cast<int>(blk_index)) ++cnt;
                if (cnt == 1) degrees.push_back(2);
                if (cnt == f.rank) {
                    degrees.push_back(2);
                    degrees.push_back(f.rank);
                }
                if (cnt != 0 && cnt != 1 && cnt != f.rank)
                    throw AmbiguousStratum("dihedral block with a partial set of active reflections");
                break;
            }
        }
    }
    // Reflection-count checksum: sum (k'-1) must equal the active count.
    int dsum = 0;
    for (int k : degrees) dsum += k - 1;
    if (dsum != static_cast<int>(info.active.size()))
        throw AmbiguousStratum("isotropy classification does not account for the active reflections");
    std::sort(degrees.begin(), degrees.end());
    while (static_cast<int>(degrees.size()) < n) degrees.insert(degrees.begin(), 1);
    info.isotropy_degrees = degrees;
    info.h_S = degrees.empty() ? 1 : degrees.back();
    info.isotropy_order = 1;
    for (int k : degrees) info.isotropy_order *= k;
    return info;
}

// Canonical orbit representative in the closed fundamental chamber.
template <class T>
std::vector<T> fundamental_domain_rep(const GroupData<T>& g, const std::vector<T>& x) {
    const int n = g.dim();
    if (static_cast<int>(x.size()) != n) throw DimensionMismatch("fundamental_domain_rep: dimension mismatch");
    std::vector<T> y = x;
    auto desc = [](const T& a, const T& b) { return b < a; };
    for (const auto& blk : g.blocks()) {
        if (blk.factor_index < 0) continue;
        const Factor& f = g.spec().factors[static_cast<size_t>(blk.factor_index)];
        auto first = y.begin() + blk.offset;
        auto last = first + blk.dim;
        switch (f.type) {
            case FactorType::A: {
                if (f.rank == 1) {
                    if (*first < T(0)) *first = -*first;
                } else {
                    std::sort(first, last, desc);
                }
                break;
            }
            case FactorType::B: {
                for (auto it = first; it != last; ++it)
                    if (*it < T(0)) *it = -*it;
                std::sort(first, last, desc);
                break;
            }
            case FactorType::D: {
                int negatives = 0;
                bool has_zero = false;
                for (auto it = first; it != last; ++it) {
                    if (*it < T(0)) {
                        ++negatives;
                        *it = -*it;
                    } else if (ScalarTraits<T>::is_zero(*it)) {
                        has_zero = true;
                    }
                }
                std::sort(first, last, desc);
                if ((negatives & 1) && !has_zero) *(last - 1) = -*(last - 1);
                break;
            }
            case FactorType::I2: {
                if constexpr (is_exact_v<T>) {
                    // m == 4: chamber is {x >= y >= 0}.
                    T a = *first, b = *(first + 1);
                    if (a < T(0)) a = -a;
                    if (b < T(0)) b = -b;
                    if (a < b) std::swap(a, b);
                    *first = a;
                    *(first + 1) = b;
                } else {
                    const double pi = 3.14159265358979323846;
                    double px = to_double(*first), py = to_double(*(first + 1));
                    double rad = std::hypot(px, py);
                    if (rad > 0) {
                        double theta = std::atan2(py, px);
                        double sector = 2.0 * pi / f.rank;
                        theta = std::fmod(theta, sector);
                        if (theta < 0) theta += sector;
                        if (theta > sector / 2) theta = sector - theta;
                        *first = rad * std::cos(theta);
                        *(first + 1) = rad * std::sin(theta);
                    }
                }
                break;
            }
        }
    }
    return y;
}

struct RegularityProbeOptions {
    double radius = 1.0;
    int samples = 2000;
    int k_neighbors = 14;
    uint64_t seed = 0;
    int sources = 48;
    double cutoff_frac = 0.2;  // ignore pairs closer than this fraction of the image diameter
    bool refine = false;       // also run at samples/2 for the refinement trend
};

struct ImageRegularityReport {
    double max_ratio = 0.0;
    size_t pairs = 0;
    std::vector<std::pair<int, double>> refinement;  // (samples, max_ratio)
    uint64_t seed = 0;
    int k_neighbors = 0;
};

namespace detail {

// Portable deterministic RNG helpers (the probe results must be bytewise
// reproducible for a given seed).
struct ProbeRng {
    uint64_t state;
    explicit ProbeRng(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        // splitmix64
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Box-Muller without trig-table dependence on the platform's
    // distributions.
    double gauss() {
        double u1 = u01(), u2 = u01();
        while (u1 <= 1e-300) u1 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

// Uniform grid over the image points; a query point is "covered" when some
// sample's own coverage ball (its nearest-neighbor scale) contains it.
struct PointGrid {
    double cell;
    int dim;
    std::unordered_map<long long, std::vector<int>> buckets;
    const std::vector<std::vector<double>>* pts;
    const std::vector<double>* radii;

    static long long key_of(const std::vector<long long>& c) {
        long long k = 1469598103934665603ll;
        for (long long v : c) {
            k ^= v + 0x9e3779b97f4a7c15ll;
            k *= 1099511628211ll;
        }
        return k;
    }

    PointGrid(const std::vector<std::vector<double>>& points, const std::vector<double>& coverage_radii)
        : dim(static_cast<int>(points.front().size())), pts(&points), radii(&coverage_radii) {
        cell = 1e-12;
        for (double r : coverage_radii) cell = std::max(cell, r);
        std::vector<long long> c(static_cast<size_t>(dim));
        for (int i = 0; i < static_cast<int>(points.size()); ++i) {
            for (int d = 0; d < dim; ++d)
                c[static_cast<size_t>(d)] = static_cast<long long>(std::floor(points[static_cast<size_t>(i)][static_cast<size_t>(d)] / cell));
            buckets[key_of(c)].push_back(i);
        }
    }

    bool covered(const std::vector<double>& q) const {
        std::vector<long long> base(static_cast<size_t>(dim));
        for (int d = 0; d < dim; ++d) base[static_cast<size_t>(d)] = static_cast<long long>(std::floor(q[static_cast<size_t>(d)] / cell));
        std::vector<long long> c(static_cast<size_t>(dim));
        int combos = 1;
        for (int d = 0; d < dim; ++d) combos *= 3;
        for (int m = 0; m < combos; ++m) {
            int mm = m;
            for (int d = 0; d < dim; ++d) {
                c[static_cast<size_t>(d)] = base[static_cast<size_t>(d)] + (mm % 3) - 1;
                mm /= 3;
            }
            auto it = buckets.find(key_of(c));
            if (it == buckets.end()) continue;
            for (int i : it->second) {
                double rad = (*radii)[static_cast<size_t>(i)];
                double s = 0;
                for (int d = 0; d < dim; ++d) {
                    double diff = (*pts)[static_cast<size_t>(i)][static_cast<size_t>(d)] - q[static_cast<size_t>(d)];
                    s += diff * diff;
                }
                if (s <= rad * rad) return true;
            }
        }
        return false;
    }
};

inline double run_probe_once(const ChevalleyMap<double>& map, double radius, int samples, int k_neighbors,
                             uint64_t seed, int sources, double cutoff_frac, size_t* pairs_out) {
    const int n = map.dim();
    ProbeRng rng(seed);
    std::vector<std::vector<double>> domain(static_cast<size_t>(samples));
    for (auto& pt : domain) {
        pt.resize(static_cast<size_t>(n));
        double norm2 = 0;
        for (auto& c : pt) {
            c = rng.gauss();
            norm2 += c * c;
        }
        double norm = std::sqrt(norm2);
        double r = radius * std::pow(rng.u01(), 1.0 / n);
        for (auto& c : pt) c = norm > 0 ? c / norm * r : 0.0;
    }
    std::vector<std::vector<double>> img(domain.size());
    for (size_t i = 0; i < domain.size(); ++i) {
        img[i].reserve(map.polys.size());
        for (const auto& p : map.polys) img[i].push_back(p.evaluate(domain[i]));
    }
    const int N = static_cast<int>(img.size());
    const int dimi = static_cast<int>(img.front().size());
    auto dist = [&](int a, int b) {
        double s = 0;
        for (int c = 0; c < dimi; ++c) {
            double d = img[static_cast<size_t>(a)][static_cast<size_t>(c)] - img[static_cast<size_t>(b)][static_cast<size_t>(c)];
            s += d * d;
        }
        return std::sqrt(s);
    };
    // Brute-force kNN, tracking the image diameter and the local sampling
    // scale (distance to the k-th neighbor) as we go.
    double diameter = 0;
    std::vector<double> nn1(static_cast<size_t>(N), 0.0);
    std::vector<double> knn_radius(static_cast<size_t>(N), 0.0);
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(N));
    {
        auto rows = parallel_map(N, [&](int i) {
            std::vector<std::pair<double, int>> d;
            d.reserve(static_cast<size_t>(N) - 1);
            double local_diam = 0;
            for (int j = 0; j < N; ++j) {
                if (j == i) continue;
                double dij = dist(i, j);
                local_diam = std::max(local_diam, dij);
                d.emplace_back(dij, j);
            }
            int k = std::min<int>(k_neighbors, N - 1);
            std::partial_sort(d.begin(), d.begin() + k, d.end());
            d.resize(static_cast<size_t>(k));
            return std::make_pair(std::move(d), local_diam);
        });
        for (int i = 0; i < N; ++i) {
            diameter = std::max(diameter, rows[static_cast<size_t>(i)].second);
            nn1[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)].first.front().first;
            knn_radius[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)].first.back().first;
            for (auto& [dij, j] : rows[static_cast<size_t>(i)].first) adj[static_cast<size_t>(i)].emplace_back(j, dij);
        }
    }
    // Symmetrize.
    for (int i = 0; i < N; ++i)
        for (auto [j, w] : std::vector<std::pair<int, double>>(adj[static_cast<size_t>(i)])) {
            bool found = false;
            for (auto& [jj, ww] : adj[static_cast<size_t>(j)])
                if (jj == i) {
                    found = true;
                    break;
                }
            if (!found) adj[static_cast<size_t>(j)].emplace_back(i, w);
        }
    // Connectivity.
    {
        std::vector<bool> vis(static_cast<size_t>(N), false);
        std::queue<int> q;
        q.push(0);
        vis[0] = true;
        int cnt = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [v, w] : adj[static_cast<size_t>(u)])
                if (!vis[static_cast<size_t>(v)]) {
                    vis[static_cast<size_t>(v)] = true;
                    ++cnt;
                    q.push(v);
                }
        }
        if (cnt != N) throw DisconnectedGraph("image graph is disconnected; increase k_neighbors or samples");
    }

    // Coverage balls for validated straight-line shortcuts: paths may be
    // straightened wherever the segment stays inside the union of per-sample
    // balls scaled from the local k-NN radius (graph paths alone
    // overestimate geodesics by their zigzag overhead). The k-NN radius
    // tracks local density, including its drop near the image boundary.
    std::vector<double> nn_sorted = nn1;
    std::sort(nn_sorted.begin(), nn_sorted.end());
    const double nn_median = nn_sorted[nn_sorted.size() / 2];
    std::vector<double> knn_sorted = knn_radius;
    std::sort(knn_sorted.begin(), knn_sorted.end());
    const double knn_median = knn_sorted[knn_sorted.size() / 2];
    std::vector<double> coverage(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i)
        coverage[static_cast<size_t>(i)] = 1.25 * std::min(knn_radius[static_cast<size_t>(i)], 3.0 * knn_median);
    PointGrid grid(img, coverage);
    const double step = nn_median;
    auto segment_in_tube = [&](int a, int b) {
        double length = dist(a, b);
        int steps = static_cast<int>(std::ceil(length / step));
        std::vector<double> q(static_cast<size_t>(dimi));
        for (int m = 1; m < steps; ++m) {
            double t = static_cast<double>(m) / steps;
            for (int d = 0; d < dimi; ++d)
                q[static_cast<size_t>(d)] = (1 - t) * img[static_cast<size_t>(a)][static_cast<size_t>(d)] +
                                            t * img[static_cast<size_t>(b)][static_cast<size_t>(d)];
            if (!grid.covered(q)) return false;
        }
        return true;
    };

    const double cutoff = cutoff_frac * diameter;
    const int n_src = std::min(sources, N);
    struct SourceRun {
        int s;
        std::vector<double> g;
        std::vector<int> parent;
    };
    auto runs = parallel_map(n_src, [&](int t) {
        SourceRun run;
        run.s = static_cast<int>(static_cast<long long>(t) * N / n_src);
        run.g.assign(static_cast<size_t>(N), std::numeric_limits<double>::infinity());
        run.parent.assign(static_cast<size_t>(N), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        run.g[static_cast<size_t>(run.s)] = 0;
        heap.emplace(0.0, run.s);
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            if (du > run.g[static_cast<size_t>(u)]) continue;
            for (auto [v, w] : adj[static_cast<size_t>(u)]) {
                double nv = du + w;
                if (nv < run.g[static_cast<size_t>(v)]) {
                    run.g[static_cast<size_t>(v)] = nv;
                    run.parent[static_cast<size_t>(v)] = u;
                    heap.emplace(nv, v);
                }
            }
        }
        return run;
    });

    // Raw graph ratios, refined by shortcutting in descending order until
    // the remaining raw values cannot beat the refined best.
    struct PairRatio {
        double raw;
        int run_index;
        int target;
    };
    std::vector<PairRatio> pairs;
    for (int ri = 0; ri < n_src; ++ri) {
        const auto& run = runs[static_cast<size_t>(ri)];
        for (int v = 0; v < N; ++v) {
            if (v == run.s) continue;
            double e = dist(run.s, v);
            if (e < cutoff) continue;
            pairs.push_back({run.g[static_cast<size_t>(v)] / e, ri, v});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const PairRatio& a, const PairRatio& b) {
        if (a.raw != b.raw) return a.raw > b.raw;
        if (a.run_index != b.run_index) return a.run_index < b.run_index;
        return a.target < b.target;
    });
    auto refined_ratio = [&](const PairRatio& pr) {
        const auto& run = runs[static_cast<size_t>(pr.run_index)];
        std::vector<int> path;
        for (int v = pr.target; v != -1; v = run.parent[static_cast<size_t>(v)]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        const int L = static_cast<int>(path.size()) - 1;
        double length = 0;
        int i = 0;
        while (i < L) {
            int lo = i + 1, hi = L;
            if (segment_in_tube(path[static_cast<size_t>(i)], path[static_cast<size_t>(L)])) {
                lo = L;  // straight shot to the target
            } else {
                while (lo < hi) {
                    int mid = (lo + hi + 1) / 2;
                    if (segment_in_tube(path[static_cast<size_t>(i)], path[static_cast<size_t>(mid)]))
                        lo = mid;
                    else
                        hi = mid - 1;
                }
            }
            length += dist(path[static_cast<size_t>(i)], path[static_cast<size_t>(lo)]);
            i = lo;
        }
        return length / dist(run.s, pr.target);
    };
    double max_ratio = 0.0;
    const int block = 512;
    for (size_t start = 0; start < pairs.size(); start += block) {
        if (pairs[start].raw <= max_ratio) break;
        int count = static_cast<int>(std::min<size_t>(block, pairs.size() - start));
        auto refined = parallel_map(count, [&](int i) { return refined_ratio(pairs[start + static_cast<size_t>(i)]); });
        for (double v : refined) max_ratio = std::max(max_ratio, v);
    }
    if (pairs_out) *pairs_out = pairs.size();
    return max_ratio;
}

}  // namespace detail

// Empirical surrogate for the Whitney 1-regularity of P(ball): samples the
// ball, maps it through P, and compares graph geodesics in the image with
// Euclidean distances.
inline ImageRegularityReport regularity_probe(const ChevalleyMap<double>& map, const RegularityProbeOptions& opts) {
    if (map.dim() > 3) throw ConfigError("regularity probe supports ambient dimension <= 3");
    if (opts.samples < 16) throw ConfigError("regularity probe needs at least 16 samples");
    ImageRegularityReport rep;
    rep.seed = opts.seed;
    rep.k_neighbors = opts.k_neighbors;
    if (opts.refine) {
        size_t dummy = 0;
        double half = detail::run_probe_once(map, opts.radius, opts.samples / 2, opts.k_neighbors, opts.seed,
                                             opts.sources, opts.cutoff_frac, &dummy);
        rep.refinement.emplace_back(opts.samples / 2, half);
    }
    rep.max_ratio = detail::run_probe_once(map, opts.radius, opts.samples, opts.k_neighbors, opts.seed, opts.sources,
                                           opts.cutoff_frac, &rep.pairs);
    rep.refinement.emplace_back(opts.samples, rep.max_ratio);
    return rep;
}

}  // namespace coxinv
