#pragma once

#include <cstdint>
#include <vector>

#include "coxinv/multi_index.hpp"
#include "coxinv/poly.hpp"
#include "coxinv/scalar.hpp"

namespace coxinv::testing {

// Deterministic RNG for property tests (shared across suites).
struct TestRng {
    uint64_t state;
    explicit TestRng(uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ull) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
    Rational rational(int num_mag = 9, int den_max = 4) {
        int num = range(-num_mag, num_mag);
        int den = range(1, den_max);
        return Rational(num, den);
    }
    std::vector<Rational> point(int n, int num_mag = 9, int den_max = 4) {
        std::vector<Rational> x;
        for (int i = 0; i < n; ++i) x.push_back(rational(num_mag, den_max));
        return x;
    }
    Poly<Rational> poly(int nvars, int maxdeg, int terms) {
        Poly<Rational> p(nvars);
        for (int t = 0; t < terms; ++t) {
            MultiIndex k(nvars);
            int budget = range(0, maxdeg);
            for (int i = 0; i < nvars && budget > 0; ++i) {
                int e = range(0, budget);
                k[i] = static_cast<uint32_t>(e);
                budget -= e;
            }
            p.add_term(k, rational());
        }
        return p;
    }
};

inline Poly<Rational> parse_mono(int nvars, std::vector<uint32_t> exps, Rational c) {
    return Poly<Rational>::monomial(MultiIndex(std::move(exps)), c);
}

}  // namespace coxinv::testing
