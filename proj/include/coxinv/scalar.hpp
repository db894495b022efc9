#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "coxinv/errors.hpp"

namespace coxinv {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// The whole pipeline is instantiated twice: over exact rationals (types
// A/B/D and I2(4)) and over doubles (the remaining dihedral angles are
// irrational). ScalarTraits concentrates the differences.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool is_exact = true;
    static bool is_zero(const Rational& v) { return v == 0; }
    static bool is_zero(const Rational& v, const Rational&) { return v == 0; }
    static double to_double(const Rational& v) { return v.template convert_to<double>(); }
    static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
    static Rational default_tolerance() { return Rational(0); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool is_exact = false;
    static bool is_zero(double v) { return v == 0.0; }
    static bool is_zero(double v, double tol) { return std::fabs(v) <= tol; }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
    static double default_tolerance() { return 1e-12; }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::is_exact;

template <class T>
double to_double(const T& v) {
    return ScalarTraits<T>::to_double(v);
}

// Canonical "num/den" rendering, always with an explicit denominator so the
// serialized form is stable.
inline std::string rational_to_string(const Rational& v) {
    return numerator(v).str() + "/" + denominator(v).str();
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw ConfigError("rational with zero denominator: " + s);
        return Rational(num, den);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse rational: " + s);
    }
}

template <class T>
bool points_equal(const std::vector<T>& a, const std::vector<T>& b, double tol) {
    if (a.size() != b.size()) return false;
    if constexpr (is_exact_v<T>) {
        return a == b;
    } else {
        for (size_t i = 0; i < a.size(); ++i)
            if (std::abs(to_double(a[i]) - to_double(b[i])) > tol) return false;
        return true;
    }
}

template <class T>
T scalar_from_string(const std::string& s);

template <>
inline Rational scalar_from_string<Rational>(const std::string& s) {
    return rational_from_string(s);
}

template <>
inline double scalar_from_string<double>(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return std::stod(s);
    return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

}  // namespace coxinv
