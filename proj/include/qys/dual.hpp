// First-order dual numbers, nestable to obtain exact higher-order partials.
#pragma once

#include <cmath>
#include <type_traits>

namespace qys {

/// Dual number carrying one directional derivative. Nesting three levels,
/// Dual<Dual<Dual<double>>>, yields exact third-order mixed partials of any
/// arithmetic expression built from the operations below.
template <typename T>
struct Dual {
    T v{};  // value
    T d{};  // directional derivative

    constexpr Dual() = default;
    constexpr Dual(double s) : v(s), d() {}  // broadcasts through nesting levels
    constexpr Dual(const T& value, const T& deriv) : v(value), d(deriv) {}
};

using d1 = Dual<double>;
using d2 = Dual<d1>;
using d3 = Dual<d2>;

template <typename T>
constexpr double leading_value(const Dual<T>& x) {
    if constexpr (std::is_same_v<T, double>) {
        return x.v;
    } else {
        return leading_value(x.v);
    }
}
constexpr double leading_value(double x) { return x; }

// arithmetic

template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
    return {a.v + b.v, a.d + b.d};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
    return {a.v - b.v, a.d - b.d};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) {
    return {-a.v, -a.d};
}
template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a) {
    return a;
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
    return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    const T q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}

// double mixed forms; avoid widening the scalar into a full dual
template <typename T>
constexpr Dual<T> operator+(const Dual<T>& a, double s) {
    return {a.v + s, a.d};
}
template <typename T>
constexpr Dual<T> operator+(double s, const Dual<T>& a) {
    return {a.v + s, a.d};
}
template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a, double s) {
    return {a.v - s, a.d};
}
template <typename T>
constexpr Dual<T> operator-(double s, const Dual<T>& a) {
    return {s - a.v, -a.d};
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, double s) {
    return {a.v * s, a.d * s};
}
template <typename T>
constexpr Dual<T> operator*(double s, const Dual<T>& a) {
    return {a.v * s, a.d * s};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, double s) {
    return {a.v / s, a.d / s};
}
template <typename T>
constexpr Dual<T> operator/(double s, const Dual<T>& a) {
    return Dual<T>(s) / a;
}

// transcendental functions; each propagates the chain rule one level down

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;

template <typename T>
Dual<T> exp(const Dual<T>& x) {
    const T e = exp(x.v);
    return {e, e * x.d};
}
template <typename T>
Dual<T> log(const Dual<T>& x) {
    return {log(x.v), x.d / x.v};
}
template <typename T>
Dual<T> sin(const Dual<T>& x) {
    return {sin(x.v), cos(x.v) * x.d};
}
template <typename T>
Dual<T> cos(const Dual<T>& x) {
    return {cos(x.v), -sin(x.v) * x.d};
}
template <typename T>
Dual<T> sinh(const Dual<T>& x) {
    return {sinh(x.v), cosh(x.v) * x.d};
}
template <typename T>
Dual<T> cosh(const Dual<T>& x) {
    return {cosh(x.v), sinh(x.v) * x.d};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& x) {
    const T r = sqrt(x.v);
    return {r, x.d / (2.0 * r)};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, double p) {
    const T pm1 = pow(x.v, p - 1.0);
    return {pm1 * x.v, p * pm1 * x.d};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, const Dual<T>& y) {
    // x^y = exp(y log x); requires x > 0
    return exp(y * log(x));
}
template <typename T>
Dual<T> pow(double x, const Dual<T>& y) {
    const T p = pow(x, y.v);
    return {p, log(x) * p * y.d};
}

}  // namespace qys
