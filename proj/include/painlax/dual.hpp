#pragma once

// Forward-mode dual numbers over an arbitrary scalar field. Seeding the
// derivative slot with d/dt (or d/dq_i) of each input makes every computed
// expression carry its exact derivative; no finite differences anywhere.

#include "painlax/scalar.hpp"

namespace painlax {

template <class S>
struct Dual {
    S v{};  // value
    S d{};  // derivative

    Dual() = default;
    Dual(S value) : v(std::move(value)) {}  // NOLINT: constants have zero derivative
    Dual(S value, S deriv) : v(std::move(value)), d(std::move(deriv)) {}

    Dual operator-() const { return {S() - v, S() - d}; }

    friend Dual operator+(const Dual& x, const Dual& y) { return {x.v + y.v, x.d + y.d}; }
    friend Dual operator-(const Dual& x, const Dual& y) { return {x.v - y.v, x.d - y.d}; }
    friend Dual operator*(const Dual& x, const Dual& y) {
        return {x.v * y.v, x.v * y.d + x.d * y.v};
    }
    friend Dual operator/(const Dual& x, const Dual& y) {
        S q = x.v / y.v;
        return {q, (x.d - q * y.d) / y.v};
    }
    Dual& operator+=(const Dual& y) { return *this = *this + y; }
    Dual& operator-=(const Dual& y) { return *this = *this - y; }
    Dual& operator*=(const Dual& y) { return *this = *this * y; }
    Dual& operator/=(const Dual& y) { return *this = *this / y; }

    friend bool operator==(const Dual& x, const Dual& y) { return x.v == y.v && x.d == y.d; }
};

template <class S>
struct scalar_traits {
    using base = S;
};
template <class S>
struct scalar_traits<Dual<S>> {
    using base = typename scalar_traits<S>::base;
};

// generic helpers for duals
template <class S>
inline bool scalar_is_zero(const Dual<S>& s) {
    return scalar_is_zero(s.v) && scalar_is_zero(s.d);
}
template <class S>
inline double scalar_mag(const Dual<S>& s) {
    return scalar_mag(s.v);
}
template <class S>
inline std::string scalar_str(const Dual<S>& s) {
    return scalar_str(s.v) + " [d: " + scalar_str(s.d) + "]";
}

// value part, stripping any dual layers (for domain checks on seeded inputs)
template <class S>
inline const S& value_part(const S& s) {
    return s;
}
template <class S>
inline auto value_part(const Dual<S>& s) -> decltype(value_part(s.v)) {
    return value_part(s.v);
}

}  // namespace painlax

// from_int / sqrt_int / ratio for Dual<S> via template specialization of the
// primary templates in scalar.hpp
namespace painlax {

template <>
inline Dual<Exact> from_int<Dual<Exact>>(long long v) {
    return Dual<Exact>(from_int<Exact>(v));
}
template <>
inline Dual<Complex> from_int<Dual<Complex>>(long long v) {
    return Dual<Complex>(from_int<Complex>(v));
}
template <>
inline Dual<Exact> sqrt_int<Dual<Exact>>(long long m) {
    return Dual<Exact>(sqrt_int<Exact>(m));
}
template <>
inline Dual<Complex> sqrt_int<Dual<Complex>>(long long m) {
    return Dual<Complex>(sqrt_int<Complex>(m));
}

}  // namespace painlax
