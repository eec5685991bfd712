#pragma once

// Coefficient fields for the two arithmetic modes.
//
// Exact mode works in Q(sqrt(rad)): values a + b*sqrt(rad) with arbitrary
// precision rationals a, b. Pure rationals carry rad == 0. The radical is
// needed because the (2n-1,1) Lax matrices live in Q(sqrt(2(2n-1))); all
// other partitions stay in plain Q. Float mode is std::complex<double>.

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

#include "painlax/errors.hpp"

namespace painlax {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

class Exact {
  public:
    Exact() = default;
    Exact(int v) : a_(v) {}                // NOLINT: implicit by design
    Exact(long long v) : a_(v) {}          // NOLINT
    Exact(Rational v) : a_(std::move(v)) {}  // NOLINT
    Exact(Rational num, Rational den) : a_(std::move(num)) { a_ /= den; }

    // sqrt(m) for m >= 0; exact if m is a perfect square, else adjoins the radical.
    static Exact sqrt_int(long long m) {
        if (m < 0) throw Error("Exact::sqrt_int of negative integer");
        long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(m))));
        while (r * r > m) --r;
        while ((r + 1) * (r + 1) <= m) ++r;
        if (r * r == m) return Exact(Rational(r));
        Exact out;
        out.b_ = 1;
        out.rad_ = m;
        return out;
    }

    const Rational& rat() const { return a_; }
    const Rational& rad_part() const { return b_; }
    long long radicand() const { return rad_; }
    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    Exact operator-() const {
        Exact out(*this);
        out.a_ = -out.a_;
        out.b_ = -out.b_;
        return out;
    }

    friend Exact operator+(const Exact& x, const Exact& y) {
        Exact out;
        out.a_ = x.a_ + y.a_;
        out.b_ = x.b_ + y.b_;
        out.rad_ = merged_rad(x, y);
        out.normalize();
        return out;
    }
    friend Exact operator-(const Exact& x, const Exact& y) { return x + (-y); }
    friend Exact operator*(const Exact& x, const Exact& y) {
        long long m = merged_rad(x, y);
        Exact out;
        out.a_ = x.a_ * y.a_ + x.b_ * y.b_ * Rational(m);
        out.b_ = x.a_ * y.b_ + x.b_ * y.a_;
        out.rad_ = m;
        out.normalize();
        return out;
    }
    friend Exact operator/(const Exact& x, const Exact& y) { return x * y.inv(); }

    Exact& operator+=(const Exact& y) { return *this = *this + y; }
    Exact& operator-=(const Exact& y) { return *this = *this - y; }
    Exact& operator*=(const Exact& y) { return *this = *this * y; }
    Exact& operator/=(const Exact& y) { return *this = *this / y; }

    Exact inv() const {
        if (is_zero()) throw Error("Exact: division by zero");
        if (b_ == 0) return Exact(Rational(1) / a_);
        // 1/(a + b sqrt(m)) = (a - b sqrt(m)) / (a^2 - m b^2); nonzero since m is not a square
        Rational norm = a_ * a_ - Rational(rad_) * b_ * b_;
        Exact out;
        out.a_ = a_ / norm;
        out.b_ = -b_ / norm;
        out.rad_ = rad_;
        out.normalize();
        return out;
    }

    friend bool operator==(const Exact& x, const Exact& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.rad_ == y.rad_);
    }
    friend bool operator!=(const Exact& x, const Exact& y) { return !(x == y); }

    double approx() const {
        double v = to_double(a_);
        if (b_ != 0) v += to_double(b_) * std::sqrt(static_cast<double>(rad_));
        return v;
    }

    std::string str() const {
        std::ostringstream os;
        os << a_;
        if (b_ != 0) os << (b_ > 0 ? "+" : "") << b_ << "*sqrt(" << rad_ << ")";
        return os.str();
    }

  private:
    void normalize() {
        if (b_ == 0) rad_ = 0;
    }
    static long long merged_rad(const Exact& x, const Exact& y) {
        if (x.rad_ == 0) return y.rad_;
        if (y.rad_ == 0 || y.rad_ == x.rad_) return x.rad_;
        throw Error("Exact: mixed radicands " + std::to_string(x.rad_) + " and " +
                    std::to_string(y.rad_));
    }

    Rational a_ = 0;
    Rational b_ = 0;      // coefficient of sqrt(rad_)
    long long rad_ = 0;   // 0 iff b_ == 0
};

// ---- generic scalar helpers -------------------------------------------------

template <class S>
inline S from_int(long long v) {
    return S(static_cast<double>(v));
}
template <>
inline Exact from_int<Exact>(long long v) {
    return Exact(v);
}
template <>
inline Complex from_int<Complex>(long long v) {
    return Complex(static_cast<double>(v), 0.0);
}

template <class S>
inline S ratio(long long num, long long den) {
    return from_int<S>(num) / from_int<S>(den);
}

inline bool scalar_is_zero(const Exact& s) { return s.is_zero(); }
inline bool scalar_is_zero(const Complex& s) { return s == Complex(0.0, 0.0); }

inline double scalar_mag(const Exact& s) { return std::abs(s.approx()); }
inline double scalar_mag(const Complex& s) { return std::abs(s); }

// sqrt of a nonnegative integer in the target field
template <class S>
inline S sqrt_int(long long m) {
    return S(std::sqrt(static_cast<double>(m)));
}
template <>
inline Exact sqrt_int<Exact>(long long m) {
    return Exact::sqrt_int(m);
}
template <>
inline Complex sqrt_int<Complex>(long long m) {
    return Complex(std::sqrt(static_cast<double>(m)), 0.0);
}

// integer power, negative exponents via inverse
template <class S>
inline S int_pow(S base, long long e) {
    if (e < 0) return from_int<S>(1) / int_pow(base, -e);
    S out = from_int<S>(1);
    while (e > 0) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

inline std::string scalar_str(const Exact& s) { return s.str(); }
inline std::string scalar_str(const Complex& s) {
    std::ostringstream os;
    os << s.real();
    if (s.imag() != 0) os << (s.imag() > 0 ? "+" : "") << s.imag() << "i";
    return os.str();
}

}  // namespace painlax
