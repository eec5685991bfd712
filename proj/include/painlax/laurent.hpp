#pragma once

// Laurent polynomials in the spectral variable z over an arbitrary scalar
// field. Only nonzero coefficients are stored; exponents may be negative.

#include <map>
#include <string>

#include "painlax/scalar.hpp"

namespace painlax {

template <class S>
class LaurentPoly {
  public:
    using coeff_map = std::map<int, S>;

    LaurentPoly() = default;
    explicit LaurentPoly(S c, int exp = 0) { add(exp, std::move(c)); }

    void add(int exp, const S& c) {
        if (scalar_is_zero(c)) return;
        auto it = coeffs_.find(exp);
        if (it == coeffs_.end()) {
            coeffs_.emplace(exp, c);
        } else {
            it->second = it->second + c;
            if (scalar_is_zero(it->second)) coeffs_.erase(it);
        }
    }

    const coeff_map& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    S coeff(int exp) const {
        auto it = coeffs_.find(exp);
        return it == coeffs_.end() ? S{} : it->second;
    }

    int min_exp() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_exp() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    friend LaurentPoly operator+(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly out = x;
        for (const auto& [e, c] : y.coeffs_) out.add(e, c);
        return out;
    }
    friend LaurentPoly operator-(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly out = x;
        for (const auto& [e, c] : y.coeffs_) out.add(e, S{} - c);
        return out;
    }
    friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) {
        LaurentPoly out;
        for (const auto& [ex, cx] : x.coeffs_)
            for (const auto& [ey, cy] : y.coeffs_) out.add(ex + ey, cx * cy);
        return out;
    }
    friend LaurentPoly operator*(const S& s, const LaurentPoly& y) {
        LaurentPoly out;
        for (const auto& [e, c] : y.coeffs_) out.add(e, s * c);
        return out;
    }
    LaurentPoly operator-() const {
        LaurentPoly out;
        for (const auto& [e, c] : coeffs_) out.add(e, S{} - c);
        return out;
    }
    LaurentPoly& operator+=(const LaurentPoly& y) { return *this = *this + y; }
    LaurentPoly& operator-=(const LaurentPoly& y) { return *this = *this - y; }

    friend bool operator==(const LaurentPoly& x, const LaurentPoly& y) {
        return (x - y).is_zero();
    }

    // z d/dz: multiplies each z^k coefficient by k
    LaurentPoly z_ddz() const {
        LaurentPoly out;
        for (const auto& [e, c] : coeffs_) out.add(e, from_int<S>(e) * c);
        return out;
    }

    S eval(const S& z) const {
        S out{};
        for (const auto& [e, c] : coeffs_) out = out + c * int_pow(z, e);
        return out;
    }

    double max_coeff_mag() const {
        double m = 0;
        for (const auto& [e, c] : coeffs_) m = std::max(m, scalar_mag(c));
        return m;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (const auto& [e, c] : coeffs_) {
            if (!out.empty()) out += " + ";
            out += "(" + scalar_str(c) + ")";
            if (e != 0) out += "*z^" + std::to_string(e);
        }
        return out;
    }

  private:
    coeff_map coeffs_;
};

}  // namespace painlax
