#pragma once

// Seeded random sampling of admissible parameter sets and phase points.
// All randomness in the library flows through one mt19937_64 per run; exact
// mode draws small rationals so repeated exact arithmetic stays fast.

#include <random>

#include "painlax/psys.hpp"

namespace painlax {

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    // rational in [-3, 3] with denominator <= 12, never exactly the excluded values
    Exact rational() {
        std::uniform_int_distribution<int> num(-36, 36);
        std::uniform_int_distribution<int> den(1, 12);
        return Exact(Rational(num(rng_), den(rng_)));
    }
    Exact nonzero_rational() {
        for (;;) {
            Exact v = rational();
            if (!v.is_zero()) return v;
        }
    }

    Complex complex_unit() {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        return {u(rng_), u(rng_)};
    }
    double real(double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(rng_);
    }

    template <class S>
    S draw();

    template <class S>
    S draw_nonzero() {
        for (;;) {
            S v = draw<S>();
            if (scalar_mag(v) > 0.05) return v;
        }
    }

    // alpha_0..alpha_{count-1} with exact sum 1
    template <class S>
    std::vector<S> alphas(int count) {
        std::vector<S> a;
        S sum{};
        for (int i = 0; i + 1 < count; ++i) {
            a.push_back(draw<S>());
            sum = sum + a.back();
        }
        a.push_back(from_int<S>(1) - sum);
        return a;
    }

    template <class S>
    Params<S> params(const SystemId& sys) {
        Params<S> prm;
        prm.alpha = alphas<S>(sys.alpha_count());
        if (sys.has_eta()) prm.eta = draw<S>();
        return prm;
    }

    // phase point at the given time, components bounded away from 0
    template <class S>
    PhasePoint<S> phase(int n, S t) {
        PhasePoint<S> x;
        for (int i = 0; i < n; ++i) {
            x.q.push_back(draw_nonzero<S>());
            x.p.push_back(draw_nonzero<S>());
        }
        x.t = std::move(t);
        return x;
    }

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

template <>
inline Exact Sampler::draw<Exact>() {
    return rational();
}
template <>
inline Complex Sampler::draw<Complex>() {
    return complex_unit();
}

}  // namespace painlax
