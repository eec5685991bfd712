#pragma once

// Affine Weyl group W(A^(1)_{2n+1}) acting on (q, p, alpha, eta) by the
// birational canonical transformations r_0..r_{2n+1} of P(A_{2n+1}*), with
// relation, symplecticity, and equivariance checks.

#include <optional>
#include <string>
#include <vector>

#include "painlax/laxpair.hpp"
#include "painlax/sampling.hpp"

namespace painlax {

template <class S>
struct WeylState {
    Params<S> params;
    PhasePoint<S> x;
};

namespace detail {

template <class S>
inline void check_denominator(int i, const S& den, const char* what) {
    if (scalar_is_zero(value_part(den))) throw DenominatorVanishes(i, what);
}

}  // namespace detail

// r_i on (q, p, alpha, eta); index i in 0..2n+1. The action exists for
// P(A_{2n+1}*) only.
template <class S>
inline WeylState<S> reflect(int i, int n, const Params<S>& prm, const PhasePoint<S>& x) {
    const int m = 2 * n + 2;
    if (i < 0 || i >= m) throw UnsupportedIndex("reflection index out of range");
    if (static_cast<int>(prm.alpha.size()) != m)
        throw ConstraintViolation("reflect: alpha vector length mismatch");
    WeylState<S> out{prm, x};
    const S ai = prm.alpha[i];
    const S one = from_int<S>(1);

    if (i == 0) {
        S den = x.q[0] - one;
        detail::check_denominator(i, den, "q_1 - 1");
        out.x.p[0] = x.p[0] - ai / den;
    } else if (i == 2 * n + 1) {
        // acts through w_{2n+1} -> w (1 - alpha/S): q_j scales by S/(S - alpha),
        // p_j by (S - alpha)/S, with S = sum q_k p_k + eta
        S den = prm.eta;
        for (int j = 0; j < n; ++j) den = den + x.q[j] * x.p[j];
        detail::check_denominator(i, den, "sum q_j p_j + eta");
        S shifted = den - ai;
        detail::check_denominator(i, shifted, "sum q_j p_j + eta - alpha_{2n+1}");
        for (int j = 0; j < n; ++j) {
            out.x.q[j] = x.q[j] * den / shifted;
            out.x.p[j] = x.p[j] * shifted / den;
        }
    } else if (i % 2 == 1) {
        int k = (i + 1) / 2;  // r_{2k-1} shifts q_k by alpha/p_k
        S den = x.p[k - 1];
        detail::check_denominator(i, den, "p_i");
        out.x.q[k - 1] = x.q[k - 1] + ai / den;
    } else if (i == 2 * n) {
        S den = x.q[n - 1] - x.t;
        detail::check_denominator(i, den, "q_n - t");
        out.x.p[n - 1] = x.p[n - 1] - ai / den;
    } else {
        int k = i / 2;  // r_{2k}, k = 1..n-1
        S den = x.q[k - 1] - x.q[k];
        detail::check_denominator(i, den, "q_i - q_{i+1}");
        out.x.p[k - 1] = x.p[k - 1] - ai / den;
        out.x.p[k] = x.p[k] + ai / den;
    }

    // alpha_j -> alpha_j - a_{ij} alpha_i (cyclic Cartan), eta -> eta + (-1)^i alpha_i
    auto cart = [m](int r, int c) {
        if (r == c) return 2;
        if ((r + 1) % m == c || (c + 1) % m == r) return -1;
        return 0;
    };
    for (int j = 0; j < m; ++j)
        out.params.alpha[j] = prm.alpha[j] - from_int<S>(cart(i, j)) * ai;
    out.params.eta = prm.eta + (i % 2 == 0 ? ai : S{} - ai);
    return out;
}

// left-to-right composition; rethrows DenominatorVanishes tagged with the word position
template <class S>
inline WeylState<S> apply_word(const std::vector<int>& word, int n, const Params<S>& prm,
                               const PhasePoint<S>& x) {
    WeylState<S> st{prm, x};
    for (size_t k = 0; k < word.size(); ++k) {
        try {
            st = reflect(word[k], n, st.params, st.x);
        } catch (const DenominatorVanishes& e) {
            throw DenominatorVanishes(e.index,
                                      "at word position " + std::to_string(k) + ": " + e.what());
        }
    }
    return st;
}

// Jacobian of the (q,p)-part of r_i at fixed (alpha, eta, t), exact via duals;
// column order (q_1..q_n, p_1..p_n).
template <class S>
inline std::vector<std::vector<S>> reflect_jacobian(int i, int n, const Params<S>& prm,
                                                    const PhasePoint<S>& x) {
    const int dim = 2 * n;
    std::vector<std::vector<S>> J(dim, std::vector<S>(dim));
    auto prmd = lift(prm);
    for (int c = 0; c < dim; ++c) {
        auto xd = lift(x);
        if (c < n)
            xd.q[c].d = from_int<S>(1);
        else
            xd.p[c - n].d = from_int<S>(1);
        auto img = reflect(i, n, prmd, xd);
        for (int r = 0; r < n; ++r) {
            J[r][c] = img.x.q[r].d;
            J[n + r][c] = img.x.p[r].d;
        }
    }
    return J;
}

// J^T Omega J - Omega with Omega the standard form dq ^ dp
template <class S>
inline std::vector<std::vector<S>> symplectic_defect(const std::vector<std::vector<S>>& J, int n) {
    const int dim = 2 * n;
    auto omega = [&](int r, int c) -> S {
        if (c == r + n) return from_int<S>(1);
        if (r == c + n) return from_int<S>(-1);
        return S{};
    };
    std::vector<std::vector<S>> out(dim, std::vector<S>(dim, S{}));
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            S acc = S{} - omega(r, c);
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) acc = acc + J[k][r] * omega(k, l) * J[l][c];
            out[r][c] = acc;
        }
    return out;
}

struct CheckReport {
    std::string name;
    int trials = 0;
    int rejected = 0;  // resampled near-singular draws
    double max_error = 0.0;
    bool pass = true;
    std::string counterexample;
};

// exact or magnitude-based deviation of a scalar from zero
template <class S>
inline double defect_mag(const S& v) {
    return scalar_mag(v);
}

template <class S>
inline bool weyl_states_equal(const WeylState<S>& a, const WeylState<S>& b, double tol,
                              double* max_err) {
    double err = 0;
    auto upd = [&](const S& u, const S& v) { err = std::max(err, scalar_mag(u - v)); };
    for (size_t j = 0; j < a.x.q.size(); ++j) {
        upd(a.x.q[j], b.x.q[j]);
        upd(a.x.p[j], b.x.p[j]);
    }
    for (size_t j = 0; j < a.params.alpha.size(); ++j) upd(a.params.alpha[j], b.params.alpha[j]);
    upd(a.params.eta, b.params.eta);
    if (max_err) *max_err = std::max(*max_err, err);
    if constexpr (std::is_same_v<S, Exact>) {
        bool eq = true;
        for (size_t j = 0; j < a.x.q.size(); ++j)
            eq = eq && a.x.q[j] == b.x.q[j] && a.x.p[j] == b.x.p[j];
        for (size_t j = 0; j < a.params.alpha.size(); ++j)
            eq = eq && a.params.alpha[j] == b.params.alpha[j];
        return eq && a.params.eta == b.params.eta;
    } else {
        return err <= tol;
    }
}

// smallest reflection denominator over all generators at this state
template <class S>
inline double min_denominator(int n, const Params<S>& prm, const PhasePoint<S>& x) {
    double m = scalar_mag(x.q[0] - from_int<S>(1));
    for (int i = 0; i < n; ++i) m = std::min(m, scalar_mag(x.p[i]));
    for (int i = 0; i + 1 < n; ++i) m = std::min(m, scalar_mag(x.q[i] - x.q[i + 1]));
    m = std::min(m, scalar_mag(x.q[n - 1] - x.t));
    S qp = prm.eta;
    for (int i = 0; i < n; ++i) qp = qp + x.q[i] * x.p[i];
    return std::min(m, scalar_mag(qp));
}

// Pushforward identity for trajectories-to-trajectories invariance:
//   F(r_i(x); r_i(alpha), r_i(eta)) = J_{r_i}(x) F(x; alpha, eta) + dr_i/dt(x).
// The transport term is nonzero only for r_{2n} (its shift carries an
// explicit t); for every other generator the plain pushforward identity
// holds. Exact on the normalized lattice sum(alpha) = 1.
template <class S>
inline double equivariance_defect(int i, int n, const Params<S>& prm, const PhasePoint<S>& x) {
    SystemId sys{SystemKind::PA2n1star, n};
    auto F = vector_field(sys, prm, x);
    auto J = reflect_jacobian(i, n, prm, x);
    auto img = reflect(i, n, prm, x);
    auto Fi = vector_field(sys, img.params, img.x);
    // dr/dt at fixed (q, p) via a t-seeded dual pass
    auto prmd = lift(prm);
    auto xd = lift(x);
    xd.t.d = from_int<S>(1);
    auto imgd = reflect(i, n, prmd, xd);
    double err = 0;
    for (int r = 0; r < 2 * n; ++r) {
        S acc{};
        for (int c = 0; c < n; ++c) acc = acc + J[r][c] * F.dq[c];
        for (int c = 0; c < n; ++c) acc = acc + J[r][n + c] * F.dp[c];
        acc = acc + ((r < n) ? imgd.x.q[r].d : imgd.x.p[r - n].d);
        S rhs = (r < n) ? Fi.dq[r] : Fi.dp[r - n];
        err = std::max(err, scalar_mag(acc - rhs));
    }
    return err;
}

// ---- batched verification suites ----------------------------------------------

namespace detail {

// draw (params, point) with all reflection denominators bounded away from zero;
// counts rejected draws
template <class S>
inline WeylState<S> admissible_state(Sampler& smp, int n, int* rejected) {
    SystemId sys{SystemKind::PA2n1star, n};
    const double floor = std::is_same_v<S, Exact> ? 0.0 : 1e-6;
    for (;;) {
        auto prm = smp.params<S>(sys);
        S t;
        if constexpr (std::is_same_v<S, Exact>) {
            t = Exact(Rational(5, 4)) + smp.rational() * smp.rational();
            if (t.is_zero() || t == Exact(1)) continue;
        } else {
            t = Complex(smp.real(1.3, 2.7), 0);
        }
        auto x = smp.phase<S>(n, t);
        double dmin = min_denominator(n, prm, x);
        if (dmin > floor) return {prm, x};
        ++*rejected;
    }
}

}  // namespace detail

// r_i^2 = 1 and (r_i r_j)^{2 - a_ij} = 1, sampled at random admissible states
template <class S>
inline std::vector<CheckReport> check_relations(int n, int trials, std::uint64_t seed) {
    const int m = 2 * n + 2;
    Sampler smp(seed);
    const double tol = 1e-10;
    auto cart = [m](int r, int c) {
        if (r == c) return 2;
        if ((r + 1) % m == c || (c + 1) % m == r) return -1;
        return 0;
    };
    std::vector<std::pair<std::string, std::vector<int>>> relations;
    for (int i = 0; i < m; ++i)
        relations.push_back({"r" + std::to_string(i) + "^2", {i, i}});
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            int ord = 2 - cart(i, j);
            std::vector<int> word;
            for (int k = 0; k < ord; ++k) {
                word.push_back(i);
                word.push_back(j);
            }
            relations.push_back(
                {"(r" + std::to_string(i) + " r" + std::to_string(j) + ")^" + std::to_string(ord),
                 word});
        }
    std::vector<CheckReport> out;
    for (const auto& [name, word] : relations) {
        CheckReport rep;
        rep.name = name;
        while (rep.trials < trials) {
            auto st = detail::admissible_state<S>(smp, n, &rep.rejected);
            try {
                auto img = apply_word(word, n, st.params, st.x);
                ++rep.trials;
                if (!weyl_states_equal(img, st, tol, &rep.max_error)) {
                    rep.pass = false;
                    if (rep.counterexample.empty())
                        rep.counterexample = "trial " + std::to_string(rep.trials);
                }
            } catch (const DenominatorVanishes&) {
                ++rep.rejected;  // word passed through a singular locus; resample
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

template <class S>
inline CheckReport check_symplectic(int i, int n, int samples, std::uint64_t seed) {
    Sampler smp(seed);
    CheckReport rep;
    rep.name = "symplectic r" + std::to_string(i);
    while (rep.trials < samples) {
        auto st = detail::admissible_state<S>(smp, n, &rep.rejected);
        try {
            auto J = reflect_jacobian(i, n, st.params, st.x);
            auto D = symplectic_defect(J, n);
            ++rep.trials;
            for (const auto& row : D)
                for (const auto& v : row) {
                    rep.max_error = std::max(rep.max_error, scalar_mag(v));
                    bool ok = std::is_same_v<S, Exact> ? scalar_is_zero(v)
                                                       : scalar_mag(v) <= 1e-10;
                    if (!ok) rep.pass = false;
                }
        } catch (const DenominatorVanishes&) {
            ++rep.rejected;
        }
    }
    return rep;
}

template <class S>
inline CheckReport check_equivariance(int i, int n, int samples, std::uint64_t seed) {
    Sampler smp(seed);
    CheckReport rep;
    rep.name = "equivariance r" + std::to_string(i);
    while (rep.trials < samples) {
        auto st = detail::admissible_state<S>(smp, n, &rep.rejected);
        try {
            double err = equivariance_defect(i, n, st.params, st.x);
            ++rep.trials;
            rep.max_error = std::max(rep.max_error, err);
            bool ok = std::is_same_v<S, Exact> ? err == 0.0 : err <= 1e-8;
            if (!ok) rep.pass = false;
        } catch (const DenominatorVanishes&) {
            ++rep.rejected;
        } catch (const SingularTime&) {
            ++rep.rejected;
        }
    }
    return rep;
}

}  // namespace painlax
