#pragma once

// Explicit isomonodromic Lax pairs (B, M) for the four partitions, the
// parameter dressing (alpha, eta) -> (kappa, rho), and the compatibility
// residual  R = c(t) dM/dt - z dB/dz - [B, M],  which vanishes identically
// on-shell. Every fractional power of t is rewritten as a power of the
// branch variable s, so exact-mode entries live in Q(s) (adjoining
// sqrt(2(2n-1)) for the (2n-1,1) partition only).

#include <vector>

#include "painlax/psys.hpp"
#include "painlax/sampling.hpp"

namespace painlax {

// kappa_0..kappa_{N-1} under the gauge kappa_0 = 0, plus rho_1 (and rho_2
// for (n,n,1)); only differences of kappas enter the matrices.
template <class S>
struct KappaSet {
    std::vector<S> kappa;
    S rho1{};
    S rho2{};

    // kappa_k - kappa_{k-1}, cyclic (k = 1..N; k = N wraps to kappa_0 - kappa_{N-1})
    S diff(int k) const {
        int N = static_cast<int>(kappa.size());
        return kappa[k % N] - kappa[k - 1];
    }
};

// Branch variable s for the time substitution of each partition:
//   (n+1,n+1): t = s^{-(n+1)}        (s = t_1 = t^{-1/(n+1)})
//   (2n-1,1):  t = sqrt(2(2n-1))/2 s (s = t_1, t = sqrt((2n-1)/2) t_1)
//   (2n,1):    t = -(n/4) s^2        (s = t_1; "sqrt(-nt)" denotes 2/s)
//   (n,n,1):   t = s^{-n}            (s = t_1 = t^{-1/n})
template <class S>
struct RootOfT {
    PartitionKind kind;
    int n;
    S s;

    RootOfT(PartitionKind k, int order, S branch) : kind(k), n(order), s(std::move(branch)) {
        if (scalar_is_zero(value_part(s))) throw SingularTime("branch variable s must be nonzero");
    }

    S t() const {
        switch (kind) {
            case PartitionKind::NplusNplus: return int_pow(s, -(n + 1));
            case PartitionKind::TwoNminusOne_One:
                return sqrt_int<S>(2 * (2 * n - 1)) / from_int<S>(2) * s;
            case PartitionKind::TwoN_One:
                return S{} - ratio<S>(n, 4) * s * s;
            case PartitionKind::N_N_One: return int_pow(s, -n);
        }
        return S{};
    }

    S dt_ds() const {
        switch (kind) {
            case PartitionKind::NplusNplus:
                return from_int<S>(-(n + 1)) * int_pow(s, -(n + 2));
            case PartitionKind::TwoNminusOne_One:
                return sqrt_int<S>(2 * (2 * n - 1)) / from_int<S>(2);
            case PartitionKind::TwoN_One: return S{} - ratio<S>(n, 2) * s;
            case PartitionKind::N_N_One: return from_int<S>(-n) * int_pow(s, -(n + 1));
        }
        return S{};
    }
};

// ---- parameter dressing ------------------------------------------------------
//
// All four dictionaries reduce to prescribing the pairings (kappa|alpha_j^vee),
// which fixes the cyclic differences D_k = kappa_k - kappa_{k-1} up to the
// trace gauge; centering makes M traceless and kappa_0 = 0 picks the
// representative. rho_1 (rho_2) then come from the eta / tail-alpha lines.

template <class S>
inline KappaSet<S> dress_parameters(const PartitionSpec& spec, const Params<S>& prm) {
    const int n = spec.n;
    const int N = spec.size();
    const auto& a = prm.alpha;
    const SystemId sys = system_of(spec);
    if (static_cast<int>(a.size()) != sys.alpha_count())
        throw ConstraintViolation("alpha vector has wrong length for the partition");
    detail::check_alpha_sum(prm, true);

    auto sv = spec.grading();
    // pairing targets beta_j = (kappa|alpha_j^vee)
    std::vector<S> beta(N, S{});
    int equations = N;  // (n,n,1) prescribes only j = 0..2n-1
    switch (spec.kind) {
        case PartitionKind::NplusNplus:
            for (int j = 0; j < N; ++j) beta[j] = from_int<S>(n + 1) * a[j];
            break;
        case PartitionKind::TwoNminusOne_One: {
            S m = from_int<S>(2 * n - 1);
            beta[0] = m * (a[0] + a[1]);
            beta[1] = m * a[2 * n];
            for (int j = 2; j <= 2 * n - 1; ++j) beta[j] = m * a[2 * n - j + 1];
            break;
        }
        case PartitionKind::TwoN_One: {
            S m = from_int<S>(2 * n);
            beta[0] = m * (a[2 * n] + a[2 * n + 1]);
            for (int j = 1; j <= 2 * n; ++j) beta[j] = m * a[j - 1];
            break;
        }
        case PartitionKind::N_N_One:
            if (n < 2)
                throw UnsupportedRank("the (n,n,1) Lax realization requires n >= 2");
            for (int j = 0; j <= 2 * n - 1; ++j) beta[j] = from_int<S>(n) * a[j];
            equations = N - 1;
            break;
    }

    // D_{j+1} = D_j + beta_j - s_j with provisional D_0 = D_N = 0, then center.
    std::vector<S> d(N + 1, S{});  // d[k] = D_k, k = 1..N; d[0] unused
    S cur{};
    for (int j = 0; j < equations; ++j) {
        cur = cur + beta[j] - from_int<S>(sv[j]);
        d[j + 1] = cur;
    }
    if (equations == N) {
        // cycle closure <=> sum(alpha) = 1; checked above, assert the wrap
        S wrap = d[N];
        if constexpr (std::is_same_v<S, Complex>) {
            if (scalar_mag(wrap) > 1e-10) throw ConstraintViolation("dressing cycle fails to close");
        } else {
            if (!scalar_is_zero(wrap)) throw ConstraintViolation("dressing cycle fails to close");
        }
        d[N] = S{};
    }
    S mean{};
    for (int k = 1; k <= N; ++k) mean = mean + d[k];
    mean = mean / from_int<S>(N);
    for (int k = 1; k <= N; ++k) d[k] = d[k] - mean;

    KappaSet<S> out;
    out.kappa.assign(N, S{});
    for (int k = 1; k < N; ++k) out.kappa[k] = out.kappa[k - 1] + d[k];

    switch (spec.kind) {
        case PartitionKind::NplusNplus: {
            S sum{};
            for (int j = 0; j <= n; ++j) sum = sum + d[2 * j + 1];
            out.rho1 = prm.eta + sum / from_int<S>(n + 1);
            break;
        }
        case PartitionKind::TwoNminusOne_One:
            out.rho1 = a[0] - (from_int<S>(1) + d[1]) / from_int<S>(2 * n - 1);
            break;
        case PartitionKind::TwoN_One:
            out.rho1 = S{} - a[2 * n] - d[N] / from_int<S>(2 * n);
            break;
        case PartitionKind::N_N_One: {
            S sum_odd{}, sum_even{};
            for (int i = 1; i <= n; ++i) {
                sum_odd = sum_odd + d[2 * i - 1];
                sum_even = sum_even + d[2 * i];
            }
            out.rho1 = prm.eta + sum_odd / from_int<S>(n);
            out.rho2 = prm.eta - a[2 * n + 1] - sum_even / from_int<S>(n);
            break;
        }
    }
    return out;
}

// inverse direction: the pairings (kappa|alpha_j^vee) induced by a KappaSet
template <class S>
inline std::vector<S> kappa_pairings(const PartitionSpec& spec, const KappaSet<S>& ks) {
    int N = spec.size();
    auto sv = spec.grading();
    std::vector<S> out(N);
    for (int j = 0; j < N; ++j) {
        S dj = (j == 0) ? ks.diff(N) : ks.diff(j);
        S dj1 = ks.diff(j + 1 > N ? 1 : j + 1);
        out[j] = from_int<S>(sv[j]) - dj + dj1;
    }
    return out;
}

// ---- Lax data ----------------------------------------------------------------

template <class S>
struct LaxData {
    PartitionSpec spec;
    Params<S> params;
    KappaSet<S> kappas;
    std::vector<S> q, p;
    AuxState<S> aux;
    RootOfT<S> root;

    PhasePoint<S> phase() const { return {q, p, root.t()}; }
};

template <class S>
inline LaxData<S> make_lax_data(const PartitionSpec& spec, const Params<S>& prm,
                                std::vector<S> q, std::vector<S> p, AuxState<S> aux, S s) {
    if (spec.kind == PartitionKind::N_N_One && spec.n < 2)
        throw UnsupportedRank("the (n,n,1) Lax realization requires n >= 2");
    aux.require(spec.kind);
    if (static_cast<int>(q.size()) != spec.n || static_cast<int>(p.size()) != spec.n)
        throw DimensionError("phase point has wrong dimension");
    RootOfT<S> root(spec.kind, spec.n, std::move(s));
    S t = root.t();
    if (scalar_is_zero(value_part(t)))
        throw SingularTime("branch value puts t at the fixed singular point 0");
    if ((spec.kind == PartitionKind::NplusNplus || spec.kind == PartitionKind::N_N_One) &&
        scalar_is_zero(value_part(t - from_int<S>(1))))
        throw SingularTime("branch value puts t at the fixed singular point 1");
    return LaxData<S>{spec, prm, dress_parameters(spec, prm), std::move(q), std::move(p),
                      std::move(aux), std::move(root)};
}

// random branch value whose induced time avoids the fixed singular points
template <class S>
inline S sample_branch(Sampler& smp, PartitionKind kind, int n) {
    for (;;) {
        S s = smp.draw_nonzero<S>();
        RootOfT<S> root(kind, n, s);
        S t = root.t();
        if (scalar_is_zero(value_part(t))) continue;
        if (scalar_mag(t - from_int<S>(1)) < 1e-6) continue;
        if constexpr (std::is_same_v<S, Complex>) {
            if (std::abs(t) < 1e-3) continue;
        }
        return s;
    }
}

namespace detail {

template <class S>
inline void check_gauge(const AuxState<S>& aux) {
    if (scalar_is_zero(value_part(aux.first)) ||
        (aux.kind == PartitionKind::N_N_One && scalar_is_zero(value_part(aux.second))))
        throw GaugeSingularity("vanishing gauge variable in Lax entries");
}

}  // namespace detail

// ---- B and M, partition by partition ------------------------------------------

template <class S>
inline LaurentMatrix<S> build_B(const LaxData<S>& data) {
    const int n = data.spec.n;
    const int N = data.spec.size();
    const auto& a = data.params.alpha;
    const auto& q = data.q;
    const auto& p = data.p;
    const S s = data.root.s;
    const S t = data.root.t();
    const S one = from_int<S>(1);
    detail::check_gauge(data.aux);
    LaurentMatrix<S> B(N);

    switch (data.spec.kind) {
        case PartitionKind::NplusNplus: {
            const S w = data.aux.first;
            const S eta = data.params.eta;
            auto amod = [&](int i) { return a[((i % (2 * n + 2)) + 2 * n + 2) % (2 * n + 2)]; };
            auto asum = [&](int i) {  // unified alpha-sum of u'_{2i-1}, i = 1..n+1
                S out{};
                for (int j = 0; j <= n; ++j)
                    out = out + ratio<S>(n - 2 * j, 2 * n + 2) *
                                    (amod(2 * i + 2 * j - 1) + amod(2 * i + 2 * j));
                return out;
            };
            for (int i = 1; i <= n; ++i) {
                S odd{};
                for (int j = 1; j <= i - 1; ++j) odd = odd - q[i - 1] * (q[j - 1] - one) * p[j - 1];
                for (int j = i; j <= n; ++j) odd = odd - q[i - 1] * (q[j - 1] - t) * p[j - 1];
                odd = odd - eta * q[i - 1] + (t - one) / from_int<S>(n + 1) * eta +
                      asum(i) * (t - one);
                B.add(2 * i - 1, 2 * i - 1, 0, odd);
                S even{};
                for (int j = 1; j <= i; ++j) even = even + q[i - 1] * (q[j - 1] - one) * p[j - 1];
                for (int j = i + 1; j <= n; ++j)
                    even = even + q[i - 1] * (q[j - 1] - t) * p[j - 1];
                B.add(2 * i, 2 * i, 0, even + eta * q[i - 1]);
            }
            S u21{};
            for (int j = 1; j <= n; ++j) u21 = u21 - t * (q[j - 1] - one) * p[j - 1];
            u21 = u21 - (from_int<S>(n) * t + one) / from_int<S>(n + 1) * eta +
                  asum(n + 1) * (t - one);
            B.add(2 * n + 1, 2 * n + 1, 0, u21);
            S u22 = data.params.eta;
            for (int j = 1; j <= n; ++j) u22 = u22 + (q[j - 1] - t) * p[j - 1];
            B.add(2 * n + 2, 2 * n + 2, 0, u22);
            for (int i = 1; i <= n; ++i) {
                S br{};
                for (int j = 1; j <= i; ++j) br = br + (q[j - 1] - one) * p[j - 1];
                for (int j = i + 1; j <= n; ++j) br = br + (q[j - 1] - t) * p[j - 1];
                B.add(2 * i - 1, 2 * i, 0, S{} - int_pow(s, -i) / w * (br + eta));
            }
            S brn = eta;
            for (int j = 1; j <= n; ++j) brn = brn + (q[j - 1] - t) * p[j - 1];
            B.add(2 * n + 1, 2 * n + 2, 0, S{} - brn / w);
            B.add(2 * n + 2, 1, 1, (t - one) * w * s / from_int<S>(n + 1));
            for (int i = 1; i <= n; ++i)
                B.add(2 * i, 2 * i + 1, 1,
                      (t - one) * w * int_pow(s, i + 1) * q[i - 1] / from_int<S>(n + 1));
            S band = S{} - (t - one) * s / from_int<S>(n + 1);
            for (int i = 1; i <= n; ++i) B.add(2 * i - 1, 2 * i + 1, 1, band);
            B.add(2 * n + 1, 1, 1, band);
            break;
        }
        case PartitionKind::TwoNminusOne_One: {
            const S lam = data.aux.first;
            const S r = sqrt_int<S>(2 * (2 * n - 1));
            const S m = from_int<S>(2 * n - 1);
            B.add(1, 1, 0, q[n - 1] + ratio<S>(n - 1, 2 * n - 1) * t);
            for (int i = 1; i <= n - 1; ++i) {
                S ps{};
                for (int j = 1; j <= i; ++j) ps = ps + p[n - j];
                B.add(2 * i, 2 * i, 0, ps - q[n - i] - ratio<S>(n, 2 * n - 1) * t);
                B.add(2 * i + 1, 2 * i + 1, 0,
                      S{} - ps + q[n - i - 1] + ratio<S>(n - 1, 2 * n - 1) * t);
            }
            B.add(2 * n, 2 * n, 0, S{} - q[0]);
            B.add(2 * n - 1, 2 * n, 0, r / m * lam);
            B.add(2 * n, 1, 1, S{} - q[0] / lam);
            for (int i = 1; i <= 2 * n - 2; ++i) B.add(i, i + 1, 1, r / m);
            B.add(2 * n - 1, 1, 1, r / m);
            break;
        }
        case PartitionKind::TwoN_One: {
            const S lam = data.aux.first;
            S qp{}, sal{};
            for (int j = 1; j <= n; ++j) qp = qp + q[j - 1] * p[j - 1];
            for (int j = 0; j <= n; ++j) sal = sal + a[2 * j] - a[2 * j + 1];
            const S sal4 = sal / from_int<S>(4);
            const S at = ratio<S>(n - 1, 2 * (2 * n + 1)) * t;
            auto psum = [&](int i) {
                S out{};
                for (int j = i; j <= n; ++j) out = out + p[j - 1];
                return out;
            };
            auto qq = [&](int i) { return i == 0 ? S{} : q[i - 1]; };  // q_0 := 0
            B.add(1, 1, 0, S{} - qp - at - sal4);
            for (int i = 1; i <= n; ++i) {
                B.add(2 * i, 2 * i, 0, qp - psum(i) + t * qq(i - 1) - at + sal4);
                if (i < n)
                    B.add(2 * i + 1, 2 * i + 1, 0,
                          S{} - qp + psum(i) - t * q[i - 1] + (t - at) - sal4);
            }
            B.add(2 * n + 1, 2 * n + 1, 0, p[n - 1] - ratio<S>(n * n - 1, 2 * n + 1) * t);
            B.add(2 * n, 2 * n + 1, 0, s / from_int<S>(2) * lam);
            B.add(2 * n + 1, 1, 1, p[n - 1] / lam);
            for (int i = 1; i <= 2 * n - 1; ++i) B.add(i, i + 1, 1, s / from_int<S>(2));
            B.add(2 * n, 1, 1, s / from_int<S>(2));
            break;
        }
        case PartitionKind::N_N_One: {
            if (n < 2) throw UnsupportedRank("the (n,n,1) Lax realization requires n >= 2");
            const S mu = data.aux.first;
            const S lm = data.aux.second;
            const S eta = data.params.eta;
            S qp{};
            for (int j = 1; j <= n; ++j) qp = qp + q[j - 1] * p[j - 1];
            // canonical dictionary for the (n,n,1) dressing variables
            auto w_odd = [&](int i) { return int_pow(s, i - 1) * mu * q[i - 1] / lm; };
            auto phi_odd = [&](int i) {
                return from_int<S>(n) * lm * p[i - 1] / (int_pow(s, i - 1) * mu);
            };
            const S w0 = from_int<S>(n) * (qp + eta) / mu;
            const S den = int_pow(s, n) - one;
            auto r_i = [&](int i) { return data.kappas.rho1 - data.kappas.diff(2 * i - 1); };
            auto x_odd = [&](int i) {
                S out{};
                for (int j = 1; j <= i; ++j)
                    out = out + int_pow(s, n - i + j - 1) / den * phi_odd(j);
                for (int j = i + 1; j <= n; ++j)
                    out = out + int_pow(s, j - i - 1) / den * phi_odd(j);
                return out - int_pow(s, n - i) / den * w0 * lm;
            };
            // u-differences; diag entry k of B_1 is -(the difference ending at k)
            auto ud0 = [&](int i) {  // u_{2i-2} - u_{2i-1}
                S out{};
                for (int j = 1; j <= i - 1; ++j)
                    out = out - int_pow(s, n - i + j - 1) / den * w_odd(i) * phi_odd(j);
                for (int j = i; j <= n; ++j)
                    out = out - int_pow(s, j - i - 1) / den * w_odd(i) * phi_odd(j);
                return out + int_pow(s, n - i) / den * w0 * w_odd(i) * lm + r_i(i) / s;
            };
            auto ud1 = [&](int i) {  // u_{2i-1} - u_{2i}
                S out{};
                for (int j = 1; j <= i; ++j)
                    out = out + int_pow(s, n - i + j - 1) / den * w_odd(i) * phi_odd(j);
                for (int j = i + 1; j <= n; ++j)
                    out = out + int_pow(s, j - i - 1) / den * w_odd(i) * phi_odd(j);
                return out - int_pow(s, n - i) / den * w0 * w_odd(i) * lm;
            };
            LaurentMatrix<S> B1(N);
            B1.add(1, 1, 0, S{} - ud0(1));
            for (int i = 1; i <= n; ++i) {
                B1.add(2 * i, 2 * i, 0, S{} - ud1(i));
                if (i < n) B1.add(2 * i + 1, 2 * i + 1, 0, S{} - ud0(i + 1));
            }
            B1.add(N, N, 0, w0 * mu / s);  // -(u_{2n} - u_0) = + w0 mu / s
            B1.add(2 * n + 1, 1, 0, S{} - mu / s);
            for (int i = 1; i <= n; ++i) B1.add(2 * i - 1, 2 * i, 1, x_odd(i));
            for (int i = 1; i <= n - 1; ++i) B1.add(2 * i, 2 * i + 1, 0, S{} - w_odd(i));
            B1.add(2 * n, 2 * n + 1, 0, w0 * w_odd(n));
            B1.add(2 * n - 1, 2 * n + 1, 1, S{} - w0);
            B1.add(2 * n, 1, 0, S{} - w_odd(n));
            for (int i = 1; i <= n - 1; ++i) B1.add(2 * i - 1, 2 * i + 1, 1, one);
            B1.add(2 * n - 1, 1, 1, one);
            const S cB = (s - int_pow(s, 1 - n)) / from_int<S>(n);  // t(t-1) dt_1/dt
            B = cB * B1;
            break;
        }
    }
    return B;
}

template <class S>
inline LaurentMatrix<S> build_M(const LaxData<S>& data) {
    const int n = data.spec.n;
    const int N = data.spec.size();
    const auto& a = data.params.alpha;
    const auto& q = data.q;
    const auto& p = data.p;
    const S s = data.root.s;
    const S t = data.root.t();
    const S one = from_int<S>(1);
    detail::check_gauge(data.aux);
    LaurentMatrix<S> M(N);
    for (int i = 1; i <= N; ++i) M.add(i, i, 0, data.kappas.diff(i));

    switch (data.spec.kind) {
        case PartitionKind::NplusNplus: {
            const S w = data.aux.first;
            const S eta = data.params.eta;
            for (int i = 1; i <= n; ++i)
                M.add(2 * i - 1, 2 * i, 0, from_int<S>(n + 1) * int_pow(s, -i) * p[i - 1] / w);
            S qp = eta;
            for (int j = 1; j <= n; ++j) qp = qp + q[j - 1] * p[j - 1];
            M.add(2 * n + 1, 2 * n + 2, 0, S{} - from_int<S>(n + 1) * qp / w);
            M.add(2 * n + 2, 1, 1, S{} - w * s * (one - q[0]));
            for (int i = 1; i <= n - 1; ++i)
                M.add(2 * i, 2 * i + 1, 1, S{} - w * int_pow(s, i + 1) * (q[i - 1] - q[i]));
            M.add(2 * n, 2 * n + 1, 1, S{} - w / t * (q[n - 1] - t));
            for (int i = 1; i <= n; ++i) M.add(2 * i - 1, 2 * i + 1, 1, s);
            M.add(2 * n + 1, 1, 1, s);
            for (int i = 1; i <= n; ++i) M.add(2 * i, 2 * i + 2, 1, one);
            M.add(2 * n + 2, 2, 1, one);
            break;
        }
        case PartitionKind::TwoNminusOne_One: {
            const S lam = data.aux.first;
            const S r = sqrt_int<S>(2 * (2 * n - 1));
            M.add(2 * n - 1, 2 * n, 0, r * lam * p[0]);
            S phi0 = S{};
            for (int j = 1; j <= n; ++j) phi0 = phi0 + q[0] * p[j - 1];
            phi0 = (phi0 - q[0] * q[n - 1] - t * q[0] - a[1]) * from_int<S>(2 * n - 1) / lam;
            M.add(2 * n, 1, 1, phi0);
            for (int i = 1; i <= n - 1; ++i) {
                M.add(2 * i - 1, 2 * i, 1, r * p[n - i]);
                M.add(2 * i, 2 * i + 1, 1, r * (q[n - i - 1] - q[n - i]));
            }
            M.add(2 * n - 2, 2 * n, 1, from_int<S>(2) * lam);
            S ph2n11 = q[n - 1] + t;
            for (int j = 2; j <= n; ++j) ph2n11 = ph2n11 - p[j - 1];
            M.add(2 * n - 1, 1, 1, r * ph2n11);
            M.add(2 * n, 2, 2, S{} - r * q[0] / lam);
            for (int i = 1; i <= 2 * n - 3; ++i) M.add(i, i + 2, 2, from_int<S>(2));
            M.add(2 * n - 2, 1, 2, from_int<S>(2));
            M.add(2 * n - 1, 2, 2, from_int<S>(2));
            break;
        }
        case PartitionKind::TwoN_One: {
            const S lam = data.aux.first;
            auto qq = [&](int i) { return i == 0 ? S{} : q[i - 1]; };
            M.add(2 * n, 2 * n + 1, 0,
                  from_int<S>(n) * s * lam * (q[n - 1] - qq(n - 1)));
            M.add(2 * n + 1, 1, 1,
                  S{} - from_int<S>(2 * n) / lam * ((q[n - 1] - one) * p[n - 1] + a[2 * n]));
            S ph1 = from_int<S>(n) * s;
            for (int j = 1; j <= n; ++j) ph1 = ph1 - from_int<S>(4) / s * p[j - 1];
            M.add(1, 2, 1, ph1);
            M.add(2, 3, 1, from_int<S>(n) * s * q[0]);
            for (int i = 2; i <= n; ++i)
                M.add(2 * i - 1, 2 * i, 1, from_int<S>(4) / s * p[i - 2]);
            for (int i = 2; i <= n - 1; ++i)
                M.add(2 * i, 2 * i + 1, 1, from_int<S>(n) * s * (q[i - 1] - q[i - 2]));
            M.add(2 * n - 1, 2 * n + 1, 1, from_int<S>(2) * lam);
            M.add(2 * n, 1, 1, S{} - from_int<S>(n) * s * (qq(n - 1) - one));
            M.add(2 * n + 1, 2, 2, from_int<S>(4) / s * p[n - 1] / lam);
            for (int i = 1; i <= 2 * n - 2; ++i) M.add(i, i + 2, 2, from_int<S>(2));
            M.add(2 * n - 1, 1, 2, from_int<S>(2));
            M.add(2 * n, 2, 2, from_int<S>(2));
            break;
        }
        case PartitionKind::N_N_One: {
            if (n < 2) throw UnsupportedRank("the (n,n,1) Lax realization requires n >= 2");
            const S mu = data.aux.first;
            const S lm = data.aux.second;
            const S eta = data.params.eta;
            S qp{};
            for (int j = 1; j <= n; ++j) qp = qp + q[j - 1] * p[j - 1];
            auto w_odd = [&](int i) { return int_pow(s, i - 1) * mu * q[i - 1] / lm; };
            const S w0 = from_int<S>(n) * (qp + eta) / mu;
            const S mu_n2 = from_int<S>(n) * (qp + eta - a[2 * n + 1]) / lm;
            M.add(2 * n + 1, 1, 0, mu * (q[0] - one));
            for (int i = 1; i <= n; ++i)
                M.add(2 * i - 1, 2 * i, 1,
                      from_int<S>(n) * lm * p[i - 1] / (int_pow(s, i - 1) * mu));
            for (int i = 1; i <= n - 1; ++i)
                M.add(2 * i, 2 * i + 1, 0, S{} - s * w_odd(i) + w_odd(i + 1));
            M.add(2 * n, 2 * n + 1, 0, S{} - mu_n2 + s * w0 * w_odd(n));
            M.add(2 * n + 1, 2, 1, lm);
            M.add(2 * n - 1, 2 * n + 1, 1, S{} - s * w0);
            M.add(2 * n, 1, 0, S{} - s * w_odd(n) + w_odd(1));
            for (int i = 1; i <= n - 1; ++i) M.add(2 * i - 1, 2 * i + 1, 1, s);
            M.add(2 * n - 1, 1, 1, s);
            for (int i = 1; i <= n - 1; ++i) M.add(2 * i, 2 * i + 2, 1, one);
            M.add(2 * n, 2, 1, one);
            break;
        }
    }
    return M;
}

// ---- compatibility residual ---------------------------------------------------

template <class S>
struct ResidualReport {
    LaurentMatrix<S> residual;  // c(t) dM/dt - z dB/dz - [B, M]
    double relative = 0.0;      // float mode: max |R(z)| / max(1, |[B,M](z)|)
    double scale = 1.0;
};

namespace detail {

template <class S>
inline S lax_prefactor(PartitionKind kind, const S& t) {
    switch (kind) {
        case PartitionKind::NplusNplus:
        case PartitionKind::N_N_One: return t * (t - from_int<S>(1));
        case PartitionKind::TwoNminusOne_One: return from_int<S>(1);
        case PartitionKind::TwoN_One: return t;
    }
    return from_int<S>(1);
}

template <class S>
inline LaurentMatrix<S> dual_value(const LaurentMatrix<Dual<S>>& m) {
    LaurentMatrix<S> out(m.size());
    for (const auto& [k, poly] : m.entries())
        for (const auto& [e, c] : poly.coeffs()) out.add(k.first, k.second, e, c.v);
    return out;
}
template <class S>
inline LaurentMatrix<S> dual_deriv(const LaurentMatrix<Dual<S>>& m) {
    LaurentMatrix<S> out(m.size());
    for (const auto& [k, poly] : m.entries())
        for (const auto& [e, c] : poly.coeffs()) out.add(k.first, k.second, e, c.d);
    return out;
}

// externally supplied time derivatives (e.g. differenced trajectory samples)
template <class S>
struct TimeDerivatives {
    std::vector<S> dq, dp;
    std::vector<S> dlog_aux;
};

// lift a LaxData into duals seeded with the given d/dt of every dynamical quantity
template <class S>
inline LaxData<Dual<S>> seed_with(const LaxData<S>& data, const TimeDerivatives<S>& td) {
    LaxData<Dual<S>> out{
        data.spec, lift(data.params), {}, {}, {},
        AuxState<Dual<S>>{data.aux.kind, Dual<S>(data.aux.first), Dual<S>(data.aux.second)},
        RootOfT<Dual<S>>(data.spec.kind, data.spec.n,
                         Dual<S>(data.root.s, from_int<S>(1) / data.root.dt_ds()))};
    for (const auto& k : data.kappas.kappa) out.kappas.kappa.emplace_back(k);
    out.kappas.rho1 = Dual<S>(data.kappas.rho1);
    out.kappas.rho2 = Dual<S>(data.kappas.rho2);
    for (int i = 0; i < data.spec.n; ++i) {
        out.q.emplace_back(data.q[i], td.dq[i]);
        out.p.emplace_back(data.p[i], td.dp[i]);
    }
    out.aux.first = Dual<S>(data.aux.first, data.aux.first * td.dlog_aux[0]);
    if (data.aux.kind == PartitionKind::N_N_One)
        out.aux.second = Dual<S>(data.aux.second, data.aux.second * td.dlog_aux[1]);
    return out;
}

// the on-shell seeding: derivatives from the Hamiltonian field and aux flows
template <class S>
inline LaxData<Dual<S>> seed_time_derivative(const LaxData<S>& data) {
    const SystemId sys = system_of(data.spec);
    PhasePoint<S> x = data.phase();
    VectorField<S> vf = vector_field(sys, data.params, x);
    TimeDerivatives<S> td{vf.dq, vf.dp, aux_flow(data.spec, data.params, x, data.aux)};
    return seed_with(data, td);
}

}  // namespace detail

namespace detail {

template <class S>
inline ResidualReport<S> residual_of_seeded(const LaxData<Dual<S>>& seeded, PartitionKind kind,
                                            const S& t, const std::vector<S>& zsamples) {
    auto Bd = build_B(seeded);
    auto Md = build_M(seeded);
    auto B = dual_value(Bd);
    auto M = dual_value(Md);
    auto Mdot = dual_deriv(Md);
    S c = lax_prefactor(kind, t);
    auto BM = bracket(B, M);
    ResidualReport<S> rep;
    rep.residual = c * Mdot - B.z_ddz() - BM;
    if (!zsamples.empty()) {
        rep.scale = std::max(1.0, BM.max_eval_mag(zsamples));
        rep.relative = rep.residual.max_eval_mag(zsamples) / rep.scale;
    } else {
        rep.scale = std::max(1.0, BM.max_entry_mag());
        rep.relative = rep.residual.max_entry_mag() / rep.scale;
    }
    return rep;
}

}  // namespace detail

// on-shell residual: time derivatives from the Hamiltonian field + aux flows
template <class S>
inline ResidualReport<S> compatibility_residual(const LaxData<S>& data,
                                                const std::vector<S>& zsamples = {}) {
    auto seeded = detail::seed_time_derivative(data);
    return detail::residual_of_seeded(seeded, data.spec.kind, data.root.t(), zsamples);
}

// residual against externally measured derivatives (trajectory checks):
// vanishes iff the supplied derivatives satisfy the Painleve flow
template <class S>
inline ResidualReport<S> compatibility_residual(const LaxData<S>& data,
                                                const detail::TimeDerivatives<S>& td,
                                                const std::vector<S>& zsamples = {}) {
    auto seeded = detail::seed_with(data, td);
    return detail::residual_of_seeded(seeded, data.spec.kind, data.root.t(), zsamples);
}

}  // namespace painlax
