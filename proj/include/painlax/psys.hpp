#pragma once

// The three coupled Painleve Hamiltonians (P(A_2n), P(A_{2n+1}), P(A_{2n+1}*)),
// their kernels H_IV / H_V / H_VI, exact Hamiltonian vector fields via
// forward-mode duals, and the auxiliary gauge-variable flows of each
// partition. The stored Hamiltonian is H itself, with the customary
// t(t-1) and t prefactors divided out, so dq/dt = dH/dp holds literally.

#include <vector>

#include "painlax/dual.hpp"
#include "painlax/loopalg.hpp"

namespace painlax {

enum class SystemKind { PA2n, PA2n1, PA2n1star };

inline const char* system_name(SystemKind k) {
    switch (k) {
        case SystemKind::PA2n: return "PA2n";
        case SystemKind::PA2n1: return "PA2n1";
        case SystemKind::PA2n1star: return "PA2n1star";
    }
    return "?";
}

struct SystemId {
    SystemKind kind;
    int n;
    SystemId(SystemKind k, int order) : kind(k), n(order) {
        if (n < 1) throw UnsupportedRank("system order must be >= 1");
    }
    // alpha_0..alpha_{2n} for PA2n, alpha_0..alpha_{2n+1} otherwise
    int alpha_count() const { return kind == SystemKind::PA2n ? 2 * n + 1 : 2 * n + 2; }
    bool has_eta() const { return kind == SystemKind::PA2n1star; }
};

template <class S>
struct Params {
    std::vector<S> alpha;
    S eta{};
};

template <class S>
struct PhasePoint {
    std::vector<S> q, p;
    S t{};
};

// Partition-dependent gauge scalars. NplusNplus carries w_{2n+1};
// the tail partitions carry lambda_{n+1}; N_N_One carries (mu_{n+1}, lambda_{n+2}).
template <class S>
struct AuxState {
    PartitionKind kind;
    S first{};
    S second{};

    static AuxState w2n1(S w) { return {PartitionKind::NplusNplus, std::move(w), S{}}; }
    static AuxState lam_np1(PartitionKind k, S lam) {
        if (k != PartitionKind::TwoNminusOne_One && k != PartitionKind::TwoN_One)
            throw MissingAux("lambda_{n+1} aux belongs to the (2n-1,1)/(2n,1) partitions");
        return {k, std::move(lam), S{}};
    }
    static AuxState nn1(S mu, S lam) { return {PartitionKind::N_N_One, std::move(mu), std::move(lam)}; }

    int count() const { return kind == PartitionKind::N_N_One ? 2 : 1; }
    void require(PartitionKind k) const {
        if (kind != k)
            throw MissingAux(std::string("aux state is for partition (") + partition_name(kind) +
                             "), expected (" + partition_name(k) + ")");
    }
};

namespace detail {

template <class S>
inline void check_alpha_sum(const Params<S>& prm, bool enforce) {
    S sum{};
    for (const auto& a : prm.alpha) sum = sum + a;
    S dev = sum - from_int<S>(1);
    if (!enforce) return;
    if constexpr (std::is_same_v<S, Complex>) {
        if (scalar_mag(dev) > 1e-12)
            throw ConstraintViolation("alpha normalization: sum(alpha) != 1");
    } else {
        if (!scalar_is_zero(dev)) throw ConstraintViolation("alpha normalization: sum(alpha) != 1");
    }
}

}  // namespace detail

template <class S>
inline void validate_params(const SystemId& sys, const Params<S>& prm) {
    if (static_cast<int>(prm.alpha.size()) != sys.alpha_count())
        throw ConstraintViolation("alpha vector has wrong length for the system");
    // Sum(alpha)=1 is the P(A_{2n+1}*) lattice normalization; the other two
    // systems only need it at dressing time.
    detail::check_alpha_sum(prm, sys.kind == SystemKind::PA2n1star);
}

// ---- kernels ----------------------------------------------------------------

template <class S>
inline S h_vi(const S& k0, const S& k1, const S& kt, const S& kappa, const S& q, const S& p,
              const S& t) {
    S one = from_int<S>(1);
    return q * (q - one) * (q - t) * p * p - k0 * (q - one) * (q - t) * p - k1 * q * (q - t) * p -
           (kt - one) * q * (q - one) * p + kappa * q;
}

template <class S>
inline S h_iv(const S& a, const S& b, const S& q, const S& p, const S& t) {
    return q * p * (p - q - t) - a * q - b * p;
}

template <class S>
inline S h_v(const S& a, const S& b, const S& c, const S& q, const S& p, const S& t) {
    S one = from_int<S>(1);
    return q * (q - one) * p * (p + t) + a * t * q + b * p - c * q * p;
}

// ---- Hamiltonians -----------------------------------------------------------

namespace detail {

template <class S>
inline void check_time(const SystemId& sys, const S& t) {
    if (sys.kind == SystemKind::PA2n1star) {
        if (scalar_is_zero(value_part(t)) || scalar_is_zero(value_part(t - from_int<S>(1))))
            throw SingularTime("PA2n1star flow is singular at t in {0,1}");
    } else if (sys.kind == SystemKind::PA2n1) {
        if (scalar_is_zero(value_part(t))) throw SingularTime("PA2n1 flow is singular at t=0");
    }
}

}  // namespace detail

template <class S>
inline S hamiltonian(const SystemId& sys, const Params<S>& prm, const PhasePoint<S>& x) {
    const int n = sys.n;
    const auto& a = prm.alpha;
    const S& t = x.t;
    detail::check_time(sys, t);
    S H{};
    switch (sys.kind) {
        case SystemKind::PA2n1star: {
            S odd_sum{};
            for (int j = 0; j <= n; ++j) odd_sum = odd_sum + a[2 * j + 1];
            for (int i = 1; i <= n; ++i) {
                S k0 = odd_sum - a[2 * i - 1] - prm.eta;
                S k1{}, kt{};
                for (int j = 0; j <= i - 1; ++j) k1 = k1 + a[2 * j];
                for (int j = i; j <= n; ++j) kt = kt + a[2 * j];
                H = H + h_vi(k0, k1, kt, a[2 * i - 1] * prm.eta, x.q[i - 1], x.p[i - 1], t);
            }
            S one = from_int<S>(1);
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    H = H + (x.q[i - 1] - one) * (x.q[j - 1] - t) *
                                ((x.q[i - 1] * x.p[i - 1] + a[2 * i - 1]) * x.p[j - 1] +
                                 x.p[i - 1] * (x.p[j - 1] * x.q[j - 1] + a[2 * j - 1]));
            return H / (t * (t - one));
        }
        case SystemKind::PA2n: {
            for (int i = 1; i <= n; ++i) {
                S b{};
                for (int j = 1; j <= i; ++j) b = b + a[2 * j - 1];
                H = H + h_iv(a[2 * i], b, x.q[i - 1], x.p[i - 1], t);
            }
            S two = from_int<S>(2);
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    H = H + two * x.q[i - 1] * x.p[i - 1] * x.p[j - 1];
            return H;
        }
        case SystemKind::PA2n1: {
            S c{};
            for (int j = 1; j <= n + 1; ++j) c = c + a[2 * j - 1];
            for (int i = 1; i <= n; ++i) {
                S b{};
                for (int j = 1; j <= i; ++j) b = b + a[2 * j - 1];
                H = H + h_v(a[2 * i], b, c, x.q[i - 1], x.p[i - 1], t);
            }
            S one = from_int<S>(1), two = from_int<S>(2);
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j)
                    H = H + two * x.q[i - 1] * x.p[i - 1] * (x.q[j - 1] - one) * x.p[j - 1];
            return H / t;
        }
    }
    return H;
}

// lift plain data into duals with zero derivative
template <class S>
inline Params<Dual<S>> lift(const Params<S>& prm) {
    Params<Dual<S>> out;
    for (const auto& a : prm.alpha) out.alpha.emplace_back(a);
    out.eta = Dual<S>(prm.eta);
    return out;
}
template <class S>
inline PhasePoint<Dual<S>> lift(const PhasePoint<S>& x) {
    PhasePoint<Dual<S>> out;
    for (const auto& v : x.q) out.q.emplace_back(v);
    for (const auto& v : x.p) out.p.emplace_back(v);
    out.t = Dual<S>(x.t);
    return out;
}

// Exact partial derivatives of the Hamiltonian: dq_i/dt = dH/dp_i,
// dp_i/dt = -dH/dq_i, one dual evaluation per coordinate.
template <class S>
struct VectorField {
    std::vector<S> dq, dp;
};

template <class S>
inline VectorField<S> vector_field(const SystemId& sys, const Params<S>& prm,
                                   const PhasePoint<S>& x) {
    const int n = sys.n;
    auto dp_dir = lift(prm);
    VectorField<S> out;
    out.dq.resize(n);
    out.dp.resize(n);
    S one = from_int<S>(1);
    for (int i = 0; i < n; ++i) {
        auto xd = lift(x);
        xd.p[i].d = one;
        out.dq[i] = hamiltonian(sys, dp_dir, xd).d;
        xd.p[i].d = S{};
        xd.q[i].d = one;
        out.dp[i] = S{} - hamiltonian(sys, dp_dir, xd).d;
    }
    return out;
}

// ---- auxiliary gauge-variable flows -----------------------------------------
//
// Each partition's gauge scalars obey decoupled log-derivative flows; returns
// d/dt log(.) for each stored variable (prefactors divided out). The flows
// are pinned by the isomonodromy compatibility condition: these are the
// unique closed forms under which the Lax residual vanishes identically.

template <class S>
inline std::vector<S> aux_flow(const PartitionSpec& spec, const Params<S>& prm,
                               const PhasePoint<S>& x, const AuxState<S>& aux) {
    aux.require(spec.kind);
    const int n = spec.n;
    const auto& a = prm.alpha;
    const S& t = x.t;
    S one = from_int<S>(1);
    auto amod = [&](int i) {
        int m = static_cast<int>(a.size());
        return a[((i % m) + m) % m];
    };
    switch (spec.kind) {
        case PartitionKind::NplusNplus: {
            if (scalar_is_zero(value_part(t)) || scalar_is_zero(value_part(t - one)))
                throw SingularTime("w_{2n+1} flow is singular at t in {0,1}");
            S rhs{};
            for (int i = 1; i <= n; ++i)
                rhs = rhs - ((x.q[i - 1] - one) * (x.q[i - 1] - t) * x.p[i - 1] +
                             a[2 * i - 1] * x.q[i - 1]);
            rhs = rhs - a[2 * n + 1];
            rhs = rhs + (from_int<S>(n) * t + from_int<S>(n + 2)) / from_int<S>(n + 1) * prm.eta;
            for (int i = 0; i <= n; ++i)
                rhs = rhs - ratio<S>(n - 2 * i, 2 * n + 2) * (amod(2 * i - 1) + amod(2 * i)) *
                                (t - one);
            return {rhs / (t * (t - one))};
        }
        case PartitionKind::TwoNminusOne_One: {
            S rhs{};
            for (int j = 1; j <= n; ++j) rhs = rhs + x.p[j - 1];
            rhs = rhs - ratio<S>(n, 2 * n - 1) * t;
            return {rhs};
        }
        case PartitionKind::TwoN_One: {
            if (scalar_is_zero(value_part(t))) throw SingularTime("lambda_{n+1} flow is singular at t=0");
            S rhs{};
            for (int i = 1; i <= n; ++i) rhs = rhs - x.q[i - 1] * x.p[i - 1];
            rhs = rhs - t * x.q[n - 1] + ratio<S>(n + 1, 2) * t;
            S sal{};
            for (int j = 0; j <= n; ++j) sal = sal + a[2 * j] - a[2 * j + 1];
            rhs = rhs - sal / from_int<S>(4);
            return {rhs / t};
        }
        case PartitionKind::N_N_One: {
            if (scalar_is_zero(value_part(t)) || scalar_is_zero(value_part(t - one)))
                throw SingularTime("(n,n,1) aux flows are singular at t in {0,1}");
            S mu_rhs{};
            for (int i = 1; i <= n; ++i)
                mu_rhs = mu_rhs -
                         x.q[i - 1] * ((x.q[i - 1] - one) * x.p[i - 1] + a[2 * i - 1]);
            S c0 = a[0] + ratio<S>(n + 1, n) * prm.eta;
            S c1 = S{} - prm.eta / from_int<S>(n);
            for (int j = 1; j <= n; ++j) {
                S pair = a[2 * j - 1] + a[2 * j] - ratio<S>(1, n);
                c0 = c0 + ratio<S>(n - j, n) * pair;
                c1 = c1 + ratio<S>(j, n) * pair;
            }
            mu_rhs = mu_rhs + c0 + c1 * t;
            S lam_rhs{};
            for (int i = 1; i <= n; ++i)
                lam_rhs = lam_rhs - t * (x.q[i - 1] - one) * x.p[i - 1];
            lam_rhs = lam_rhs - t * prm.eta;
            S pref = t * (t - one);
            return {mu_rhs / pref, lam_rhs / pref};
        }
    }
    return {};
}

// the canonical system realized by each partition
inline SystemId system_of(const PartitionSpec& spec) {
    switch (spec.kind) {
        case PartitionKind::NplusNplus: return {SystemKind::PA2n1star, spec.n};
        case PartitionKind::TwoNminusOne_One: return {SystemKind::PA2n, spec.n};
        case PartitionKind::TwoN_One: return {SystemKind::PA2n1, spec.n};
        case PartitionKind::N_N_One: return {SystemKind::PA2n1star, spec.n};
    }
    return {SystemKind::PA2n1star, spec.n};
}

}  // namespace painlax
