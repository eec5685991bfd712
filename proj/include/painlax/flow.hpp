#pragma once

// Adaptive Dormand-Prince RK5(4) integration of the non-autonomous
// Hamiltonian flows, with the auxiliary gauge variables carried in log space
// (their flows are stated as d/dt log), PI step-size control, guard zones
// around the movable-pole indicators, and dense samples at caller-requested
// output times. Float lane only; states are complex vectors (Eigen).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "painlax/laxpair.hpp"

namespace painlax {

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-9;
    double guard = 1e-8;        // truncate when a guarded denominator dips below this
    double max_step = 0;        // optional cap on |h| (0 = uncapped)
    long max_steps = 2000000;
    std::vector<double> t_out;  // requested sample times (always includes endpoints)
    bool record_steps = false;  // also store every accepted integrator step
    std::optional<double> fixed_step;  // disables adaptivity (order measurements)
};

struct TrajectorySample {
    double t;
    std::vector<Complex> q, p, aux;
};

struct FlowStats {
    long steps = 0;
    long accepted = 0;
    long rejected = 0;
    double min_step = 0, max_step = 0, mean_step = 0;
    bool truncated = false;
    std::string truncation_reason;
};

struct Trajectory {
    SystemId sys;
    std::optional<PartitionKind> spec;
    Params<Complex> params;
    double rtol = 0, atol = 0;
    std::vector<TrajectorySample> samples;
    FlowStats stats;
};

namespace detail {

using Vec = Eigen::VectorXcd;

// y = (q_1..q_n, p_1..p_n, log aux...)
struct FlowSystem {
    SystemId sys;
    std::optional<PartitionSpec> spec;
    Params<Complex> params;
    int n;
    int naux;

    Vec rhs(double t, const Vec& y) const {
        PhasePoint<Complex> x;
        x.t = Complex(t, 0);
        for (int i = 0; i < n; ++i) x.q.push_back(y[i]);
        for (int i = 0; i < n; ++i) x.p.push_back(y[n + i]);
        auto vf = vector_field(sys, params, x);
        Vec out(y.size());
        for (int i = 0; i < n; ++i) out[i] = vf.dq[i];
        for (int i = 0; i < n; ++i) out[n + i] = vf.dp[i];
        if (naux > 0) {
            AuxState<Complex> aux = unpack_aux(y);
            auto af = aux_flow(*spec, params, x, aux);
            for (int k = 0; k < naux; ++k) out[2 * n + k] = af[k];
        }
        return out;
    }

    AuxState<Complex> unpack_aux(const Vec& y) const {
        AuxState<Complex> aux{spec->kind, Complex(1, 0), Complex(1, 0)};
        aux.first = std::exp(y[2 * n]);
        if (naux == 2) aux.second = std::exp(y[2 * n + 1]);
        return aux;
    }

    // distance to the nearest guarded denominator; empty if none applies
    std::optional<std::pair<double, std::string>> guard_violation(double t, const Vec& y,
                                                                  double guard) const {
        auto check = [&](Complex v, const std::string& name)
            -> std::optional<std::pair<double, std::string>> {
            if (std::abs(v) < guard) return std::make_pair(std::abs(v), name);
            return std::nullopt;
        };
        if (sys.kind == SystemKind::PA2n1star) {
            Complex qp = params.eta;
            for (int i = 0; i < n; ++i) {
                if (auto g = check(y[i], "q_" + std::to_string(i + 1))) return g;
                if (auto g = check(y[i] - Complex(1, 0), "q_" + std::to_string(i + 1) + "-1"))
                    return g;
                if (auto g = check(y[i] - Complex(t, 0), "q_" + std::to_string(i + 1) + "-t"))
                    return g;
                if (i + 1 < n)
                    if (auto g = check(y[i] - y[i + 1],
                                       "q_" + std::to_string(i + 1) + "-q_" + std::to_string(i + 2)))
                        return g;
                qp += y[i] * y[n + i];
            }
            if (auto g = check(qp, "sum q_j p_j + eta")) return g;
        }
        return std::nullopt;
    }
};

// Fehlberg 5(4) tableau; the fifth-order solution is propagated
struct Rkf45 {
    // clang-format off
    static constexpr double c2 = 1.0/4, c3 = 3.0/8, c4 = 12.0/13, c5 = 1.0, c6 = 1.0/2;
    static constexpr double a21 = 1.0/4;
    static constexpr double a31 = 3.0/32,        a32 = 9.0/32;
    static constexpr double a41 = 1932.0/2197,   a42 = -7200.0/2197,  a43 = 7296.0/2197;
    static constexpr double a51 = 439.0/216,     a52 = -8.0,          a53 = 3680.0/513,   a54 = -845.0/4104;
    static constexpr double a61 = -8.0/27,       a62 = 2.0,           a63 = -3544.0/2565, a64 = 1859.0/4104, a65 = -11.0/40;
    static constexpr double b1  = 16.0/135,      b3  = 6656.0/12825,  b4  = 28561.0/56430, b5 = -9.0/50,     b6 = 2.0/55;
    static constexpr double e1  = 1.0/360,       e3  = -128.0/4275,   e4  = -2197.0/75240, e5 = 1.0/50,      e6 = 2.0/55;
    // clang-format on
};

}  // namespace detail

inline Trajectory integrate(const SystemId& sys, std::optional<PartitionSpec> spec,
                            const Params<Complex>& params, const PhasePoint<Complex>& x0,
                            std::optional<AuxState<Complex>> aux0, double t_end,
                            const IntegrateOptions& opt = {}) {
    using detail::Vec;
    if (opt.rtol <= 0 || opt.atol <= 0) throw Error("rtol and atol must be positive");
    const int n = sys.n;
    double t = x0.t.real();
    // the window must avoid the fixed singular points
    auto crosses = [&](double c) { return (t - c) * (t_end - c) <= 0; };
    if (sys.kind == SystemKind::PA2n1star && (crosses(0) || crosses(1)))
        throw SingularTime("integration window contains a fixed singular point (0 or 1)");
    if (sys.kind == SystemKind::PA2n1 && crosses(0))
        throw SingularTime("integration window contains the fixed singular point 0");

    detail::FlowSystem fs{sys, spec, params, n, 0};
    if (spec) {
        if (!aux0) throw MissingAux("partition given but no aux state");
        aux0->require(spec->kind);
        fs.naux = aux0->count();
    }
    Vec y(2 * n + fs.naux);
    for (int i = 0; i < n; ++i) y[i] = x0.q[i];
    for (int i = 0; i < n; ++i) y[n + i] = x0.p[i];
    if (fs.naux > 0) {
        y[2 * n] = std::log(aux0->first);
        if (fs.naux == 2) y[2 * n + 1] = std::log(aux0->second);
    }

    Trajectory traj{sys, std::nullopt, params, opt.rtol, opt.atol, {}, {}};
    if (spec) traj.spec = spec->kind;

    std::vector<double> outs = opt.t_out;
    std::sort(outs.begin(), outs.end());
    const double dir = (t_end >= t) ? 1.0 : -1.0;
    if (dir < 0) std::reverse(outs.begin(), outs.end());
    // drop out-of-window and near-duplicate targets
    std::vector<double> keep;
    for (double v : outs)
        if ((v - t) * dir > 0 && (t_end - v) * dir > 1e-12 &&
            (keep.empty() || std::abs(v - keep.back()) > 1e-9))
            keep.push_back(v);
    outs = keep;

    auto record = [&](double tt, const Vec& yy) {
        if (!traj.samples.empty() && traj.samples.back().t == tt) return;
        TrajectorySample smp;
        smp.t = tt;
        for (int i = 0; i < n; ++i) smp.q.push_back(yy[i]);
        for (int i = 0; i < n; ++i) smp.p.push_back(yy[n + i]);
        for (int k = 0; k < fs.naux; ++k) smp.aux.push_back(std::exp(yy[2 * n + k]));
        traj.samples.push_back(std::move(smp));
    };
    record(t, y);

    using T = detail::Rkf45;
    double h = opt.fixed_step ? *opt.fixed_step
                              : std::abs(t_end - t) * std::min(0.1, std::pow(opt.rtol, 0.2));
    if (!opt.fixed_step && opt.max_step > 0) h = std::min(h, opt.max_step);
    h *= dir;
    double err_prev = 1.0;
    Vec k1 = fs.rhs(t, y);
    double sum_h = 0, min_h = 1e300, max_h = 0;
    long n_h = 0;

    size_t next_out = 0;
    {
        while (next_out < outs.size() && (outs[next_out] - t) * dir <= 0) ++next_out;
    }
    for (;;) {
        if ((t_end - t) * dir <= 1e-14 * std::max(1.0, std::abs(t))) break;
        {
            if (traj.stats.steps++ > opt.max_steps) throw StepUnderflow("max step count exceeded");
            bool clamped = (t + h - t_end) * dir > 0;
            double hs = clamped ? t_end - t : h;  // step actually attempted
            if (!clamped && std::abs(hs) < 1e-14 * std::max(1.0, std::abs(t)))
                throw StepUnderflow("step size underflow");

            Vec k2 = fs.rhs(t + T::c2 * hs, y + hs * (T::a21 * k1));
            Vec k3 = fs.rhs(t + T::c3 * hs, y + hs * (T::a31 * k1 + T::a32 * k2));
            Vec k4 = fs.rhs(t + T::c4 * hs, y + hs * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3));
            Vec k5 = fs.rhs(t + T::c5 * hs,
                            y + hs * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4));
            Vec k6 = fs.rhs(t + T::c6 * hs, y + hs * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 +
                                                      T::a64 * k4 + T::a65 * k5));
            Vec ynew = y + hs * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
            Vec k7 = fs.rhs(t + hs, ynew);  // right-endpoint slope: Hermite output + next step
            Vec errv = hs * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6);
            double err = 0;
            for (int i = 0; i < y.size(); ++i) {
                double sc = opt.atol +
                            opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += std::norm(errv[i] / sc);
            }
            err = std::sqrt(err / static_cast<double>(y.size()));

            if (opt.fixed_step || err <= 1.0) {
                // dense output: cubic Hermite over [t, t+hs] from endpoint slopes
                while (next_out < outs.size() && (outs[next_out] - (t + hs)) * dir <= 0) {
                    double th = (outs[next_out] - t) / hs;
                    double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
                    double h10 = th * (1 - th) * (1 - th);
                    double h01 = th * th * (3 - 2 * th);
                    double h11 = th * th * (th - 1);
                    Vec yi = h00 * y + (h10 * hs) * k1 + h01 * ynew + (h11 * hs) * k7;
                    record(outs[next_out], yi);
                    ++next_out;
                }
                t = clamped ? t_end : t + hs;
                y = ynew;
                k1 = k7;  // FSAL
                traj.stats.accepted++;
                sum_h += std::abs(hs);
                min_h = std::min(min_h, std::abs(hs));
                max_h = std::max(max_h, std::abs(hs));
                n_h++;
                if (opt.record_steps) record(t, y);
                if (auto g = fs.guard_violation(t, y, opt.guard)) {
                    record(t, y);
                    traj.stats.truncated = true;
                    traj.stats.truncation_reason =
                        "guard |" + g->second + "| = " + std::to_string(g->first);
                    traj.stats.mean_step = n_h ? sum_h / n_h : 0;
                    traj.stats.min_step = n_h ? min_h : 0;
                    traj.stats.max_step = max_h;
                    return traj;
                }
                if (!opt.fixed_step && !clamped) {
                    // PI controller (local extrapolation, order 5/4)
                    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                                 std::pow(err_prev, 0.4 / 5.0);
                    fac = std::clamp(fac, 0.2, 10.0);
                    h *= fac;
                    if (opt.max_step > 0 && std::abs(h) > opt.max_step) h = dir * opt.max_step;
                    err_prev = std::max(err, 1e-10);
                }
            } else {
                traj.stats.rejected++;
                double fac = std::clamp(0.9 * std::pow(err, -1.0 / 5.0), 0.2, 1.0);
                if (clamped) {
                    // shrink the full step so the retry of the clamp converges
                    h = hs * fac;
                } else {
                    h *= fac;
                }
            }
        }
    }
    record(t_end, y);
    traj.stats.mean_step = n_h ? sum_h / n_h : 0;
    traj.stats.min_step = n_h ? min_h : 0;
    traj.stats.max_step = max_h;
    return traj;
}

namespace detail {

// derivative at node j of the Lagrange interpolant through (xs, ys)
inline Complex lagrange_deriv_at(const std::vector<double>& xs,
                                 const std::vector<Complex>& ys, int j) {
    const int m = static_cast<int>(xs.size());
    Complex acc(0, 0);
    for (int i = 0; i < m; ++i) {
        if (i == j) {
            double s = 0;
            for (int k = 0; k < m; ++k)
                if (k != j) s += 1.0 / (xs[j] - xs[k]);
            acc += ys[j] * Complex(s, 0);
        } else {
            double w = 1.0 / (xs[i] - xs[j]);
            for (int k = 0; k < m; ++k)
                if (k != i && k != j) w *= (xs[j] - xs[k]) / (xs[i] - xs[k]);
            acc += ys[i] * Complex(w, 0);
        }
    }
    return acc;
}

}  // namespace detail

// Max compatibility residual over the stored samples, with the time
// derivatives measured from the trajectory itself (five-point Lagrange
// differentiation); a trajectory violating the flow fails loudly since the
// compatibility condition is equivalent to the Painleve system.
inline double residual_along(const Trajectory& traj, const PartitionSpec& spec,
                             const std::vector<Complex>& zsamples) {
    const int K = static_cast<int>(traj.samples.size());
    if (K < 5) throw Error("residual_along needs at least 5 stored samples");
    const int n = spec.n;
    const int naux = spec.kind == PartitionKind::N_N_One ? 2 : 1;
    double worst = 0;
    for (int k = 2; k + 2 < K; ++k) {
        std::vector<double> ts;
        for (int w = k - 2; w <= k + 2; ++w) ts.push_back(traj.samples[w].t);
        auto deriv = [&](auto getter) {
            std::vector<Complex> ys;
            for (int w = k - 2; w <= k + 2; ++w) ys.push_back(getter(traj.samples[w]));
            return detail::lagrange_deriv_at(ts, ys, 2);
        };
        detail::TimeDerivatives<Complex> td;
        for (int i = 0; i < n; ++i) {
            td.dq.push_back(deriv([i](const TrajectorySample& s) { return s.q[i]; }));
            td.dp.push_back(deriv([i](const TrajectorySample& s) { return s.p[i]; }));
        }
        for (int a = 0; a < naux; ++a)
            td.dlog_aux.push_back(
                deriv([a](const TrajectorySample& s) { return std::log(s.aux[a]); }));

        const auto& smp = traj.samples[k];
        Complex t(smp.t, 0);
        Complex s;
        switch (spec.kind) {
            case PartitionKind::NplusNplus: s = std::pow(t, -1.0 / (spec.n + 1)); break;
            case PartitionKind::TwoNminusOne_One:
                s = t * 2.0 / std::sqrt(2.0 * (2 * spec.n - 1));
                break;
            case PartitionKind::TwoN_One: s = std::sqrt(-4.0 * t / double(spec.n)); break;
            case PartitionKind::N_N_One: s = std::pow(t, -1.0 / spec.n); break;
        }
        AuxState<Complex> aux{spec.kind, smp.aux.at(0),
                              spec.kind == PartitionKind::N_N_One ? smp.aux.at(1) : Complex(1, 0)};
        auto data = make_lax_data(spec, traj.params, smp.q, smp.p, aux, s);
        worst = std::max(worst, compatibility_residual(data, td, zsamples).relative);
    }
    return worst;
}

// Independent reference integrator for the single-H_VI Painleve VI system:
// hand-coded partial derivatives, classic fixed-step RK4. Serves as the
// cross-check oracle for the n=1 reduction of P(A_3*).
struct P6Params {
    Complex k0, k1, kt, kappa;
};

inline std::pair<Complex, Complex> p6_field(const P6Params& pp, Complex q, Complex p, double t) {
    Complex one(1, 0), tt(t, 0);
    Complex dHdp = 2.0 * q * (q - one) * (q - tt) * p - pp.k0 * (q - one) * (q - tt) -
                   pp.k1 * q * (q - tt) - (pp.kt - one) * q * (q - one);
    Complex dHdq = p * p * ((q - one) * (q - tt) + q * (q - tt) + q * (q - one)) -
                   pp.k0 * p * ((q - tt) + (q - one)) - pp.k1 * p * ((q - tt) + q) -
                   (pp.kt - one) * p * ((q - one) + q) + pp.kappa;
    double pref = t * (t - 1.0);
    return {dHdp / pref, -dHdq / pref};
}

inline std::pair<Complex, Complex> p6_reference_endpoint(const P6Params& pp, Complex q0,
                                                         Complex p0, double t0, double t1,
                                                         int steps = 20000) {
    double h = (t1 - t0) / steps;
    Complex q = q0, p = p0;
    double t = t0;
    for (int k = 0; k < steps; ++k) {
        auto [kq1, kp1] = p6_field(pp, q, p, t);
        auto [kq2, kp2] = p6_field(pp, q + 0.5 * h * kq1, p + 0.5 * h * kp1, t + 0.5 * h);
        auto [kq3, kp3] = p6_field(pp, q + 0.5 * h * kq2, p + 0.5 * h * kp2, t + 0.5 * h);
        auto [kq4, kp4] = p6_field(pp, q + h * kq3, p + h * kp3, t + h);
        q += h / 6.0 * (kq1 + 2.0 * kq2 + 2.0 * kq3 + kq4);
        p += h / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
        t += h;
    }
    return {q, p};
}

// the n=1 dictionary of P(A_3*): single H_VI argument list
inline P6Params p6_dictionary(const Params<Complex>& prm) {
    P6Params pp;
    pp.k0 = prm.alpha[3] - prm.eta;
    pp.k1 = prm.alpha[0];
    pp.kt = prm.alpha[2];
    pp.kappa = prm.alpha[1] * prm.eta;
    return pp;
}

}  // namespace painlax
