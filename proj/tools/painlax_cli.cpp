// painlax command line: evaluate the coupled Painleve systems, verify the
// isomonodromic Lax pairs and the affine Weyl group action, integrate
// trajectories, and cross-check the n=1 reduction against an independent
// Painleve VI integrator.
//
// Exit codes (stable CI contract): 0 pass, 2 usage/schema error,
// 3 domain error (singular time, constraint violation, ...),
// 4 verification failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "painlax/io.hpp"
#include "painlax/weyl.hpp"

using namespace painlax;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
    std::string mode = "float";
    std::uint64_t seed = 0;
    std::string out;
};

bool exact_mode(const CommonOpts& c) {
    if (c.mode == "exact") return true;
    if (c.mode == "float") return false;
    throw SchemaError("--mode must be exact or float");
}

void emit(const Json& j, const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << "\n";
}

// one JSON line per point for large runs, summary at the end
struct JsonlSink {
    std::ofstream os;
    explicit JsonlSink(const std::string& path) {
        if (!path.empty()) os.open(path);
    }
    void line(const Json& j) {
        if (os.is_open()) os << j.dump() << "\n";
    }
};

template <class S>
AuxState<S> sampled_aux(Sampler& smp, PartitionKind kind) {
    switch (kind) {
        case PartitionKind::NplusNplus: return AuxState<S>::w2n1(smp.draw_nonzero<S>());
        case PartitionKind::TwoNminusOne_One:
        case PartitionKind::TwoN_One: return AuxState<S>::lam_np1(kind, smp.draw_nonzero<S>());
        case PartitionKind::N_N_One:
            return AuxState<S>::nn1(smp.draw_nonzero<S>(), smp.draw_nonzero<S>());
    }
    throw Error("unreachable");
}

template <class S>
int run_lax_check(const PartitionSpec& spec, int points, double tol, const CommonOpts& com,
                  bool dump_matrices) {
    Sampler smp(com.seed);
    SystemId sys = system_of(spec);
    JsonlSink sink(com.out);
    double worst = 0;
    int failures = 0;
    Json fail_list = Json::array();
    for (int k = 0; k < points; ++k) {
        auto prm = smp.params<S>(sys);
        std::vector<S> q, p;
        for (int i = 0; i < spec.n; ++i) {
            q.push_back(smp.draw_nonzero<S>());
            p.push_back(smp.draw_nonzero<S>());
        }
        S s = sample_branch<S>(smp, spec.kind, spec.n);
        auto data = make_lax_data(spec, prm, q, p, sampled_aux<S>(smp, spec.kind), s);
        std::vector<S> zs;
        if constexpr (std::is_same_v<S, Complex>) {
            zs = {Complex(1, 0), Complex(0.4, 0.8), Complex(-1.2, 0.3)};
        }
        auto rep = compatibility_residual(data, zs);
        bool ok;
        if constexpr (std::is_same_v<S, Exact>) {
            ok = rep.residual.is_zero();
        } else {
            ok = rep.relative <= tol;
        }
        worst = std::max(worst, rep.relative);
        Json line{{"point", k}, {"residual", rep.relative}, {"pass", ok}};
        sink.line(line);
        if (!ok) {
            ++failures;
            if (fail_list.size() < 5) {
                Json cx = line;
                cx["state"] = state_to_json(sys, prm, data.phase(),
                                            std::optional<AuxState<S>>(data.aux));
                fail_list.push_back(cx);
            }
        }
        if (dump_matrices && k == 0) {
            Json dump{{"B", matrix_to_json(build_B(data))}, {"M", matrix_to_json(build_M(data))}};
            emit(dump, com.out.empty() ? "" : com.out + ".matrices.json");
        }
    }
    Json summary{{"command", "lax-check"},
                 {"spec", partition_name(spec.kind)},
                 {"n", spec.n},
                 {"mode", com.mode},
                 {"seed", com.seed},
                 {"points", points},
                 {"tol", tol},
                 {"tol_source", std::getenv("PAINLAX_TOL") ? "env-or-flag" : "flag"},
                 {"max_residual", worst},
                 {"failures", fail_list},
                 {"pass", failures == 0}};
    emit(summary, com.out.empty() ? "" : com.out + ".summary.json");
    return failures == 0 ? kExitPass : kExitVerification;
}

template <class S>
int run_weyl_check(int n, int trials, const CommonOpts& com) {
    Json report = Json::array();
    bool all_pass = true;
    auto add = [&](const CheckReport& rep) {
        Json entry{{"relation", rep.name},
                   {"trials", rep.trials},
                   {"rejected", rep.rejected},
                   {"max_error", rep.max_error},
                   {"pass", rep.pass}};
        entry["counterexamples"] = rep.counterexample.empty()
                                       ? Json::array()
                                       : Json::array({rep.counterexample});
        report.push_back(entry);
        all_pass = all_pass && rep.pass;
    };
    for (const auto& rep : check_relations<S>(n, trials, com.seed)) add(rep);
    for (int i = 0; i < 2 * n + 2; ++i) {
        add(check_symplectic<S>(i, n, trials, com.seed + 1000 + i));
        add(check_equivariance<S>(i, n, trials, com.seed + 2000 + i));
    }
    Json summary{{"command", "weyl-check"}, {"n", n},           {"mode", com.mode},
                 {"seed", com.seed},        {"trials", trials}, {"pass", all_pass},
                 {"checks", report}};
    emit(summary, com.out);
    return all_pass ? kExitPass : kExitVerification;
}

template <class S>
Json eval_state(const Json& j) {
    auto doc = state_from_json<S>(j);
    S H = hamiltonian(doc.sys, doc.params, doc.x);
    auto vf = vector_field(doc.sys, doc.params, doc.x);
    Json out{{"H", scalar_to_json(H)}};
    out["dq"] = Json::array();
    out["dp"] = Json::array();
    for (const auto& v : vf.dq) out["dq"].push_back(scalar_to_json(v));
    for (const auto& v : vf.dp) out["dp"].push_back(scalar_to_json(v));
    if (doc.aux) {
        PartitionSpec spec(doc.aux->kind, doc.sys.n);
        auto af = aux_flow(spec, doc.params, doc.x, *doc.aux);
        out["dlog_aux"] = Json::array();
        for (const auto& v : af) out["dlog_aux"].push_back(scalar_to_json(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled Painleve systems, Lax pairs, and affine Weyl symmetries"};
    app.require_subcommand(1);

    CommonOpts com;
    bool tol_from_env = false;
    double env_tol = 0;
    if (const char* e = std::getenv("PAINLAX_TOL")) {
        env_tol = std::atof(e);
        tol_from_env = env_tol > 0;
    }

    auto* eval = app.add_subcommand("eval", "evaluate H and the vector field at a JSON state");
    std::string eval_in;
    eval->add_option("--in", eval_in, "state JSON file")->required();
    eval->add_option("--mode", com.mode, "exact|float");
    eval->add_option("--out", com.out, "output JSON path");

    auto* lax =
        app.add_subcommand("lax-check", "isomonodromy compatibility residual at random points");
    std::string lax_partition;
    int lax_n = 2, lax_points = 20;
    double lax_tol = 1e-9;
    bool lax_dump = false;
    lax->add_option("--partition", lax_partition, "n+1,n+1 | 2n-1,1 | 2n,1 | n,n,1")->required();
    lax->add_option("--n", lax_n, "order")->required();
    lax->add_option("--points", lax_points, "random on-shell points");
    auto* lax_tol_opt = lax->add_option("--tol", lax_tol, "float-mode relative tolerance");
    lax->add_option("--mode", com.mode, "exact|float");
    lax->add_option("--seed", com.seed, "RNG seed");
    lax->add_option("--out", com.out, "JSONL output path (summary goes to .summary.json)");
    lax->add_flag("--dump-matrices", lax_dump, "export B and M of the first point");

    auto* weyl = app.add_subcommand("weyl-check", "group relations, symplecticity, equivariance");
    int weyl_n = 1, weyl_trials = 100;
    weyl->add_option("--n", weyl_n, "order")->required();
    weyl->add_option("--trials", weyl_trials, "samples per relation");
    weyl->add_option("--mode", com.mode, "exact|float");
    weyl->add_option("--seed", com.seed, "RNG seed");
    weyl->add_option("--out", com.out, "output JSON path");

    auto* integ = app.add_subcommand("integrate", "adaptive RK5(4) trajectory");
    std::string integ_in, integ_partition;
    double integ_t1 = 3.0, integ_rtol = 1e-9, integ_atol = 1e-9;
    int integ_samples = 100;
    integ->add_option("--in", integ_in, "state JSON file (float scalars)")->required();
    integ->add_option("--t1", integ_t1, "end time")->required();
    integ->add_option("--rtol", integ_rtol, "relative tolerance");
    integ->add_option("--atol", integ_atol, "absolute tolerance");
    integ->add_option("--samples", integ_samples, "output samples across the window");
    integ->add_option("--partition", integ_partition, "carry the partition's aux variables");
    integ->add_option("--out", com.out, "CSV output path (JSON sidecar at .json)");

    auto* p6 = app.add_subcommand("p6-compare",
                                  "n=1 endpoint vs the independent Painleve VI integrator");
    double p6_t0 = 2.0, p6_t1 = 3.0, p6_rtol = 1e-10, p6_tol = 1e-8;
    std::string p6_in;
    p6->add_option("--in", p6_in, "optional n=1 state JSON (random otherwise)");
    p6->add_option("--t0", p6_t0, "start time");
    p6->add_option("--t1", p6_t1, "end time");
    p6->add_option("--rtol", p6_rtol, "integrator tolerance");
    p6->add_option("--tol", p6_tol, "endpoint agreement tolerance");
    p6->add_option("--seed", com.seed, "RNG seed for the random state");
    p6->add_option("--out", com.out, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*eval) {
            Json j = load_json_file(eval_in);
            emit(exact_mode(com) ? eval_state<Exact>(j) : eval_state<Complex>(j), com.out);
            return kExitPass;
        }

        if (*lax) {
            if (tol_from_env && lax_tol_opt->count() == 0) lax_tol = env_tol;
            PartitionSpec spec(partition_from_name(lax_partition), lax_n);
            return exact_mode(com)
                       ? run_lax_check<Exact>(spec, lax_points, lax_tol, com, lax_dump)
                       : run_lax_check<Complex>(spec, lax_points, lax_tol, com, lax_dump);
        }

        if (*weyl) {
            return exact_mode(com) ? run_weyl_check<Exact>(weyl_n, weyl_trials, com)
                                   : run_weyl_check<Complex>(weyl_n, weyl_trials, com);
        }

        if (*integ) {
            Json j = load_json_file(integ_in);
            if (j.contains("samples")) {
                // trajectory export: resume from its final sample
                const Json& last = j.at("samples").back();
                Json st{{"system", j.at("system")}, {"n", j.at("n")}, {"alpha", j.at("alpha")},
                        {"q", last.at("q")},        {"p", last.at("p")}, {"t", last.at("t")}};
                if (j.contains("eta")) st["eta"] = j.at("eta");
                if (j.contains("partition") && last.contains("aux") && !last.at("aux").empty()) {
                    PartitionKind k = partition_from_name(j.at("partition").get<std::string>());
                    Json aux;
                    switch (k) {
                        case PartitionKind::NplusNplus: aux["w2n1"] = last.at("aux")[0]; break;
                        case PartitionKind::TwoNminusOne_One:
                        case PartitionKind::TwoN_One:
                            aux["lambda_n1"] = last.at("aux")[0];
                            aux["partition"] = partition_name(k);
                            break;
                        case PartitionKind::N_N_One:
                            aux["mu_n1"] = last.at("aux")[0];
                            aux["lambda_n2"] = last.at("aux")[1];
                            break;
                    }
                    st["aux"] = aux;
                }
                j = st;
            }
            auto doc = state_from_json<Complex>(j);
            IntegrateOptions opt;
            opt.rtol = integ_rtol;
            opt.atol = integ_atol;
            double t0 = doc.x.t.real();
            for (int k = 1; k < integ_samples; ++k)
                opt.t_out.push_back(t0 + (integ_t1 - t0) * k / integ_samples);
            std::optional<PartitionSpec> spec;
            if (!integ_partition.empty())
                spec = PartitionSpec(partition_from_name(integ_partition), doc.sys.n);
            else if (doc.aux)
                spec = PartitionSpec(doc.aux->kind, doc.sys.n);
            auto traj = integrate(doc.sys, spec, doc.params, doc.x, doc.aux, integ_t1, opt);
            if (!com.out.empty()) {
                std::ofstream csv(com.out);
                trajectory_to_csv(traj, csv);
                std::ofstream js(com.out + ".json");
                js << trajectory_to_json(traj).dump(2) << "\n";
            } else {
                trajectory_to_csv(traj, std::cout);
            }
            Json summary{{"command", "integrate"},
                         {"samples", traj.samples.size()},
                         {"accepted", traj.stats.accepted},
                         {"rejected", traj.stats.rejected},
                         {"truncated", traj.stats.truncated},
                         {"truncation_reason", traj.stats.truncation_reason},
                         {"t_final", traj.samples.back().t}};
            std::cerr << summary.dump(2) << "\n";
            return kExitPass;
        }

        if (*p6) {
            SystemId sys{SystemKind::PA2n1star, 1};
            Params<Complex> prm;
            PhasePoint<Complex> x0;
            if (!p6_in.empty()) {
                auto doc = state_from_json<Complex>(load_json_file(p6_in));
                if (doc.sys.n != 1) throw SchemaError("p6-compare requires n = 1");
                prm = doc.params;
                x0 = doc.x;
                p6_t0 = x0.t.real();
            } else {
                Sampler smp(com.seed);
                double sum = 0;
                for (int i = 0; i < 3; ++i) {
                    double v = smp.real(-0.1, 0.15);
                    prm.alpha.push_back(Complex(v, 0));
                    sum += v;
                }
                prm.alpha.push_back(Complex(1.0 - sum, 0));
                prm.eta = Complex(smp.real(0.05, 0.2), 0);
                x0.q.push_back(Complex(1.0 + (p6_t0 - 1.0) * 0.4 + smp.real(0, 0.1), 0));
                x0.p.push_back(Complex(smp.real(-0.15, 0.15), 0));
                x0.t = Complex(p6_t0, 0);
            }
            IntegrateOptions opt;
            opt.rtol = opt.atol = p6_rtol;
            auto traj = integrate(sys, std::nullopt, prm, x0, std::nullopt, p6_t1, opt);
            auto pp = p6_dictionary(prm);
            auto [qr, pr] = p6_reference_endpoint(pp, x0.q[0], x0.p[0], p6_t0, p6_t1, 40000);
            double dev = std::max(std::abs(traj.samples.back().q[0] - qr),
                                  std::abs(traj.samples.back().p[0] - pr));
            bool pass = dev <= p6_tol;
            Json summary{{"command", "p6-compare"}, {"seed", com.seed}, {"t0", p6_t0},
                         {"t1", p6_t1},             {"rtol", p6_rtol},  {"tol", p6_tol},
                         {"deviation", dev},        {"pass", pass}};
            emit(summary, com.out);
            return pass ? kExitPass : kExitVerification;
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
