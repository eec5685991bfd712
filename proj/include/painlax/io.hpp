#pragma once

// JSON schemas for states, matrices and reports, and CSV trajectory
// persistence. Exact scalars serialize as "num/den" strings (plus optional
// radical keys), float scalars as numbers or [re, im] pairs.

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "painlax/flow.hpp"

namespace painlax {

using Json = nlohmann::json;

// ---- scalar encoding ----------------------------------------------------------

inline Json scalar_to_json(const Exact& v) {
    if (v.is_rational()) {
        std::ostringstream os;
        os << v.rat();
        return os.str();
    }
    Json j;
    std::ostringstream num, den, rnum, rden;
    num << boost::multiprecision::numerator(v.rat());
    den << boost::multiprecision::denominator(v.rat());
    rnum << boost::multiprecision::numerator(v.rad_part());
    rden << boost::multiprecision::denominator(v.rad_part());
    j["num"] = num.str();
    j["den"] = den.str();
    j["rnum"] = rnum.str();
    j["rden"] = rden.str();
    j["rad"] = v.radicand();
    return j;
}

inline Json scalar_to_json(const Complex& v) {
    if (v.imag() == 0.0) return v.real();
    return Json::array({v.real(), v.imag()});
}

inline Rational parse_rational(const std::string& txt) {
    auto slash = txt.find('/');
    try {
        if (slash == std::string::npos) return Rational(txt);
        return Rational(boost::multiprecision::cpp_int(txt.substr(0, slash)),
                        boost::multiprecision::cpp_int(txt.substr(slash + 1)));
    } catch (const std::exception&) {
        throw SchemaError("cannot parse exact scalar '" + txt + "' (use \"p/q\" or integers)");
    }
}

template <class S>
S scalar_from_json(const Json& j);

template <>
inline Exact scalar_from_json<Exact>(const Json& j) {
    if (j.is_string()) return Exact(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return Exact(static_cast<long long>(j.get<std::int64_t>()));
    if (j.is_object()) {
        Rational a(boost::multiprecision::cpp_int(j.at("num").get<std::string>()),
                   boost::multiprecision::cpp_int(j.at("den").get<std::string>()));
        Rational b(boost::multiprecision::cpp_int(j.at("rnum").get<std::string>()),
                   boost::multiprecision::cpp_int(j.at("rden").get<std::string>()));
        return Exact(a) + Exact(b) * Exact::sqrt_int(j.at("rad").get<long long>());
    }
    if (j.is_number()) {
        double v = j.get<double>();
        if (v == std::floor(v)) return Exact(static_cast<long long>(v));
        throw SchemaError("exact mode rejects non-integral decimal literals; use \"p/q\"");
    }
    throw SchemaError("bad exact scalar encoding");
}

template <>
inline Complex scalar_from_json<Complex>(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_string()) {
        Rational r = parse_rational(j.get<std::string>());
        return {to_double(r), 0.0};
    }
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw SchemaError("bad float scalar encoding (use number, \"p/q\", or [re, im])");
}

// ---- state document -----------------------------------------------------------
// {system, n, alpha: [...], eta, q: [...], p: [...], t, aux: {...}}

inline SystemKind system_from_name(const std::string& name) {
    if (name == "PA2n") return SystemKind::PA2n;
    if (name == "PA2n1") return SystemKind::PA2n1;
    if (name == "PA2n1star") return SystemKind::PA2n1star;
    throw SchemaError("unknown system '" + name + "'");
}

inline PartitionKind partition_from_name(const std::string& name) {
    if (name == "n+1,n+1") return PartitionKind::NplusNplus;
    if (name == "2n-1,1") return PartitionKind::TwoNminusOne_One;
    if (name == "2n,1") return PartitionKind::TwoN_One;
    if (name == "n,n,1") return PartitionKind::N_N_One;
    throw SchemaError("unknown partition '" + name + "' (use n+1,n+1 | 2n-1,1 | 2n,1 | n,n,1)");
}

template <class S>
struct StateDoc {
    SystemId sys;
    Params<S> params;
    PhasePoint<S> x;
    std::optional<AuxState<S>> aux;
};

template <class S>
inline StateDoc<S> state_from_json(const Json& j) {
    try {
        SystemId sys{system_from_name(j.at("system").get<std::string>()), j.at("n").get<int>()};
        StateDoc<S> doc{sys, {}, {}, std::nullopt};
        for (const auto& a : j.at("alpha")) doc.params.alpha.push_back(scalar_from_json<S>(a));
        if (j.contains("eta")) doc.params.eta = scalar_from_json<S>(j.at("eta"));
        for (const auto& v : j.at("q")) doc.x.q.push_back(scalar_from_json<S>(v));
        for (const auto& v : j.at("p")) doc.x.p.push_back(scalar_from_json<S>(v));
        doc.x.t = scalar_from_json<S>(j.at("t"));
        if (j.contains("aux")) {
            const auto& ja = j.at("aux");
            if (ja.contains("w2n1"))
                doc.aux = AuxState<S>::w2n1(scalar_from_json<S>(ja.at("w2n1")));
            else if (ja.contains("mu_n1"))
                doc.aux = AuxState<S>::nn1(scalar_from_json<S>(ja.at("mu_n1")),
                                           scalar_from_json<S>(ja.at("lambda_n2")));
            else if (ja.contains("lambda_n1")) {
                PartitionKind k = ja.contains("partition")
                                      ? partition_from_name(ja.at("partition").get<std::string>())
                                      : (sys.kind == SystemKind::PA2n
                                             ? PartitionKind::TwoNminusOne_One
                                             : PartitionKind::TwoN_One);
                doc.aux = AuxState<S>::lam_np1(k, scalar_from_json<S>(ja.at("lambda_n1")));
            } else
                throw SchemaError("aux object must carry w2n1 | lambda_n1 | mu_n1+lambda_n2");
        }
        if (static_cast<int>(doc.x.q.size()) != sys.n || static_cast<int>(doc.x.p.size()) != sys.n)
            throw SchemaError("q/p arrays must have length n");
        validate_params(sys, doc.params);
        return doc;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("state document: ") + e.what());
    }
}

template <class S>
inline Json state_to_json(const SystemId& sys, const Params<S>& prm, const PhasePoint<S>& x,
                          const std::optional<AuxState<S>>& aux) {
    Json j;
    j["system"] = system_name(sys.kind);
    j["n"] = sys.n;
    j["alpha"] = Json::array();
    for (const auto& a : prm.alpha) j["alpha"].push_back(scalar_to_json(a));
    if (sys.has_eta()) j["eta"] = scalar_to_json(prm.eta);
    j["q"] = Json::array();
    j["p"] = Json::array();
    for (const auto& v : x.q) j["q"].push_back(scalar_to_json(v));
    for (const auto& v : x.p) j["p"].push_back(scalar_to_json(v));
    j["t"] = scalar_to_json(x.t);
    if (aux) {
        Json ja;
        switch (aux->kind) {
            case PartitionKind::NplusNplus: ja["w2n1"] = scalar_to_json(aux->first); break;
            case PartitionKind::TwoNminusOne_One:
            case PartitionKind::TwoN_One:
                ja["lambda_n1"] = scalar_to_json(aux->first);
                ja["partition"] = partition_name(aux->kind);
                break;
            case PartitionKind::N_N_One:
                ja["mu_n1"] = scalar_to_json(aux->first);
                ja["lambda_n2"] = scalar_to_json(aux->second);
                break;
        }
        j["aux"] = ja;
    }
    return j;
}

// ---- matrix dump: {size, entries: [{row, col, poly: [{exp, ...}]}]} ------------

inline Json poly_term_json(int exp, const Exact& c) {
    Json j = scalar_to_json(c);
    if (j.is_string()) {
        std::string txt = j.get<std::string>();
        auto slash = txt.find('/');
        Json out;
        out["exp"] = exp;
        out["num"] = (slash == std::string::npos) ? txt : txt.substr(0, slash);
        out["den"] = (slash == std::string::npos) ? "1" : txt.substr(slash + 1);
        return out;
    }
    j["exp"] = exp;
    return j;
}

inline Json poly_term_json(int exp, const Complex& c) {
    return Json{{"exp", exp}, {"re", c.real()}, {"im", c.imag()}};
}

template <class S>
inline Json matrix_to_json(const LaurentMatrix<S>& m) {
    Json j;
    j["size"] = m.size();
    j["entries"] = Json::array();
    for (const auto& [k, poly] : m.entries()) {
        Json e;
        e["row"] = k.first;
        e["col"] = k.second;
        e["poly"] = Json::array();
        for (const auto& [exp, c] : poly.coeffs()) e["poly"].push_back(poly_term_json(exp, c));
        j["entries"].push_back(e);
    }
    return j;
}

// ---- trajectory CSV -------------------------------------------------------------

inline void trajectory_to_csv(const Trajectory& traj, std::ostream& os) {
    int n = traj.sys.n;
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",q" << i << "_re,q" << i << "_im";
    for (int i = 1; i <= n; ++i) os << ",p" << i << "_re,p" << i << "_im";
    int naux = traj.samples.empty() ? 0 : static_cast<int>(traj.samples.front().aux.size());
    for (int k = 1; k <= naux; ++k) os << ",aux" << k << "_re,aux" << k << "_im";
    os << "\n";
    os.precision(17);
    for (const auto& smp : traj.samples) {
        os << smp.t;
        for (const auto& v : smp.q) os << "," << v.real() << "," << v.imag();
        for (const auto& v : smp.p) os << "," << v.real() << "," << v.imag();
        for (const auto& v : smp.aux) os << "," << v.real() << "," << v.imag();
        os << "\n";
    }
}

inline Json trajectory_to_json(const Trajectory& traj) {
    Json j;
    j["system"] = system_name(traj.sys.kind);
    j["n"] = traj.sys.n;
    if (traj.spec) j["partition"] = partition_name(*traj.spec);
    j["rtol"] = traj.rtol;
    j["atol"] = traj.atol;
    j["alpha"] = Json::array();
    for (const auto& a : traj.params.alpha) j["alpha"].push_back(scalar_to_json(a));
    j["eta"] = scalar_to_json(traj.params.eta);
    j["stats"] = {{"steps", traj.stats.steps},
                  {"accepted", traj.stats.accepted},
                  {"rejected", traj.stats.rejected},
                  {"mean_step", traj.stats.mean_step},
                  {"truncated", traj.stats.truncated},
                  {"truncation_reason", traj.stats.truncation_reason}};
    j["samples"] = Json::array();
    for (const auto& smp : traj.samples) {
        Json s;
        s["t"] = smp.t;
        s["q"] = Json::array();
        s["p"] = Json::array();
        s["aux"] = Json::array();
        for (const auto& v : smp.q) s["q"].push_back(scalar_to_json(v));
        for (const auto& v : smp.p) s["p"].push_back(scalar_to_json(v));
        for (const auto& v : smp.aux) s["aux"].push_back(scalar_to_json(v));
        j["samples"].push_back(s);
    }
    return j;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw SchemaError("JSON parse error in " + path + ": " + e.what());
    }
}

}  // namespace painlax
