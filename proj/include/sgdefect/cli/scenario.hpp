#pragma once

// Scenario configuration for the batch driver: JSON with a versioned schema tag and strict keys.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgdefect/defect.hpp"
#include "sgdefect/errors.hpp"
#include "sgdefect/fields.hpp"

namespace sgdefect::cli {

inline constexpr const char* schema_tag = "sgdefect-scenario/1";

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SuiteInfo {
    const char* name;
    const char* description;
    const char* anchor;
};

inline const std::vector<SuiteInfo>& suite_catalogue() {
    static const std::vector<SuiteInfo> c = {
        {"lax-residual", "zero-curvature residual of U, V and gauge consistency of U-hat, V-hat",
         "zero curvature condition of the Lax pair"},
        {"monodromy-conservation", "a(lambda) constant in t and calA(lambda) constant in x",
         "time evolution of the space monodromy and space evolution of the time monodromy"},
        {"charges", "Riccati charge ledgers I_n and J_n: conservation and topological I_0, J_0",
         "charge hierarchies from the Riccati recursions at lambda -> infinity and lambda -> 0"},
        {"energy-identities", "I_-1 - I_1 against H_S and J_1 + J_-1 against H_T",
         "the H_S and H_T identities"},
        {"appendix", "space and time half-line solutions agree after the free phase is removed",
         "appendix equality of the two Jost-type solutions"},
        {"defect", "defect conditions, defect matrix, M_S, C(lambda), H_T shift, canonical residuals",
         "frozen Backlund defect and its generating functional"},
        {"rmatrix", "ultralocal brackets of U and V, transition-matrix bracket on a lattice",
         "classical r-matrix for the equal-time and equal-space brackets"},
        {"involution", "lattice bracket of calA(lambda) with calA(mu)",
         "involution of the time-monodromy generating function"},
    };
    return c;
}

inline bool known_suite(const std::string& s) {
    for (const auto& i : suite_catalogue())
        if (s == i.name) return true;
    return false;
}

/// Tolerance names with their defaults; the config may override any of them and nothing else.
inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> t = {
        {"lax_residual", 1e-5},      {"gauge_consistency", 1e-8}, {"monodromy_drift", 1e-6},
        {"charge_drift", 1e-6},      {"topological", 1e-8},       {"energy_identity", 1e-4},
        {"appendix", 1e-6},          {"defect_condition", 1e-8},  {"l_equation", 1e-6},
        {"defect_drift", 1e-5},      {"splitting", 1e-5},         {"generating", 1e-4},
        {"ham_shift", 1e-4},         {"canonical", 1e-6},         {"ultralocal", 1e-12},
        {"r_antisymmetry", 1e-14},   {"transition_bracket", 1e-3}, {"bracket_order", 0.15},
        {"involution", 5e-3},
    };
    return t;
}

struct KinkSpec {
    double v = 0.0;
    double x0 = 0.0;
    int orientation = 1;
};

struct BacklundSpec {
    double phi0 = 1.0;
    double x_extent = 2.0;
    double t_extent = 40.0;
    std::size_t nx = 401;
    std::size_t nt = 8001;
};

struct SolutionSpec {
    std::string kind = "vacuum";  // vacuum, kink, defect
    KinkSpec kink;
    double sigma = 1.0;
    std::string seed = "vacuum";  // vacuum, kink
    double defect_x0 = 0.0;
    KinkSpec seed_kink;
    BacklundSpec backlund;
};

struct NumericsSpec {
    double half_width = 30.0;
    std::size_t nsteps = 0;
    std::size_t nx = 16001, nt = 16001;
    double x_extent = 40.0, t_extent = 40.0;
    std::vector<std::size_t> lattice_sites{200, 400, 800};
    double involution_lambda = 1.5, involution_mu = 0.8;
    unsigned seed = 7;
    std::map<std::string, double> tolerances = default_tolerances();

    GridWindow window() const { return {-x_extent, x_extent, -t_extent, t_extent, nx, nt}; }
};

struct ScenarioConfig {
    ModelParams model;
    SolutionSpec solution;
    std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
    NumericsSpec numerics;
    std::vector<std::string> suites;

    double tol(const std::string& name) const { return numerics.tolerances.at(name); }
};

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

inline double number(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + "." + key + ": not finite");
    return v;
}

inline double positive(const json& j, const std::string& key, const std::string& where) {
    const double v = number(j, key, where);
    if (!(v > 0.0)) throw ConfigError(where + "." + key + ": must be positive");
    return v;
}

inline std::size_t count(const json& j, const std::string& key, const std::string& where, std::size_t min) {
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError(where + "." + key + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < static_cast<long long>(min))
        throw ConfigError(where + "." + key + ": must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

inline KinkSpec parse_kink(const json& j, const std::string& where, std::set<std::string> extra = {}) {
    std::set<std::string> keys{"v", "x0", "orientation"};
    keys.insert(extra.begin(), extra.end());
    check_keys(j, keys, where);
    KinkSpec k;
    if (j.contains("v")) k.v = number(j["v"], "v", where);
    if (!(std::abs(k.v) < 1.0)) throw ConfigError(where + ".v: need |v| < 1");
    if (j.contains("x0")) k.x0 = number(j["x0"], "x0", where);
    if (j.contains("orientation")) {
        if (!j["orientation"].is_number_integer()) throw ConfigError(where + ".orientation: expected +1 or -1");
        k.orientation = j["orientation"].get<int>();
        if (k.orientation != 1 && k.orientation != -1) throw ConfigError(where + ".orientation: expected +1 or -1");
    }
    return k;
}

inline SolutionSpec parse_solution(const json& j) {
    const std::string w = "solution";
    if (!j.is_object()) throw ConfigError(w + ": expected an object");
    SolutionSpec s;
    if (j.contains("defect")) {
        check_keys(j, {"kind", "defect"}, w);
        if (j.contains("kind") && j["kind"] != "defect") throw ConfigError(w + ".kind: must be 'defect' with a defect block");
        s.kind = "defect";
        const json& d = j["defect"];
        const std::string wd = w + ".defect";
        check_keys(d, {"sigma", "seed", "x0", "seed_kink", "backlund"}, wd);
        if (!d.contains("sigma")) throw ConfigError(wd + ": missing sigma");
        s.sigma = positive(d["sigma"], "sigma", wd);
        if (d.contains("seed")) {
            if (!d["seed"].is_string()) throw ConfigError(wd + ".seed: expected a string");
            s.seed = d["seed"].get<std::string>();
        }
        if (s.seed != "vacuum" && s.seed != "kink") throw ConfigError(wd + ".seed: expected 'vacuum' or 'kink'");
        if (d.contains("x0")) s.defect_x0 = number(d["x0"], "x0", wd);
        if (d.contains("seed_kink")) {
            if (s.seed != "kink") throw ConfigError(wd + ".seed_kink: only valid with seed 'kink'");
            s.seed_kink = parse_kink(d["seed_kink"], wd + ".seed_kink");
        }
        if (d.contains("backlund")) {
            if (s.seed != "kink") throw ConfigError(wd + ".backlund: only valid with seed 'kink'");
            const json& b = d["backlund"];
            const std::string wb = wd + ".backlund";
            check_keys(b, {"phi0", "x_extent", "t_extent", "nx", "nt"}, wb);
            if (b.contains("phi0")) s.backlund.phi0 = number(b["phi0"], "phi0", wb);
            if (b.contains("x_extent")) s.backlund.x_extent = positive(b["x_extent"], "x_extent", wb);
            if (b.contains("t_extent")) s.backlund.t_extent = positive(b["t_extent"], "t_extent", wb);
            if (b.contains("nx")) s.backlund.nx = count(b["nx"], "nx", wb, 5);
            if (b.contains("nt")) s.backlund.nt = count(b["nt"], "nt", wb, 5);
        }
        return s;
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError(w + ".kind: expected a string");
    s.kind = j["kind"].get<std::string>();
    if (s.kind == "vacuum") {
        check_keys(j, {"kind"}, w);
    } else if (s.kind == "kink") {
        s.kink = parse_kink(j, w, {"kind"});
    } else {
        throw ConfigError(w + ".kind: expected 'vacuum', 'kink' or a defect block");
    }
    return s;
}

inline std::vector<double> parse_spectral(const json& j) {
    const std::string w = "spectral";
    check_keys(j, {"lambdas", "sweep"}, w);
    if (j.contains("lambdas") == j.contains("sweep")) throw ConfigError(w + ": give exactly one of lambdas, sweep");
    std::vector<double> out;
    if (j.contains("lambdas")) {
        if (!j["lambdas"].is_array() || j["lambdas"].empty()) throw ConfigError(w + ".lambdas: expected a non-empty array");
        for (const auto& v : j["lambdas"]) out.push_back(positive(v, "lambdas[]", w));
        return out;
    }
    const json& s = j["sweep"];
    const std::string ws = w + ".sweep";
    check_keys(s, {"min", "max", "count", "spacing"}, ws);
    for (const char* k : {"min", "max", "count"})
        if (!s.contains(k)) throw ConfigError(ws + ": missing " + k);
    const double lo = positive(s["min"], "min", ws), hi = positive(s["max"], "max", ws);
    const std::size_t n = count(s["count"], "count", ws, 1);
    if (!(hi >= lo)) throw ConfigError(ws + ": max must be >= min");
    std::string spacing = "linear";
    if (s.contains("spacing")) {
        if (!s["spacing"].is_string()) throw ConfigError(ws + ".spacing: expected 'linear' or 'log'");
        spacing = s["spacing"].get<std::string>();
    }
    if (spacing != "linear" && spacing != "log") throw ConfigError(ws + ".spacing: expected 'linear' or 'log'");
    for (std::size_t k = 0; k < n; ++k) {
        const double u = n == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n - 1);
        out.push_back(spacing == "log" ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
    }
    return out;
}

inline NumericsSpec parse_numerics(const json& j) {
    const std::string w = "numerics";
    check_keys(j, {"half_width", "nsteps", "grid", "lattice_sites", "involution", "seed", "tolerances"}, w);
    NumericsSpec n;
    if (j.contains("half_width")) n.half_width = positive(j["half_width"], "half_width", w);
    if (j.contains("nsteps")) n.nsteps = count(j["nsteps"], "nsteps", w, 1);
    if (j.contains("grid")) {
        const json& g = j["grid"];
        const std::string wg = w + ".grid";
        check_keys(g, {"nx", "nt", "x_extent", "t_extent"}, wg);
        if (g.contains("nx")) n.nx = count(g["nx"], "nx", wg, 3);
        if (g.contains("nt")) n.nt = count(g["nt"], "nt", wg, 3);
        if (g.contains("x_extent")) n.x_extent = positive(g["x_extent"], "x_extent", wg);
        if (g.contains("t_extent")) n.t_extent = positive(g["t_extent"], "t_extent", wg);
    }
    if (j.contains("lattice_sites")) {
        if (!j["lattice_sites"].is_array() || j["lattice_sites"].size() < 2)
            throw ConfigError(w + ".lattice_sites: expected an array of at least two site counts");
        n.lattice_sites.clear();
        for (const auto& v : j["lattice_sites"]) n.lattice_sites.push_back(count(v, "lattice_sites[]", w, 100));
        for (std::size_t k = 1; k < n.lattice_sites.size(); ++k)
            if (n.lattice_sites[k] <= n.lattice_sites[k - 1])
                throw ConfigError(w + ".lattice_sites: must increase");
    }
    if (j.contains("involution")) {
        const json& iv = j["involution"];
        const std::string wi = w + ".involution";
        check_keys(iv, {"lambda", "mu"}, wi);
        if (iv.contains("lambda")) n.involution_lambda = positive(iv["lambda"], "lambda", wi);
        if (iv.contains("mu")) n.involution_mu = positive(iv["mu"], "mu", wi);
    }
    if (j.contains("seed")) n.seed = static_cast<unsigned>(count(j["seed"], "seed", w, 0));
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        if (!t.is_object()) throw ConfigError(w + ".tolerances: expected an object");
        for (const auto& [k, v] : t.items()) {
            if (!default_tolerances().count(k)) throw ConfigError(w + ".tolerances: unknown key '" + k + "'");
            const double x = number(v, k, w + ".tolerances");
            if (x < 0.0) throw ConfigError(w + ".tolerances." + k + ": must be >= 0");
            n.tolerances[k] = x;
        }
    }
    return n;
}

} // namespace detail

inline ScenarioConfig parse_config(const nlohmann::json& j) {
    using detail::check_keys;
    check_keys(j, {"schema", "model", "solution", "spectral", "numerics", "suites"}, "config");
    if (!j.contains("schema") || !j["schema"].is_string() || j["schema"].get<std::string>() != schema_tag)
        throw ConfigError(std::string("config.schema: expected \"") + schema_tag + "\"");
    ScenarioConfig c;
    if (j.contains("model")) {
        const auto& m = j["model"];
        check_keys(m, {"m", "beta"}, "model");
        if (m.contains("m")) c.model.m = detail::positive(m["m"], "m", "model");
        if (m.contains("beta")) {
            c.model.beta = detail::number(m["beta"], "beta", "model");
            if (c.model.beta == 0.0) throw ConfigError("model.beta: must be nonzero");
        }
    }
    if (!j.contains("solution")) throw ConfigError("config: missing solution");
    c.solution = detail::parse_solution(j["solution"]);
    if (j.contains("spectral")) c.lambdas = detail::parse_spectral(j["spectral"]);
    if (j.contains("numerics")) c.numerics = detail::parse_numerics(j["numerics"]);
    if (j.contains("suites")) {
        const auto& s = j["suites"];
        if (s.is_string() && s.get<std::string>() == "all") {
        } else if (s.is_array()) {
            for (const auto& v : s) {
                if (!v.is_string()) throw ConfigError("suites: expected suite names");
                const auto name = v.get<std::string>();
                if (!known_suite(name)) throw ConfigError("suites: unknown suite '" + name + "'");
                c.suites.push_back(name);
            }
        } else {
            throw ConfigError("suites: expected \"all\" or an array of suite names");
        }
    }
    if (c.suites.empty())
        for (const auto& i : suite_catalogue()) c.suites.emplace_back(i.name);
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

/// Field or defect pair described by a scenario.
struct Scenario {
    std::optional<FieldEvaluator> field;
    std::optional<DefectPair> pair;
    std::vector<std::string> notes;

    bool is_defect() const { return pair.has_value(); }
};

inline Scenario build_scenario(const ScenarioConfig& c) {
    Scenario s;
    const auto& sol = c.solution;
    if (sol.kind == "vacuum") {
        s.field = make_vacuum(c.model);
    } else if (sol.kind == "kink") {
        s.field = make_kink(c.model, sol.kink.v, sol.kink.x0, sol.kink.orientation);
    } else if (sol.seed == "vacuum") {
        s.pair = bt_kink_from_vacuum(c.model, {sol.sigma}, sol.defect_x0);
    } else {
        const auto seed = make_kink(c.model, sol.seed_kink.v, sol.seed_kink.x0, sol.seed_kink.orientation);
        const auto& b = sol.backlund;
        const GridWindow w{-b.x_extent, b.x_extent, -b.t_extent, b.t_extent, b.nx, b.nt};
        auto res = backlund_integrate(seed, {sol.sigma}, 0.0, 0.0, b.phi0, w);
        std::ostringstream note;
        note.precision(3);
        note << "right field integrated from the kink seed: compatibility residual " << std::scientific
             << res.compatibility_residual << ", sine-Gordon residual " << res.sg_residual;
        s.notes.push_back(note.str());
        s.pair = DefectPair{seed, std::move(res.field), c.model, {sol.sigma}};
    }
    return s;
}

} // namespace sgdefect::cli
