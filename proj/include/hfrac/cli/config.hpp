#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../data.hpp"
#include "../error.hpp"
#include "../nonlocal.hpp"

namespace hfrac::cli {

using json = nlohmann::json;

inline DomainError config_error(const std::string& what) { return DomainError("config", what); }

// Every accepted key with its default. Unknown keys are rejected.
inline const json& config_defaults() {
    static const json d = [] {
        json j;
        j["n"] = 1;
        j["s"] = 0.5;
        j["p"] = 2.0;
        j["norm"] = "koranyi";
        j["epsilon"] = nullptr;
        j["seed"] = std::uint64_t{20240611};
        j["threads"] = 1;
        j["mesh.h"] = 0.25;
        j["mesh.radius"] = 1.0;
        j["mesh.R_ext"] = 1.5;
        j["mesh.center"] = json::array();
        for (const char* fn : {"u", "f", "g"}) {
            const std::string p = fn;
            j[p + ".kind"] = "constant";
            j[p + ".value"] = 0.0;
            j[p + ".amplitude"] = 1.0;
            j[p + ".width"] = 0.2;
            j[p + ".center"] = json::array();
            j[p + ".a"] = 1.0;
            j[p + ".b"] = 0.5;
            j[p + ".r1"] = 1.1;
            j[p + ".r2"] = 1.3;
            j[p + ".coeffs"] = {1.0, 0.0, 0.0, 0.0};
        }
        j["u.kind"] = "bump";
        j["u.b"] = 1.0;
        j["g.kind"] = "sign-flip-shell";
        j["g.b"] = 0.0;
        j["g.r1"] = 1.2;
        j["g.width"] = 0.1;
        j["points"] = json::array();
        j["s_list"] = json::array();
        j["h_list"] = json::array();
        j["t_list"] = {0.5, 1.0, 1.25};
        j["delta_list"] = {0.5, 1.0};
        j["harnack.checks"] = {"harnack", "weak_harnack", "tail_control", "boundedness", "caccioppoli", "positivity"};
        j["harnack.xi0"] = json::array();
        j["harnack.r"] = 1.0 / 6.0;
        j["harnack.R"] = 1.0;
        j["harnack.q"] = 1.5;
        j["harnack.d"] = 0.05;
        j["harnack.k"] = nullptr;
        j["harnack.sigma"] = 0.5;
        j["harnack.delta"] = 0.1;
        j["quad.rho_in"] = 1e-3;
        j["quad.rho_out"] = 16.0;
        j["quad.nodes_per_decade"] = 32;
        j["quad.angular_samples"] = 8192;
        j["quad.c2_samples"] = 262144;
        j["kernel.angular_samples"] = std::uint64_t{1024};
        j["solver.method"] = "auto";
        j["solver.tol"] = 1e-8;
        j["solver.rel_tol"] = 1e-12;
        j["solver.max_iter"] = 0;
        j["asymptotics.s_list"] = {0.7, 0.8, 0.9, 0.95, 0.99};
        j["robustness.s_list"] = json::array();
        return j;
    }();
    return d;
}

// Keys that do not influence any output value.
inline bool hash_excluded(const std::string& key) { return key == "threads"; }

inline std::string env_name(const std::string& key) {
    std::string e = "HFRAC_";
    for (char c : key) e += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return e;
}

struct RunConfig {
    std::string command;
    json values;   // flat: key -> value, every default key present
    std::string out_dir = ".";

    const json& at(const std::string& key) const { return values.at(key); }
    double num(const std::string& key) const { return values.at(key).get<double>(); }
    int integer(const std::string& key) const { return values.at(key).get<int>(); }
    std::string str(const std::string& key) const { return values.at(key).get<std::string>(); }
    std::vector<double> list(const std::string& key) const { return values.at(key).get<std::vector<double>>(); }

    std::uint64_t hash() const {
        json h = json::object();
        for (auto it = values.begin(); it != values.end(); ++it)
            if (!hash_excluded(it.key())) h[it.key()] = it.value();
        const std::string text = command + "\n" + h.dump();
        std::uint64_t x = 0xcbf29ce484222325ull;
        for (unsigned char c : text) {
            x ^= c;
            x *= 0x100000001b3ull;
        }
        return x;
    }

    std::string hash_hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
        return buf;
    }

    FracParams params() const {
        FracParams prm;
        prm.n = integer("n");
        prm.s = num("s");
        prm.p = num("p");
        prm.norm = HomNorm{parse_norm_kind(str("norm"))};
        if (!at("epsilon").is_null()) prm.epsilon = num("epsilon");
        return prm;
    }

    DataSpec data(const std::string& fn) const {
        DataSpec d;
        d.kind = str(fn + ".kind");
        d.value = num(fn + ".value");
        d.amplitude = num(fn + ".amplitude");
        d.width = num(fn + ".width");
        d.center = list(fn + ".center");
        d.a = num(fn + ".a");
        d.b = num(fn + ".b");
        d.r1 = num(fn + ".r1");
        d.r2 = num(fn + ".r2");
        const auto c = list(fn + ".coeffs");
        if (c.size() != 4) throw config_error(fn + ".coeffs must have 4 entries");
        for (int k = 0; k < 4; ++k) d.coeffs[k] = c[k];
        return d;
    }

    QuadConfig quad() const {
        QuadConfig q;
        q.rho_in = num("quad.rho_in");
        q.rho_out = num("quad.rho_out");
        q.nodes_per_decade = integer("quad.nodes_per_decade");
        q.angular_samples = values.at("quad.angular_samples").get<std::size_t>();
        q.c2_samples = values.at("quad.c2_samples").get<std::size_t>();
        q.seed = values.at("seed").get<std::uint64_t>();
        return q;
    }
};

namespace detail {

inline bool same_type(const json& def, const json& v) {
    if (def.is_number()) return v.is_number();
    if (def.is_null()) return v.is_null() || v.is_number();
    if (def.is_string()) return v.is_string();
    if (def.is_array()) return v.is_array();
    return def.type() == v.type();
}

inline void set_key(json& values, const std::string& key, const json& v, const std::string& origin) {
    const auto& def = config_defaults();
    if (!def.contains(key)) throw config_error("unknown key '" + key + "' in " + origin);
    if (!same_type(def.at(key), v)) throw config_error("key '" + key + "' has the wrong type in " + origin);
    values[key] = v;
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw config_error(what);
}

inline void check_list(const RunConfig& c, const std::string& key, double lo, double hi, bool increasing) {
    const auto& a = c.at(key);
    for (const auto& e : a) require(e.is_number(), key + " entries must be numbers");
    const auto v = c.list(key);
    for (std::size_t k = 0; k < v.size(); ++k) {
        require(v[k] > lo && v[k] < hi, key + " entries out of range");
        if (increasing && k > 0) require(v[k] > v[k - 1], key + " must be increasing");
    }
}

} // namespace detail

// Range checks run before any computation.
inline void validate(const RunConfig& c) {
    using detail::require;
    static const std::vector<std::string> commands{"eval", "solve", "harnack", "asymptotics"};
    require(std::find(commands.begin(), commands.end(), c.command) != commands.end(),
            "unknown command '" + c.command + "'");
    require(c.at("n").is_number_integer(), "n must be an integer");
    const int n = c.integer("n");
    require(n == 1 || n == 2, "n must be 1 or 2");
    const int D = 2 * n + 1;
    try {
        c.params().validate();
    } catch (const Error& e) {
        throw config_error(e.what());
    }
    require(c.at("seed").is_number_unsigned(), "seed must be a nonnegative integer");
    require(c.at("threads").is_number_integer() && c.integer("threads") >= 1, "threads must be >= 1");
    require(c.num("mesh.h") > 0.0, "mesh.h must be positive");
    require(c.num("mesh.radius") > 0.0, "mesh.radius must be positive");
    require(c.num("mesh.R_ext") >= c.num("mesh.radius"), "mesh.R_ext must be >= mesh.radius");
    for (const char* k : {"mesh.center", "harnack.xi0"}) {
        const auto v = c.list(k);
        require(v.empty() || static_cast<int>(v.size()) == D, std::string(k) + " must have 2n+1 coordinates");
    }
    for (const char* fn : {"u", "f", "g"}) {
        const std::string p = fn;
        const auto kinds = data_kinds();
        require(std::find(kinds.begin(), kinds.end(), c.str(p + ".kind")) != kinds.end(),
                "unknown " + p + ".kind '" + c.str(p + ".kind") + "'");
        const auto ctr = c.list(p + ".center");
        require(ctr.empty() || static_cast<int>(ctr.size()) == D, p + ".center must have 2n+1 coordinates");
        require(c.num(p + ".width") > 0.0, p + ".width must be positive");
        require(c.num(p + ".a") > 0.0, p + ".a must be positive");
        require(c.num(p + ".b") >= 0.0, p + ".b must be nonnegative");
        require(c.list(p + ".coeffs").size() == 4, p + ".coeffs must have 4 entries");
    }
    for (const auto& pt : c.at("points")) {
        require(pt.is_array() && static_cast<int>(pt.size()) == D, "points must be arrays of 2n+1 numbers");
        for (const auto& e : pt) require(e.is_number(), "points must be arrays of 2n+1 numbers");
    }
    detail::check_list(c, "s_list", 0.0, 1.0, true);
    detail::check_list(c, "asymptotics.s_list", 0.0, 1.0, true);
    detail::check_list(c, "robustness.s_list", 0.0, 1.0, true);
    detail::check_list(c, "h_list", 0.0, 1e300, false);
    detail::check_list(c, "t_list", 0.0, 1e300, false);
    detail::check_list(c, "delta_list", 0.0, 1.0 + 1e-15, false);
    static const std::vector<std::string> checks{"harnack", "weak_harnack", "tail_control",
                                                 "boundedness", "caccioppoli", "positivity"};
    for (const auto& e : c.at("harnack.checks"))
        require(e.is_string() && std::find(checks.begin(), checks.end(), e.get<std::string>()) != checks.end(),
                "unknown entry in harnack.checks");
    require(c.num("harnack.r") > 0.0 && c.num("harnack.R") > 0.0, "harnack radii must be positive");
    require(c.num("harnack.q") > 1.0 && c.num("harnack.q") < c.num("p"), "harnack.q must lie in (1,p)");
    require(c.num("harnack.d") > 0.0, "harnack.d must be positive");
    require(c.num("harnack.sigma") > 0.0 && c.num("harnack.sigma") <= 1.0, "harnack.sigma must lie in (0,1]");
    require(c.num("harnack.delta") > 0.0 && c.num("harnack.delta") < 0.25, "harnack.delta must lie in (0,1/4)");
    try {
        c.quad().validate();
    } catch (const Error& e) {
        throw config_error(e.what());
    }
    require(c.at("kernel.angular_samples").is_number_unsigned() && c.integer("kernel.angular_samples") >= 2,
            "kernel.angular_samples must be >= 2");
    const auto m = c.str("solver.method");
    require(m == "auto" || m == "linear" || m == "nonlinear", "solver.method must be auto, linear or nonlinear");
    require(m != "linear" || c.num("p") == 2.0, "solver.method linear needs p = 2");
    require(c.num("solver.tol") > 0.0 && c.num("solver.rel_tol") > 0.0, "solver tolerances must be positive");
    require(c.at("solver.max_iter").is_number_integer() && c.integer("solver.max_iter") >= 0,
            "solver.max_iter must be a nonnegative integer");
}

inline json parse_value(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        return json(text);
    }
}

// Defaults, then the config file, then HFRAC_* environment variables, then
// explicit flag values.
inline RunConfig load_config(const std::string& command, const std::string& path,
                             const std::map<std::string, json>& flags, const std::string& out_dir) {
    RunConfig c;
    c.command = command;
    c.values = config_defaults();
    c.out_dir = out_dir;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot read config file '" + path + "'");
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error& e) {
            throw config_error(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!file.is_object()) throw config_error("config file must hold a JSON object");
        for (auto it = file.begin(); it != file.end(); ++it) {
            if (it.key() == "command") {
                if (!it.value().is_string() || it.value().get<std::string>() != command)
                    throw config_error("config file is for a different command");
                continue;
            }
            detail::set_key(c.values, it.key(), it.value(), "config file");
        }
    }
    for (auto it = config_defaults().begin(); it != config_defaults().end(); ++it)
        if (const char* v = std::getenv(env_name(it.key()).c_str()))
            detail::set_key(c.values, it.key(), parse_value(v), "environment");
    for (const auto& [k, v] : flags) detail::set_key(c.values, k, v, "command line");
    validate(c);
    return c;
}

} // namespace hfrac::cli
