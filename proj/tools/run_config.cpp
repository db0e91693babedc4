#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace cli {

using nlohmann::json;

const std::vector<std::string>& verbs() {
    static const std::vector<std::string> v{"simulate",   "stabilize",   "steer", "observability",
                                            "conserved",  "gauge-check", "norms", "gramian-spectrum"};
    return v;
}

json RunConfig::to_json() const {
    return json{{"verb", verb},         {"grid", grid},
                {"dt", dt},             {"horizon", horizon},
                {"u0", u0},             {"u1", u1},
                {"save_every", save_every}, {"seed", seed},
                {"ensemble", ensemble}, {"linear", linear},
                {"feedback", feedback}, {"profile", profile},
                {"center", center},     {"radius", radius},
                {"flow", flow},         {"band", band},
                {"N", N},               {"k", k},
                {"n_quad", n_quad},     {"tol", tol},
                {"max_iter", max_iter}, {"control_dt", control_dt},
                {"cg_tol", cg_tol},     {"smallness", smallness},
                {"check", check},       {"window", window},
                {"refine", refine},     {"T_list", T_list},
                {"N_list", N_list}};
}

std::string RunConfig::hash() const {
    // FNV-1a over the canonical (key-sorted) serialization.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : to_json().dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

template <class T>
void take(const json& j, const char* key, T& dst) {
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
        dst = it->get<T>();
    } catch (const json::exception&) {
        throw ConfigError{std::string("config key '") + key + "' has the wrong type"};
    }
}

}  // namespace

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw ConfigError{"config must be a JSON object"};
    static const std::vector<std::string> known{
        "verb",     "out",    "grid",      "dt",         "horizon",  "u0",     "u1",     "save_every",
        "jobs",     "seed",   "ensemble",  "linear",     "feedback", "profile", "center", "radius",
        "flow",     "band",   "N",         "k",          "n_quad",   "tol",    "max_iter", "control_dt",
        "cg_tol",   "smallness", "check",  "window",     "refine",   "T_list", "N_list"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError{"unknown config key '" + key + "'"};
    take(j, "verb", c.verb);
    take(j, "out", c.out);
    take(j, "grid", c.grid);
    take(j, "dt", c.dt);
    take(j, "horizon", c.horizon);
    take(j, "u0", c.u0);
    take(j, "u1", c.u1);
    take(j, "save_every", c.save_every);
    take(j, "jobs", c.jobs);
    take(j, "seed", c.seed);
    take(j, "ensemble", c.ensemble);
    take(j, "linear", c.linear);
    take(j, "feedback", c.feedback);
    take(j, "profile", c.profile);
    take(j, "center", c.center);
    take(j, "radius", c.radius);
    take(j, "flow", c.flow);
    take(j, "band", c.band);
    take(j, "N", c.N);
    take(j, "k", c.k);
    take(j, "n_quad", c.n_quad);
    take(j, "tol", c.tol);
    take(j, "max_iter", c.max_iter);
    take(j, "control_dt", c.control_dt);
    take(j, "cg_tol", c.cg_tol);
    take(j, "smallness", c.smallness);
    take(j, "check", c.check);
    take(j, "window", c.window);
    take(j, "refine", c.refine);
    take(j, "T_list", c.T_list);
    take(j, "N_list", c.N_list);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{"cannot open config file '" + path + "'"};
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError{"config file '" + path + "' is not valid JSON: " + e.what()};
    }
    RunConfig c;
    apply_json(c, j);
    return c;
}

namespace {

void positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError{std::string(name) + " must be positive and finite"};
}

void at_least(int v, int lo, const char* name) {
    if (v < lo) throw ConfigError{std::string(name) + " must be at least " + std::to_string(lo)};
}

}  // namespace

void validate(const RunConfig& c) {
    if (std::find(verbs().begin(), verbs().end(), c.verb) == verbs().end())
        throw ConfigError{"unknown verb '" + c.verb + "'"};
    if (c.out.empty()) throw ConfigError{"output directory must not be empty"};
    at_least(c.grid, 4, "grid");
    if (c.grid % 2) throw ConfigError{"grid must be even"};
    positive(c.dt, "dt");
    positive(c.horizon, "horizon");
    if (c.dt > c.horizon) throw ConfigError{"dt must not exceed the horizon"};
    at_least(c.save_every, 1, "save_every");
    at_least(c.jobs, 1, "jobs");
    at_least(c.ensemble, 0, "ensemble");
    if (c.profile != "bump" && c.profile != "off") throw ConfigError{"profile must be 'bump' or 'off'"};
    if (!std::isfinite(c.center)) throw ConfigError{"center must be finite"};
    positive(c.radius, "radius");
    if (c.flow != "nonlinear" && c.flow != "linear" && c.flow != "free")
        throw ConfigError{"flow must be 'nonlinear', 'linear' or 'free'"};
    at_least(c.band, 1, "band");
    at_least(c.N, 1, "N");
    at_least(c.k, 1, "k");
    at_least(c.n_quad, 4, "n_quad");
    positive(c.tol, "tol");
    at_least(c.max_iter, 1, "max_iter");
    if (c.control_dt < 0.0 || !std::isfinite(c.control_dt)) throw ConfigError{"control_dt must be >= 0"};
    positive(c.cg_tol, "cg_tol");
    positive(c.smallness, "smallness");
    positive(c.window, "window");
    at_least(c.refine, 1, "refine");
    if (c.T_list.size() > 32 || c.N_list.size() > 32) throw ConfigError{"sweep lists hold at most 32 entries"};
    for (double T : c.T_list) positive(T, "T_list entries");
    for (int N : c.N_list) at_least(N, 1, "N_list entries");
    if (c.verb == "norms") {
        static const std::vector<std::string> checks{"strichartz", "smoothing", "bilinear", "highfreq", "interp"};
        if (std::find(checks.begin(), checks.end(), c.check) == checks.end())
            throw ConfigError{"norms needs --check strichartz|smoothing|bilinear|highfreq|interp"};
    }
    if ((c.verb == "observability" || c.verb == "gramian-spectrum" || c.verb == "steer") && c.profile == "off")
        throw ConfigError{c.verb + " needs a damping profile"};
}

}  // namespace cli
