#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli {

struct ConfigError {
    std::string message;
};

struct RunConfig {
    std::string verb;
    std::string out = "out";
    int grid = 128;
    double dt = 1e-3;
    double horizon = 1.0;
    std::string u0;  // empty: verb default
    std::string u1;  // empty: zero target
    int save_every = 1;
    int jobs = 1;
    std::uint64_t seed = 1;
    int ensemble = 0;  // 0: verb default
    bool linear = false;
    bool feedback = false;
    std::string profile = "bump";
    double center = 3.141592653589793;
    double radius = 1.5707963267948966;
    std::string flow = "nonlinear";
    int band = 16;
    int N = 16;
    int k = 8;
    int n_quad = 2048;
    double tol = 1e-10;
    int max_iter = 20;
    double control_dt = 0.0;
    double cg_tol = 1e-13;
    double smallness = 5e-2;
    std::string check;
    double window = 16.0;
    int refine = 1;
    std::vector<double> T_list;
    std::vector<int> N_list;

    // Settings that determine results; excludes the output directory and job count.
    nlohmann::json to_json() const;
    std::string hash() const;
};

const std::vector<std::string>& verbs();

// Overlays keys of a JSON object onto cfg; unknown keys and wrong types raise ConfigError.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);
void validate(const RunConfig& cfg);

}  // namespace cli
