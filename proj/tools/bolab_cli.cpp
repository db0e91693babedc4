#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bolab.h"
#include "json.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCliVersion = "1.0.0";
constexpr const char* kDefaultU0 = "modes:(1,0.5,0)";

struct Failure {
    std::string error;
    std::string message;
    int exit_code;
    json extra = json::object();
};

int exit_code_for(bolab_status s) { return s >= BOLAB_BLOW_UP ? 3 : 2; }

void check(bolab_status s) {
    if (s == BOLAB_OK) return;
    Failure f{bolab_status_name(s), bolab_last_error(), exit_code_for(s)};
    if (s == BOLAB_BLOW_UP) f.extra["last_finite_step"] = bolab_last_blowup_step();
    throw f;
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
};
using Field = Handle<bolab_field, bolab_field_free>;
using Profile = Handle<bolab_profile, bolab_profile_free>;
using Traj = Handle<bolab_trajectory, bolab_trajectory_free>;
using Control = Handle<bolab_control, bolab_control_free>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class Run {
public:
    explicit Run(const cli::RunConfig& cfg) : cfg_(cfg), hash_(cfg.hash()) {
        std::error_code ec;
        fs::create_directories(fs::path(cfg.out) / "fields", ec);
        if (ec) throw Failure{"IoError", "cannot create output directory '" + cfg.out + "': " + ec.message(), 2};
        ndjson_.open(fs::path(cfg.out) / "run.ndjson", std::ios::trunc);
        if (!ndjson_) throw Failure{"IoError", "cannot write run.ndjson in '" + cfg.out + "'", 2};
        emit("config", {{"config", cfg.to_json()}});
    }

    void emit(const std::string& type, json payload) {
        json rec = {{"type", type},
                    {"config_hash", hash_},
                    {"seed", cfg_.seed},
                    {"versions", {{"bolab", bolab_version()}, {"cli", kCliVersion}}}};
        for (auto& [k, v] : payload.items()) rec[k] = v;
        ndjson_ << rec.dump() << '\n';
        ndjson_.flush();
    }

    std::ofstream csv(const std::string& name, const std::string& header) {
        std::ofstream out(fs::path(cfg_.out) / name, std::ios::trunc);
        if (!out) throw Failure{"IoError", "cannot write " + name, 2};
        out << header << '\n';
        return out;
    }

    std::string write_field(const bolab_field* f, const std::string& name) {
        std::string rel = "fields/" + name + ".bofield";
        check(bolab_field_write(f, (fs::path(cfg_.out) / rel).string().c_str()));
        return rel;
    }

    // One NDJSON record per saved level, each pointing at its snapshot.
    void write_steps(const bolab_trajectory* t) {
        int L = bolab_trajectory_levels(t);
        for (int i = 0; i < L; ++i) {
            Field f;
            check(bolab_trajectory_field(t, i, &f.p));
            char name[32];
            std::snprintf(name, sizeof(name), "u_%06d", i);
            emit("step", {{"t", bolab_trajectory_time(t, i)}, {"snapshot", write_field(f.p, name)}});
        }
    }

    json write_invariants(const bolab_trajectory* t, const bolab_profile* a) {
        int L = bolab_trajectory_levels(t);
        std::vector<bolab_invariant_row> rows(static_cast<std::size_t>(L));
        double drift[4];
        check(bolab_invariants(t, a, rows.data(), drift));
        auto out = csv("invariants.csv", "t,I1,I2,Psi4,Psi6,energy_identity_defect");
        double max_defect = 0.0;
        for (const auto& r : rows) {
            out << fmt(r.t) << ',' << fmt(r.I1) << ',' << fmt(r.I2) << ',' << fmt(r.Psi4) << ',' << fmt(r.Psi6) << ','
                << fmt(r.energy_identity_defect) << '\n';
            max_defect = std::max(max_defect, std::abs(r.energy_identity_defect));
        }
        const auto& r0 = rows.front();
        return {{"initial", {{"I1", r0.I1}, {"I2", r0.I2}, {"Psi4", r0.Psi4}, {"Psi6", r0.Psi6}}},
                {"drift", {{"I1", drift[0]}, {"I2", drift[1]}, {"Psi4", drift[2]}, {"Psi6", drift[3]}}},
                {"max_energy_identity_defect", max_defect}};
    }

    const cli::RunConfig& cfg() const { return cfg_; }

private:
    cli::RunConfig cfg_;
    std::string hash_;
    std::ofstream ndjson_;
};

std::string u0_spec(const cli::RunConfig& c) { return c.u0.empty() ? kDefaultU0 : c.u0; }

void load_profile(const cli::RunConfig& c, Profile& a) {
    if (c.profile == "off") check(bolab_profile_off(c.grid, &a.p));
    else check(bolab_profile_bump(c.grid, c.center, c.radius, &a.p));
}

json profile_json(const cli::RunConfig& c) {
    if (c.profile == "off") return {{"kind", "off"}};
    return {{"kind", "bump"}, {"center", c.center}, {"radius", c.radius}};
}

void run_simulate(Run& run) {
    const auto& c = run.cfg();
    Field u0;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    Profile a;
    bolab_sim_options o;
    bolab_sim_defaults(&o);
    o.t1 = c.horizon;
    o.dt = c.dt;
    o.save_every = c.save_every;
    o.nonlinear = c.linear ? 0 : 1;
    if (c.feedback) {
        load_profile(c, a);
        o.source = BOLAB_SOURCE_FEEDBACK;
        o.profile = a.p;
    }
    Traj t;
    check(bolab_simulate(u0.p, &o, &t.p));
    run.write_steps(t.p);
    json inv = run.write_invariants(t.p, c.feedback ? a.p : nullptr);
    Field last;
    check(bolab_trajectory_field(t.p, bolab_trajectory_levels(t.p) - 1, &last.p));
    inv["levels"] = bolab_trajectory_levels(t.p);
    inv["final_l2"] = bolab_field_l2_norm(last.p);
    if (c.feedback) inv["profile"] = profile_json(c);
    run.emit("summary", inv);
}

void run_conserved(Run& run) {
    const auto& c = run.cfg();
    Field u0;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    bolab_sim_options o;
    bolab_sim_defaults(&o);
    o.t1 = c.horizon;
    o.dt = c.dt;
    o.save_every = c.save_every;
    o.nonlinear = c.linear ? 0 : 1;
    Traj t;
    check(bolab_simulate(u0.p, &o, &t.p));
    json inv = run.write_invariants(t.p, nullptr);
    inv.erase("max_energy_identity_defect");
    inv["levels"] = bolab_trajectory_levels(t.p);
    run.emit("conserved", inv);
}

void run_stabilize(Run& run) {
    const auto& c = run.cfg();
    Field u0;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    Profile a;
    load_profile(c, a);
    Traj t;
    double lambda = 0.0, r2 = 0.0;
    check(bolab_stabilize(u0.p, a.p, c.horizon, c.dt, c.save_every, &t.p, &lambda, &r2));
    run.write_steps(t.p);
    json inv = run.write_invariants(t.p, a.p);
    Field last;
    check(bolab_trajectory_field(t.p, bolab_trajectory_levels(t.p) - 1, &last.p));
    run.emit("stabilization", {{"lambda_fit", lambda},
                               {"r_squared", r2},
                               {"initial_l2", bolab_field_l2_norm(u0.p)},
                               {"final_l2", bolab_field_l2_norm(last.p)},
                               {"max_energy_identity_defect", inv["max_energy_identity_defect"]},
                               {"profile", profile_json(c)}});
}

void run_steer(Run& run) {
    const auto& c = run.cfg();
    Field u0, u1;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    if (c.u1.empty()) check(bolab_field_zero(c.grid, &u1.p));
    else check(bolab_field_parse(c.u1.c_str(), c.grid, &u1.p));
    Profile a;
    load_profile(c, a);
    bolab_control_options o;
    bolab_control_defaults(&o);
    o.tol = c.tol;
    o.max_iter = c.max_iter;
    o.n_quad = c.n_quad;
    o.dt = c.control_dt;
    o.cg_tol = c.cg_tol;
    o.smallness = c.smallness;
    Control ctl;
    check(bolab_steer(u0.p, u1.p, a.p, c.horizon, &o, &ctl.p));
    auto out = run.csv("contraction.csv", "iteration,contraction");
    json hist = json::array();
    for (int i = 0; i < bolab_control_history_size(ctl.p); ++i) {
        double h = bolab_control_history(ctl.p, i);
        out << i + 1 << ',' << fmt(h) << '\n';
        hist.push_back(h);
    }
    json warnings = json::array();
    for (int i = 0; i < bolab_control_warning_count(ctl.p); ++i) warnings.push_back(bolab_control_warning(ctl.p, i));
    Field h0, last;
    check(bolab_control_h0(ctl.p, &h0.p));
    Traj t;
    check(bolab_control_trajectory(ctl.p, &t.p));
    check(bolab_trajectory_field(t.p, bolab_trajectory_levels(t.p) - 1, &last.p));
    run.emit("control", {{"iterations", bolab_control_iterations(ctl.p)},
                         {"terminal_error", bolab_control_terminal_error(ctl.p)},
                         {"max_contraction", bolab_control_max_contraction(ctl.p)},
                         {"contraction_history", hist},
                         {"warnings", warnings},
                         {"h0_l2", bolab_field_l2_norm(h0.p)},
                         {"h0", run.write_field(h0.p, "h0")},
                         {"final", run.write_field(last.p, "u_T")},
                         {"profile", profile_json(c)}});
}

void run_observability(Run& run) {
    const auto& c = run.cfg();
    Profile a;
    load_profile(c, a);
    if (c.ensemble > 0) {
        std::vector<double> ratios(static_cast<std::size_t>(c.ensemble));
        check(bolab_observability_ensemble(a.p, c.horizon, c.dt, c.ensemble, c.seed, c.band, c.jobs, ratios.data()));
        auto out = run.csv("observability.csv", "member,ratio");
        double mx = 0.0;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            out << i << ',' << fmt(ratios[i]) << '\n';
            mx = std::max(mx, ratios[i]);
        }
        run.emit("observability_ensemble",
                 {{"ratios", ratios}, {"max_ratio", mx}, {"band", c.band}, {"profile", profile_json(c)}});
        return;
    }
    Field u0;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    bolab_flow flow = c.flow == "free" ? BOLAB_FLOW_FREE : c.flow == "linear" ? BOLAB_FLOW_LINEAR_DAMPED
                                                                                : BOLAB_FLOW_NONLINEAR;
    double ratio = 0.0;
    check(bolab_observability(u0.p, a.p, c.horizon, c.dt, flow, &ratio));
    auto out = run.csv("observability.csv", "member,ratio");
    out << 0 << ',' << fmt(ratio) << '\n';
    run.emit("observability", {{"ratio", ratio}, {"flow", c.flow}, {"profile", profile_json(c)}});
}

void run_gauge_check(Run& run) {
    const auto& c = run.cfg();
    Field u0;
    check(bolab_field_parse(u0_spec(c).c_str(), c.grid, &u0.p));
    bolab_sim_options o;
    bolab_sim_defaults(&o);
    o.t1 = c.horizon;
    o.dt = c.dt;
    o.save_every = c.save_every;
    Traj t;
    check(bolab_simulate(u0.p, &o, &t.p));
    bolab_gauge_report g;
    check(bolab_gauge_check(t.p, c.N, &g));
    run.emit("gauge", {{"N", c.N},
                       {"chain_rule", g.chain_rule},
                       {"ungauge", g.ungauge},
                       {"ungauge_high", g.ungauge_high},
                       {"residual_max", g.residual_max},
                       {"residual_order", g.residual_order}});
}

void run_norms(Run& run) {
    const auto& c = run.cfg();
    bolab_norm_options o;
    bolab_norm_defaults(&o);
    o.n_modes = c.grid;
    if (c.ensemble > 0) o.ensemble = c.ensemble;
    o.seed = c.seed;
    o.min_window = c.window;
    o.jobs = c.jobs;
    o.refine = c.refine;
    o.n_T = static_cast<int>(c.T_list.size());
    for (std::size_t i = 0; i < c.T_list.size(); ++i) o.T_list[i] = c.T_list[i];
    o.n_N = static_cast<int>(c.N_list.size());
    for (std::size_t i = 0; i < c.N_list.size(); ++i) o.N_list[i] = c.N_list[i];
    Field u0;
    if (!c.u0.empty()) {
        check(bolab_field_parse(c.u0.c_str(), c.grid, &u0.p));
        o.u0 = u0.p;
    }
    bolab_norm_report r;
    check(bolab_norm_check(c.check.c_str(), &o, &r));
    auto out = run.csv("norms.csv", "x,y");
    json sweep = json::array();
    for (int i = 0; i < r.n_sweep; ++i) {
        out << fmt(r.sweep_x[i]) << ',' << fmt(r.sweep_y[i]) << '\n';
        sweep.push_back({{"x", r.sweep_x[i]}, {"y", r.sweep_y[i]}});
    }
    run.emit("norm_report", {{"check", c.check},
                             {"name", r.name},
                             {"lhs", r.lhs},
                             {"rhs", r.rhs},
                             {"ratio", r.ratio},
                             {"ensemble_max_ratio", r.ensemble_max_ratio},
                             {"fitted_exponent", r.fitted_exponent},
                             {"report_seed", r.seed},
                             {"ensemble", r.ensemble},
                             {"sweep", sweep}});
}

void run_gramian_spectrum(Run& run) {
    const auto& c = run.cfg();
    Profile a;
    load_profile(c, a);
    std::vector<double> vals(static_cast<std::size_t>(c.k));
    check(bolab_gramian_spectrum(a.p, c.horizon, c.n_quad, c.k, c.seed, vals.data()));
    auto out = run.csv("gramian_spectrum.csv", "index,value");
    json v = json::array();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!std::isfinite(vals[i])) continue;
        out << i << ',' << fmt(vals[i]) << '\n';
        v.push_back(vals[i]);
    }
    run.emit("gramian_spectrum", {{"values", v}, {"n_quad", c.n_quad}, {"profile", profile_json(c)}});
}

void diagnose(const Failure& f) {
    json d = {{"error", f.error}, {"message", f.message}, {"exit_code", f.exit_code}};
    for (auto& [k, v] : f.extra.items()) d[k] = v;
    std::cerr << d.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benjamin-Ono pseudospectral lab"};
    app.set_version_flag("--version", std::string(kCliVersion));

    std::optional<std::string> verb, config, out, u0, u1, profile, flow, check_name;
    std::optional<int> grid, save_every, jobs, ensemble, band, N, k, n_quad, max_iter, refine;
    std::optional<double> dt, horizon, center, radius, tol, control_dt, cg_tol, smallness, window;
    std::optional<std::uint64_t> seed;
    std::vector<double> T_list;
    std::vector<int> N_list;
    bool linear = false, feedback = false;

    app.add_option("verb", verb, "simulate | stabilize | steer | observability | conserved | gauge-check | norms | "
                                 "gramian-spectrum");
    app.add_option("--config", config, "JSON run configuration; flags override its values");
    app.add_option("-o,--out", out, "Output directory (default: out)");
    app.add_option("--grid", grid, "Number of grid points / modes (default 128)");
    app.add_option("--dt", dt, "Time step (default 1e-3)");
    app.add_option("-T,--horizon", horizon, "Time horizon (default 1)");
    app.add_option("--u0", u0, "Initial datum: modes:(xi,amp,phase),... | random:s,norm,seed[,band] | file:path");
    app.add_option("--u1", u1, "Steering target (default 0)");
    app.add_option("--save-every", save_every, "Keep every k-th time level");
    app.add_option("--jobs", jobs, "Parallel workers across ensemble members");
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--ensemble", ensemble, "Ensemble size");
    app.add_flag("--linear", linear, "Drop the nonlinearity");
    app.add_flag("--feedback", feedback, "simulate: apply the damping feedback");
    app.add_option("--profile", profile, "Damping profile: bump | off");
    app.add_option("--center", center, "Bump center");
    app.add_option("--radius", radius, "Bump radius");
    app.add_option("--flow", flow, "observability flow: nonlinear | linear | free");
    app.add_option("--band", band, "observability ensemble frequency band");
    app.add_option("--N", N, "gauge-check frequency threshold");
    app.add_option("-k", k, "gramian-spectrum: number of eigenvalues");
    app.add_option("--n-quad", n_quad, "Gramian quadrature nodes");
    app.add_option("--tol", tol, "steer: Picard tolerance");
    app.add_option("--max-iter", max_iter, "steer: Picard iteration cap");
    app.add_option("--control-dt", control_dt, "steer: time step (0: automatic)");
    app.add_option("--cg-tol", cg_tol, "steer: CG tolerance");
    app.add_option("--smallness", smallness, "steer: smallness threshold");
    app.add_option("--check", check_name, "norms: strichartz | smoothing | bilinear | highfreq | interp");
    app.add_option("--window", window, "norms: minimum time window of the extension");
    app.add_option("--refine", refine, "norms: refinement factor (strichartz)");
    app.add_option("--T-list", T_list, "norms: horizons")->delimiter(',');
    app.add_option("--N-list", N_list, "norms: frequency thresholds")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnose(Failure{"InvalidArgument", e.what(), 2});
        return 2;
    }

    try {
        cli::RunConfig cfg;
        try {
            if (config) cfg = cli::load_config_file(*config);
        } catch (const cli::ConfigError& e) {
            throw Failure{"ParseError", e.message, 2};
        }
        auto set = [](auto& dst, const auto& src) {
            if (src) dst = *src;
        };
        set(cfg.verb, verb);
        set(cfg.out, out);
        set(cfg.grid, grid);
        set(cfg.dt, dt);
        set(cfg.horizon, horizon);
        set(cfg.u0, u0);
        set(cfg.u1, u1);
        set(cfg.save_every, save_every);
        set(cfg.jobs, jobs);
        set(cfg.seed, seed);
        set(cfg.ensemble, ensemble);
        set(cfg.profile, profile);
        set(cfg.center, center);
        set(cfg.radius, radius);
        set(cfg.flow, flow);
        set(cfg.band, band);
        set(cfg.N, N);
        set(cfg.k, k);
        set(cfg.n_quad, n_quad);
        set(cfg.tol, tol);
        set(cfg.max_iter, max_iter);
        set(cfg.control_dt, control_dt);
        set(cfg.cg_tol, cg_tol);
        set(cfg.smallness, smallness);
        set(cfg.check, check_name);
        set(cfg.window, window);
        set(cfg.refine, refine);
        if (!T_list.empty()) cfg.T_list = T_list;
        if (!N_list.empty()) cfg.N_list = N_list;
        if (linear) cfg.linear = true;
        if (feedback) cfg.feedback = true;
        try {
            cli::validate(cfg);
        } catch (const cli::ConfigError& e) {
            throw Failure{"InvalidArgument", e.message, 2};
        }

        Run run(cfg);
        if (cfg.verb == "simulate") run_simulate(run);
        else if (cfg.verb == "conserved") run_conserved(run);
        else if (cfg.verb == "stabilize") run_stabilize(run);
        else if (cfg.verb == "steer") run_steer(run);
        else if (cfg.verb == "observability") run_observability(run);
        else if (cfg.verb == "gauge-check") run_gauge_check(run);
        else if (cfg.verb == "norms") run_norms(run);
        else run_gramian_spectrum(run);
        return 0;
    } catch (const Failure& f) {
        diagnose(f);
        return f.exit_code;
    } catch (const std::exception& e) {
        diagnose(Failure{"Internal", e.what(), 3});
        return 3;
    }
}
