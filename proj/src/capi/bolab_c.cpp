#include "bolab.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "bolab/bourgain.hpp"
#include "bolab/control.hpp"
#include "bolab/error.hpp"
#include "bolab/gauge.hpp"
#include "bolab/initial_data.hpp"
#include "bolab/invariants.hpp"
#include "bolab/snapshot.hpp"
#include "bolab/solver.hpp"
#include "bolab/spectral.hpp"

struct bolab_field {
    bolab::RealField f;
};
struct bolab_profile {
    bolab::DampingProfile a;
};
struct bolab_trajectory {
    bolab::Trajectory t;
};
struct bolab_control {
    bolab::ControlResult r;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_blowup_step = -1;

bolab_status to_status(bolab::ErrorCode c) {
    using bolab::ErrorCode;
    switch (c) {
        case ErrorCode::InvalidArgument: return BOLAB_INVALID_ARGUMENT;
        case ErrorCode::NonZeroMean: return BOLAB_NON_ZERO_MEAN;
        case ErrorCode::GridMismatch: return BOLAB_GRID_MISMATCH;
        case ErrorCode::MeanMismatch: return BOLAB_MEAN_MISMATCH;
        case ErrorCode::ZeroData: return BOLAB_ZERO_DATA;
        case ErrorCode::Parse: return BOLAB_PARSE_ERROR;
        case ErrorCode::Io: return BOLAB_IO_ERROR;
        case ErrorCode::BlowUp: return BOLAB_BLOW_UP;
        case ErrorCode::NoConvergence: return BOLAB_NO_CONVERGENCE;
        case ErrorCode::Internal: return BOLAB_INTERNAL;
    }
    return BOLAB_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread-local message.
template <class Fn>
bolab_status guard(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BOLAB_OK;
    } catch (const bolab::BlowUpError& e) {
        g_last_error = e.what();
        g_blowup_step = e.last_finite_step();
        return BOLAB_BLOW_UP;
    } catch (const bolab::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return BOLAB_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return BOLAB_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) bolab::fail(bolab::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

bolab::GridSpec grid_of(int n_modes) { return bolab::GridSpec::make(n_modes); }

void positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) bolab::fail(bolab::ErrorCode::InvalidArgument, std::string(what) + " must be positive");
}

}  // namespace

extern "C" {

const char* bolab_version(void) { return "1.0.0"; }

const char* bolab_status_name(bolab_status s) {
    switch (s) {
        case BOLAB_OK: return "Ok";
        case BOLAB_INVALID_ARGUMENT: return "InvalidArgument";
        case BOLAB_NON_ZERO_MEAN: return "NonZeroMean";
        case BOLAB_GRID_MISMATCH: return "GridMismatch";
        case BOLAB_MEAN_MISMATCH: return "MeanMismatch";
        case BOLAB_ZERO_DATA: return "ZeroData";
        case BOLAB_PARSE_ERROR: return "ParseError";
        case BOLAB_IO_ERROR: return "IoError";
        case BOLAB_BLOW_UP: return "BlowUp";
        case BOLAB_NO_CONVERGENCE: return "NoConvergence";
        case BOLAB_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* bolab_last_error(void) { return g_last_error.c_str(); }
int bolab_last_blowup_step(void) { return g_blowup_step; }

/* ---- fields ---- */

bolab_status bolab_field_parse(const char* spec, int n_modes, bolab_field** out) {
    return guard([&] {
        need(spec, "spec");
        need(out, "out");
        *out = new bolab_field{bolab::initial_data(spec, grid_of(n_modes))};
    });
}

bolab_status bolab_field_zero(int n_modes, bolab_field** out) {
    return guard([&] {
        need(out, "out");
        *out = new bolab_field{bolab::RealField(grid_of(n_modes))};
    });
}

bolab_status bolab_field_from_samples(int n_modes, const double* samples, bolab_field** out) {
    return guard([&] {
        need(samples, "samples");
        need(out, "out");
        std::vector<double> s(samples, samples + n_modes);
        *out = new bolab_field{bolab::RealField::from_samples(grid_of(n_modes), s)};
    });
}

bolab_status bolab_field_read(const char* path, bolab_field** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new bolab_field{bolab::read_snapshot(path)};
    });
}

bolab_status bolab_field_write(const bolab_field* f, const char* path) {
    return guard([&] {
        need(f, "field");
        need(path, "path");
        bolab::write_snapshot(path, f->f);
    });
}

void bolab_field_free(bolab_field* f) { delete f; }

int bolab_field_n_modes(const bolab_field* f) { return f ? f->f.grid().n_modes : 0; }

bolab_status bolab_field_coefficients(const bolab_field* f, double* re, double* im) {
    return guard([&] {
        need(f, "field");
        need(re, "re");
        need(im, "im");
        const auto& c = f->f.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
            re[i] = c[i].real();
            im[i] = c[i].imag();
        }
    });
}

bolab_status bolab_field_samples(const bolab_field* f, double* out) {
    return guard([&] {
        need(f, "field");
        need(out, "out");
        auto s = f->f.samples();
        std::copy(s.begin(), s.end(), out);
    });
}

double bolab_field_l2_norm(const bolab_field* f) {
    return f ? bolab::l2_norm(f->f) : std::numeric_limits<double>::quiet_NaN();
}

double bolab_field_mean(const bolab_field* f) { return f ? f->f.mean() : std::numeric_limits<double>::quiet_NaN(); }

bolab_status bolab_field_distance(const bolab_field* a, const bolab_field* b, double* out) {
    return guard([&] {
        need(a, "a");
        need(b, "b");
        need(out, "out");
        bolab::require_same_grid(a->f.grid(), b->f.grid());
        double nb = bolab::l2_norm(b->f);
        *out = bolab::l2_norm(a->f - b->f) / std::max(nb, 1e-300);
    });
}

/* ---- profiles ---- */

bolab_status bolab_profile_bump(int n_modes, double center, double radius, bolab_profile** out) {
    return guard([&] {
        need(out, "out");
        *out = new bolab_profile{bolab::DampingProfile::bump(grid_of(n_modes), center, radius)};
    });
}

bolab_status bolab_profile_off(int n_modes, bolab_profile** out) {
    return guard([&] {
        need(out, "out");
        *out = new bolab_profile{bolab::DampingProfile::none(grid_of(n_modes))};
    });
}

void bolab_profile_free(bolab_profile* p) { delete p; }

/* ---- simulation ---- */

void bolab_sim_defaults(bolab_sim_options* o) {
    if (!o) return;
    o->t0 = 0.0;
    o->t1 = 1.0;
    o->dt = 1e-3;
    o->save_every = 1;
    o->nonlinear = 1;
    o->source = BOLAB_SOURCE_NONE;
    o->profile = nullptr;
}

bolab_status bolab_simulate(const bolab_field* u0, const bolab_sim_options* o, bolab_trajectory** out) {
    return guard([&] {
        need(u0, "u0");
        need(o, "options");
        need(out, "out");
        if (o->save_every < 1) bolab::fail(bolab::ErrorCode::InvalidArgument, "save_every must be positive");
        double dt = o->dt > 0.0 ? o->dt : bolab::default_dt(u0->f);
        bolab::TimeGrid grid = bolab::TimeGrid::covering(o->t0, o->t1, dt);
        if (grid.n_steps % o->save_every) grid.n_steps += o->save_every - grid.n_steps % o->save_every;
        bolab::SourceSpec src = bolab::ZeroSource{};
        if (o->source == BOLAB_SOURCE_FEEDBACK) {
            need(o->profile, "profile");
            bolab::require_same_grid(u0->f.grid(), o->profile->a.grid());
            src = bolab::FeedbackSource{o->profile->a, 1.0};
        } else if (o->source != BOLAB_SOURCE_NONE) {
            bolab::fail(bolab::ErrorCode::InvalidArgument, "unknown source kind");
        }
        bolab::IntegrateOptions io;
        io.nonlinear = o->nonlinear != 0;
        io.save_every = o->save_every;
        *out = new bolab_trajectory{bolab::integrate(u0->f, src, grid, io)};
    });
}

void bolab_trajectory_free(bolab_trajectory* t) { delete t; }
int bolab_trajectory_levels(const bolab_trajectory* t) { return t ? static_cast<int>(t->t.size()) : 0; }

double bolab_trajectory_time(const bolab_trajectory* t, int level) {
    if (!t || level < 0 || level >= static_cast<int>(t->t.size())) return std::numeric_limits<double>::quiet_NaN();
    return t->t.time(static_cast<std::size_t>(level));
}

double bolab_trajectory_dt(const bolab_trajectory* t) {
    return t ? t->t.times.dt() : std::numeric_limits<double>::quiet_NaN();
}

bolab_status bolab_trajectory_field(const bolab_trajectory* t, int level, bolab_field** out) {
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        if (level < 0 || level >= static_cast<int>(t->t.size()))
            bolab::fail(bolab::ErrorCode::InvalidArgument, "level out of range");
        *out = new bolab_field{t->t.fields[static_cast<std::size_t>(level)]};
    });
}

/* ---- invariants ---- */

bolab_status bolab_invariants(const bolab_trajectory* t, const bolab_profile* profile, bolab_invariant_row* rows,
                              double drift[4]) {
    return guard([&] {
        need(t, "trajectory");
        need(rows, "rows");
        auto reps = bolab::invariant_reports(t->t);
        std::vector<double> defect(t->t.size(), 0.0);
        if (profile) {
            bolab::require_same_grid(t->t.fields.front().grid(), profile->a.grid());
            defect = bolab::damped_energy_identity(t->t, profile->a);
        }
        for (std::size_t i = 0; i < t->t.size(); ++i) {
            rows[i].t = t->t.time(i);
            rows[i].I1 = reps[0].values[i];
            rows[i].I2 = reps[1].values[i];
            rows[i].Psi4 = reps[2].values[i];
            rows[i].Psi6 = reps[3].values[i];
            rows[i].energy_identity_defect = defect[i];
        }
        if (drift)
            for (int k = 0; k < 4; ++k) drift[k] = reps[k].drift;
    });
}

/* ---- gauge ---- */

bolab_status bolab_gauge_check(const bolab_trajectory* t, int N, bolab_gauge_report* out) {
    return guard([&] {
        need(t, "trajectory");
        need(out, "out");
        if (N < 1) bolab::fail(bolab::ErrorCode::InvalidArgument, "N must be at least 1");
        using namespace bolab;
        bolab_gauge_report r{};
        for (const auto& u : t->t.fields) {
            if (is_zero(u)) continue;
            GaugeState s = gauge(u);
            ComplexField ue = project(product(ComplexField(u), s.exp_minus), Projection{ProjectionKind::Pplus});
            double ne = l2_norm(ue);
            if (ne > 0.0) r.chain_rule = std::max(r.chain_rule, l2_norm(cplx(0.0, 2.0) * s.w - ue) / ne);
            const double nu = l2_norm(u);
            Ungauged d = ungauge(u, s);
            ComplexField pu = project(ComplexField(u), Projection{ProjectionKind::Pplus});
            r.ungauge = std::max(r.ungauge, l2_norm(pu - (d.two_i_w + d.A + d.B)) / nu);
            UngaugedHigh h = ungauge_highfreq(u, s, N);
            ComplexField pn = project(ComplexField(u), Projection{ProjectionKind::PgeqN, N});
            r.ungauge_high = std::max(r.ungauge_high, l2_norm(pn - (h.A_N + h.B_N)) / nu);
        }
        r.residual_order = std::numeric_limits<double>::quiet_NaN();
        if (t->t.size() >= 3) {
            auto res = gauge_residual(t->t, Trajectory{});
            r.residual_max = *std::max_element(res.begin(), res.end());
            if (t->t.size() >= 5 && (t->t.size() - 1) % 2 == 0) {
                Trajectory coarse;
                coarse.times = TimeGrid{t->t.times.t0, t->t.times.t1, t->t.times.n_steps / 2};
                for (std::size_t i = 0; i < t->t.size(); i += 2) coarse.fields.push_back(t->t.fields[i]);
                auto rc = gauge_residual(coarse, Trajectory{});
                double mc = *std::max_element(rc.begin(), rc.end());
                if (r.residual_max > 0.0 && mc > 0.0) r.residual_order = std::log2(mc / r.residual_max);
            }
        }
        *out = r;
    });
}

/* ---- control ---- */

void bolab_control_defaults(bolab_control_options* o) {
    if (!o) return;
    bolab::ControlOptions d;
    o->tol = d.tol;
    o->max_iter = d.max_iter;
    o->n_quad = d.n_quad;
    o->dt = d.dt;
    o->cg_tol = d.cg_tol;
    o->smallness = d.smallness;
}

bolab_status bolab_steer(const bolab_field* u0, const bolab_field* u1, const bolab_profile* a, double T,
                         const bolab_control_options* o, bolab_control** out) {
    return guard([&] {
        need(u0, "u0");
        need(u1, "u1");
        need(a, "profile");
        need(out, "out");
        positive(T, "horizon");
        bolab::ControlOptions co;
        if (o) {
            positive(o->tol, "tol");
            positive(o->cg_tol, "cg_tol");
            positive(o->smallness, "smallness");
            if (o->max_iter < 1 || o->n_quad < 4)
                bolab::fail(bolab::ErrorCode::InvalidArgument, "max_iter and n_quad must be positive");
            co.tol = o->tol;
            co.max_iter = o->max_iter;
            co.n_quad = o->n_quad;
            co.dt = o->dt;
            co.cg_tol = o->cg_tol;
            co.smallness = o->smallness;
        }
        *out = new bolab_control{bolab::steer(u0->f, u1->f, a->a, T, co)};
    });
}

void bolab_control_free(bolab_control* c) { delete c; }
int bolab_control_iterations(const bolab_control* c) { return c ? c->r.iterations : 0; }
double bolab_control_terminal_error(const bolab_control* c) {
    return c ? c->r.terminal_error : std::numeric_limits<double>::quiet_NaN();
}
double bolab_control_max_contraction(const bolab_control* c) {
    return c ? c->r.max_contraction_factor() : std::numeric_limits<double>::quiet_NaN();
}
int bolab_control_history_size(const bolab_control* c) {
    return c ? static_cast<int>(c->r.contraction_history.size()) : 0;
}
double bolab_control_history(const bolab_control* c, int i) {
    if (!c || i < 0 || i >= static_cast<int>(c->r.contraction_history.size()))
        return std::numeric_limits<double>::quiet_NaN();
    return c->r.contraction_history[static_cast<std::size_t>(i)];
}
int bolab_control_warning_count(const bolab_control* c) { return c ? static_cast<int>(c->r.warnings.size()) : 0; }
const char* bolab_control_warning(const bolab_control* c, int i) {
    if (!c || i < 0 || i >= static_cast<int>(c->r.warnings.size())) return "";
    return c->r.warnings[static_cast<std::size_t>(i)].c_str();
}

bolab_status bolab_control_trajectory(const bolab_control* c, bolab_trajectory** out) {
    return guard([&] {
        need(c, "control");
        need(out, "out");
        *out = new bolab_trajectory{c->r.traj};
    });
}

bolab_status bolab_control_h0(const bolab_control* c, bolab_field** out) {
    return guard([&] {
        need(c, "control");
        need(out, "out");
        *out = new bolab_field{c->r.h0};
    });
}

bolab_status bolab_stabilize(const bolab_field* u0, const bolab_profile* a, double T, double dt, int save_every,
                             bolab_trajectory** traj, double* lambda_fit, double* r_squared) {
    return guard([&] {
        need(u0, "u0");
        need(a, "profile");
        positive(T, "horizon");
        positive(dt, "dt");
        if (save_every < 1) bolab::fail(bolab::ErrorCode::InvalidArgument, "save_every must be positive");
        auto r = bolab::stabilization_experiment(u0->f, a->a, T, dt, save_every);
        if (lambda_fit) *lambda_fit = r.lambda_fit;
        if (r_squared) *r_squared = r.r_squared;
        if (traj) *traj = new bolab_trajectory{std::move(r.traj)};
    });
}

bolab_status bolab_observability(const bolab_field* u0, const bolab_profile* a, double T, double dt, bolab_flow flow,
                                 double* ratio) {
    return guard([&] {
        need(u0, "u0");
        need(a, "profile");
        need(ratio, "ratio");
        positive(T, "horizon");
        positive(dt, "dt");
        bolab::ObservedFlow f = bolab::ObservedFlow::Nonlinear;
        if (flow == BOLAB_FLOW_LINEAR_DAMPED) f = bolab::ObservedFlow::LinearDamped;
        else if (flow == BOLAB_FLOW_FREE) f = bolab::ObservedFlow::Free;
        else if (flow != BOLAB_FLOW_NONLINEAR) bolab::fail(bolab::ErrorCode::InvalidArgument, "unknown flow");
        *ratio = bolab::observability_ratio(u0->f, a->a, T, dt, f);
    });
}

bolab_status bolab_observability_ensemble(const bolab_profile* a, double T, double dt, int count, uint64_t seed,
                                          int band, int jobs, double* ratios) {
    return guard([&] {
        need(a, "profile");
        need(ratios, "ratios");
        positive(T, "horizon");
        positive(dt, "dt");
        if (band < 1) bolab::fail(bolab::ErrorCode::InvalidArgument, "band must be positive");
        auto r = bolab::observability_ensemble(a->a, T, count, seed, band, dt, std::max(1, jobs));
        std::copy(r.begin(), r.end(), ratios);
    });
}

bolab_status bolab_linear_gap(const bolab_field* u0, const bolab_profile* a, double T, double dt, double* gap) {
    return guard([&] {
        need(u0, "u0");
        need(a, "profile");
        need(gap, "gap");
        positive(T, "horizon");
        positive(dt, "dt");
        bolab::require_same_grid(u0->f.grid(), a->a.grid());
        *gap = bolab::linear_gap(u0->f, a->a, T, dt);
    });
}

bolab_status bolab_gramian_spectrum(const bolab_profile* a, double T, int n_quad, int k, uint64_t seed,
                                    double* values) {
    return guard([&] {
        need(a, "profile");
        need(values, "values");
        positive(T, "horizon");
        if (k < 1 || n_quad < 4) bolab::fail(bolab::ErrorCode::InvalidArgument, "k and n_quad must be positive");
        bolab::Gramian L(a->a, T, n_quad);
        auto v = bolab::gramian_spectrum(L, k, seed);
        std::fill(values, values + k, std::numeric_limits<double>::quiet_NaN());
        std::copy(v.begin(), v.end(), values);
    });
}

/* ---- norms ---- */

void bolab_norm_defaults(bolab_norm_options* o) {
    if (!o) return;
    std::memset(o, 0, sizeof(*o));
    bolab::NormCheckOptions d;
    o->n_modes = d.n_modes;
    o->ensemble = d.ensemble;
    o->seed = d.seed;
    o->min_window = d.min_window;
    o->jobs = d.jobs;
    o->refine = d.refine;
    o->u0 = nullptr;
}

bolab_status bolab_norm_check(const char* check, const bolab_norm_options* o, bolab_norm_report* out) {
    return guard([&] {
        need(check, "check");
        need(o, "options");
        need(out, "out");
        using namespace bolab;
        NormCheckOptions no;
        no.n_modes = o->n_modes;
        no.ensemble = o->ensemble;
        no.seed = o->seed;
        no.min_window = o->min_window;
        no.jobs = std::max(1, o->jobs);
        no.refine = o->refine;
        positive(no.min_window, "window");
        if (o->n_T < 0 || o->n_T > BOLAB_SWEEP_MAX || o->n_N < 0 || o->n_N > BOLAB_SWEEP_MAX)
            fail(ErrorCode::InvalidArgument, "sweep list too long");
        if (o->n_T > 0) no.T_list.assign(o->T_list, o->T_list + o->n_T);
        if (o->n_N > 0) no.N_list.assign(o->N_list, o->N_list + o->n_N);
        for (double T : no.T_list) positive(T, "T");
        for (int N : no.N_list)
            if (N < 1) fail(ErrorCode::InvalidArgument, "N must be positive");
        const std::string name = check;
        NormReport r;
        if (name == "strichartz") r = strichartz_check(no);
        else if (name == "smoothing") r = smoothing_check(no);
        else if (name == "interp") r = interp_check(no);
        else if (name == "highfreq") r = highfreq_exp_check(no);
        else if (name == "bilinear") {
            GridSpec g = GridSpec::make(no.n_modes);
            RealField u0 = o->u0 ? o->u0->f : initial_data("modes:(1,0.3,0),(2,0.2,-1.5707963267948966)", g);
            require_same_grid(u0.grid(), g);
            double T = *std::max_element(no.T_list.begin(), no.T_list.end());
            // Solver at dt = 1/1024, sampled every 4 steps for the space-time transforms.
            int steps = static_cast<int>(std::ceil(T * 1024.0 - 1e-9));
            steps += (4 - steps % 4) % 4;
            Trajectory traj = integrate(u0, ZeroSource{}, TimeGrid{0.0, steps / 1024.0, steps}, true);
            r = bilinear_check(traj, no, 4);
        } else {
            fail(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
        }
        if (r.sweep_x.size() > BOLAB_SWEEP_MAX) fail(ErrorCode::Internal, "sweep too long");
        bolab_norm_report rep{};
        std::snprintf(rep.name, sizeof(rep.name), "%s", r.name.c_str());
        rep.lhs = r.lhs;
        rep.rhs = r.rhs;
        rep.ratio = r.ratio;
        rep.ensemble_max_ratio = r.ensemble_max_ratio;
        rep.fitted_exponent = r.fitted_exponent;
        rep.seed = r.seed;
        rep.ensemble = r.ensemble;
        rep.n_sweep = static_cast<int>(r.sweep_x.size());
        for (int i = 0; i < rep.n_sweep; ++i) {
            rep.sweep_x[i] = r.sweep_x[i];
            rep.sweep_y[i] = r.sweep_y[i];
        }
        *out = rep;
    });
}

}  // extern "C"
