#pragma once

#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "bolab/damping.hpp"
#include "bolab/field.hpp"

namespace bolab {

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n_steps = 1;

    // Uniform grid whose step does not exceed max_dt in magnitude.
    static TimeGrid covering(double t0, double t1, double max_dt);

    double dt() const { return (t1 - t0) / n_steps; }
    double time(int i) const { return i == n_steps ? t1 : t0 + i * dt(); }
    void validate() const;
};

struct Trajectory {
    TimeGrid times;
    std::vector<RealField> fields;  // n_steps + 1 levels

    std::size_t size() const { return fields.size(); }
    const RealField& back() const { return fields.back(); }
    double time(std::size_t i) const { return times.time(static_cast<int>(i)); }
};

struct ZeroSource {};
// Prescribed source sampled on the solver's time grid; intermediate stage times are
// interpolated with cubic Hermite polynomials built from centered differences.
struct FixedSource {
    Trajectory g;
};
// g = -G G* u
struct FeedbackSource {
    DampingProfile a;
    double sign = 1.0;  // -1 gives the anti-damped system used by time reversal
};
// g(t) = -G G* U(t - origin) h0
struct ControlSource {
    DampingProfile a;
    RealField h0;
    double origin = 0.0;
};
// Arbitrary source g(t, u).
struct ForcingSource {
    std::function<RealField(double, const RealField&)> g;
};
struct PiecewiseSource;

using SourceSpec = std::variant<ZeroSource, FixedSource, FeedbackSource, ControlSource, ForcingSource,
                                std::shared_ptr<PiecewiseSource>>;

// Sources on consecutive time spans; span k covers [breaks[k], breaks[k+1]].
struct PiecewiseSource {
    std::vector<double> breaks;
    std::vector<SourceSpec> parts;
};

RealField evaluate_source(const SourceSpec& src, double t, const RealField& u);
bool source_is_zero(const SourceSpec& src);

struct IntegrateOptions {
    bool nonlinear = true;
    int save_every = 1;
};

// Default step: min(1e-3, 0.5 / (max|xi| max|u|)).
double default_dt(const RealField& u0);

// Integrating-factor RK4 for u_t + H u_xx - u u_x = g. Negative dt integrates backward.
Trajectory integrate(const RealField& u0, const SourceSpec& src, const TimeGrid& grid, IntegrateOptions opts = {});
Trajectory integrate(const RealField& u0, const SourceSpec& src, const TimeGrid& grid, bool nonlinear);

// Solves from the terminal state at grid.t1 down to grid.t0; the result is indexed forward in time.
Trajectory integrate_terminal(const RealField& uT, const SourceSpec& src, const TimeGrid& grid, bool nonlinear = true);

// Per interior level: L2 norm of u_t + H u_xx - u u_x - g with centered differences.
std::vector<double> residual(const Trajectory& traj, const SourceSpec& src, bool nonlinear = true);

// Right-hand side -H u_xx + u u_x + g, exposed for diagnostics.
RealField bo_rhs(const RealField& u, const RealField& g, bool nonlinear);

}  // namespace bolab
