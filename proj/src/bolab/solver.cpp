#include "bolab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bolab/error.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

namespace {
const cplx I(0.0, 1.0);

RealField nonlinear_term(const RealField& u) {
    RealField sq = product(u, u);
    sq *= 0.5;
    return derivative(sq);
}

RealField dispersive_term(const RealField& u) {
    return apply_multiplier(u, [](int xi) { return -I * dispersion(xi); });
}

// Four-point Lagrange interpolation in time of a sampled source.
RealField interpolate(const Trajectory& g, double t) {
    const int n = g.times.n_steps;
    const double dt = g.times.dt();
    double s = (t - g.times.t0) / dt;
    if (n < 3) {
        int i = std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
        double f = s - i;
        return (1.0 - f) * g.fields[i] + f * g.fields[i + 1];
    }
    int i = static_cast<int>(std::floor(s + 1e-9));
    if (std::abs(s - std::round(s)) < 1e-9) {
        int k = static_cast<int>(std::round(s));
        if (k >= 0 && k <= n) return g.fields[k];
    }
    int start = std::clamp(i - 1, 0, n - 3);
    RealField out(g.fields[0].grid());
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (s - (start + b)) / static_cast<double>(a - b);
        out += w * g.fields[start + a];
    }
    return out;
}

RealField eval(const SourceSpec& src, double t, const RealField& u, double hint) {
    return std::visit(
        [&](const auto& s) -> RealField {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, ZeroSource>) {
                return RealField(u.grid());
            } else if constexpr (std::is_same_v<S, FixedSource>) {
                return interpolate(s.g, t);
            } else if constexpr (std::is_same_v<S, FeedbackSource>) {
                return (-s.sign) * apply_GG(u, s.a);
            } else if constexpr (std::is_same_v<S, ControlSource>) {
                return -apply_GG(free_group(t - s.origin, s.h0), s.a);
            } else if constexpr (std::is_same_v<S, ForcingSource>) {
                return s.g(t, u);
            } else {
                const auto& pw = *s;
                double key = std::isnan(hint) ? t : hint;
                std::size_t k = 0;
                while (k + 1 < pw.parts.size() && key >= pw.breaks[k + 1]) ++k;
                return eval(pw.parts[k], t, u, hint);
            }
        },
        src);
}

bool finite_field(const RealField& u) {
    for (const auto& c : u.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e150) return false;
    return true;
}

RealField stage(const SourceSpec& src, bool zero_src, bool nonlinear, double t, const RealField& u, double hint) {
    RealField f = nonlinear ? nonlinear_term(u) : RealField(u.grid());
    if (!zero_src) f += eval(src, t, u, hint);
    return f;
}
}  // namespace

TimeGrid TimeGrid::covering(double t0, double t1, double max_dt) {
    if (!(max_dt > 0.0)) fail(ErrorCode::InvalidArgument, "time step must be positive");
    TimeGrid g{t0, t1, std::max(1, static_cast<int>(std::ceil(std::abs(t1 - t0) / max_dt - 1e-9)))};
    g.validate();
    return g;
}

void TimeGrid::validate() const {
    if (!(t1 != t0) || !std::isfinite(t0) || !std::isfinite(t1))
        fail(ErrorCode::InvalidArgument, "time grid needs t1 != t0");
    if (n_steps < 1) fail(ErrorCode::InvalidArgument, "time grid needs at least one step");
}

RealField evaluate_source(const SourceSpec& src, double t, const RealField& u) {
    return eval(src, t, u, std::numeric_limits<double>::quiet_NaN());
}

bool source_is_zero(const SourceSpec& src) { return std::holds_alternative<ZeroSource>(src); }

double default_dt(const RealField& u0) {
    double umax = sup_norm(u0, 2);
    double kmax = u0.grid().n_modes / 2;
    if (umax <= 0.0) return 1e-3;
    return std::min(1e-3, 0.5 / (kmax * umax));
}

RealField bo_rhs(const RealField& u, const RealField& g, bool nonlinear) {
    RealField r = dispersive_term(u) + g;
    if (nonlinear) r += nonlinear_term(u);
    return r;
}

Trajectory integrate(const RealField& u0, const SourceSpec& src, const TimeGrid& grid, bool nonlinear) {
    IntegrateOptions o;
    o.nonlinear = nonlinear;
    return integrate(u0, src, grid, o);
}

Trajectory integrate(const RealField& u0, const SourceSpec& src, const TimeGrid& grid, IntegrateOptions opts) {
    grid.validate();
    if (opts.save_every < 1 || grid.n_steps % opts.save_every != 0)
        fail(ErrorCode::InvalidArgument, "save_every must divide the number of steps");
    if (!finite_field(u0)) throw BlowUpError(-1, "initial datum is not finite");
    if (auto* f = std::get_if<FixedSource>(&src)) require_same_grid(f->g.fields.at(0).grid(), u0.grid());

    const double h = grid.dt();
    const bool zero_src = source_is_zero(src);
    const bool nl = opts.nonlinear;
    const GridSpec& gs = u0.grid();
    // Phase factors of E(h) and E(h/2), indexed by slot.
    std::vector<cplx> e_full(gs.n_modes), e_half(gs.n_modes);
    for (int k = 0; k < gs.n_modes; ++k) {
        double w = dispersion(gs.freq(k));
        e_full[k] = std::exp(-I * (h * w));
        e_half[k] = std::exp(-I * (0.5 * h * w));
    }
    auto E = [&](const RealField& v, bool half) {
        const auto& ph = half ? e_half : e_full;
        return apply_multiplier(v, [&](int xi) { return ph[gs.index(xi)]; });
    };

    Trajectory out;
    out.times = TimeGrid{grid.t0, grid.t1, grid.n_steps / opts.save_every};
    out.fields.reserve(out.times.n_steps + 1);
    out.fields.push_back(u0);

    RealField u = u0;
    for (int i = 0; i < grid.n_steps; ++i) {
        const double t = grid.time(i);
        const double mid = t + 0.5 * h;
        RealField k1 = stage(src, zero_src, nl, t, u, mid);
        RealField eu_half = E(u, true);
        RealField k2 = stage(src, zero_src, nl, mid, E(u + (0.5 * h) * k1, true), mid);
        RealField k3 = stage(src, zero_src, nl, mid, eu_half + (0.5 * h) * k2, mid);
        RealField k4 = stage(src, zero_src, nl, t + h, E(eu_half, true) + h * E(k3, true), mid);
        RealField next = E(u, false) + (h / 6.0) * (E(k1, false) + 2.0 * E(k2 + k3, true) + k4);
        if (!finite_field(next))
            throw BlowUpError(i, "non-finite state after step " + std::to_string(i + 1) + " at t = " +
                                     std::to_string(t + h));
        u = std::move(next);
        if ((i + 1) % opts.save_every == 0) out.fields.push_back(u);
    }
    return out;
}

Trajectory integrate_terminal(const RealField& uT, const SourceSpec& src, const TimeGrid& grid, bool nonlinear) {
    grid.validate();
    TimeGrid back{grid.t1, grid.t0, grid.n_steps};
    Trajectory rev = integrate(uT, src, back, nonlinear);
    Trajectory out;
    out.times = grid;
    out.fields.assign(rev.fields.rbegin(), rev.fields.rend());
    return out;
}

std::vector<double> residual(const Trajectory& traj, const SourceSpec& src, bool nonlinear) {
    const int levels = static_cast<int>(traj.fields.size());
    if (levels < 3) fail(ErrorCode::InvalidArgument, "residual needs at least three time levels");
    const double dt = traj.times.dt();
    std::vector<double> out;
    out.reserve(levels - 2);
    for (int i = 1; i + 1 < levels; ++i) {
        const RealField& u = traj.fields[i];
        RealField g = source_is_zero(src) ? RealField(u.grid()) : evaluate_source(src, traj.time(i), u);
        RealField ut = (1.0 / (2.0 * dt)) * (traj.fields[i + 1] - traj.fields[i - 1]);
        out.push_back(l2_norm(ut - bo_rhs(u, g, nonlinear)));
    }
    return out;
}

}  // namespace bolab
