#include "bolab/gauge.hpp"

#include <numbers>

#include "bolab/error.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

namespace {
const cplx I(0.0, 1.0);
constexpr double two_pi = 2.0 * std::numbers::pi;

ComplexField minus_one(ComplexField f) {
    f.coeffs()[0] -= two_pi;
    return f;
}

ComplexField proj(const ComplexField& f, ProjectionKind k, int N = 0) { return project(f, Projection{k, N}); }
}  // namespace

GaugeState gauge(const RealField& u) {
    GaugeState s;
    s.F = antiderivative(u);
    s.exp_minus = exp_gauge(s.F, -1);
    s.W = proj(s.exp_minus, ProjectionKind::Pplus);
    s.w = derivative(s.W);
    return s;
}

GaugeTerms gauge_rhs(const RealField& u, const GaugeState& state, const RealField& g) {
    require_same_grid(u.grid(), g.grid());
    RealField G = antiderivative(g);
    GaugeTerms t;

    ComplexField ux_minus = proj(ComplexField(derivative(u)), ProjectionKind::Pminus);
    t.I = cplx(-1.0) * derivative(proj(product(state.W, ux_minus), ProjectionKind::Pplus));

    t.II = cplx(-0.5 * I) * proj(product(ComplexField(g), state.exp_minus), ProjectionKind::Pplus);

    // (-1/2 P0(u^2) + G) u e^{-iF/2}; P0(u^2) is the spatial mean of u^2.
    const double mean_sq = inner(u, u) / two_pi;
    RealField q = G;
    {
        std::vector<cplx> c = q.coeffs();
        c[0] += two_pi * (-0.5 * mean_sq);
        q = RealField(u.grid(), std::move(c));
    }
    ComplexField qu = product(q, u);
    t.III = cplx(-0.25) * proj(product(qu, state.exp_minus), ProjectionKind::Pplus);
    return t;
}

Ungauged ungauge(const RealField& u, const GaugeState& state) {
    ComplexField e_plus = exp_gauge(state.F, +1);
    ComplexField e_plus_m1 = minus_one(e_plus);
    Ungauged r;
    r.two_i_w = cplx(2.0 * I) * state.w;
    r.A = cplx(2.0 * I) * proj(product(state.w, e_plus_m1), ProjectionKind::Pplus);
    ComplexField low = proj(product(ComplexField(u), state.exp_minus), ProjectionKind::PleqZero);
    r.B = proj(product(proj(e_plus_m1, ProjectionKind::Pplus), low), ProjectionKind::Pplus);
    return r;
}

UngaugedHigh ungauge_highfreq(const RealField& u, const GaugeState& state, int N) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "N must be at least 1");
    ComplexField e_plus = exp_gauge(state.F, +1);
    UngaugedHigh r;
    r.A_N = cplx(2.0 * I) * proj(product(state.w, e_plus), ProjectionKind::PgeqN, N);
    ComplexField low = proj(product(ComplexField(u), state.exp_minus), ProjectionKind::PleqZero);
    r.B_N = proj(product(proj(e_plus, ProjectionKind::PgeqN, N), low), ProjectionKind::PgeqN, N);
    return r;
}

std::vector<double> gauge_residual(const Trajectory& traj, const Trajectory& g_traj) {
    const int levels = static_cast<int>(traj.fields.size());
    if (levels < 3) fail(ErrorCode::InvalidArgument, "gauge residual needs at least three time levels");
    const bool forced = !g_traj.fields.empty();
    if (forced && g_traj.fields.size() != traj.fields.size())
        fail(ErrorCode::InvalidArgument, "source trajectory is not aligned with the state trajectory");
    const double dt = traj.times.dt();
    std::vector<GaugeState> states;
    states.reserve(levels);
    for (const auto& u : traj.fields) states.push_back(gauge(u));
    std::vector<double> out;
    out.reserve(levels - 2);
    for (int i = 1; i + 1 < levels; ++i) {
        const RealField& u = traj.fields[i];
        RealField g = forced ? g_traj.fields[i] : RealField(u.grid());
        GaugeTerms terms = gauge_rhs(u, states[i], g);
        ComplexField wt = cplx(1.0 / (2.0 * dt)) * (states[i + 1].w - states[i - 1].w);
        ComplexField d = wt - cplx(I) * second_derivative(states[i].w) - terms.I - terms.II - terms.III;
        out.push_back(l2_norm(d));
    }
    return out;
}

}  // namespace bolab
