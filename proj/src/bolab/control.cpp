#include "bolab/control.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "bolab/bourgain.hpp"
#include "bolab/error.hpp"
#include "bolab/initial_data.hpp"
#include "bolab/invariants.hpp"
#include "bolab/spectral.hpp"
#include "bolab/stats.hpp"

namespace bolab {

namespace {
const cplx I(0.0, 1.0);

RealField multiply_slots(const RealField& u, const std::vector<cplx>& phase, bool conjugate) {
    const GridSpec& g = u.grid();
    return apply_multiplier(u, [&](int xi) {
        cplx p = phase[g.index(xi)];
        return conjugate ? std::conj(p) : p;
    });
}

// Zero-mean part of the dealiased band: the space on which L is invertible.
RealField band(const RealField& u) {
    std::vector<cplx> c = u.coeffs();
    const GridSpec& g = u.grid();
    for (int i = 0; i < g.n_modes; ++i)
        if (std::abs(g.freq(i)) > g.dealias_cut) c[i] = 0.0;
    c[0] = 0.0;
    return RealField(g, std::move(c));
}

void require_zero_mean(const RealField& u, const char* what) {
    if (std::abs(u.coeffs()[0]) > 1e-12 * std::max(1e-300, l2_norm(u)) && u.coeffs()[0] != cplx(0.0))
        fail(ErrorCode::NonZeroMean, std::string(what) + " must have zero mean");
}

DampingProfile reflected(const DampingProfile& a) {
    DampingProfile r = a;
    r.a = reflect(a.a);
    r.center = -a.center;
    return r;
}

Trajectory zero_trajectory(const GridSpec& g, const TimeGrid& grid) {
    Trajectory t;
    t.times = grid;
    t.fields.assign(grid.n_steps + 1, RealField(g));
    return t;
}
}  // namespace

Gramian::Gramian(DampingProfile a, double T, int n_quad) : a_(std::move(a)), T_(T) {
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "Gramian horizon must be positive");
    if (n_quad < 4) fail(ErrorCode::InvalidArgument, "n_quad must be at least 4");
    static const double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    const int panels = (n_quad + 3) / 4;
    const double h = T / panels;
    const GridSpec& g = a_.grid();
    for (int p = 0; p < panels; ++p) {
        for (int k = 0; k < 4; ++k) {
            double s = (p + 0.5) * h + 0.5 * h * x[k];
            s_.push_back(s);
            w_.push_back(0.5 * h * w[k]);
            std::vector<cplx> ph(g.n_modes);
            for (int i = 0; i < g.n_modes; ++i) ph[i] = std::exp(-I * (s * dispersion(g.freq(i))));
            phase_.push_back(std::move(ph));
        }
    }
}

RealField Gramian::apply(const RealField& h0) const {
    require_same_grid(h0.grid(), a_.grid());
    require_zero_mean(h0, "Gramian argument");
    RealField acc(h0.grid());
    if (is_zero(h0)) return acc;
    for (std::size_t k = 0; k < s_.size(); ++k) {
        RealField v = multiply_slots(h0, phase_[k], false);
        RealField g = apply_GG(v, a_);
        acc += w_[k] * multiply_slots(g, phase_[k], true);
    }
    return acc;
}

RealField gramian_apply(const RealField& h0, const DampingProfile& a, double T, int n_quad) {
    return Gramian(a, T, n_quad).apply(h0);
}

CgResult gramian_solve(const Gramian& L, const RealField& u0, CgOptions opts, const RealField* guess) {
    require_same_grid(u0.grid(), L.profile().grid());
    require_zero_mean(u0, "Gramian right-hand side");
    CgResult res;
    RealField b = band(u0);
    const double bnorm = l2_norm(b);
    res.x = RealField(u0.grid());
    if (bnorm == 0.0) return res;
    if (guess) res.x = band(*guess);
    RealField r = b - L.apply(res.x);
    RealField p = r;
    double rr = inner(r, r);
    for (int it = 1; it <= opts.max_iter; ++it) {
        if (std::sqrt(rr) <= opts.tol * bnorm) {
            res.relative_residual = std::sqrt(rr) / bnorm;
            return res;
        }
        RealField Lp = band(L.apply(p));
        double pLp = inner(p, Lp);
        if (!(pLp > 0.0)) fail(ErrorCode::NoConvergence, "Gramian is not positive definite on this profile/horizon");
        double alpha = rr / pLp;
        res.x += alpha * p;
        r -= alpha * Lp;
        // Recompute the true residual now and then to limit drift.
        if (it % 25 == 0) r = b - band(L.apply(res.x));
        double rr_new = inner(r, r);
        p = r + (rr_new / rr) * p;
        rr = rr_new;
        res.iterations = it;
    }
    res.relative_residual = std::sqrt(rr) / bnorm;
    if (res.relative_residual > opts.tol)
        fail(ErrorCode::NoConvergence, "conjugate gradient did not reach tolerance in " +
                                           std::to_string(opts.max_iter) + " iterations");
    return res;
}

RealField gramian_solve(const RealField& u0, const DampingProfile& a, double T, double tol, int n_quad) {
    Gramian L(a, T, n_quad);
    CgOptions o;
    o.tol = tol;
    return gramian_solve(L, u0, o).x;
}

std::vector<double> gramian_spectrum(const Gramian& L, int k, std::uint64_t seed) {
    const GridSpec& g = L.profile().grid();
    const int dim = 2 * g.dealias_cut;
    k = std::clamp(k, 1, dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> c(g.n_modes, 0.0);
    for (int xi = 1; xi <= g.dealias_cut; ++xi) c[g.index(xi)] = cplx(nd(rng), nd(rng));
    RealField v(g, c);
    v *= 1.0 / l2_norm(v);

    std::vector<RealField> basis{v};
    std::vector<double> alpha, beta;
    for (int j = 0; j < k; ++j) {
        RealField w = band(L.apply(basis[j]));
        double a = inner(w, basis[j]);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) w -= inner(w, q) * q;
        double b = l2_norm(w);
        if (j + 1 == k || b < 1e-14 * std::abs(alpha.front())) break;
        beta.push_back(b);
        w *= 1.0 / b;
        basis.push_back(std::move(w));
    }
    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd d(m), e(std::max(0, m - 1));
    for (int i = 0; i < m; ++i) d(i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) e(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m);
    std::sort(out.rbegin(), out.rend());
    return out;
}

double ControlResult::max_contraction_factor() const {
    double m = 0.0;
    for (std::size_t i = 1; i < contraction_history.size(); ++i)
        if (contraction_history[i - 1] > 0.0) m = std::max(m, contraction_history[i] / contraction_history[i - 1]);
    return m;
}

double control_dt(const GridSpec& grid, double T) {
    const double w = dispersion(grid.dealias_cut);
    double dt = std::min(1e-3, 0.2 / w);
    // Even step count so the horizon splits into two aligned halves.
    int n = static_cast<int>(std::ceil(T / dt - 1e-9));
    if (n % 2) ++n;
    return T / n;
}

RealField nonlinear_map(const RealField& h0, const DampingProfile& a, double T, double dt) {
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    return integrate_terminal(RealField(h0.grid()), ControlSource{a, h0, 0.0}, grid, true).fields.front();
}

RealField nonlinear_remainder(const RealField& h0, const DampingProfile& a, double T, double dt) {
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    RealField zero(h0.grid());
    RealField nl = integrate_terminal(zero, ControlSource{a, h0, 0.0}, grid, true).fields.front();
    RealField lin = integrate_terminal(zero, ControlSource{a, h0, 0.0}, grid, false).fields.front();
    return nl - lin;
}

ControlResult picard_control(const RealField& u0, const DampingProfile& a, double T, ControlOptions opts) {
    require_same_grid(u0.grid(), a.grid());
    require_zero_mean(u0, "initial state");
    if (a.off) fail(ErrorCode::InvalidArgument, "control needs a nonzero damping profile");
    const GridSpec& g = u0.grid();
    const double dt = opts.dt > 0.0 ? opts.dt : control_dt(g, T);
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);

    ControlResult res;
    res.iterations = 1;
    if (is_zero(u0)) {
        res.h0 = RealField(g);
        res.traj = zero_trajectory(g, grid);
        res.converged = true;
        return res;
    }
    const double norm0 = l2_norm(u0);
    if (norm0 > opts.smallness)
        res.warnings.push_back("||u0|| = " + std::to_string(norm0) + " exceeds the smallness threshold " +
                               std::to_string(opts.smallness));

    Gramian L(a, T, opts.n_quad);
    CgOptions cg;
    cg.tol = opts.cg_tol;
    RealField h = gramian_solve(L, u0, cg).x;
    int rises = 0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        RealField W = nonlinear_map(h, a, T, grid.dt());
        RealField K = W - L.apply(h);
        RealField h_new = gramian_solve(L, u0 - K, cg, &h).x;
        double d = l2_norm(h_new - h);
        if (!std::isfinite(d)) fail(ErrorCode::NoConvergence, "Picard iterate became non-finite");
        if (!res.contraction_history.empty() && d >= res.contraction_history.back())
            ++rises;
        else
            rises = 0;
        res.contraction_history.push_back(d);
        h = std::move(h_new);
        res.iterations = it + 1;
        if (d <= opts.tol * l2_norm(h)) {
            res.converged = true;
            break;
        }
        if (rises >= 3) break;
    }
    if (!res.converged)
        fail(ErrorCode::NoConvergence, "Picard iteration did not contract after " +
                                           std::to_string(res.iterations) + " iterations (last step " +
                                           std::to_string(res.contraction_history.back()) + ")");
    res.h0 = h;
    res.traj = integrate(u0, ControlSource{a, h, 0.0}, grid, true);
    res.terminal_error = l2_norm(res.traj.back());
    return res;
}

ControlResult steer(const RealField& u0, const RealField& u1, const DampingProfile& a, double T,
                    ControlOptions opts) {
    require_same_grid(u0.grid(), u1.grid());
    require_same_grid(u0.grid(), a.grid());
    if (!(T > 0.0)) fail(ErrorCode::InvalidArgument, "horizon must be positive");
    const GridSpec& g = u0.grid();
    const double scale = std::max({1.0, l2_norm(u0), l2_norm(u1)});
    if (std::abs(mass(u0) - mass(u1)) > 1e-12 * scale)
        fail(ErrorCode::MeanMismatch, "endpoints have different means: " + std::to_string(u0.mean()) + " vs " +
                                          std::to_string(u1.mean()));
    if (std::abs(mass(u0)) > 1e-12 * scale)
        fail(ErrorCode::InvalidArgument, "steering with a nonzero common mean is not supported");
    if (a.off) fail(ErrorCode::InvalidArgument, "control needs a nonzero damping profile");

    const double dt = opts.dt > 0.0 ? opts.dt : control_dt(g, T);
    const int n_total = TimeGrid::covering(0.0, T, dt).n_steps;
    const double h = T / n_total;
    opts.dt = h;
    TimeGrid grid{0.0, T, n_total};

    ControlResult res;
    if (is_zero(u0) && is_zero(u1)) {
        res.h0 = RealField(g);
        res.traj = zero_trajectory(g, grid);
        res.iterations = 1;
        res.converged = true;
        return res;
    }
    const bool small0 = l2_norm(u0) <= opts.smallness;
    if (is_zero(u1) && small0) return picard_control(u0, a, T, opts);

    const DampingProfile ra = reflected(a);
    // Damping phases bring large endpoints into the small-data basin (at most T/4 each).
    auto damp_until_small = [&](const RealField& start, const DampingProfile& prof, int& steps) {
        steps = 0;
        if (l2_norm(start) <= opts.smallness) return start;
        const int cap = n_total / 4;
        RealField u = start;
        while (steps < cap && l2_norm(u) > opts.smallness) {
            u = integrate(u, FeedbackSource{prof, 1.0}, TimeGrid{0.0, h, 1}, true).back();
            ++steps;
        }
        if (l2_norm(u) > opts.smallness)
            res.warnings.push_back("damping phase ended above the smallness threshold");
        return u;
    };
    int n_a = 0, n_b = 0;
    RealField ua = damp_until_small(u0, a, n_a);
    RealField vb = damp_until_small(reflect(u1), ra, n_b);
    if ((n_total - n_a - n_b) % 2 != 0) {
        ua = integrate(ua, FeedbackSource{a, 1.0}, TimeGrid{0.0, h, 1}, true).back();
        ++n_a;
    }
    const double t_a = n_a * h;
    const double t_end = T - n_b * h;
    const double half = 0.5 * (t_end - t_a);
    const double t_mid = t_a + half;

    auto pw = std::make_shared<PiecewiseSource>();
    if (n_a > 0) {
        pw->breaks.push_back(0.0);
        pw->parts.push_back(FeedbackSource{a, 1.0});
    }
    auto run_half = [&](const RealField& start, const DampingProfile& prof) {
        if (is_zero(start)) return RealField(g);
        ControlResult r = picard_control(start, prof, half, opts);
        res.iterations += r.iterations;
        res.contraction_history.insert(res.contraction_history.end(), r.contraction_history.begin(),
                                       r.contraction_history.end());
        for (auto& w : r.warnings) res.warnings.push_back(w);
        return r.h0;
    };
    RealField h_a = run_half(ua, a);
    RealField h_b = run_half(vb, ra);
    pw->breaks.push_back(t_a);
    pw->parts.push_back(ControlSource{a, h_a, t_a});
    // Reversal of the second solve: source +GG* U(t - t_end) R h_b.
    pw->breaks.push_back(t_mid);
    pw->parts.push_back(ControlSource{a, -reflect(h_b), t_end});
    if (n_b > 0) {
        pw->breaks.push_back(t_end);
        pw->parts.push_back(FeedbackSource{a, -1.0});
    }
    res.h0 = h_a;
    res.converged = true;
    res.traj = integrate(u0, SourceSpec(pw), grid, true);
    res.terminal_error = l2_norm(res.traj.back() - u1);
    return res;
}

StabilizationResult stabilization_experiment(const RealField& u0, const DampingProfile& a, double T, double dt,
                                             int save_every) {
    require_same_grid(u0.grid(), a.grid());
    require_zero_mean(u0, "initial state");
    StabilizationResult res;
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    if (grid.n_steps % save_every) grid.n_steps += save_every - grid.n_steps % save_every;
    IntegrateOptions io;
    io.save_every = save_every;
    res.traj = integrate(u0, FeedbackSource{a, 1.0}, grid, io);
    if (is_zero(u0)) {
        res.lambda_fit = std::numeric_limits<double>::quiet_NaN();
        res.r_squared = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    std::vector<double> t, y;
    for (std::size_t i = 0; i < res.traj.size(); ++i) {
        double ti = res.traj.time(i);
        if (ti + 1e-12 < 0.5 * T) continue;
        t.push_back(ti);
        y.push_back(std::log(l2_norm(res.traj.fields[i])));
    }
    LinearFit f = fit_line(t, y);
    res.lambda_fit = -f.slope;
    res.r_squared = f.r_squared;
    return res;
}

double observability_ratio(const RealField& u0, const DampingProfile& a, double T, double dt, ObservedFlow flow) {
    require_same_grid(u0.grid(), a.grid());
    require_zero_mean(u0, "initial state");
    if (is_zero(u0)) fail(ErrorCode::ZeroData, "observability ratio is undefined for u0 = 0");
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    double integral = 0.0;
    auto state = [&](const Trajectory* tr, std::size_t i) {
        return tr ? tr->fields[i] : free_group(grid.time(static_cast<int>(i)), u0);
    };
    Trajectory tr;
    if (flow != ObservedFlow::Free)
        tr = integrate(u0, FeedbackSource{a, 1.0}, grid, flow == ObservedFlow::Nonlinear);
    double prev = 0.0;
    for (int i = 0; i <= grid.n_steps; ++i) {
        double v = energy(apply_G(state(flow == ObservedFlow::Free ? nullptr : &tr, i), a));
        if (i > 0) integral += 0.5 * grid.dt() * (prev + v);
        prev = v;
    }
    if (!(integral > 0.0)) return std::numeric_limits<double>::infinity();
    return energy(u0) / integral;
}

std::vector<double> observability_ensemble(const DampingProfile& a, double T, int count, std::uint64_t seed,
                                           int band, double dt, int jobs) {
    if (count < 1) fail(ErrorCode::InvalidArgument, "ensemble size must be positive");
    std::vector<double> out(count);
    parallel_for(count, jobs, [&](int i) {
        double norm = static_cast<double>(i + 1) / count;
        RealField u0 = random_field(a.grid(), 0.0, norm, seed + static_cast<std::uint64_t>(i), band);
        out[i] = observability_ratio(u0, a, T, dt);
    });
    return out;
}

double linear_gap(const RealField& u0, const DampingProfile& a, double T, double dt) {
    require_zero_mean(u0, "initial state");
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    Trajectory nl = integrate(u0, FeedbackSource{a, 1.0}, grid, true);
    Trajectory lin = integrate(u0, FeedbackSource{a, 1.0}, grid, false);
    double gap = 0.0;
    for (std::size_t i = 0; i < nl.size(); ++i) gap = std::max(gap, l2_norm(nl.fields[i] - lin.fields[i]));
    return gap;
}

double free_gap(const RealField& u0, double T, double dt) {
    TimeGrid grid = TimeGrid::covering(0.0, T, dt);
    Trajectory nl = integrate(u0, ZeroSource{}, grid, true);
    double gap = 0.0;
    for (std::size_t i = 0; i < nl.size(); ++i)
        gap = std::max(gap, l2_norm(nl.fields[i] - free_group(nl.time(i), u0)));
    return gap;
}

}  // namespace bolab
