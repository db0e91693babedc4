#include "bolab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bolab/spectral.hpp"

namespace bolab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

// Physical samples on a 4x grid, where every integrand below (degree <= 6) is alias-free.
struct Samples {
    int m;
    std::vector<double> u, ux, uxx, hux, huux;
};

Samples sample(const RealField& u) {
    const GridSpec& g = u.grid();
    Samples s;
    s.m = 4 * g.n_modes;
    RealField ux = derivative(u);
    s.u = u.samples(s.m);
    s.ux = ux.samples(s.m);
    s.uxx = second_derivative(u).samples(s.m);
    s.hux = hilbert(ux).samples(s.m);
    // H(u u_x): the product is band-limited below the padded Nyquist, so transform it there.
    std::vector<cplx> q(s.m);
    for (int j = 0; j < s.m; ++j) q[j] = s.u[j] * s.ux[j];
    GridSpec big = GridSpec::make(s.m);
    RealField qf(big, samples_to_coeffs(big, q, s.m / 2, true));
    s.huux = hilbert(qf).samples();
    return s;
}

template <class F>
double integrate_samples(const Samples& s, F f) {
    double acc = 0.0;
    for (int j = 0; j < s.m; ++j) acc += f(j);
    return acc * two_pi / s.m;
}
}  // namespace

double mass(const RealField& u) { return u.coeffs()[0].real(); }
double energy(const RealField& u) { return inner(u, u); }

double psi4(const RealField& u) {
    Samples s = sample(u);
    return integrate_samples(s, [&](int j) {
        double v = s.u[j];
        return 2.0 * s.ux[j] * s.ux[j] - 1.5 * v * v * s.hux[j] + v * v * v * v / 4.0;
    });
}

double psi6(const RealField& u) {
    Samples s = sample(u);
    return integrate_samples(s, [&](int j) {
        double v = s.u[j], vx = s.ux[j], vxx = s.uxx[j], h1 = s.hux[j], h2 = s.huux[j];
        double v2 = v * v;
        double a = v2 * v2 * v2 / 6.0 - (1.25 * v2 * v2 * h1 + (5.0 / 3.0) * v2 * v * h2);
        double b = 2.5 * (5.0 * v2 * vx * vx + v2 * h1 * h1 + 2.0 * v * h1 * h2);
        double c = 10.0 * (vx * vx * h1 + 2.0 * v * vxx * h1);
        double d = 8.0 * vxx * vxx;
        return a + b + c + d;
    });
}

std::vector<InvariantReport> invariant_reports(const Trajectory& traj) {
    std::vector<InvariantReport> reps{{"I1", {}, 0.0}, {"I2", {}, 0.0}, {"Psi4", {}, 0.0}, {"Psi6", {}, 0.0}};
    for (const auto& u : traj.fields) {
        reps[0].values.push_back(mass(u));
        reps[1].values.push_back(energy(u));
        reps[2].values.push_back(psi4(u));
        reps[3].values.push_back(psi6(u));
    }
    for (auto& r : reps) {
        double v0 = r.values.front();
        double scale = std::max(1.0, std::abs(v0));
        if (r.name == "I2" && v0 > 0.0) scale = v0;
        for (double v : r.values) r.drift = std::max(r.drift, std::abs(v - v0) / scale);
    }
    return reps;
}

std::vector<double> damped_energy_identity(const Trajectory& traj, const DampingProfile& a) {
    std::vector<double> out;
    out.reserve(traj.size());
    const double dt = std::abs(traj.times.dt());
    const double e0 = 0.5 * energy(traj.fields.front());
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const RealField& u = traj.fields[i];
        double gu = energy(apply_G(u, a));
        if (i > 0) acc += 0.5 * dt * (prev + gu);
        prev = gu;
        out.push_back(0.5 * energy(u) + acc - e0);
    }
    return out;
}

double forced_energy_defect(const Trajectory& traj, const SourceSpec& src) {
    const double dt = traj.times.dt();
    // Composite Simpson when possible, trapezoid otherwise.
    const std::size_t n = traj.size() - 1;
    std::vector<double> f(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        f[i] = inner(traj.fields[i], evaluate_source(src, traj.time(i), traj.fields[i]));
    double integral = 0.0;
    if (n % 2 == 0) {
        for (std::size_t i = 0; i < n; i += 2) integral += dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    } else {
        for (std::size_t i = 0; i < n; ++i) integral += 0.5 * dt * (f[i] + f[i + 1]);
    }
    return 0.5 * energy(traj.back()) - 0.5 * energy(traj.fields.front()) - integral;
}

}  // namespace bolab
