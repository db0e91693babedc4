#include <cmath>

#include "bolab/control.hpp"
#include "bolab/error.hpp"
#include "bolab/invariants.hpp"
#include "bolab/spectral.hpp"
#include "bolab/stats.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bolab;

namespace {
RealField unit_random(GridSpec g, int band, unsigned seed, double norm = 1.0) {
    RealField u = testing::random_real(g, band, seed);
    u *= norm / l2_norm(u);
    return u;
}

DampingProfile default_profile(GridSpec g) { return DampingProfile::bump(g, testing::pi, testing::pi / 2); }
}  // namespace

TEST_CASE("damping profile") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    CHECK(std::abs(mass(a.a) - 1.0) < 1e-12);
    for (double v : a.a.samples()) CHECK(v >= -1e-12);
    CHECK(a.in_omega(testing::pi));
    CHECK_FALSE(a.in_omega(0.1));
    CHECK(a.in_omega(testing::pi + 1.5));
    CHECK_FALSE(a.in_omega(testing::pi + 1.6));
    CHECK_THROWS_AS(DampingProfile::bump(g, 1.0, 0.0), Error);
}

TEST_CASE("G operator") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    RealField one = testing::sample(g, [](double) { return 1.0; });
    CHECK(l2_norm(apply_G(one, a)) < 1e-14);
    for (unsigned s = 0; s < 10; ++s) {
        RealField h = testing::random_real(g, 21, 100 + s, true), k = testing::random_real(g, 21, 200 + s, true);
        RealField Gh = apply_G(h, a);
        CHECK(Gh.coeffs()[0] == cplx(0.0));
        CHECK(std::abs(inner(Gh, k) - inner(h, apply_G(k, a))) < 1e-12 * l2_norm(h) * l2_norm(k));
        CHECK(inner(apply_GG(h, a), h) == doctest::Approx(energy(Gh)).epsilon(1e-12));
        CHECK(energy(Gh) >= 0.0);
    }
}

TEST_CASE("moving-frame G") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    double asym = 0;
    for (unsigned s = 0; s < 10; ++s) {
        RealField h = testing::random_real(g, 21, 300 + s), k = testing::random_real(g, 21, 400 + s);
        CHECK(l2_norm(apply_G_mu(h, a, 0.0, 0.7) - apply_G(h, a)) == 0.0);
        CHECK(l2_norm(apply_G_mu(h, a, 1.3, 0.0) - apply_G(h, a)) == 0.0);
        for (double mu : {0.5, -2.0}) {
            RealField Gm = apply_G_mu(h, a, mu, 0.9);
            CHECK(std::abs(mass(Gm)) < 1e-12 * l2_norm(h));
            asym = std::max(asym, std::abs(inner(Gm, k) - inner(h, apply_G_mu(k, a, mu, 0.9))) /
                                      (l2_norm(h) * l2_norm(k)));
        }
    }
    MESSAGE("G_mu self-adjointness defect ", asym);
    CHECK(asym > 1e-3);
}

TEST_CASE("Gramian") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    Gramian L(a, 1.0);
    CHECK(is_zero(L.apply(RealField(g))));
    CHECK_THROWS_AS(L.apply(testing::random_real(g, 3, 5, true)), Error);
    for (unsigned s = 0; s < 5; ++s) {
        RealField h = unit_random(g, 21, 500 + s), k = unit_random(g, 21, 600 + s);
        CHECK(std::abs(inner(L.apply(h), k) - inner(h, L.apply(k))) <= 1e-10);
        CHECK(inner(L.apply(h), h) > 0.0);
    }
    RealField h = unit_random(g, 8, 7);
    std::vector<double> T{1e-2, 1e-3, 1e-4}, n;
    for (double t : T) n.push_back(l2_norm(gramian_apply(h, a, t, 64)));
    CHECK(fit_loglog(T, n).slope == doctest::Approx(1.0).epsilon(0.01));
    RealField ode = integrate_terminal(RealField(g), ControlSource{a, h, 0.0}, TimeGrid{0, 1, 4000}, false).fields.front();
    CHECK(l2_norm(ode - L.apply(h)) < 1e-8);

    auto ritz = gramian_spectrum(L, 20, 3);
    REQUIRE(ritz.size() == 20);
    for (std::size_t i = 1; i < ritz.size(); ++i) CHECK(ritz[i] <= ritz[i - 1]);
    CHECK(ritz.back() > 0.0);
    RealField c = testing::sample(g, [](double x) { return std::cos(x); });
    CHECK(inner(L.apply(c), c) / energy(c) <= ritz.front() * (1 + 1e-10));
}

TEST_CASE("Gramian solve") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    Gramian L(a, 1.0);
    CHECK(is_zero(gramian_solve(L, RealField(g)).x));
    RealField known = unit_random(g, 12, 8);
    CgOptions o;
    o.tol = 1e-10;
    CgResult r = gramian_solve(L, L.apply(known), o);
    CHECK(r.relative_residual <= 1e-10);
    CHECK(l2_norm(r.x - known) / l2_norm(known) < 10 * 1e-10);
    RealField u0 = testing::sample(g, [](double x) { return std::cos(x); });
    RealField h0 = gramian_solve(u0, a, 1.0, 1e-12);
    RealField uT = integrate(u0, ControlSource{a, h0, 0.0}, TimeGrid{0, 1, 2000}, false).back();
    CHECK(l2_norm(uT) <= 1e-6 * l2_norm(u0));
    CHECK_THROWS_AS(gramian_solve(Gramian(DampingProfile::none(g), 1.0), u0), Error);
    try {
        gramian_solve(Gramian(DampingProfile::none(g), 1.0), u0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
    }
}

TEST_CASE("Picard control") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    ControlResult z = picard_control(RealField(g), a, 1.0);
    CHECK(is_zero(z.h0));
    CHECK(z.iterations == 1);
    CHECK(z.terminal_error == 0.0);

    RealField u0 = testing::sample(g, [](double x) { return 1e-2 * std::cos(x); });
    ControlResult r = picard_control(u0, a, 1.0);
    CHECK(r.converged);
    CHECK(r.iterations <= 10);
    CHECK(r.max_contraction_factor() < 0.5);
    CHECK(r.terminal_error <= 1e-6 * l2_norm(u0));
    CHECK(r.warnings.empty());
    for (const auto& u : r.traj.fields) CHECK(std::abs(mass(u)) < 1e-14);
    for (std::size_t i = 1; i < r.contraction_history.size(); ++i)
        CHECK(r.contraction_history[i] < r.contraction_history[i - 1]);

    double dt = control_dt(g, 1.0);
    std::vector<double> amp, rem;
    for (double e : {1e-1, 5e-2, 2.5e-2, 1.25e-2}) {
        amp.push_back(e);
        rem.push_back(l2_norm(nonlinear_remainder(e / l2_norm(u0) * u0, a, 1.0, dt)));
    }
    CHECK(fit_loglog(amp, rem).slope == doctest::Approx(2.0).epsilon(0.05));

    RealField big = testing::sample(g, [](double x) { return 0.08 * std::cos(x); });
    ControlResult w = picard_control(big, a, 1.0);
    CHECK_FALSE(w.warnings.empty());
    CHECK_THROWS_AS(picard_control(testing::sample(g, [](double x) { return 3.0 * std::cos(x); }), a, 1.0), Error);
    CHECK_THROWS_AS(picard_control(testing::random_real(g, 3, 9, true), a, 1.0), Error);
}

TEST_CASE("steering") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    ControlResult z = steer(RealField(g), RealField(g), a, 1.0);
    CHECK(is_zero(z.h0));
    for (const auto& u : z.traj.fields) CHECK(is_zero(u));

    RealField u0 = testing::sample(g, [](double x) { return 1e-2 * std::cos(x); });
    RealField u1 = testing::sample(g, [](double x) { return 1e-2 * std::sin(2 * x); });
    ControlResult p = picard_control(u0, a, 1.0);
    ControlResult s0 = steer(u0, RealField(g), a, 1.0);
    CHECK(l2_norm(s0.h0 - p.h0) == 0.0);

    ControlResult s = steer(u0, u1, a, 1.0);
    CHECK(l2_norm(s.traj.fields.front() - u0) == 0.0);
    CHECK(s.terminal_error <= 1e-5 * l2_norm(u1));
    CHECK(l2_norm(s.traj.back() - u1) == doctest::Approx(s.terminal_error));

    RealField m = testing::sample(g, [](double) { return 0.01; });
    CHECK_THROWS_AS(steer(u0, m, a, 1.0), Error);
    try {
        steer(u0, m + u1, a, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MeanMismatch);
    }
}

TEST_CASE("stabilization") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    StabilizationResult z = stabilization_experiment(RealField(g), a, 1.0);
    CHECK(std::isnan(z.lambda_fit));
    for (const auto& u : z.traj.fields) CHECK(is_zero(u));

    RealField u0 = testing::sample(g, [](double x) { return 0.5 * std::cos(x) + 0.3 * std::sin(2 * x); });
    StabilizationResult off = stabilization_experiment(u0, DampingProfile::none(g), 5.0);
    CHECK(std::abs(off.lambda_fit) <= 1e-6);
    StabilizationResult r = stabilization_experiment(u0, a, 30.0, 1e-3, 10);
    CHECK(r.lambda_fit > 0.0);
    for (std::size_t i = 1; i < r.traj.size(); ++i)
        CHECK(l2_norm(r.traj.fields[i]) <= l2_norm(r.traj.fields[i - 1]) * (1 + 1e-12));
}

TEST_CASE("observability") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    CHECK_THROWS_AS(observability_ratio(RealField(g), a, 1.0), Error);
    RealField c = testing::sample(g, [](double x) { return std::cos(3 * x); });
    double ratio = observability_ratio(c, a, 1.0, 1e-3, ObservedFlow::Free);
    double diag = inner(gramian_apply(c, a, 1.0), c);
    CHECK(ratio == doctest::Approx(energy(c) / diag).epsilon(1e-6));
    for (unsigned s = 0; s < 6; ++s) {
        RealField u = unit_random(g, 10, 700 + s, 0.2 + 0.15 * s);
        double r1 = observability_ratio(u, a, 1.0), r2 = observability_ratio(u, a, 2.0);
        CHECK(std::isfinite(r1));
        CHECK(r1 > 0.0);
        CHECK(r2 <= r1);
    }
}

TEST_CASE("linear gap") {
    GridSpec g = GridSpec::make(64);
    DampingProfile a = default_profile(g);
    CHECK(linear_gap(RealField(g), a, 1.0) == 0.0);
    RealField u = unit_random(g, 6, 10);
    std::vector<double> amp, gap;
    for (double e : {1e-1, 5e-2, 2.5e-2, 1.25e-2}) {
        amp.push_back(e);
        gap.push_back(linear_gap(e * u, a, 1.0));
    }
    CHECK(fit_loglog(amp, gap).slope == doctest::Approx(2.0).epsilon(0.05));
    double lo = 1e300, hi = 0;
    for (unsigned s = 0; s < 6; ++s) {
        RealField v = unit_random(g, 6, 800 + s, 0.05);
        double c = linear_gap(v, a, 1.0) / energy(v);
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    CHECK(hi / lo < 10.0);
}
