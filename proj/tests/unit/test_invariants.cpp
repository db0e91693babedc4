#include <cmath>

#include "bolab/damping.hpp"
#include "bolab/invariants.hpp"
#include "bolab/solver.hpp"
#include "bolab/spectral.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bolab;

namespace {
// Direct evaluation of the Fourier series at M points; no FFT involved.
struct Direct {
    std::vector<double> u, ux, uxx, hux, huux;
};

Direct direct(const RealField& f, int band, int M) {
    Direct d;
    for (int j = 0; j < M; ++j) {
        double x = 2 * testing::pi * j / M;
        double u = 0, ux = 0, uxx = 0, hux = 0;
        for (int k = -band; k <= band; ++k) {
            cplx c = f.coeff(k) / (2 * testing::pi);
            cplx e = std::polar(1.0, k * x);
            cplx ik(0, k);
            double sg = k > 0 ? 1 : (k < 0 ? -1 : 0);
            u += (c * e).real();
            ux += (ik * c * e).real();
            uxx += (ik * ik * c * e).real();
            hux += (cplx(0, -sg) * ik * c * e).real();
        }
        d.u.push_back(u);
        d.ux.push_back(ux);
        d.uxx.push_back(uxx);
        d.hux.push_back(hux);
    }
    // H(u u_x) by exact DFT of a trig polynomial of degree 2*band, resolved by M points
    std::vector<double> q(M);
    for (int j = 0; j < M; ++j) q[j] = d.u[j] * d.ux[j];
    d.huux.assign(M, 0.0);
    for (int k = -2 * band; k <= 2 * band; ++k) {
        cplx ck = 0;
        for (int j = 0; j < M; ++j) ck += q[j] * std::polar(1.0, -k * 2 * testing::pi * j / M);
        ck /= M;
        double sg = k > 0 ? 1 : (k < 0 ? -1 : 0);
        for (int j = 0; j < M; ++j) d.huux[j] += (cplx(0, -sg) * ck * std::polar(1.0, k * 2 * testing::pi * j / M)).real();
    }
    return d;
}

double quad(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s * 2 * testing::pi / v.size();
}
}  // namespace

TEST_CASE("mass and energy") {
    GridSpec g = GridSpec::make(32);
    RealField c = testing::sample(g, [](double x) { return std::cos(x); });
    CHECK(energy(c) == doctest::Approx(testing::pi).epsilon(1e-14));
    CHECK(std::abs(mass(c)) < 1e-14);
    RealField r = testing::random_real(g, 10, 31);
    CHECK(std::abs(mass(r)) < 1e-14);
    double l2 = 0;
    for (int i = 0; i < g.n_modes; ++i) l2 += std::norm(r.coeffs()[i]);
    CHECK(energy(r) == doctest::Approx(l2 / (2 * testing::pi)).epsilon(1e-13));
    RealField m = testing::sample(g, [](double) { return 1.5; });
    CHECK(mass(m) == doctest::Approx(3 * testing::pi));
}

TEST_CASE("psi4 closed form and quadrature oracle") {
    GridSpec g = GridSpec::make(64);
    CHECK(psi4(RealField(g)) == 0.0);
    CHECK(psi6(RealField(g)) == 0.0);
    for (double eps : {1.0, 0.3, 0.01}) {
        RealField u = testing::sample(g, [eps](double x) { return eps * std::cos(x); });
        double exact = 2 * testing::pi * eps * eps + 3 * testing::pi / 16 * std::pow(eps, 4);
        CHECK(psi4(u) == doctest::Approx(exact).epsilon(1e-12));
    }
    RealField u = testing::random_real(g, 5, 32);
    u *= 0.7 / l2_norm(u);
    Direct d = direct(u, 5, 128);
    std::vector<double> f4, f6;
    for (std::size_t j = 0; j < d.u.size(); ++j) {
        double v = d.u[j], vx = d.ux[j], vxx = d.uxx[j], h1 = d.hux[j], h2 = d.huux[j], v2 = v * v;
        f4.push_back(2 * vx * vx - 1.5 * v2 * h1 + v2 * v2 / 4);
        f6.push_back(v2 * v2 * v2 / 6 - (1.25 * v2 * v2 * h1 + 5.0 / 3.0 * v2 * v * h2) +
                     2.5 * (5 * v2 * vx * vx + v2 * h1 * h1 + 2 * v * h1 * h2) + 10 * (vx * vx * h1 + 2 * v * vxx * h1) +
                     8 * vxx * vxx);
    }
    CHECK(psi4(u) == doctest::Approx(quad(f4)).epsilon(1e-12));
    CHECK(psi6(u) == doctest::Approx(quad(f6)).epsilon(1e-12));
}

TEST_CASE("psi6 small-amplitude leading order") {
    GridSpec g = GridSpec::make(64);
    double prev = 0;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        RealField u = testing::sample(g, [eps](double x) { return eps * std::cos(x); });
        double rel = std::abs(psi6(u) - 8 * testing::pi * eps * eps) / (8 * testing::pi * eps * eps);
        CHECK(rel < 10 * eps * eps);
        if (prev > 0) CHECK(rel < prev);
        prev = rel;
    }
}

TEST_CASE("unforced conservation") {
    GridSpec g = GridSpec::make(128);
    RealField u0 = testing::sample(g, [](double x) { return 0.5 * std::cos(x) + 0.25 * std::sin(2 * x); });
    Trajectory tr = integrate(u0, ZeroSource{}, TimeGrid{0, 2, 2000}, IntegrateOptions{true, 100});
    auto reps = invariant_reports(tr);
    REQUIRE(reps.size() == 4);
    CHECK(reps[0].name == "I1");
    CHECK(reps[0].drift < 1e-14);
    CHECK(reps[1].drift < 1e-9);
    CHECK(reps[2].drift < 1e-6);
    CHECK(reps[3].drift < 1e-5);
    for (const auto& r : reps) CHECK(r.values.size() == tr.size());
}

TEST_CASE("damped energy identity") {
    GridSpec g = GridSpec::make(128);
    DampingProfile a = DampingProfile::bump(g, testing::pi, testing::pi / 2);
    for (double v : damped_energy_identity(integrate(RealField(g), FeedbackSource{a}, TimeGrid{0, 1, 100}, true), a))
        CHECK(v == 0.0);
    RealField u0 = testing::sample(g, [](double x) { return 0.5 * std::cos(x) + 0.25 * std::sin(2 * x); });
    DampingProfile off = DampingProfile::none(g);
    for (double v : damped_energy_identity(integrate(u0, FeedbackSource{off}, TimeGrid{0, 1, 1000}, true), off))
        CHECK(std::abs(v) < 1e-8);
    Trajectory tr = integrate(u0, FeedbackSource{a}, TimeGrid{0, 5, 5000}, true);
    auto defect = damped_energy_identity(tr, a);
    double worst = 0;
    for (double v : defect) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-7 * energy(u0));
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(energy(tr.fields[i]) <= energy(tr.fields[i - 1]) + 1e-12);
    CHECK(energy(tr.back()) < 0.9 * energy(u0));
}
