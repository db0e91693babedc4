#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "bolab/field.hpp"
#include "bolab/spectral.hpp"

namespace testing {

constexpr double pi = std::numbers::pi;

inline bolab::RealField from_function(bolab::GridSpec g, double (*f)(double)) {
    std::vector<double> s(g.n_modes);
    for (int j = 0; j < g.n_modes; ++j) s[j] = f(2.0 * pi * j / g.n_modes);
    return bolab::RealField::from_samples(g, s);
}

template <class F>
bolab::RealField sample(bolab::GridSpec g, F f) {
    std::vector<double> s(g.n_modes);
    for (int j = 0; j < g.n_modes; ++j) s[j] = f(2.0 * pi * j / g.n_modes);
    return bolab::RealField::from_samples(g, s);
}

// Random real field on 1 <= |xi| <= band with Gaussian coefficients (plus a mean if asked).
inline bolab::RealField random_real(bolab::GridSpec g, int band, unsigned seed, bool with_mean = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<bolab::cplx> c(g.n_modes, 0.0);
    for (int xi = 1; xi <= band; ++xi) {
        bolab::cplx v(nd(rng), nd(rng));
        c[g.index(xi)] = v;
        c[g.index(-xi)] = std::conj(v);
    }
    if (with_mean) c[0] = nd(rng);
    return bolab::RealField(g, c);
}

inline bolab::ComplexField random_complex(bolab::GridSpec g, int band, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<bolab::cplx> c(g.n_modes, 0.0);
    for (int xi = -band; xi <= band; ++xi) c[g.index(xi)] = bolab::cplx(nd(rng), nd(rng));
    return bolab::ComplexField(g, c);
}

inline double rel_diff(const bolab::RealField& a, const bolab::RealField& b) {
    double n = bolab::l2_norm(b);
    return bolab::l2_norm(a - b) / (n > 0 ? n : 1.0);
}

inline double rel_diff(const bolab::ComplexField& a, const bolab::ComplexField& b) {
    double n = bolab::l2_norm(b);
    return bolab::l2_norm(a - b) / (n > 0 ? n : 1.0);
}

}  // namespace testing
