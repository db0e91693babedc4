#pragma once

#include <complex>
#include <vector>

#include "bolab/field.hpp"

namespace bolab {

// Multiplies each coefficient by symbol(xi). On real fields the symbol must be
// Hermitian; the Nyquist slot gets the real part of the symbol there.
template <class Symbol>
RealField apply_multiplier(const RealField& u, Symbol symbol) {
    const GridSpec& g = u.grid();
    std::vector<cplx> c = u.coeffs();
    const int n = g.n_modes;
    for (int i = 0; i < n; ++i) {
        int xi = g.freq(i);
        if (xi == n / 2)
            c[i] *= 0.5 * (cplx(symbol(xi)) + cplx(symbol(-xi))).real();
        else
            c[i] *= cplx(symbol(xi));
    }
    return RealField(g, std::move(c));
}

template <class Symbol>
ComplexField apply_multiplier(const ComplexField& u, Symbol symbol) {
    const GridSpec& g = u.grid();
    std::vector<cplx> c = u.coeffs();
    for (int i = 0; i < g.n_modes; ++i) c[i] *= cplx(symbol(g.freq(i)));
    return ComplexField(g, std::move(c));
}

RealField hilbert(const RealField& u);
ComplexField hilbert(const ComplexField& u);
RealField derivative(const RealField& u);
ComplexField derivative(const ComplexField& u);
RealField second_derivative(const RealField& u);
ComplexField second_derivative(const ComplexField& u);
// Multiplier 1/(i xi); throws NonZeroMean unless |coeff(0)| < 1e-12 ||u||.
RealField antiderivative(const RealField& u);
ComplexField antiderivative(const ComplexField& u);

enum class ProjectionKind { Pplus, Pminus, PleqZero, PgeqN, PlowN, QN, P0 };

struct Projection {
    ProjectionKind kind;
    int N = 0;
    bool keeps(int xi) const;
};

ComplexField project(const ComplexField& u, Projection p);
// Symmetric projections (PlowN, QN, P0) keep real fields real.
RealField project(const RealField& u, Projection p);
// Zero all coefficients with |xi| > N.
RealField truncate(const RealField& u, int N);
ComplexField truncate(const ComplexField& u, int N);

// Dispersion relation |xi| xi; U(t) multiplies by e^{-it|xi|xi}.
inline double dispersion(int xi) { return std::abs(static_cast<double>(xi)) * xi; }
RealField free_group(double t, const RealField& u);
ComplexField free_group(double t, const ComplexField& u);

// Translation x -> x - shift, i.e. (S u)(x) = u(x - shift).
RealField translate(const RealField& u, double shift);

// Reflection x -> -x.
RealField reflect(const RealField& u);

// Dealiased pointwise product: 3/2 padding, truncation to the two-thirds band.
RealField product(const RealField& u, const RealField& v);
ComplexField product(const ComplexField& u, const ComplexField& v);

// e^{sign * i F / 2} evaluated on a 4x padded grid and truncated to the two-thirds band.
ComplexField exp_gauge(const RealField& F, int sign);
// Same exponential without truncation (kept up to the grid's Nyquist band).
ComplexField exp_gauge_full(const RealField& F, int sign);

// L2 pairings with the 2pi Parseval factor: <u, v> = int u conj(v) dx.
double inner(const RealField& u, const RealField& v);
cplx inner(const ComplexField& u, const ComplexField& v);
double l2_norm(const RealField& u);
double l2_norm(const ComplexField& u);
// H^s norm with weight (1 + xi^2)^{s/2}.
double hs_norm(const RealField& u, double s);
// Max modulus over an oversampled physical grid.
double sup_norm(const ComplexField& u, int oversample = 4);
double sup_norm(const RealField& u, int oversample = 4);
// Largest coefficient modulus relative to the largest in the field.
bool is_zero(const RealField& u);
bool is_zero(const ComplexField& u);

}  // namespace bolab
