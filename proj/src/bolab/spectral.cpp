#include "bolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bolab/error.hpp"

namespace bolab {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx I(0.0, 1.0);

cplx hilbert_symbol(int xi) { return xi > 0 ? -I : (xi < 0 ? I : cplx(0.0)); }
cplx derivative_symbol(int xi) { return I * static_cast<double>(xi); }
cplx antiderivative_symbol(int xi) { return xi == 0 ? cplx(0.0) : 1.0 / (I * static_cast<double>(xi)); }

double coeff_norm(const std::vector<cplx>& c) {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return std::sqrt(s);
}

void check_zero_mean(const std::vector<cplx>& c) {
    if (std::abs(c[0]) >= 1e-12 * std::max(coeff_norm(c), 1e-300) && std::abs(c[0]) > 0.0)
        fail(ErrorCode::NonZeroMean, "field has nonzero mean");
}

std::vector<cplx> padded_product(const GridSpec& g, const std::vector<cplx>& a, const std::vector<cplx>& b, bool real) {
    const int m = 3 * g.n_modes / 2;
    auto sa = coeffs_to_samples(g, a, m, real);
    auto sb = coeffs_to_samples(g, b, m, real);
    for (int j = 0; j < m; ++j) sa[j] *= sb[j];
    if (real)
        for (auto& v : sa) v = v.real();
    return samples_to_coeffs(g, sa, g.dealias_cut, real);
}

std::vector<cplx> exp_samples(const RealField& F, int sign, int m) {
    auto s = F.samples(m);
    std::vector<cplx> e(m);
    for (int j = 0; j < m; ++j) e[j] = std::exp(I * (0.5 * sign * s[j]));
    return e;
}
}  // namespace

RealField hilbert(const RealField& u) { return apply_multiplier(u, hilbert_symbol); }
ComplexField hilbert(const ComplexField& u) { return apply_multiplier(u, hilbert_symbol); }
RealField derivative(const RealField& u) { return apply_multiplier(u, derivative_symbol); }
ComplexField derivative(const ComplexField& u) { return apply_multiplier(u, derivative_symbol); }

RealField second_derivative(const RealField& u) {
    return apply_multiplier(u, [](int xi) { return -static_cast<double>(xi) * xi; });
}
ComplexField second_derivative(const ComplexField& u) {
    return apply_multiplier(u, [](int xi) { return -static_cast<double>(xi) * xi; });
}

RealField antiderivative(const RealField& u) {
    check_zero_mean(u.coeffs());
    return apply_multiplier(u, antiderivative_symbol);
}
ComplexField antiderivative(const ComplexField& u) {
    check_zero_mean(u.coeffs());
    return apply_multiplier(u, antiderivative_symbol);
}

bool Projection::keeps(int xi) const {
    switch (kind) {
        case ProjectionKind::Pplus: return xi >= 1;
        case ProjectionKind::Pminus: return xi <= -1;
        case ProjectionKind::PleqZero: return xi <= 0;
        case ProjectionKind::PgeqN: return xi >= N;
        case ProjectionKind::PlowN: return std::abs(xi) <= N;
        case ProjectionKind::QN: return std::abs(xi) > N;
        case ProjectionKind::P0: return xi == 0;
    }
    return false;
}

ComplexField project(const ComplexField& u, Projection p) {
    return apply_multiplier(u, [&](int xi) { return p.keeps(xi) ? 1.0 : 0.0; });
}

RealField project(const RealField& u, Projection p) {
    if (p.kind != ProjectionKind::PlowN && p.kind != ProjectionKind::QN && p.kind != ProjectionKind::P0)
        fail(ErrorCode::InvalidArgument, "asymmetric projection of a real field is complex");
    return apply_multiplier(u, [&](int xi) { return p.keeps(xi) ? 1.0 : 0.0; });
}

RealField truncate(const RealField& u, int N) { return project(u, Projection{ProjectionKind::PlowN, N}); }
ComplexField truncate(const ComplexField& u, int N) { return project(u, Projection{ProjectionKind::PlowN, N}); }

RealField free_group(double t, const RealField& u) {
    if (t == 0.0) return u;
    return apply_multiplier(u, [t](int xi) { return std::exp(-I * (t * dispersion(xi))); });
}
ComplexField free_group(double t, const ComplexField& u) {
    if (t == 0.0) return u;
    return apply_multiplier(u, [t](int xi) { return std::exp(-I * (t * dispersion(xi))); });
}

RealField translate(const RealField& u, double shift) {
    if (shift == 0.0) return u;
    return apply_multiplier(u, [shift](int xi) { return std::exp(-I * (shift * xi)); });
}

RealField reflect(const RealField& u) {
    std::vector<cplx> c = u.coeffs();
    for (auto& v : c) v = std::conj(v);
    return RealField(u.grid(), std::move(c));
}

RealField product(const RealField& u, const RealField& v) {
    require_same_grid(u.grid(), v.grid());
    return RealField(u.grid(), padded_product(u.grid(), u.coeffs(), v.coeffs(), true));
}

ComplexField product(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u.grid(), v.grid());
    return ComplexField(u.grid(), padded_product(u.grid(), u.coeffs(), v.coeffs(), false));
}

ComplexField exp_gauge(const RealField& F, int sign) {
    const GridSpec& g = F.grid();
    const int m = 4 * g.n_modes;
    return ComplexField(g, samples_to_coeffs(g, exp_samples(F, sign, m), g.dealias_cut, false));
}

ComplexField exp_gauge_full(const RealField& F, int sign) {
    const GridSpec& g = F.grid();
    const int m = 4 * g.n_modes;
    return ComplexField(g, samples_to_coeffs(g, exp_samples(F, sign, m), g.n_modes / 2 - 1, false));
}

double inner(const RealField& u, const RealField& v) {
    require_same_grid(u.grid(), v.grid());
    double s = 0.0;
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) s += (u.coeffs()[i] * std::conj(v.coeffs()[i])).real();
    return s / two_pi;
}

cplx inner(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u.grid(), v.grid());
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.coeffs().size(); ++i) s += u.coeffs()[i] * std::conj(v.coeffs()[i]);
    return s / two_pi;
}

double l2_norm(const RealField& u) { return coeff_norm(u.coeffs()) / std::sqrt(two_pi); }
double l2_norm(const ComplexField& u) { return coeff_norm(u.coeffs()) / std::sqrt(two_pi); }

double hs_norm(const RealField& u, double s) {
    const GridSpec& g = u.grid();
    double acc = 0.0;
    for (int i = 0; i < g.n_modes; ++i) {
        double xi = g.freq(i);
        acc += std::pow(1.0 + xi * xi, s) * std::norm(u.coeffs()[i]);
    }
    return std::sqrt(acc / two_pi);
}

double sup_norm(const ComplexField& u, int oversample) {
    auto s = u.samples(oversample * u.grid().n_modes);
    double m = 0.0;
    for (const auto& v : s) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const RealField& u, int oversample) {
    auto s = u.samples(oversample * u.grid().n_modes);
    double m = 0.0;
    for (double v : s) m = std::max(m, std::abs(v));
    return m;
}

bool is_zero(const RealField& u) {
    for (const auto& c : u.coeffs())
        if (c != cplx(0.0)) return false;
    return true;
}

bool is_zero(const ComplexField& u) {
    for (const auto& c : u.coeffs())
        if (c != cplx(0.0)) return false;
    return true;
}

}  // namespace bolab
