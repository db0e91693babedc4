#include "bolab/damping.hpp"

#include <cmath>
#include <numbers>

#include "bolab/error.hpp"
#include "bolab/spectral.hpp"

namespace bolab {

namespace {
constexpr double pi = std::numbers::pi;

double wrap(double x) {
    double y = std::fmod(x + pi, 2.0 * pi);
    if (y < 0) y += 2.0 * pi;
    return y - pi;
}
}  // namespace

DampingProfile DampingProfile::bump(GridSpec grid, double center, double radius) {
    if (!(radius > 0.0) || radius > pi) fail(ErrorCode::InvalidArgument, "profile radius must lie in (0, pi]");
    const int n = grid.n_modes;
    std::vector<double> s(n);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        double z = wrap(2.0 * pi * j / n - center) / radius;
        s[j] = std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0;
        total += s[j];
    }
    if (total <= 0.0) fail(ErrorCode::InvalidArgument, "profile support misses every grid point");
    const double scale = n / (2.0 * pi * total);
    for (auto& v : s) v *= scale;
    DampingProfile p;
    p.a = RealField::from_samples(grid, s);
    p.center = center;
    p.radius = radius;
    return p;
}

DampingProfile DampingProfile::none(GridSpec grid) {
    DampingProfile p;
    p.a = RealField(grid);
    p.off = true;
    return p;
}

bool DampingProfile::in_omega(double x) const { return !off && std::abs(wrap(x - center)) < radius; }

RealField apply_G(const RealField& h, const DampingProfile& a) {
    require_same_grid(h.grid(), a.grid());
    if (a.off) return RealField(h.grid());
    const int cut = h.grid().dealias_cut;
    const double c = inner(a.a, h);
    RealField out = product(a.a, h) - c * truncate(a.a, cut);
    std::vector<cplx> coeffs = out.coeffs();
    coeffs[0] = 0.0;
    return RealField(h.grid(), std::move(coeffs));
}

RealField apply_G_mu(const RealField& h, const DampingProfile& a, double mu, double t) {
    if (mu == 0.0 || t == 0.0) return apply_G(h, a);
    require_same_grid(h.grid(), a.grid());
    if (a.off) return RealField(h.grid());
    const int cut = h.grid().dealias_cut;
    const double c = inner(a.a, h);
    const double shift = mu * t;
    RealField out = translate(product(a.a, h), shift) - c * translate(truncate(a.a, cut), shift);
    return out;
}

RealField apply_GG(const RealField& h, const DampingProfile& a) { return apply_G(apply_G(h, a), a); }

}  // namespace bolab
