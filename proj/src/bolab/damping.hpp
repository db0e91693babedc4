#pragma once

#include "bolab/field.hpp"

namespace bolab {

// Nonnegative profile a(x) with int a = 1, supported on omega = (center - radius, center + radius).
struct DampingProfile {
    RealField a;
    double center = 0.0;
    double radius = 0.0;
    bool off = false;  // a = 0: control-off baseline

    static DampingProfile bump(GridSpec grid, double center, double radius);
    static DampingProfile none(GridSpec grid);

    const GridSpec& grid() const { return a.grid(); }
    bool in_omega(double x) const;
};

// (G h)(x) = a(x) (h(x) - int a h), dealiased; mean is exactly zero.
RealField apply_G(const RealField& h, const DampingProfile& a);
// Moving-frame variant: a(x - mu t) (h(x - mu t) - int a h).
RealField apply_G_mu(const RealField& h, const DampingProfile& a, double mu, double t);
// G G* h (G is self-adjoint on the dealiased band, so this is G(G h)).
RealField apply_GG(const RealField& h, const DampingProfile& a);

}  // namespace bolab
