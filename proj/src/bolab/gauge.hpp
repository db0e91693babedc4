#pragma once

#include <vector>

#include "bolab/field.hpp"
#include "bolab/solver.hpp"

namespace bolab {

// F = antiderivative(u), W = P+(e^{-iF/2}), w = dW/dx.
struct GaugeState {
    RealField F;
    ComplexField W;
    ComplexField w;
    ComplexField exp_minus;  // e^{-iF/2}, dealiased
};

struct GaugeTerms {
    ComplexField I;
    ComplexField II;
    ComplexField III;
};

struct Ungauged {
    ComplexField two_i_w;
    ComplexField A;
    ComplexField B;
};

struct UngaugedHigh {
    ComplexField A_N;
    ComplexField B_N;
};

GaugeState gauge(const RealField& u);
GaugeTerms gauge_rhs(const RealField& u, const GaugeState& state, const RealField& g);
Ungauged ungauge(const RealField& u, const GaugeState& state);
UngaugedHigh ungauge_highfreq(const RealField& u, const GaugeState& state, int N);

// Defect of w_t - i w_xx = I + II + III at interior levels (centered differences).
// An empty g_traj means g = 0.
std::vector<double> gauge_residual(const Trajectory& traj, const Trajectory& g_traj);

}  // namespace bolab
