#pragma once

#include <string>
#include <vector>

#include "bolab/damping.hpp"
#include "bolab/field.hpp"
#include "bolab/solver.hpp"

namespace bolab {

double mass(const RealField& u);    // int u
double energy(const RealField& u);  // int u^2
double psi4(const RealField& u);
double psi6(const RealField& u);

struct InvariantReport {
    std::string name;
    std::vector<double> values;
    double drift = 0.0;  // max |v(t) - v(0)| / max(1, |v(0)|)
};

std::vector<InvariantReport> invariant_reports(const Trajectory& traj);

// 1/2 ||u(t)||^2 + int_0^t ||G u||^2 - 1/2 ||u0||^2 at each level (trapezoidal in time).
std::vector<double> damped_energy_identity(const Trajectory& traj, const DampingProfile& a);

// 1/2 ||u(T)||^2 - 1/2 ||u0||^2 - int_0^T int u g, with g sampled along the trajectory.
double forced_energy_defect(const Trajectory& traj, const SourceSpec& src);

}  // namespace bolab
