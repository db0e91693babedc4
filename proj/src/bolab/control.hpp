#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bolab/damping.hpp"
#include "bolab/field.hpp"
#include "bolab/solver.hpp"

namespace bolab {

// L h0 = int_0^T U(-s) G G* U(s) h0 ds by composite 4-point Gauss-Legendre panels.
class Gramian {
public:
    Gramian(DampingProfile a, double T, int n_quad = 2048);

    RealField apply(const RealField& h0) const;
    const DampingProfile& profile() const { return a_; }
    double horizon() const { return T_; }
    int nodes() const { return static_cast<int>(s_.size()); }

private:
    DampingProfile a_;
    double T_;
    std::vector<double> s_, w_;
    std::vector<std::vector<cplx>> phase_;  // e^{-i s |xi| xi} per node, by slot
};

RealField gramian_apply(const RealField& h0, const DampingProfile& a, double T, int n_quad = 2048);

struct CgOptions {
    double tol = 1e-12;
    int max_iter = 500;
};

struct CgResult {
    RealField x;
    int iterations = 0;
    double relative_residual = 0.0;
};

// CG for L h0 = u0 on the zero-mean subspace of the dealiased band.
CgResult gramian_solve(const Gramian& L, const RealField& u0, CgOptions opts = {}, const RealField* guess = nullptr);
RealField gramian_solve(const RealField& u0, const DampingProfile& a, double T, double tol, int n_quad = 2048);

// Ritz values of L from k Lanczos steps with full reorthogonalization, sorted descending.
std::vector<double> gramian_spectrum(const Gramian& L, int k, std::uint64_t seed);

struct ControlOptions {
    double tol = 1e-10;        // relative change of h0 between iterations
    int max_iter = 20;
    int n_quad = 2048;
    double dt = 0.0;           // 0: chosen from the grid (dispersive resolution of the control wave)
    double cg_tol = 1e-13;
    double smallness = 5e-2;   // delta
};

struct ControlResult {
    RealField h0;
    Trajectory traj;
    int iterations = 0;
    std::vector<double> contraction_history;  // ||h_{k+1} - h_k|| per iteration
    double terminal_error = 0.0;              // ||u(T) - target||
    bool converged = false;
    std::vector<std::string> warnings;

    double max_contraction_factor() const;
};

// Step size used by the control routines when ControlOptions::dt is 0.
double control_dt(const GridSpec& grid, double T);

// K h0 = u(0) - L h0 where u solves the nonlinear terminal problem u(T) = 0 with source -GG*U(t)h0.
RealField nonlinear_map(const RealField& h0, const DampingProfile& a, double T, double dt);
// Purely nonlinear part: same terminal solve minus its linear counterpart on the same time grid.
RealField nonlinear_remainder(const RealField& h0, const DampingProfile& a, double T, double dt);

ControlResult picard_control(const RealField& u0, const DampingProfile& a, double T, ControlOptions opts = {});

// Drives u0 to u1 over [0, T]; see the README for the construction.
ControlResult steer(const RealField& u0, const RealField& u1, const DampingProfile& a, double T,
                    ControlOptions opts = {});

struct StabilizationResult {
    Trajectory traj;
    double lambda_fit = 0.0;  // NaN when u0 = 0
    double r_squared = 0.0;
};

StabilizationResult stabilization_experiment(const RealField& u0, const DampingProfile& a, double T,
                                             double dt = 1e-3, int save_every = 1);

enum class ObservedFlow { Nonlinear, LinearDamped, Free };

// ||u0||^2 / int_0^T ||G u||^2 along the chosen flow.
double observability_ratio(const RealField& u0, const DampingProfile& a, double T, double dt = 1e-3,
                           ObservedFlow flow = ObservedFlow::Nonlinear);

// Seeded ensemble of observability ratios: member i is a random L2-normalized field on
// 1 <= |xi| <= band with norm (i + 1) / count, so every member has ||u0|| <= 1.
std::vector<double> observability_ensemble(const DampingProfile& a, double T, int count, std::uint64_t seed,
                                           int band = 16, double dt = 1e-3, int jobs = 1);

// sup_t ||u - u_L|| for the damped nonlinear and damped linear systems from u0.
double linear_gap(const RealField& u0, const DampingProfile& a, double T, double dt = 1e-3);

// sup_t ||u - U(t) u0|| for the undamped equation.
double free_gap(const RealField& u0, double T, double dt = 1e-3);

}  // namespace bolab
