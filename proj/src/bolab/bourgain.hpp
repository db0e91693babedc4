#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bolab/field.hpp"
#include "bolab/solver.hpp"

namespace bolab {

// Uniformly sampled space-time function: level j lives at t0 + j dt.
struct SampledPath {
    GridSpec grid;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<std::vector<cplx>> coeffs;

    static SampledPath from(const Trajectory& traj, int stride = 1);
    static SampledPath from(const std::vector<ComplexField>& fields, double dt, double t0 = 0.0);

    int levels() const { return static_cast<int>(coeffs.size()); }
    double horizon() const { return (levels() - 1) * dt; }
    SampledPath head(int n_levels) const;
    SampledPath scaled(double c) const;
};

// Space-time Fourier coefficients on a window of length t_period with M time samples.
// Stored in the interaction picture: entry (slot, k) is the transform at
// tau = sigma_k - |xi| xi with sigma_k = 2 pi k / t_period (k in FFT order),
// so sigma_k is the modulation tau + |xi| xi.
struct SpaceTimeSpectrum {
    GridSpec grid;
    double t_period = 0.0;
    int n_tau = 0;
    std::vector<cplx> coeffs;  // [slot * n_tau + k]
    double xi_weight = 1.0;    // measure on frequencies
    double tau_weight = 1.0;   // measure on the tau lattice

    // Lattice spectrum with counting measure; entries set with `set`.
    static SpaceTimeSpectrum lattice(GridSpec grid, double t_period, int n_tau);

    double sigma(int k) const;
    double tau(int xi, int k) const;
    cplx& at(int xi, int k) { return coeffs[static_cast<std::size_t>(grid.index(xi)) * n_tau + k]; }
    const cplx& at(int xi, int k) const { return coeffs[static_cast<std::size_t>(grid.index(xi)) * n_tau + k]; }
    // Places a value at (xi, tau); tau + |xi| xi must lie on the lattice.
    void set(int xi, double tau, cplx value);
    // Keeps only the frequencies accepted by `keep`.
    template <class Pred>
    SpaceTimeSpectrum filtered(Pred keep) const {
        SpaceTimeSpectrum s = *this;
        for (int i = 0; i < grid.n_modes; ++i)
            if (!keep(grid.freq(i)))
                for (int k = 0; k < n_tau; ++k) s.coeffs[static_cast<std::size_t>(i) * n_tau + k] = 0.0;
        return s;
    }
};

double xsb_norm(const SpaceTimeSpectrum& v, double s, double b);
double zsb_norm(const SpaceTimeSpectrum& v, double s, double b);
double ztilde_norm(const SpaceTimeSpectrum& v, double s, double b);

struct ExtensionOptions {
    double min_window = 16.0;  // window = max(4T, min_window)
};

// Window length and sample layout used for a path of horizon T.
double extension_window(double T, const ExtensionOptions& opts);

// Transform of a path that already vanishes near both ends of its samples.
SpaceTimeSpectrum spectrum_of_window(const SampledPath& path);

// Canonical extension: free-group continuation from the end states, times a smooth
// bump equal to 1 on [0, T] and supported in (-T/2, 3T/2).
SpaceTimeSpectrum canonical_extension(const SampledPath& path, ExtensionOptions opts = {});

// Extension of minimal X^{s,b} norm (exact per-frequency least squares).
SpaceTimeSpectrum minimal_extension(const SampledPath& path, double b, ExtensionOptions opts = {});

// X^{0,-1/2} + Ztilde^{0,-1} restriction norm on the minimal X^{0,-1/2} extension.
double x2prime_restriction_norm(const SampledPath& path, ExtensionOptions opts = {});
// X^{s,b} restriction norm via the minimal extension.
double xsb_restriction_norm(const SampledPath& path, double s, double b, ExtensionOptions opts = {});

double l2_spacetime(const SampledPath& path);  // trapezoid in time
double l4_spacetime(const SampledPath& path);
double sup_l2(const SampledPath& path);

struct CompositeNorm {
    double linf_l2 = 0.0;
    double l4 = 0.0;
    double x_m1_1 = 0.0;
    double w_x_0_half = 0.0;
    double w_ztilde = 0.0;
    double total() const { return linf_l2 + l4 + x_m1_1 + w_x_0_half + w_ztilde; }
};

CompositeNorm x_composite_norm(const SampledPath& u, const SampledPath& w, ExtensionOptions opts = {});

struct NormReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double ensemble_max_ratio = 0.0;
    double fitted_exponent = 0.0;
    std::uint64_t seed = 0;
    int ensemble = 0;
    std::vector<double> sweep_x;  // T or N or amplitude values
    std::vector<double> sweep_y;  // measured quantity per sweep point
};

struct NormCheckOptions {
    int n_modes = 64;
    int ensemble = 8;
    std::uint64_t seed = 1;
    double min_window = 16.0;
    int jobs = 1;
    std::vector<double> T_list{1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
    std::vector<int> N_list{4, 8, 16, 32, 64};
    int refine = 1;  // grid and time refinement factor (strichartz)
};

NormReport strichartz_check(const NormCheckOptions& opts);
NormReport smoothing_check(const NormCheckOptions& opts);
NormReport interp_check(const NormCheckOptions& opts, double b = 0.25, double b_prime = -0.25);
NormReport highfreq_exp_check(const NormCheckOptions& opts);

// Term I of the gauge evolution along a trajectory.
SampledPath term_one_path(const Trajectory& u, int stride = 1);
SampledPath gauge_w_path(const Trajectory& u, int stride = 1);

// LHS ||I||_{X2'_T} against T^{1/8} ||(u, w)||_X^2 on [0, T]; T-sweep over opts.T_list.
NormReport bilinear_check(const Trajectory& u, const NormCheckOptions& opts, int stride = 1);

// Runs jobs over [0, n) on up to `jobs` threads; results are written by index.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace bolab
