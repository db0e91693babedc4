#ifndef BOLAB_H
#define BOLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BOLAB_BUILDING)
#define BOLAB_API __declspec(dllexport)
#else
#define BOLAB_API __declspec(dllimport)
#endif
#else
#define BOLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bolab_status {
    BOLAB_OK = 0,
    BOLAB_INVALID_ARGUMENT = 1,
    BOLAB_NON_ZERO_MEAN = 2,
    BOLAB_GRID_MISMATCH = 3,
    BOLAB_MEAN_MISMATCH = 4,
    BOLAB_ZERO_DATA = 5,
    BOLAB_PARSE_ERROR = 6,
    BOLAB_IO_ERROR = 7,
    BOLAB_BLOW_UP = 8,
    BOLAB_NO_CONVERGENCE = 9,
    BOLAB_INTERNAL = 10
} bolab_status;

typedef struct bolab_field bolab_field;
typedef struct bolab_profile bolab_profile;
typedef struct bolab_trajectory bolab_trajectory;
typedef struct bolab_control bolab_control;

/* Library version string, e.g. "1.0.0". */
BOLAB_API const char* bolab_version(void);
/* Name of a status code, e.g. "MeanMismatch". */
BOLAB_API const char* bolab_status_name(bolab_status status);
/* Message of the last failed call on this thread ("" if none). */
BOLAB_API const char* bolab_last_error(void);
/* Last finite step index of the last BlowUp on this thread (-1 if the initial datum). */
BOLAB_API int bolab_last_blowup_step(void);

/* ---- fields: real 2pi-periodic functions on an n_modes grid ---- */

/* spec: "modes:(xi,amp,phase),...", "random:s,norm,seed[,band]" or "file:path". */
BOLAB_API bolab_status bolab_field_parse(const char* spec, int n_modes, bolab_field** out);
BOLAB_API bolab_status bolab_field_zero(int n_modes, bolab_field** out);
/* Builds a field from n_modes physical samples at x_j = 2 pi j / n_modes. */
BOLAB_API bolab_status bolab_field_from_samples(int n_modes, const double* samples, bolab_field** out);
BOLAB_API bolab_status bolab_field_read(const char* path, bolab_field** out);
BOLAB_API bolab_status bolab_field_write(const bolab_field* f, const char* path);
BOLAB_API void bolab_field_free(bolab_field* f);
BOLAB_API int bolab_field_n_modes(const bolab_field* f);
/* Fourier coefficients (integral convention) in FFT order; re and im hold n_modes entries. */
BOLAB_API bolab_status bolab_field_coefficients(const bolab_field* f, double* re, double* im);
BOLAB_API bolab_status bolab_field_samples(const bolab_field* f, double* out);
BOLAB_API double bolab_field_l2_norm(const bolab_field* f);
BOLAB_API double bolab_field_mean(const bolab_field* f);
/* Relative L2 distance ||a - b|| / max(||b||, tiny); grids must match. */
BOLAB_API bolab_status bolab_field_distance(const bolab_field* a, const bolab_field* b, double* out);

/* ---- damping profiles ---- */

BOLAB_API bolab_status bolab_profile_bump(int n_modes, double center, double radius, bolab_profile** out);
/* a = 0: the control-off baseline. */
BOLAB_API bolab_status bolab_profile_off(int n_modes, bolab_profile** out);
BOLAB_API void bolab_profile_free(bolab_profile* p);

/* ---- simulation ---- */

typedef enum bolab_source { BOLAB_SOURCE_NONE = 0, BOLAB_SOURCE_FEEDBACK = 1 } bolab_source;

typedef struct bolab_sim_options {
    double t0;
    double t1;
    double dt;      /* <= 0: chosen from the data */
    int save_every; /* keep every k-th level */
    int nonlinear;  /* 0: linear flow */
    bolab_source source;
    const bolab_profile* profile; /* required for BOLAB_SOURCE_FEEDBACK */
} bolab_sim_options;

BOLAB_API void bolab_sim_defaults(bolab_sim_options* opts);
BOLAB_API bolab_status bolab_simulate(const bolab_field* u0, const bolab_sim_options* opts, bolab_trajectory** out);
BOLAB_API void bolab_trajectory_free(bolab_trajectory* t);
BOLAB_API int bolab_trajectory_levels(const bolab_trajectory* t);
BOLAB_API double bolab_trajectory_time(const bolab_trajectory* t, int level);
/* Spacing between saved levels. */
BOLAB_API double bolab_trajectory_dt(const bolab_trajectory* t);
BOLAB_API bolab_status bolab_trajectory_field(const bolab_trajectory* t, int level, bolab_field** out);

/* ---- invariants ---- */

typedef struct bolab_invariant_row {
    double t;
    double I1;
    double I2;
    double Psi4;
    double Psi6;
    double energy_identity_defect; /* 0 when no profile is given */
} bolab_invariant_row;

/* rows holds bolab_trajectory_levels(t) entries; drift receives I1, I2, Psi4, Psi6 drifts. */
BOLAB_API bolab_status bolab_invariants(const bolab_trajectory* t, const bolab_profile* profile,
                                        bolab_invariant_row* rows, double drift[4]);

/* ---- gauge ---- */

typedef struct bolab_gauge_report {
    double chain_rule;     /* max ||2i w - P+(u e^{-iF/2})|| / ||P+(u e^{-iF/2})|| */
    double ungauge;        /* max ||P+u - (2iw + A + B)|| / ||u|| */
    double ungauge_high;   /* max ||P_{>=N}u - (A_N + B_N)|| / ||u|| */
    double residual_max;   /* max L2 defect of the gauge evolution (interior levels) */
    double residual_order; /* log2 of the residual ratio under time-step halving (NaN if unavailable) */
} bolab_gauge_report;

/* Checks the gauge identities along an unforced trajectory. */
BOLAB_API bolab_status bolab_gauge_check(const bolab_trajectory* t, int N, bolab_gauge_report* out);

/* ---- control ---- */

typedef struct bolab_control_options {
    double tol;
    int max_iter;
    int n_quad;
    double dt; /* <= 0: chosen from the grid */
    double cg_tol;
    double smallness;
} bolab_control_options;

BOLAB_API void bolab_control_defaults(bolab_control_options* opts);
BOLAB_API bolab_status bolab_steer(const bolab_field* u0, const bolab_field* u1, const bolab_profile* a, double T,
                                   const bolab_control_options* opts, bolab_control** out);
BOLAB_API void bolab_control_free(bolab_control* c);
BOLAB_API int bolab_control_iterations(const bolab_control* c);
BOLAB_API double bolab_control_terminal_error(const bolab_control* c);
BOLAB_API double bolab_control_max_contraction(const bolab_control* c);
BOLAB_API int bolab_control_history_size(const bolab_control* c);
BOLAB_API double bolab_control_history(const bolab_control* c, int i);
BOLAB_API int bolab_control_warning_count(const bolab_control* c);
BOLAB_API const char* bolab_control_warning(const bolab_control* c, int i);
/* The controlled trajectory (a new handle owned by the caller). */
BOLAB_API bolab_status bolab_control_trajectory(const bolab_control* c, bolab_trajectory** out);
BOLAB_API bolab_status bolab_control_h0(const bolab_control* c, bolab_field** out);

/* Feedback run with a least-squares decay fit over the second half. */
BOLAB_API bolab_status bolab_stabilize(const bolab_field* u0, const bolab_profile* a, double T, double dt,
                                       int save_every, bolab_trajectory** traj, double* lambda_fit,
                                       double* r_squared);

typedef enum bolab_flow { BOLAB_FLOW_NONLINEAR = 0, BOLAB_FLOW_LINEAR_DAMPED = 1, BOLAB_FLOW_FREE = 2 } bolab_flow;

BOLAB_API bolab_status bolab_observability(const bolab_field* u0, const bolab_profile* a, double T, double dt,
                                           bolab_flow flow, double* ratio);
/* ratios holds count entries; see the README for the ensemble definition. */
BOLAB_API bolab_status bolab_observability_ensemble(const bolab_profile* a, double T, double dt, int count,
                                                    uint64_t seed, int band, int jobs, double* ratios);
BOLAB_API bolab_status bolab_linear_gap(const bolab_field* u0, const bolab_profile* a, double T, double dt,
                                        double* gap);
/* Leading Ritz values of the Gramian (descending); values holds k entries. */
BOLAB_API bolab_status bolab_gramian_spectrum(const bolab_profile* a, double T, int n_quad, int k, uint64_t seed,
                                              double* values);

/* ---- space-time norm checks ---- */

#define BOLAB_SWEEP_MAX 32

typedef struct bolab_norm_options {
    int n_modes;
    int ensemble;
    uint64_t seed;
    double min_window;
    int jobs;
    int n_T; /* 0: default T list */
    double T_list[BOLAB_SWEEP_MAX];
    int n_N; /* 0: default N list */
    int N_list[BOLAB_SWEEP_MAX];
    int refine;
    const bolab_field* u0; /* bilinear: initial datum (NULL: built-in default) */
} bolab_norm_options;

typedef struct bolab_norm_report {
    char name[32];
    double lhs;
    double rhs;
    double ratio;
    double ensemble_max_ratio;
    double fitted_exponent;
    uint64_t seed;
    int ensemble;
    int n_sweep;
    double sweep_x[BOLAB_SWEEP_MAX];
    double sweep_y[BOLAB_SWEEP_MAX];
} bolab_norm_report;

BOLAB_API void bolab_norm_defaults(bolab_norm_options* opts);
/* check: "strichartz", "smoothing", "bilinear", "highfreq" or "interp". */
BOLAB_API bolab_status bolab_norm_check(const char* check, const bolab_norm_options* opts, bolab_norm_report* out);

#ifdef __cplusplus
}
#endif

#endif
