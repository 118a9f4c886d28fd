/*
 * C interface to the ohmic simulator.
 *
 * Every function returns an ohm_status (0 on success). On failure the
 * message of the most recent error on the calling thread is available from
 * ohm_last_error(). Objects are opaque handles owned by the caller and
 * released with the matching *_destroy function; destroy accepts NULL.
 *
 * Units: the atomic frequency omega0 is the frequency unit, times are in
 * 1/omega0.
 */
#ifndef OHMIC_OHMIC_H
#define OHMIC_OHMIC_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(OHMIC_BUILDING_LIBRARY)
#    define OHM_API __declspec(dllexport)
#  else
#    define OHM_API __declspec(dllimport)
#  endif
#else
#  define OHM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ohm_status {
    OHM_OK = 0,
    OHM_ERR_NULL_POINTER = 1,
    OHM_ERR_INVALID_ARGUMENT = 2,
    OHM_ERR_DOMAIN = 3,
    OHM_ERR_UNSUPPORTED_EXPONENT = 4,
    OHM_ERR_NUMERICAL_ACCURACY = 5,
    OHM_ERR_AMPLITUDE_UNDERFLOW = 6,
    OHM_ERR_UNDEFINED_RATIO = 7,
    OHM_ERR_NOT_FOUND = 8,
    OHM_ERR_CONFIG = 9,
    OHM_ERR_IO = 10,
    OHM_ERR_BUFFER_TOO_SMALL = 11,
    OHM_ERR_OUT_OF_RANGE = 12,
    OHM_ERR_UNKNOWN = 99
} ohm_status;

typedef enum ohm_rate_model {
    OHM_RATES_EXACT = 0,
    OHM_RATES_CLOSED_FORM = 1
} ohm_rate_model;

/* Columns of a trajectory; masked rate samples read as NaN. */
typedef enum ohm_column {
    OHM_COL_T = 0,
    OHM_COL_P_RE,
    OHM_COL_P_IM,
    OHM_COL_POP,
    OHM_COL_TRACE_DISTANCE,
    OHM_COL_SIGMA,
    OHM_COL_GAMMA,
    OHM_COL_LAMB,
    OHM_COL_BETA1,
    OHM_COL_BETA2,
    OHM_COL_COUNT
} ohm_column;

typedef struct ohm_config ohm_config;
typedef struct ohm_trajectory ohm_trajectory;
typedef struct ohm_sweep ohm_sweep;
typedef struct ohm_critical ohm_critical;
typedef struct ohm_validation ohm_validation;

typedef struct ohm_measure_report {
    double n_markov;     /* non-Markovianity, total-variation form */
    double n_rate;       /* non-Markovianity, decoherence-rate form */
    double qsl_ratio;    /* tau_QSL / tau, NaN when undefined */
    int qsl_defined;
    double pop_tau;      /* |p(tau)|^2 */
    double residual_n;
    double residual_qsl;
    double tau;
} ohm_measure_report;

typedef struct ohm_sweep_row {
    double value;
    ohm_measure_report report;
    int rate_model;      /* ohm_rate_model actually used */
    double wall_seconds;
} ohm_sweep_row;

typedef struct ohm_critical_summary {
    int found;
    double critical_coupling;
    double bracket_lo;
    double bracket_hi;
    double n_at_probe;
    size_t transition_count;
    size_t sample_count;
} ohm_critical_summary;

typedef struct ohm_check {
    const char* name;    /* valid while the validation handle lives */
    double residual;
    double threshold;
    int passed;
    const char* detail;
} ohm_check;

OHM_API const char* ohm_version(void);
OHM_API const char* ohm_status_string(int status);
OHM_API const char* ohm_last_error(void);

/* ---- configuration ---------------------------------------------------- */

OHM_API int ohm_config_create(ohm_config** out);
OHM_API int ohm_config_clone(const ohm_config* cfg, ohm_config** out);
OHM_API void ohm_config_destroy(ohm_config* cfg);
/* Keys: s, eta, omega_c, coupling, omega0, tau, steps, threads,
 * sweep_start, sweep_stop, sweep_steps. */
OHM_API int ohm_config_set(ohm_config* cfg, const char* key, double value);
OHM_API int ohm_config_get(const ohm_config* cfg, const char* key, double* out);
/* Keys: rates (exact|closed), format (csv|json), output, sweep_param. */
OHM_API int ohm_config_set_string(ohm_config* cfg, const char* key, const char* value);
OHM_API int ohm_config_get_string(const ohm_config* cfg, const char* key, char* buf, size_t* len);
OHM_API int ohm_config_apply_preset(ohm_config* cfg, const char* preset);
OHM_API int ohm_config_load_json(ohm_config* cfg, const char* json_text);
OHM_API int ohm_config_load_file(ohm_config* cfg, const char* path);
OHM_API int ohm_config_clear_sweep(ohm_config* cfg);
OHM_API int ohm_config_has_sweep(const ohm_config* cfg, int* out);
/* Writes the resolved configuration as JSON. On entry *len is the buffer
 * size; on return it is the size needed including the terminator. */
OHM_API int ohm_config_to_json(const ohm_config* cfg, char* buf, size_t* len);
OHM_API int ohm_config_validate(const ohm_config* cfg);
/* Number of series in figure 1..5 and the configuration of one of them. */
OHM_API int ohm_figure_series_count(int figure, size_t* out);
OHM_API int ohm_figure_series(int figure, size_t index, ohm_config** out, char* label, size_t* label_len);

/* ---- spectral --------------------------------------------------------- */

OHM_API int ohm_spectral_density(double s, double eta, double omega_c, double omega, double* out);
OHM_API int ohm_decay_rate(double s, double eta, double omega_c, int rate_model, double omega_j, double t,
                           double* out);
OHM_API int ohm_decay_rate_quadrature(double s, double eta, double omega_c, double omega_j, double t,
                                      double* out, double* abs_error);

/* ---- dynamics and measures ------------------------------------------- */

OHM_API int ohm_trajectory_compute(const ohm_config* cfg, ohm_trajectory** out);
OHM_API void ohm_trajectory_destroy(ohm_trajectory* traj);
OHM_API int ohm_trajectory_size(const ohm_trajectory* traj, size_t* out);
OHM_API int ohm_trajectory_column(const ohm_trajectory* traj, int column, double* out, size_t n);
OHM_API int ohm_trajectory_rate_model(const ohm_trajectory* traj, int* out);
OHM_API int ohm_trajectory_measures(const ohm_trajectory* traj, ohm_measure_report* out);
/* Atomic density matrix at sample k for the initial state (rho11, rho10).
 * out receives {Re ee, Im ee, Re eg, Im eg, Re ge, Im ge, Re gg, Im gg}. */
OHM_API int ohm_trajectory_atom_state(const ohm_trajectory* traj, double rho11, double rho10_re, double rho10_im,
                                      size_t k, double out[8]);
/* Excited population from the dressed-state ODE for the initial state |e><e|. */
OHM_API int ohm_dressed_oracle(const ohm_config* cfg, double* out, size_t n);

/* ---- sweeps, critical coupling, validation --------------------------- */

OHM_API int ohm_sweep_run(const ohm_config* cfg, ohm_sweep** out);
OHM_API void ohm_sweep_destroy(ohm_sweep* sweep);
OHM_API int ohm_sweep_size(const ohm_sweep* sweep, size_t* out);
OHM_API int ohm_sweep_row_at(const ohm_sweep* sweep, size_t i, ohm_sweep_row* out);

/* Returns OHM_ERR_NOT_FOUND with *out still set (found = 0, coarse scan
 * filled) when no transition lies in [lo, hi]. */
OHM_API int ohm_critical_run(const ohm_config* cfg, double lo, double hi, double eps_n, ohm_critical** out);
OHM_API void ohm_critical_destroy(ohm_critical* scan);
OHM_API int ohm_critical_summary_get(const ohm_critical* scan, ohm_critical_summary* out);
OHM_API int ohm_critical_transition(const ohm_critical* scan, size_t i, double* lo, double* hi, int* rising);
OHM_API int ohm_critical_sample(const ohm_critical* scan, size_t i, double* coupling, double* n_markov);

/* tolerance <= 0 keeps the default per-check thresholds. */
OHM_API int ohm_validate_run(const ohm_config* cfg, double tolerance, ohm_validation** out);
OHM_API void ohm_validation_destroy(ohm_validation* report);
OHM_API int ohm_validation_size(const ohm_validation* report, size_t* out);
OHM_API int ohm_validation_check(const ohm_validation* report, size_t i, ohm_check* out);
OHM_API int ohm_validation_passed(const ohm_validation* report, int* out);

#ifdef __cplusplus
}
#endif

#endif /* OHMIC_OHMIC_H */
