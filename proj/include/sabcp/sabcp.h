/*
 * C interface to the sabcp library: online conformal prediction intervals
 * (state-adaptive Bayesian CP and the ACI / BCP baselines), the GARCH base
 * model, data ingestion, evaluation runs and metrics.
 *
 * Objects are opaque handles created by *_create / *_load / *_generate /
 * run functions and released by the matching *_destroy. Every fallible call
 * returns a sabcp_status; on failure sabcp_last_error() describes the cause
 * for the calling thread. Handles may move between threads but must not be
 * used by two threads at once.
 */
#ifndef SABCP_H
#define SABCP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SABCP_BUILDING)
#    define SABCP_API __declspec(dllexport)
#  else
#    define SABCP_API __declspec(dllimport)
#  endif
#else
#  define SABCP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sabcp_status {
    SABCP_OK = 0,
    SABCP_E_INVALID_ARGUMENT = 1,
    SABCP_E_INVALID_CONFIG = 2,
    SABCP_E_OUT_OF_ORDER = 3,
    SABCP_E_IO = 4,
    SABCP_E_PARSE = 5,
    SABCP_E_INSUFFICIENT_DATA = 6,
    SABCP_E_INTERNAL = 7
} sabcp_status;

typedef enum sabcp_method {
    SABCP_METHOD_SABCP = 0,
    SABCP_METHOD_BCP = 1,
    SABCP_METHOD_ACI = 2,
    SABCP_METHOD_AGACI = 3,
    SABCP_METHOD_DTACI = 4
} sabcp_method;

typedef enum sabcp_score_mode {
    SABCP_SCORE_ABSOLUTE = 0,
    SABCP_SCORE_SCALED = 1
} sabcp_score_mode;

typedef enum sabcp_high_vol_rule {
    SABCP_HIGH_VOL_HINDSIGHT = 0,
    SABCP_HIGH_VOL_EXPANDING = 1
} sabcp_high_vol_rule;

typedef struct sabcp_config {
    double alpha;
    double beta;
    double k;
    double r_max;
    size_t state_dim;
    size_t history_cap; /* 0 = unlimited */
    sabcp_score_mode score_mode;
    double bandwidth_floor;
    double solver_tol;
    int solver_max_iter;
} sabcp_config;

typedef struct sabcp_step_input {
    uint64_t t;
    double center;
    double scale;
    const double* state; /* state_len values, may be NULL when state_len is 0 */
    size_t state_len;
    int state_valid;
} sabcp_step_input;

typedef struct sabcp_interval {
    double center;
    double margin;
    double lower;
    double upper;
    double q_hat;
    double pi_s;
    double d_s;
    double lambda_t;
} sabcp_interval;

typedef struct sabcp_step_record {
    uint64_t t;
    double y;
    double center;
    double lower;
    double upper;
    int covered;
    double width;
    double winkler;
    double q_hat;
    double pi_s;
    double d_s;
    double lambda_t;
    int high_vol;
} sabcp_step_record;

typedef struct sabcp_summary {
    double marginal_coverage;
    double high_vol_coverage; /* NaN when no step is high-volatility */
    int has_high_vol;
    double avg_width;
    double avg_winkler;
    size_t n_steps;
    size_t n_high_vol;
    double r_max;
} sabcp_summary;

typedef struct sabcp_run_options {
    size_t warmup;
    double garch_a;
    double garch_b;
    int auto_r_max; /* nonzero: R = 10 x stddev of warmup scores */
    sabcp_high_vol_rule high_vol;
    size_t window;  /* ACI calibration window */
    double gamma;   /* single-expert ACI step size */
    double eta;     /* <= 0: default aggregation rate */
} sabcp_run_options;

typedef struct sabcp_synth_spec {
    size_t total_steps;
    const size_t* shock_starts;
    size_t n_shocks;
    size_t shock_len;
    uint64_t seed;
    double normal_x_mean, normal_x_sd, normal_y_mean, normal_y_sd;
    double shock_x_mean, shock_x_sd, shock_y_mean, shock_y_sd;
} sabcp_synth_spec;

typedef struct sabcp_predictor sabcp_predictor;
typedef struct sabcp_garch sabcp_garch;
typedef struct sabcp_series sabcp_series;
typedef struct sabcp_synth sabcp_synth;
typedef struct sabcp_run sabcp_run;

SABCP_API const char* sabcp_version(void);
SABCP_API const char* sabcp_status_string(sabcp_status status);
/* Message for the last failed call on this thread; empty if none. */
SABCP_API const char* sabcp_last_error(void);

SABCP_API const char* sabcp_method_name(sabcp_method method);
SABCP_API sabcp_status sabcp_method_parse(const char* name, sabcp_method* out);

/* Defaults: alpha 0.1, beta 0.99, K 1, R 10, d 1, scaled scores. */
SABCP_API void sabcp_config_init(sabcp_config* cfg);
SABCP_API sabcp_status sabcp_config_validate(const sabcp_config* cfg);

/* ---- predictors: predict, then update with the revealed target ---- */
SABCP_API sabcp_status sabcp_predictor_create(sabcp_method method, const sabcp_config* cfg,
                                              const sabcp_run_options* opts, sabcp_predictor** out);
SABCP_API void sabcp_predictor_destroy(sabcp_predictor* p);
SABCP_API sabcp_status sabcp_predictor_predict(sabcp_predictor* p, const sabcp_step_input* in,
                                               sabcp_interval* out);
SABCP_API sabcp_status sabcp_predictor_update(sabcp_predictor* p, double y);
/* predict + update; a rejected step leaves the predictor unchanged. */
SABCP_API sabcp_status sabcp_predictor_step(sabcp_predictor* p, const sabcp_step_input* in, double y,
                                            sabcp_interval* out);

/* ---- GARCH(1,1) base model ---- */
SABCP_API sabcp_status sabcp_garch_create(const double* warmup, size_t n, double a, double b,
                                          sabcp_garch** out);
SABCP_API void sabcp_garch_destroy(sabcp_garch* g);
/* Writes the pre-update forecast, then folds r into the variance. */
SABCP_API sabcp_status sabcp_garch_step(sabcp_garch* g, double r, double* center, double* scale);
SABCP_API double sabcp_garch_sigma2(const sabcp_garch* g);
SABCP_API double sabcp_garch_omega(const sabcp_garch* g);

/* ---- price series ---- */
/* asset may be NULL (file stem is used); min_rows 0 means the default 300. */
SABCP_API sabcp_status sabcp_series_load(const char* path, const char* asset, size_t min_rows,
                                         sabcp_series** out);
SABCP_API sabcp_status sabcp_series_save(const sabcp_series* s, const char* path);
SABCP_API void sabcp_series_destroy(sabcp_series* s);
SABCP_API const char* sabcp_series_asset(const sabcp_series* s);
SABCP_API size_t sabcp_series_length(const sabcp_series* s); /* number of returns */
SABCP_API const double* sabcp_series_returns(const sabcp_series* s);
SABCP_API const char* sabcp_series_return_date(const sabcp_series* s, size_t i);
SABCP_API size_t sabcp_series_dropped_rows(const sabcp_series* s);

/* ---- synthetic regime stream ---- */
/* Defaults: 900 steps, shocks at 200/450/700 of length 30, seed 0. */
SABCP_API void sabcp_synth_spec_init(sabcp_synth_spec* spec);
SABCP_API sabcp_status sabcp_synth_generate(const sabcp_synth_spec* spec, sabcp_synth** out);
SABCP_API void sabcp_synth_destroy(sabcp_synth* s);
SABCP_API size_t sabcp_synth_length(const sabcp_synth* s);
SABCP_API const double* sabcp_synth_x(const sabcp_synth* s);
SABCP_API const double* sabcp_synth_y(const sabcp_synth* s);
SABCP_API int sabcp_synth_is_shock(const sabcp_synth* s, size_t i);

/* ---- evaluation runs ---- */
SABCP_API void sabcp_run_options_init(sabcp_run_options* opts);
SABCP_API sabcp_status sabcp_run_returns(const sabcp_series* s, sabcp_method method, const sabcp_config* cfg,
                                         const sabcp_run_options* opts, sabcp_run** out);
SABCP_API sabcp_status sabcp_run_synthetic(const sabcp_synth* s, sabcp_method method,
                                           const sabcp_config* cfg, const sabcp_run_options* opts,
                                           sabcp_run** out);
SABCP_API void sabcp_run_destroy(sabcp_run* r);
SABCP_API size_t sabcp_run_length(const sabcp_run* r);
SABCP_API sabcp_status sabcp_run_record(const sabcp_run* r, size_t i, sabcp_step_record* out);
SABCP_API void sabcp_run_summary(const sabcp_run* r, sabcp_summary* out);

/* ---- metrics and closed-form risk ---- */
SABCP_API sabcp_status sabcp_winkler(double lower, double upper, double y, double alpha, double* out);
SABCP_API sabcp_status sabcp_mixture_mse(double d_s, double v0, double m_t, double k, double* out);
SABCP_API sabcp_status sabcp_optimal_k(double v0, double m_t, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SABCP_H */
