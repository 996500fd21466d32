#ifndef TOLLSAFE_CAPI_H
#define TOLLSAFE_CAPI_H

/* C interface to the conflict-detection and estimation library.
 *
 * All functions return 0 on success or a nonzero error code:
 *   1 configuration error (bad options, malformed spec files)
 *   2 data error (unreadable/invalid input data)
 *   3 convergence failure
 *   4 internal error
 * ts_last_error() describes the most recent failure on the calling thread.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TS_OK 0
#define TS_ERROR_CONFIG 1
#define TS_ERROR_DATA 2
#define TS_ERROR_CONVERGENCE 3
#define TS_ERROR_INTERNAL 4

const char* ts_last_error(void);

/* ---- kinematic state and the conflict kernel -------------------------- */

/* x, y: centroid position (m); heading in degrees (0 = +x, counter-
 * clockwise positive); speed m/s; length/width m. */
typedef struct ts_state {
  double x, y, heading_deg, speed, length, width;
} ts_state;

#define TS_CONTACT_FRONT_TO_REAR 0
#define TS_CONTACT_CORNER_TO_SIDE 1
#define TS_CONTACT_NONE 2

/* Footprint-aware time to collision of two vehicles on straight constant-
 * speed paths. ttc is +infinity when the paths never produce contact.
 * leader: 1 or 2 (the vehicle predicted to reach the conflict area first),
 * 0 when there is no meaningful leader. Any output pointer may be NULL. */
int ts_modified_ttc(const ts_state* vehicle1, const ts_state* vehicle2,
                    double* ttc, int* contact_class, int* leader,
                    double* alpha_deg);

/* One-dimensional car-following TTC: (gap) / (v_follower - v_leader). */
int ts_ttc_longitudinal(const ts_state* leader, const ts_state* follower,
                        double* ttc);

/* ---- pipeline commands (file to file) --------------------------------- */

typedef struct ts_detect_options {
  double slight_threshold_s;    /* conflict below this TTC, default 3.0 */
  double severe_threshold_s;    /* severe below this TTC, default 1.5 */
  int stride_frames;            /* one record per pair per stride, default 30 */
  int fps;                      /* frame rate, default 30 */
  double gating_radius_m;       /* pair candidate radius, default 50 */
  double congestion_window_s;   /* rolling window, default 10 */
  double congestion_speed_mps;  /* congested below this mean speed, default 3 */
} ts_detect_options;

void ts_detect_options_init(ts_detect_options* options);

/* Detect conflicts in a trajectory table and write the observation table
 * plus a per-family summary. summary_txt_out may be NULL. */
int ts_detect(const char* trajectories_csv, const char* zones_json,
              const ts_detect_options* options, const char* observations_csv_out,
              const char* summary_txt_out);

/* ---- observations handle ---------------------------------------------- */

typedef struct ts_observations ts_observations;

int ts_observations_load(const char* observations_csv, ts_observations** out);
void ts_observations_free(ts_observations* observations);
long ts_observations_count(const ts_observations* observations);

/* Extract the choice dataset a model file asks for (family + covariates). */
int ts_dataset(const ts_observations* observations, const char* model_json,
               const char* dataset_csv_out);

/* ---- estimation -------------------------------------------------------- */

typedef struct ts_result ts_result;

/* Fit the model in model_json to the dataset. draws_override > 0 replaces
 * the spec's draw count. Writes the machine-readable result JSON and, when
 * report_txt_out is non-NULL, the human-readable report. */
int ts_estimate(const char* dataset_csv, const char* model_json,
                long draws_override, const char* result_json_out,
                const char* report_txt_out);

int ts_result_load(const char* result_json, ts_result** out);
void ts_result_free(ts_result* result);
int ts_result_loglik(const ts_result* result, double* loglik);
int ts_result_loglik0(const ts_result* result, double* loglik0);
int ts_result_aic(const ts_result* result, double* aic);
int ts_result_mcfadden_r2(const ts_result* result, double* r2);
int ts_result_df(const ts_result* result, int* df);
int ts_result_correlation(const ts_result* result, int row, int col, double* value);

/* Restricted-vs-full comparison of two stored results: LR test, AIC
 * consistency flags. report_txt_out may be NULL. */
int ts_compare(const char* restricted_result_json, const char* full_result_json,
               const char* comparison_json_out, const char* report_txt_out);

/* ---- diagnostics -------------------------------------------------------- */

int ts_lr_test(double ll_restricted, double ll_full, int df_diff,
               double* statistic, double* p_value);
int ts_fit_metrics(double loglik, double loglik0, int df, double* mcfadden_r2,
                   double* aic);
/* gamma: row-major k-by-k lower-triangular Cholesky factor. */
int ts_sigma_from_cholesky(const double* gamma, int k, double* sigma_out);
int ts_correlation_from_cholesky(const double* gamma, int k, double* correlation_out);

/* ---- plotting and synthetic data ---------------------------------------- */

int ts_plot_trajectories(const char* trajectories_csv, const char* polylines_out);
int ts_plot_ttc_histogram(const ts_observations* observations,
                          const char* histogram_csv_out, double bin_width);

int ts_synth_scene(const char* scene_json, const char* trajectories_csv_out);
/* seed_override >= 0 replaces the seed in the truth file. */
int ts_synth_choices(const char* truth_json, long long seed_override,
                     const char* dataset_csv_out);

#ifdef __cplusplus
}
#endif

#endif /* TOLLSAFE_CAPI_H */
