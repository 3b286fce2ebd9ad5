/* Copyright 2026 The MCIL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/* C interface to the MCIL library.
 *
 * Every fallible call returns an mcil_status; on failure the message is
 * available from mcil_last_error() on the calling thread until the next
 * call on that thread. Objects are opaque handles released with their
 * matching *_free function (NULL is accepted). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * mcil_string_free. */

#ifndef MCIL_MCIL_H_
#define MCIL_MCIL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define MCIL_API __attribute__((visibility("default")))
#else
#define MCIL_API
#endif

typedef enum mcil_status {
  MCIL_OK = 0,
  MCIL_ERR_INVALID_ARGUMENT = 1,
  MCIL_ERR_VALIDATION = 2,
  MCIL_ERR_PARSE = 3,
  MCIL_ERR_IO = 4,
  MCIL_ERR_DEGENERATE_FIT = 5,
  MCIL_ERR_NON_MONOTONE_DATA = 6,
  MCIL_ERR_UNSUPPORTED_ARCHITECTURE = 7,
  MCIL_ERR_RUNTIME = 8
} mcil_status;

MCIL_API const char* mcil_version(void);
MCIL_API const char* mcil_status_name(mcil_status status);
MCIL_API const char* mcil_last_error(void);
MCIL_API void mcil_string_free(char* s);

/* ---- Psychometric model ------------------------------------------------ */

MCIL_API mcil_status mcil_cumulative_gaussian(double z, double* out);
MCIL_API mcil_status mcil_psychometric_response(double sigma, double bias, double delta_c,
                                                double* out);
/* Normalized inverse-variance weights; n >= 2, weights_out has n slots. */
MCIL_API mcil_status mcil_joint_weights(const double* sigmas, size_t n, double* weights_out);
/* Variance of the fused observer, sum of w_i^2 sigma_i^2. */
MCIL_API mcil_status mcil_joint_variance(const double* sigmas, size_t n, double* out);
/* Root-sum-square of the member slopes. */
MCIL_API mcil_status mcil_joint_slope_approx(const double* sigmas, size_t n, double* out);
/* Fits (sigma, bias) to accuracy-vs-clarity points. */
MCIL_API mcil_status mcil_fit_curve(const double* delta_c, const double* accuracy,
                                    const size_t* counts, size_t n, double* sigma_out,
                                    double* bias_out);

/* Writes observer_<i>.csv, joint.csv, validation.csv and manifest.json.
 * biases may be NULL (all zero). */
MCIL_API mcil_status mcil_psychometric_write(const double* sigmas, const double* biases,
                                             size_t n, const double* grid, size_t grid_n,
                                             size_t trials, uint64_t seed,
                                             const char* out_dir);

/* ---- Agreement and voting --------------------------------------------- */

/* table is items x categories, row-major; each row sums to raters. */
MCIL_API mcil_status mcil_fleiss_kappa(const int* table, size_t items, size_t categories,
                                       int raters, double* kappa_out, const char** band_out);
/* Fraction of votes per class; probabilities_out has num_classes slots. */
MCIL_API mcil_status mcil_vote(const int* classes, size_t n, int num_classes,
                               double* probabilities_out);

/* ---- Datasets ---------------------------------------------------------- */

typedef struct mcil_dataset mcil_dataset;

/* num_classes < 0 infers the class count from the labels. */
MCIL_API mcil_status mcil_dataset_load(const char* path, int num_classes, mcil_dataset** out);
MCIL_API mcil_status mcil_dataset_save(const mcil_dataset* dataset, const char* path);
MCIL_API size_t mcil_dataset_size(const mcil_dataset* dataset);
MCIL_API size_t mcil_dataset_feature_dim(const mcil_dataset* dataset);
MCIL_API int mcil_dataset_num_classes(const mcil_dataset* dataset);
MCIL_API void mcil_dataset_free(mcil_dataset* dataset);

/* ---- Networks ---------------------------------------------------------- */

typedef struct mcil_network mcil_network;

MCIL_API mcil_status mcil_network_load(const char* path, mcil_network** out);
MCIL_API size_t mcil_network_input_dim(const mcil_network* network);
MCIL_API size_t mcil_network_output_dim(const mcil_network* network);
/* probabilities_out has output_dim slots. */
MCIL_API mcil_status mcil_network_forward(const mcil_network* network, const double* features,
                                          size_t dim, double* probabilities_out);
MCIL_API void mcil_network_free(mcil_network* network);

/* ---- Experiment configuration ----------------------------------------- */

typedef struct mcil_config mcil_config;

MCIL_API mcil_status mcil_config_default(mcil_config** out);
MCIL_API mcil_status mcil_config_parse(const char* json, mcil_config** out);
/* Relative data paths in the file resolve against the file's directory. */
MCIL_API mcil_status mcil_config_load(const char* path, mcil_config** out);
MCIL_API mcil_status mcil_config_set_seed(mcil_config* config, uint64_t seed);
MCIL_API mcil_status mcil_config_set_threads(mcil_config* config, size_t threads);
MCIL_API mcil_status mcil_config_get_seed(const mcil_config* config, uint64_t* out);
MCIL_API size_t mcil_config_zoo_size(const mcil_config* config);
/* Fully resolved config as JSON. */
MCIL_API mcil_status mcil_config_to_json(const mcil_config* config, char** out);
MCIL_API void mcil_config_free(mcil_config* config);

/* Writes dataset.csv, d1.csv, d2.csv, d3.csv and manifest.json for the
 * config's data source and seed. sizes_out (3 slots) may be NULL. */
MCIL_API mcil_status mcil_gen_data(const mcil_config* config, const char* out_dir,
                                   size_t* sizes_out);

/* ---- Full runs --------------------------------------------------------- */

typedef struct mcil_run mcil_run;

MCIL_API mcil_status mcil_run_experiment(const mcil_config* config, mcil_run** out);
/* Deterministic report document (JSON). */
MCIL_API mcil_status mcil_run_report_json(const mcil_run* run, char** out);
/* Report, confusion/curve/label CSVs, networks and manifest.json.
 * config_path is recorded in the manifest only and may be NULL. */
MCIL_API mcil_status mcil_run_write(const mcil_run* run, const char* out_dir,
                                    const char* config_path);
MCIL_API size_t mcil_run_classifier_count(const mcil_run* run);
MCIL_API mcil_status mcil_run_accuracies(const mcil_run* run, size_t index,
                                         double* baseline_out, double* mcil_out);
MCIL_API mcil_status mcil_run_kappa(const mcil_run* run, double* before_out, double* after_out);
MCIL_API double mcil_run_mean_accuracy_gain(const mcil_run* run);
MCIL_API size_t mcil_run_sigma_improved_count(const mcil_run* run);
MCIL_API void mcil_run_free(mcil_run* run);

/* ---- Zoo-size ablation ------------------------------------------------- */

typedef struct mcil_ablation mcil_ablation;

MCIL_API mcil_status mcil_ablation_run(const mcil_config* config, const size_t* sizes,
                                       size_t n, mcil_ablation** out);
/* ablation.json, ablation_grid.csv, ablation_rows.csv and manifest.json. */
MCIL_API mcil_status mcil_ablation_write(const mcil_ablation* ablation, const char* out_dir,
                                         const char* config_path);
MCIL_API mcil_status mcil_ablation_grid_csv(const mcil_ablation* ablation, char** out);
/* 1 when every size saw the same d1/d2/d3 index sets. */
MCIL_API int mcil_ablation_splits_identical(const mcil_ablation* ablation);
MCIL_API void mcil_ablation_free(mcil_ablation* ablation);

#ifdef __cplusplus
}
#endif

#endif /* MCIL_MCIL_H_ */
