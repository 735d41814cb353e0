/*
 Copyright 2026 The snn-smp Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

/* C interface to the SNN training engine.
 *
 * Every function returns an snn_status. On failure a single-line message of
 * the form "<error-class>: <detail>" is available from snn_last_error() on
 * the calling thread until the next call into the library. Objects are
 * opaque handles released with their matching *_free function; strings
 * returned through char** are released with snn_string_free. */
#ifndef SNN_SMP_H
#define SNN_SMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SNN_API __declspec(dllexport)
#else
#define SNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as CLI exit codes. */
typedef enum snn_status {
  SNN_OK = 0,
  SNN_VERIFICATION_FAILED = 1,
  SNN_CONFIG_ERROR = 2,
  SNN_DATA_ERROR = 3,
  SNN_PROPAGATION_ERROR = 4,
  SNN_INTERNAL_ERROR = 5
} snn_status;

typedef struct snn_config snn_config;
typedef struct snn_dataset snn_dataset;
typedef struct snn_checkpoint snn_checkpoint;

typedef struct snn_dataset_info {
  const char* task; /* owned by the dataset handle */
  uint64_t count;
  uint64_t seed;
  int input_dim;
  int label_dim;
} snn_dataset_info;

typedef struct snn_checkpoint_info {
  const char* task;        /* owned by the checkpoint handle */
  const char* config_hash; /* owned by the checkpoint handle */
  int64_t iteration;
  int width;
  int depth;
  double step;
  int input_dim;
  int label_dim;
} snn_checkpoint_info;

typedef void (*snn_progress_fn)(int64_t iteration, uint64_t sample_index, double loss, double grad_norm,
                                double learning_rate, void* user);

SNN_API const char* snn_version(void);
SNN_API const char* snn_last_error(void);
SNN_API const char* snn_status_name(snn_status status);
SNN_API void snn_string_free(char* s);

/* Run configuration. */
SNN_API snn_status snn_config_default(const char* task, snn_config** out);
SNN_API snn_status snn_config_load(const char* path, snn_config** out);
SNN_API snn_status snn_config_from_json(const char* json, snn_config** out);
/* Keys: seed, data-seed, eval-seed, workers, scheme, check-scheme, out,
 * dataset, checkpoint, resume, iterations, lr-scale, count, inject-fault. */
SNN_API snn_status snn_config_set(snn_config* cfg, const char* key, const char* value);
/* Keys: task, out, dataset, checkpoint (effective path), resume, hash. An
 * unset optional path yields an empty string. */
SNN_API snn_status snn_config_get(const snn_config* cfg, const char* key, char** value);
SNN_API snn_status snn_config_to_json(const snn_config* cfg, char** json);
SNN_API void snn_config_free(snn_config* cfg);

/* Datasets. */
SNN_API snn_status snn_generate_data(const snn_config* cfg, snn_dataset** out);
SNN_API snn_status snn_dataset_load(const char* path, snn_dataset** out);
SNN_API snn_status snn_dataset_save(const snn_dataset* data, const char* path);
SNN_API snn_status snn_dataset_get_info(const snn_dataset* data, snn_dataset_info* info);
SNN_API void snn_dataset_free(snn_dataset* data);

/* Training writes train_log.csv, snapshots and the final checkpoint under the
 * config's output directory. resume may be NULL. progress may be NULL; it is
 * called at the logging cadence. */
SNN_API snn_status snn_train(const snn_config* cfg, const snn_dataset* data, const snn_checkpoint* resume,
                             snn_progress_fn progress, void* user, snn_checkpoint** out);

SNN_API snn_status snn_checkpoint_load(const char* path, snn_checkpoint** out);
SNN_API snn_status snn_checkpoint_save(const snn_checkpoint* ckpt, const char* path);
SNN_API snn_status snn_checkpoint_get_info(const snn_checkpoint* ckpt, snn_checkpoint_info* info);
SNN_API void snn_checkpoint_free(snn_checkpoint* ckpt);

/* Draws `samples` network outputs for one raw input into `outputs`
 * (samples * label_dim values, row-major). */
SNN_API snn_status snn_predict(const snn_checkpoint* ckpt, const double* input, size_t input_len, size_t samples,
                               uint64_t seed, double* outputs, size_t outputs_len);

/* Writes metrics.json and CSV reports to out_dir (NULL: the config's output
 * directory). metrics_json may be NULL. */
SNN_API snn_status snn_evaluate(const snn_config* cfg, const snn_checkpoint* ckpt, const char* out_dir,
                                char** metrics_json);

/* Returns SNN_VERIFICATION_FAILED when any block exceeds its tolerance; the
 * report is produced in both cases and snn_last_error names the failing
 * blocks. */
SNN_API snn_status snn_gradient_check(const snn_config* cfg, char** report);

#ifdef __cplusplus
}
#endif

#endif /* SNN_SMP_H */
