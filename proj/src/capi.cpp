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

#include "snn_smp.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "snn/commands.hpp"
#include "snn/errors.hpp"

struct snn_config {
  snn::RunConfig cfg;
};
struct snn_dataset {
  snn::Dataset data;
};
struct snn_checkpoint {
  snn::Checkpoint ckpt;
};

namespace {

thread_local std::string last_error;

snn_status fail(snn_status status, const std::string& kind, const std::string& message) {
  std::string line = kind + ": " + message;
  for (auto& ch : line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  last_error = std::move(line);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
snn_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const snn::ConfigError& e) {
    return fail(SNN_CONFIG_ERROR, e.kind(), e.what());
  } catch (const snn::DataError& e) {
    return fail(SNN_DATA_ERROR, e.kind(), e.what());
  } catch (const snn::PropagationError& e) {
    return fail(SNN_PROPAGATION_ERROR, e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SNN_DATA_ERROR, "io-error", e.what());
  } catch (const std::bad_alloc&) {
    return fail(SNN_INTERNAL_ERROR, "internal-error", "out of memory");
  } catch (const std::exception& e) {
    return fail(SNN_INTERNAL_ERROR, "internal-error", e.what());
  } catch (...) {
    return fail(SNN_INTERNAL_ERROR, "internal-error", "unknown exception");
  }
}

snn_status null_argument(const char* name) {
  return fail(SNN_CONFIG_ERROR, "config-error", std::string("null argument: ") + name);
}

char* dup_string(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* snn_version(void) { return "1.0.0"; }

const char* snn_last_error(void) { return last_error.c_str(); }

const char* snn_status_name(snn_status status) {
  switch (status) {
    case SNN_OK: return "ok";
    case SNN_VERIFICATION_FAILED: return "verification-failed";
    case SNN_CONFIG_ERROR: return "config-error";
    case SNN_DATA_ERROR: return "data-error";
    case SNN_PROPAGATION_ERROR: return "propagation-error";
    case SNN_INTERNAL_ERROR: return "internal-error";
  }
  return "unknown";
}

void snn_string_free(char* s) { std::free(s); }

snn_status snn_config_default(const char* task, snn_config** out) {
  if (!task) return null_argument("task");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new snn_config{snn::default_run_config(snn::parse_task(task))};
    return SNN_OK;
  });
}

snn_status snn_config_load(const char* path, snn_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    try {
      *out = new snn_config{snn::load_run_config(path)};
    } catch (const snn::DataError& e) {
      // An unreadable config is a usage problem, not a data problem.
      throw snn::ConfigError(e.what());
    }
    return SNN_OK;
  });
}

snn_status snn_config_from_json(const char* json, snn_config** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw snn::ConfigError(std::string("cannot parse config: ") + e.what());
    }
    *out = new snn_config{snn::parse_run_config(doc)};
    return SNN_OK;
  });
}

snn_status snn_config_set(snn_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_argument("cfg");
  if (!key || !value) return null_argument("key/value");
  return guarded([&] {
    auto copy = cfg->cfg;
    snn::apply_override(copy, key, value);
    cfg->cfg = std::move(copy);
    return SNN_OK;
  });
}

snn_status snn_config_get(const snn_config* cfg, const char* key, char** value) {
  if (!cfg) return null_argument("cfg");
  if (!key || !value) return null_argument("key/value");
  return guarded([&] {
    const auto& c = cfg->cfg;
    const std::string k = key;
    std::string v;
    if (k == "task") {
      v = snn::task_name(c.task.kind);
    } else if (k == "out") {
      v = c.out_dir.string();
    } else if (k == "dataset") {
      v = c.dataset_path ? c.dataset_path->string() : "";
    } else if (k == "checkpoint") {
      v = c.checkpoint_path.value_or(c.out_dir / "checkpoint.json").string();
    } else if (k == "resume") {
      v = c.resume_path ? c.resume_path->string() : "";
    } else if (k == "hash") {
      v = snn::config_hash(c);
    } else {
      throw snn::ConfigError("unknown config key '" + k + "'");
    }
    *value = dup_string(v);
    return SNN_OK;
  });
}

snn_status snn_config_to_json(const snn_config* cfg, char** json) {
  if (!cfg) return null_argument("cfg");
  if (!json) return null_argument("json");
  return guarded([&] {
    *json = dup_string(snn::to_json(cfg->cfg).dump(2));
    return SNN_OK;
  });
}

void snn_config_free(snn_config* cfg) { delete cfg; }

snn_status snn_generate_data(const snn_config* cfg, snn_dataset** out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new snn_dataset{snn::cmd_generate_data(cfg->cfg)};
    return SNN_OK;
  });
}

snn_status snn_dataset_load(const char* path, snn_dataset** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new snn_dataset{snn::read_dataset(path)};
    return SNN_OK;
  });
}

snn_status snn_dataset_save(const snn_dataset* data, const char* path) {
  if (!data) return null_argument("data");
  if (!path) return null_argument("path");
  return guarded([&] {
    snn::write_dataset(data->data, path);
    return SNN_OK;
  });
}

snn_status snn_dataset_get_info(const snn_dataset* data, snn_dataset_info* info) {
  if (!data) return null_argument("data");
  if (!info) return null_argument("info");
  info->task = data->data.task.c_str();
  info->count = data->data.size();
  info->seed = data->data.seed;
  info->input_dim = data->data.input_dim;
  info->label_dim = data->data.label_dim;
  last_error.clear();
  return SNN_OK;
}

void snn_dataset_free(snn_dataset* data) { delete data; }

snn_status snn_train(const snn_config* cfg, const snn_dataset* data, const snn_checkpoint* resume,
                     snn_progress_fn progress, void* user, snn_checkpoint** out) {
  if (!cfg) return null_argument("cfg");
  if (!data) return null_argument("data");
  return guarded([&] {
    std::optional<snn::Checkpoint> from;
    if (resume) from = resume->ckpt;
    snn::ProgressFn fn;
    if (progress) {
      fn = [&](const snn::TrainingRecord& r) {
        progress(r.iteration, r.sample_index, r.loss, r.grad_norm, r.learning_rate, user);
      };
    }
    auto outcome = snn::cmd_train(cfg->cfg, data->data, from, fn);
    if (out) *out = new snn_checkpoint{std::move(outcome.checkpoint)};
    return SNN_OK;
  });
}

snn_status snn_checkpoint_load(const char* path, snn_checkpoint** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new snn_checkpoint{snn::load_checkpoint(path)};
    return SNN_OK;
  });
}

snn_status snn_checkpoint_save(const snn_checkpoint* ckpt, const char* path) {
  if (!ckpt) return null_argument("ckpt");
  if (!path) return null_argument("path");
  return guarded([&] {
    snn::save_checkpoint(ckpt->ckpt, path);
    return SNN_OK;
  });
}

snn_status snn_checkpoint_get_info(const snn_checkpoint* ckpt, snn_checkpoint_info* info) {
  if (!ckpt) return null_argument("ckpt");
  if (!info) return null_argument("info");
  const auto& c = ckpt->ckpt;
  info->task = c.task.c_str();
  info->config_hash = c.config_hash.c_str();
  info->iteration = c.iteration;
  info->width = c.net.width;
  info->depth = c.net.depth;
  info->step = c.net.step;
  info->input_dim = c.net.input_dim;
  info->label_dim = c.net.label_dim;
  last_error.clear();
  return SNN_OK;
}

void snn_checkpoint_free(snn_checkpoint* ckpt) { delete ckpt; }

snn_status snn_predict(const snn_checkpoint* ckpt, const double* input, size_t input_len, size_t samples,
                       uint64_t seed, double* outputs, size_t outputs_len) {
  if (!ckpt) return null_argument("ckpt");
  if (!input || !outputs) return null_argument("input/outputs");
  return guarded([&] {
    const auto& c = ckpt->ckpt;
    if (input_len != static_cast<size_t>(c.net.input_dim)) throw snn::ConfigError("input length mismatch");
    if (samples < 1) throw snn::ConfigError("samples must be >= 1");
    if (outputs_len != samples * static_cast<size_t>(c.net.label_dim)) {
      throw snn::ConfigError("outputs buffer must hold samples * label_dim values");
    }
    snn::Vector x(c.net.input_dim);
    for (int i = 0; i < c.net.input_dim; ++i) x[i] = input[i];
    snn::RandomStream rng(seed);
    const auto outs = c.model().sample_outputs(x, samples, rng);
    for (size_t s = 0; s < samples; ++s) {
      for (int j = 0; j < c.net.label_dim; ++j) outputs[s * c.net.label_dim + j] = outs[s][j];
    }
    return SNN_OK;
  });
}

snn_status snn_evaluate(const snn_config* cfg, const snn_checkpoint* ckpt, const char* out_dir,
                        char** metrics_json) {
  if (!cfg) return null_argument("cfg");
  if (!ckpt) return null_argument("ckpt");
  return guarded([&] {
    const std::filesystem::path dir = out_dir ? std::filesystem::path(out_dir) : cfg->cfg.out_dir;
    const auto metrics = snn::cmd_evaluate(cfg->cfg, ckpt->ckpt, dir);
    if (metrics_json) *metrics_json = dup_string(metrics.dump(2));
    return SNN_OK;
  });
}

snn_status snn_gradient_check(const snn_config* cfg, char** report) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    const auto r = snn::cmd_gradient_check(cfg->cfg);
    if (report) *report = dup_string(r.to_text(cfg->cfg));
    if (r.ok()) return SNN_OK;
    std::string names;
    for (const auto& b : r.failing_blocks()) names += (names.empty() ? "" : ",") + b;
    return fail(SNN_VERIFICATION_FAILED, "verification-failed", "tolerance exceeded in " + names);
  });
}

}  // extern "C"
