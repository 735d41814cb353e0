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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "snn/model.hpp"
#include "snn/tasks.hpp"
#include "snn/trainer.hpp"

namespace snn {

enum class NormalizationMode { None, Standardize };

struct EvalSettings {
  std::uint64_t seed = 101;
  std::size_t samples = 2000;           // predictive samples per grid point
  std::size_t grid_points = 101;
  double band_level = 0.95;
  std::size_t test_count = 2000;        // classification test points
  std::size_t votes = 1;
  std::size_t surface_resolution = 41;
  std::size_t surface_samples = 100;
  std::size_t observations = 100;       // parameter-estimation evidence per alpha
  std::size_t samples_per_observation = 20;
  std::vector<double> alphas{3.75, 4.0, 4.25};
};

struct GradientCheckSettings {
  int width = 2;
  int depth = 3;
  double step = 0.5;
  std::size_t data_count = 4;
  std::size_t mc_samples = 10000;  // M per datum
  double pathwise_fd_step = 1e-5;
  double mc_fd_step = 1e-4;
  double pathwise_rel_tol = 1e-4;
  double pathwise_abs_tol = 1e-8;
  double mc_rel_tol = 1e-2;
  double mc_min_magnitude = 1e-6;
  bool zero_sigma = false;
  Scheme scheme = Scheme::LeftPoint;
  // Test hook: "gradW-sign" flips the sign of every assembled W gradient.
  std::string inject_fault;
};

// One experiment run. Dimensions of the network come from the task.
struct RunConfig {
  NetConfig net;
  TrainConfig train;
  TaskSpec task;
  NormalizationMode normalization = NormalizationMode::Standardize;
  double init_sigma = 0.01;  // initial value of every diffusion coefficient
  EvalSettings eval;
  GradientCheckSettings gradient_check;
  int workers = 1;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> dataset_path;
  std::optional<std::filesystem::path> checkpoint_path;
  std::optional<std::filesystem::path> resume_path;

  // Throws ConfigError; fills net.input_dim/label_dim from the task.
  void finalize();
};

RunConfig default_run_config(TaskKind task);
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

// Applies a "key=value" style override (seed, workers, scheme, out, ...).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// FNV-1a digest of the numerically relevant part of the config (workers and
// paths excluded), as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

struct Checkpoint {
  std::string task;
  NetConfig net;
  Normalizer normalizer;
  ControlPath controls;
  std::int64_t iteration = 0;  // completed SGD iterations
  std::uint64_t rng_seed = 0;
  std::string config_hash;

  Model model() const { return {net, controls, normalizer}; }
  bool operator==(const Checkpoint& other) const;
};

std::string checkpoint_to_string(const Checkpoint& ckpt);
Checkpoint checkpoint_from_string(const std::string& text);
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace snn
