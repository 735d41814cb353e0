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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "snn/dataset.hpp"
#include "snn/run_config.hpp"

namespace snn {

// Shortest decimal text that parses back to the same double.
std::string format_real(double v);

Dataset cmd_generate_data(const RunConfig& cfg);

// Fits the normalizer and draws the initial controls for a fresh run.
Checkpoint initial_checkpoint(const RunConfig& cfg, const Dataset& data);

struct TrainOutcome {
  Checkpoint checkpoint;
  std::filesystem::path checkpoint_path;
  std::filesystem::path log_path;
  std::vector<std::filesystem::path> snapshots;
};

using ProgressFn = std::function<void(const TrainingRecord&)>;

// Runs (or resumes) SGD, writing train_log.csv, periodic snapshots and the
// final checkpoint under cfg.out_dir. On divergence the log written so far is
// kept and the PropagationError is rethrown.
TrainOutcome cmd_train(const RunConfig& cfg, const Dataset& data, const std::optional<Checkpoint>& resume = {},
                       const ProgressFn& progress = {});

// Writes metrics.json and the task's CSV files under out_dir; returns the
// metrics document.
nlohmann::json cmd_evaluate(const RunConfig& cfg, const Checkpoint& ckpt, const std::filesystem::path& out_dir);

struct BlockCheck {
  std::string block;  // gradW, gradB, gradSigma
  double pathwise_max_rel = 0.0;
  double mc_max_rel = 0.0;
  std::size_t pathwise_entries = 0;
  std::size_t mc_entries = 0;  // coordinates above the magnitude floor
  bool pathwise_ok = true;
  bool mc_ok = true;
  bool ok() const { return pathwise_ok && mc_ok; }
};

struct GradientCheckReport {
  std::vector<BlockCheck> blocks;
  double seconds = 0.0;
  bool ok() const;
  std::vector<std::string> failing_blocks() const;
  std::string to_text(const RunConfig& cfg) const;
};

GradientCheckReport cmd_gradient_check(const RunConfig& cfg);

}  // namespace snn
