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

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "snn/dataset.hpp"

namespace snn {

enum class TaskKind { CircleClassification, CubicRegression, TanRegression, ParamEstimation };

const char* task_name(TaskKind kind);
TaskKind parse_task(const std::string& name);

// Generator settings. Fields that a task does not use are ignored.
struct TaskSpec {
  TaskKind kind = TaskKind::CubicRegression;
  std::size_t count = 10000;
  std::uint64_t seed = 0;

  double radius = 0.5;       // circle
  double noise_frac = 0.1;   // circle: boundary noise std as a fraction of radius
  double noise_std = 0.2;    // cubic: additive label noise
  double tan_sigma = 0.05;   // tan: proportional label noise
  double alpha_lo = 3.0;     // param-est
  double alpha_hi = 5.0;
  double model_noise_std = 0.05;
  double x_center = 0.5;
  double x_std = 0.05;

  // Throws ConfigError on invalid ranges.
  void validate() const;
  int input_dim() const;
  int label_dim() const;
};

Dataset generate(const TaskSpec& spec);

Dataset gen_circle(std::size_t count, double radius, double noise_frac, std::uint64_t seed);
Dataset gen_cubic(std::size_t count, double noise_std, std::uint64_t seed);
Dataset gen_tan(std::size_t count, double sigma, std::uint64_t seed);
Dataset gen_param_est(std::size_t count, std::pair<double, double> alpha_range, double model_noise_std,
                      double x_center, double x_std, std::uint64_t seed);

// Noisy (x, v) observations of the model at a fixed parameter, used as test
// evidence for parameter estimation.
std::vector<Vector> param_observations(double alpha, std::size_t count, double model_noise_std,
                                       double x_center, double x_std, std::uint64_t seed);

// 1 outside the (possibly noisy) boundary radius, 0 inside.
inline double circle_label(double px, double py, double boundary) {
  return std::hypot(px, py) > boundary ? 1.0 : 0.0;
}

inline double cubic_mean(double x) { return 2.0 + (1.0 + x) * (1.0 + x) * (1.0 + x); }
double tan_mean(double x);
double param_model(double alpha, double x);

}  // namespace snn
