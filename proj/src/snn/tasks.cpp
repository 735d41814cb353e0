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

#include "snn/tasks.hpp"

#include <cmath>

#include "snn/errors.hpp"
#include "snn/random.hpp"

namespace snn {
namespace {

// Stream ids separate the generators so equal seeds never share draws.
constexpr std::uint64_t kCircleStream = 0xC14C1E;
constexpr std::uint64_t kCubicStream = 0xC0B1C;
constexpr std::uint64_t kTanStream = 0x7A4;
constexpr std::uint64_t kParamStream = 0xA1FA;
constexpr std::uint64_t kObservationStream = 0x0B5E;

Vector scalar(double v) { return Vector::Constant(1, v); }

Vector observe(RandomStream& rng, double alpha, double model_noise_std, double x_center, double x_std) {
  const double x = x_center + x_std * rng.normal();
  const double v = param_model(alpha, x) + model_noise_std * rng.normal();
  return Vector{{x, v}};
}

}  // namespace

const char* task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::CircleClassification: return "circle-classification";
    case TaskKind::CubicRegression: return "cubic-regression";
    case TaskKind::TanRegression: return "tan-regression";
    case TaskKind::ParamEstimation: return "param-estimation";
  }
  return "unknown";
}

TaskKind parse_task(const std::string& name) {
  for (auto kind : {TaskKind::CircleClassification, TaskKind::CubicRegression, TaskKind::TanRegression,
                    TaskKind::ParamEstimation}) {
    if (name == task_name(kind)) return kind;
  }
  throw ConfigError("unknown task '" + name + "'");
}

void TaskSpec::validate() const {
  if (count < 1) throw ConfigError("task count must be at least 1");
  switch (kind) {
    case TaskKind::CircleClassification:
      if (!(radius > 0.0)) throw ConfigError("circle radius must be positive");
      if (!(noise_frac >= 0.0)) throw ConfigError("noise_frac must be nonnegative");
      break;
    case TaskKind::CubicRegression:
      if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be nonnegative");
      break;
    case TaskKind::TanRegression:
      if (!(tan_sigma >= 0.0)) throw ConfigError("tan sigma must be nonnegative");
      break;
    case TaskKind::ParamEstimation:
      if (!(alpha_lo <= alpha_hi)) throw ConfigError("alpha range is empty");
      if (!(model_noise_std >= 0.0) || !(x_std >= 0.0)) throw ConfigError("noise scales must be nonnegative");
      break;
  }
}

int TaskSpec::input_dim() const {
  return (kind == TaskKind::CircleClassification || kind == TaskKind::ParamEstimation) ? 2 : 1;
}

int TaskSpec::label_dim() const { return 1; }

Dataset generate(const TaskSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case TaskKind::CircleClassification:
      return gen_circle(spec.count, spec.radius, spec.noise_frac, spec.seed);
    case TaskKind::CubicRegression:
      return gen_cubic(spec.count, spec.noise_std, spec.seed);
    case TaskKind::TanRegression:
      return gen_tan(spec.count, spec.tan_sigma, spec.seed);
    case TaskKind::ParamEstimation:
      return gen_param_est(spec.count, {spec.alpha_lo, spec.alpha_hi}, spec.model_noise_std, spec.x_center,
                           spec.x_std, spec.seed);
  }
  throw ConfigError("unknown task");
}

Dataset gen_circle(std::size_t count, double radius, double noise_frac, std::uint64_t seed) {
  Dataset data{task_name(TaskKind::CircleClassification),
               {{"radius", radius}, {"noise_frac", noise_frac}},
               seed, 2, 1, {}};
  RandomStream rng(seed, kCircleStream);
  data.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double px = rng.uniform(-1.0, 1.0);
    const double py = rng.uniform(-1.0, 1.0);
    const double boundary = radius + noise_frac * radius * rng.normal();
    data.samples.push_back({Vector{{px, py}}, scalar(circle_label(px, py, boundary))});
  }
  return data;
}

Dataset gen_cubic(std::size_t count, double noise_std, std::uint64_t seed) {
  Dataset data{task_name(TaskKind::CubicRegression), {{"noise_std", noise_std}}, seed, 1, 1, {}};
  RandomStream rng(seed, kCubicStream);
  data.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform();
    const double label = cubic_mean(x) + noise_std * rng.normal();
    data.samples.push_back({scalar(x), scalar(label)});
  }
  return data;
}

double tan_mean(double x) { return 1.0 + std::tan(1.3 * x); }

Dataset gen_tan(std::size_t count, double sigma, std::uint64_t seed) {
  Dataset data{task_name(TaskKind::TanRegression), {{"sigma", sigma}}, seed, 1, 1, {}};
  RandomStream rng(seed, kTanStream);
  data.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform();
    const double label = tan_mean(x) * (1.0 + sigma * rng.normal());
    data.samples.push_back({scalar(x), scalar(label)});
  }
  return data;
}

double param_model(double alpha, double x) { return std::exp(alpha * x * x / 2.0); }

Dataset gen_param_est(std::size_t count, std::pair<double, double> alpha_range, double model_noise_std,
                      double x_center, double x_std, std::uint64_t seed) {
  Dataset data{task_name(TaskKind::ParamEstimation),
               {{"alpha_lo", alpha_range.first},
                {"alpha_hi", alpha_range.second},
                {"model_noise_std", model_noise_std},
                {"x_center", x_center},
                {"x_std", x_std}},
               seed, 2, 1, {}};
  RandomStream rng(seed, kParamStream);
  data.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double alpha = rng.uniform(alpha_range.first, alpha_range.second);
    data.samples.push_back({observe(rng, alpha, model_noise_std, x_center, x_std), scalar(alpha)});
  }
  return data;
}

std::vector<Vector> param_observations(double alpha, std::size_t count, double model_noise_std,
                                       double x_center, double x_std, std::uint64_t seed) {
  RandomStream rng(seed, kObservationStream);
  std::vector<Vector> obs;
  obs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) obs.push_back(observe(rng, alpha, model_noise_std, x_center, x_std));
  return obs;
}

}  // namespace snn
