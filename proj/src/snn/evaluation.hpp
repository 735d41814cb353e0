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

#include <functional>
#include <optional>
#include <vector>

#include "snn/dataset.hpp"
#include "snn/model.hpp"

namespace snn {

struct PredictiveSample {
  Vector input;
  std::vector<Vector> outputs;  // one readout per noise realization, label units
};

PredictiveSample predict(const Model& model, const Vector& input, std::size_t S, RandomStream& rng);

// Linear-interpolation percentile (the "linear" convention of numpy);
// `sorted` must be ascending, q in [0, 1].
double percentile(const std::vector<double>& sorted, double q);

struct Band {
  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
  double level = 0.95;

  std::size_t size() const { return grid.size(); }
  double half_width(std::size_t i) const { return 0.5 * (upper[i] - lower[i]); }
};

inline constexpr std::size_t kMinBandSamples = 100;

// Per grid point: sample mean and empirical (1-level)/2, (1+level)/2
// percentiles of readout coordinate 0. Throws ConfigError when a point has
// fewer than kMinBandSamples samples.
Band band(const std::vector<PredictiveSample>& samples, const std::vector<double>& grid, double level = 0.95);

// `points` uniform points on [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

// Predictive band of a scalar-input model over a grid; point i draws from
// base.substream(i).
Band predictive_band(const Model& model, const std::vector<double>& grid, std::size_t S, double level,
                     const RandomStream& base, int workers = 1);

struct CurveMetrics {
  double rmse = 0.0;
  double coverage = 0.0;
  double alignment = 0.0;
  double mean_half_width = 0.0;
  double true_mean_half_width = 0.0;
};

// RMSE of the band mean against `true_mean`; coverage is the fraction of
// points whose band contains the true mean; alignment is the mean absolute
// difference of band half-widths.
CurveMetrics curve_metrics(const Band& model_band, const std::vector<double>& true_mean,
                           const std::vector<double>& true_lower, const std::vector<double>& true_upper);

struct ClassificationMetrics {
  std::size_t count = 0;
  double accuracy = 0.0;
  std::size_t outside_band_count = 0;
  double accuracy_outside_band = 0.0;
  std::size_t misclassified = 0;
  double misclassified_in_band_fraction = 0.0;
  std::optional<double> majority_accuracy;  // only when votes > 1
};

// The first vote per point is the single sampled prediction; with votes > 1
// a majority vote is also scored. The noise band is
// | |p| - radius | <= band_half_width.
ClassificationMetrics classification_metrics(const Model& model, const Dataset& testset, std::size_t votes,
                                             double threshold, double radius, double band_half_width,
                                             const RandomStream& base, int workers = 1);

struct WeightSurface {
  std::size_t resolution = 0;
  std::vector<double> centers;  // cell centers along each axis of [-1, 1]
  std::vector<double> values;   // row-major, values[iy * resolution + ix]
  std::vector<double> lo;       // per-cell min and max sampled readout
  std::vector<double> hi;
};

WeightSurface weight_surface(const Model& model, std::size_t resolution, std::size_t S, const RandomStream& base,
                             int workers = 1);

struct ParamEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  double lower = 0.0;  // central 95% of the pooled samples
  double upper = 0.0;
  std::vector<double> samples;
};

// Pools S readouts per observation; the estimate is the pooled mean.
ParamEstimate param_estimate(const Model& model, const std::vector<Vector>& observations, std::size_t S,
                             const RandomStream& base, int workers = 1);

}  // namespace snn
