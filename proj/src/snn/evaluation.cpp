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

#include "snn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snn/errors.hpp"
#include "snn/parallel.hpp"

namespace snn {
namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

PredictiveSample predict(const Model& model, const Vector& input, std::size_t S, RandomStream& rng) {
  if (S < 1) throw ConfigError("predictive sample count must be at least 1");
  return {input, model.sample_outputs(input, S, rng)};
}

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ConfigError("percentile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Band band(const std::vector<PredictiveSample>& samples, const std::vector<double>& grid, double level) {
  if (samples.size() != grid.size()) throw ConfigError("band grid and samples differ in length");
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("band level must lie in (0, 1)");
  Band b;
  b.grid = grid;
  b.level = level;
  for (const auto& ps : samples) {
    if (ps.outputs.size() < kMinBandSamples) {
      throw ConfigError("band needs at least " + std::to_string(kMinBandSamples) + " samples per point, got " +
                        std::to_string(ps.outputs.size()));
    }
    std::vector<double> v;
    v.reserve(ps.outputs.size());
    for (const auto& o : ps.outputs) v.push_back(o[0]);
    const double m = mean_of(v);
    std::sort(v.begin(), v.end());
    b.mean.push_back(m);
    b.lower.push_back(percentile(v, (1.0 - level) / 2.0));
    b.upper.push_back(percentile(v, (1.0 + level) / 2.0));
  }
  return b;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2) return {lo};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

Band predictive_band(const Model& model, const std::vector<double>& grid, std::size_t S, double level,
                     const RandomStream& base, int workers) {
  auto samples = parallel_map<PredictiveSample>(grid.size(), workers, [&](std::size_t i) {
    RandomStream rng = base.substream(i);
    return predict(model, Vector::Constant(1, grid[i]), S, rng);
  });
  return band(samples, grid, level);
}

CurveMetrics curve_metrics(const Band& model_band, const std::vector<double>& true_mean,
                           const std::vector<double>& true_lower, const std::vector<double>& true_upper) {
  const std::size_t n = model_band.size();
  if (true_mean.size() != n || true_lower.size() != n || true_upper.size() != n || n == 0) {
    throw ConfigError("curve metrics grid mismatch");
  }
  CurveMetrics m;
  double se = 0.0, covered = 0.0, align = 0.0, hw = 0.0, true_hw = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = model_band.mean[i] - true_mean[i];
    se += d * d;
    if (model_band.lower[i] <= true_mean[i] && true_mean[i] <= model_band.upper[i]) covered += 1.0;
    const double t = 0.5 * (true_upper[i] - true_lower[i]);
    align += std::abs(model_band.half_width(i) - t);
    hw += model_band.half_width(i);
    true_hw += t;
  }
  const double dn = static_cast<double>(n);
  m.rmse = std::sqrt(se / dn);
  m.coverage = covered / dn;
  m.alignment = align / dn;
  m.mean_half_width = hw / dn;
  m.true_mean_half_width = true_hw / dn;
  return m;
}

ClassificationMetrics classification_metrics(const Model& model, const Dataset& testset, std::size_t votes,
                                             double threshold, double radius, double band_half_width,
                                             const RandomStream& base, int workers) {
  if (testset.input_dim != 2 || testset.label_dim != 1) {
    throw ConfigError("classification metrics need a 2-d input, 1-d label test set");
  }
  if (votes < 1) throw ConfigError("vote count must be at least 1");
  testset.validate();
  struct PointResult {
    bool first = false;
    bool majority = false;
  };
  auto results = parallel_map<PointResult>(testset.size(), workers, [&](std::size_t i) {
    RandomStream rng = base.substream(i);
    const auto outs = model.sample_outputs(testset.samples[i].input, votes, rng);
    std::size_t ones = 0;
    for (const auto& o : outs) ones += o[0] > threshold ? 1 : 0;
    return PointResult{outs.front()[0] > threshold, 2 * ones > votes};
  });

  ClassificationMetrics m;
  m.count = testset.size();
  std::size_t correct = 0, correct_outside = 0, majority_correct = 0, mis_in_band = 0;
  for (std::size_t i = 0; i < testset.size(); ++i) {
    const auto& s = testset.samples[i];
    const bool label = s.label[0] > threshold;
    const bool in_band = std::abs(s.input.norm() - radius) <= band_half_width;
    const bool ok = results[i].first == label;
    correct += ok;
    majority_correct += results[i].majority == label;
    if (!in_band) {
      ++m.outside_band_count;
      correct_outside += ok;
    }
    if (!ok) {
      ++m.misclassified;
      mis_in_band += in_band;
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.count);
  m.accuracy_outside_band =
      m.outside_band_count ? static_cast<double>(correct_outside) / static_cast<double>(m.outside_band_count) : 1.0;
  m.misclassified_in_band_fraction =
      m.misclassified ? static_cast<double>(mis_in_band) / static_cast<double>(m.misclassified) : 1.0;
  if (votes > 1) m.majority_accuracy = static_cast<double>(majority_correct) / static_cast<double>(m.count);
  return m;
}

WeightSurface weight_surface(const Model& model, std::size_t resolution, std::size_t S, const RandomStream& base,
                             int workers) {
  if (resolution < 1 || S < 1) throw ConfigError("weight surface needs resolution and S of at least 1");
  WeightSurface w;
  w.resolution = resolution;
  for (std::size_t i = 0; i < resolution; ++i) {
    w.centers.push_back(-1.0 + (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(resolution));
  }
  struct Cell {
    double mean, lo, hi;
  };
  auto cells = parallel_map<Cell>(resolution * resolution, workers, [&](std::size_t c) {
    RandomStream rng = base.substream(c);
    const Vector p{{w.centers[c % resolution], w.centers[c / resolution]}};
    const auto outs = model.sample_outputs(p, S, rng);
    Cell cell{0.0, outs.front()[0], outs.front()[0]};
    for (const auto& o : outs) {
      cell.mean += o[0];
      cell.lo = std::min(cell.lo, o[0]);
      cell.hi = std::max(cell.hi, o[0]);
    }
    cell.mean /= static_cast<double>(S);
    return cell;
  });
  for (const auto& c : cells) {
    w.values.push_back(c.mean);
    w.lo.push_back(c.lo);
    w.hi.push_back(c.hi);
  }
  return w;
}

ParamEstimate param_estimate(const Model& model, const std::vector<Vector>& observations, std::size_t S,
                             const RandomStream& base, int workers) {
  if (observations.empty()) throw ConfigError("parameter estimation needs at least one observation");
  if (S < 1) throw ConfigError("sample count must be at least 1");
  auto per_obs = parallel_map<std::vector<double>>(observations.size(), workers, [&](std::size_t i) {
    RandomStream rng = base.substream(i);
    std::vector<double> v;
    for (const auto& o : model.sample_outputs(observations[i], S, rng)) v.push_back(o[0]);
    return v;
  });
  ParamEstimate est;
  for (auto& v : per_obs) est.samples.insert(est.samples.end(), v.begin(), v.end());
  est.estimate = mean_of(est.samples);
  double var = 0.0;
  for (double s : est.samples) var += (s - est.estimate) * (s - est.estimate);
  const double n = static_cast<double>(est.samples.size());
  est.standard_error = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  std::vector<double> sorted = est.samples;
  std::sort(sorted.begin(), sorted.end());
  est.lower = percentile(sorted, 0.025);
  est.upper = percentile(sorted, 0.975);
  return est;
}

}  // namespace snn
