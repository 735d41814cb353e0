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
#include <functional>
#include <vector>

#include "snn/adjoint.hpp"
#include "snn/dataset.hpp"
#include "snn/dynamics.hpp"
#include "snn/random.hpp"

namespace snn {

struct TrainConfig {
  std::int64_t iterations = 1;
  double lr_scale = 1.0;
  std::uint64_t seed = 0;
  std::int64_t snapshot_every = 0;  // 0 disables snapshots
  std::int64_t log_every = 1000;
  Scheme scheme = Scheme::RightPoint;
  // Holds every sigma at its initial value (gradient masked).
  bool freeze_sigma = false;

  void validate() const;
};

struct LayerGradient {
  Matrix weights;
  Vector bias;
  Vector sigma;
};

// Gradient of the cost with respect to every layer control; mirrors ControlPath.
struct ControlGradient {
  std::vector<LayerGradient> layers;

  static ControlGradient zeros(const NetConfig& net);
  double norm() const;
  bool all_finite() const;
  ControlGradient& operator+=(const ControlGradient& other);
  ControlGradient& operator*=(double factor);
};

struct TrajectoryBundle {
  Vector gamma;
  StatePath path;
  AdjointPath adjoint;
};

// Simulates one state path from x0 and solves the adjoint along it.
TrajectoryBundle simulate_bundle(const NetConfig& net, const ControlPath& controls, const Sample& sample,
                                 Scheme scheme, RandomStream& rng);

// lr_scale / sqrt(k); iterations are 1-based.
double learning_rate(std::int64_t k, const TrainConfig& cfg);

// Single-sample gradient. Drift blocks pair X_n with Y_n (right-point) or
// Y_{n+1} (left-point); the sigma block is Z_n. Every block carries the
// factor h that turns the gradient density into d cost / d u_n.
ControlGradient pathwise_gradient(const NetConfig& net, const TrajectoryBundle& bundle,
                                  const ControlPath& controls, Scheme scheme);

// controls - eta * grad. Throws PropagationError if the result is non-finite.
ControlPath sgd_step(const ControlPath& controls, const ControlGradient& grad, double eta);

struct TrainingRecord {
  std::int64_t iteration = 0;
  std::uint64_t sample_index = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double learning_rate = 0.0;
};

// Random stream consumed by SGD iteration k; a pure function of (seed, k).
RandomStream iteration_stream(std::uint64_t seed, std::int64_t k);

// Stateful SGD loop; resumable from any iteration because every iteration's
// randomness is addressed by (seed, k).
class Trainer {
 public:
  Trainer(NetConfig net, TrainConfig cfg, const Dataset& data, ControlPath init,
          std::int64_t next_iteration = 1);

  TrainingRecord step();
  bool done() const { return next_ > cfg_.iterations; }
  std::int64_t next_iteration() const { return next_; }
  const ControlPath& controls() const { return controls_; }
  const NetConfig& net() const { return net_; }
  const TrainConfig& config() const { return cfg_; }

 private:
  NetConfig net_;
  TrainConfig cfg_;
  const Dataset& data_;
  LossSpec loss_;
  ControlPath controls_;
  std::int64_t next_;
};

struct TrainResult {
  ControlPath controls;
  std::vector<TrainingRecord> log;
};

// Invoked after each iteration; return false to stop early.
using TrainObserver = std::function<bool(const Trainer&, const TrainingRecord&)>;

TrainResult train(const Dataset& data, const NetConfig& net, const TrainConfig& cfg, const ControlPath& init,
                  const TrainObserver& observer = {});

// Average of pathwise gradients over every dataset sample and M noise
// realizations each. Bundle (q, m) draws from base.substream(q * M + m).
ControlGradient mc_gradient(const NetConfig& net, const ControlPath& controls, const Dataset& data,
                            std::size_t samples_per_datum, const RandomStream& base, Scheme scheme,
                            int workers = 1);

// Monte Carlo estimate of E[Phi(X_N, Gamma)] with the same bundle addressing
// as mc_gradient (common random numbers).
double evaluate_cost(const NetConfig& net, const ControlPath& controls, const Dataset& data,
                     std::size_t samples_per_datum, const RandomStream& base, int workers = 1);

// W ~ N(0, 1) entrywise, b = 0.05, sigma = 0.01.
ControlPath init_controls(const NetConfig& net, RandomStream& rng);

}  // namespace snn
