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

#include "snn/trainer.hpp"

#include <cmath>
#include <string>

#include "snn/errors.hpp"
#include "snn/parallel.hpp"

namespace snn {
namespace {

constexpr std::uint64_t kTrainStream = 0x5D6;
constexpr double kInitBias = 0.05;
constexpr double kInitSigma = 0.01;

void check_dataset(const NetConfig& net, const Dataset& data) {
  data.validate();
  if (data.input_dim != net.input_dim || data.label_dim != net.label_dim) {
    throw ConfigError("dataset dimensions (" + std::to_string(data.input_dim) + ", " +
                      std::to_string(data.label_dim) + ") do not match network (" +
                      std::to_string(net.input_dim) + ", " + std::to_string(net.label_dim) + ")");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (!(lr_scale > 0.0) || !std::isfinite(lr_scale)) throw ConfigError("lr_scale must be positive");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be nonnegative");
  if (log_every < 1) throw ConfigError("log_every must be at least 1");
}

ControlGradient ControlGradient::zeros(const NetConfig& net) {
  ControlGradient g;
  g.layers.assign(static_cast<std::size_t>(net.depth),
                  {Matrix::Zero(net.width, net.width), Vector::Zero(net.width), Vector::Zero(net.width)});
  return g;
}

double ControlGradient::norm() const {
  double sq = 0.0;
  for (const auto& l : layers) sq += l.weights.squaredNorm() + l.bias.squaredNorm() + l.sigma.squaredNorm();
  return std::sqrt(sq);
}

bool ControlGradient::all_finite() const {
  for (const auto& l : layers) {
    if (!l.weights.allFinite() || !l.bias.allFinite() || !l.sigma.allFinite()) return false;
  }
  return true;
}

ControlGradient& ControlGradient::operator+=(const ControlGradient& other) {
  if (other.layers.size() != layers.size()) throw ConfigError("gradient shape mismatch");
  for (std::size_t n = 0; n < layers.size(); ++n) {
    layers[n].weights += other.layers[n].weights;
    layers[n].bias += other.layers[n].bias;
    layers[n].sigma += other.layers[n].sigma;
  }
  return *this;
}

ControlGradient& ControlGradient::operator*=(double factor) {
  for (auto& l : layers) {
    l.weights *= factor;
    l.bias *= factor;
    l.sigma *= factor;
  }
  return *this;
}

TrajectoryBundle simulate_bundle(const NetConfig& net, const ControlPath& controls, const Sample& sample,
                                 Scheme scheme, RandomStream& rng) {
  TrajectoryBundle b;
  b.gamma = sample.label;
  b.path = simulate_path(net, sample.input, controls, rng);
  b.adjoint = solve_adjoint(net, b.path, controls, b.gamma, LossSpec{net.label_dim}, scheme);
  return b;
}

double learning_rate(std::int64_t k, const TrainConfig& cfg) {
  if (k < 1) throw ConfigError("iteration index must be at least 1");
  return cfg.lr_scale / std::sqrt(static_cast<double>(k));
}

ControlGradient pathwise_gradient(const NetConfig& net, const TrajectoryBundle& bundle,
                                  const ControlPath& controls, Scheme scheme) {
  controls.check_conforms(net);
  const auto& states = bundle.path.states;
  const auto& adj = bundle.adjoint;
  if (static_cast<int>(states.size()) != net.depth + 1 || static_cast<int>(adj.y.size()) != net.depth + 1 ||
      static_cast<int>(adj.z.size()) != net.depth) {
    throw ConfigError("trajectory bundle does not match network depth");
  }
  const double h = net.step;
  ControlGradient g;
  g.layers.reserve(static_cast<std::size_t>(net.depth));
  for (int n = 0; n < net.depth; ++n) {
    const Vector& y = scheme == Scheme::RightPoint ? adj.y[n] : adj.y[n + 1];
    auto drift_grad = drift_param_gradient(states[n], controls.layers[n], y);
    g.layers.push_back({h * drift_grad.weights, h * drift_grad.bias, h * diffusion_gradient(adj.z[n])});
  }
  return g;
}

ControlPath sgd_step(const ControlPath& controls, const ControlGradient& grad, double eta) {
  if (grad.layers.size() != controls.layers.size()) throw ConfigError("gradient shape mismatch");
  ControlPath next = controls;
  for (std::size_t n = 0; n < next.layers.size(); ++n) {
    auto& u = next.layers[n];
    const auto& g = grad.layers[n];
    if (!u.conforms(static_cast<int>(g.bias.size()))) throw ConfigError("gradient shape mismatch");
    u.weights -= eta * g.weights;
    u.bias -= eta * g.bias;
    u.sigma -= eta * g.sigma;
    if (!u.all_finite()) throw PropagationError("non-finite control after SGD update");
  }
  return next;
}

RandomStream iteration_stream(std::uint64_t seed, std::int64_t k) {
  return RandomStream(seed, kTrainStream).substream(static_cast<std::uint64_t>(k));
}

Trainer::Trainer(NetConfig net, TrainConfig cfg, const Dataset& data, ControlPath init,
                 std::int64_t next_iteration)
    : net_(net), cfg_(cfg), data_(data), loss_{net.label_dim}, controls_(std::move(init)), next_(next_iteration) {
  net_.validate();
  cfg_.validate();
  check_dataset(net_, data_);
  controls_.check_conforms(net_);
  if (next_ < 1) throw ConfigError("iteration index must be at least 1");
}

TrainingRecord Trainer::step() {
  const std::int64_t k = next_;
  try {
    RandomStream rng = iteration_stream(cfg_.seed, k);
    const std::uint64_t index = rng.index(data_.size());
    const auto bundle = simulate_bundle(net_, controls_, data_.samples[index], cfg_.scheme, rng);
    auto grad = pathwise_gradient(net_, bundle, controls_, cfg_.scheme);
    if (cfg_.freeze_sigma) {
      for (auto& l : grad.layers) l.sigma.setZero();
    }
    const double eta = learning_rate(k, cfg_);
    controls_ = sgd_step(controls_, grad, eta);
    ++next_;
    return {k, index, loss_.loss(bundle.path.states.back(), bundle.gamma), grad.norm(), eta};
  } catch (const PropagationError& e) {
    throw PropagationError(e.what(), k);
  }
}

TrainResult train(const Dataset& data, const NetConfig& net, const TrainConfig& cfg, const ControlPath& init,
                  const TrainObserver& observer) {
  Trainer trainer(net, cfg, data, init);
  TrainResult result;
  while (!trainer.done()) {
    const auto record = trainer.step();
    if (record.iteration % cfg.log_every == 0 || record.iteration == cfg.iterations) {
      result.log.push_back(record);
    }
    if (observer && !observer(trainer, record)) break;
  }
  result.controls = trainer.controls();
  return result;
}

ControlGradient mc_gradient(const NetConfig& net, const ControlPath& controls, const Dataset& data,
                            std::size_t samples_per_datum, const RandomStream& base, Scheme scheme,
                            int workers) {
  if (samples_per_datum < 1) throw ConfigError("sample count M must be at least 1");
  check_dataset(net, data);
  controls.check_conforms(net);
  const std::size_t total = samples_per_datum * data.size();
  auto sum = ordered_reduce(
      total, workers, ControlGradient::zeros(net),
      [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        const auto bundle = simulate_bundle(net, controls, data.samples[i / samples_per_datum], scheme, rng);
        return pathwise_gradient(net, bundle, controls, scheme);
      },
      [](ControlGradient& acc, const ControlGradient& g) { acc += g; });
  sum *= 1.0 / static_cast<double>(total);
  return sum;
}

double evaluate_cost(const NetConfig& net, const ControlPath& controls, const Dataset& data,
                     std::size_t samples_per_datum, const RandomStream& base, int workers) {
  if (samples_per_datum < 1) throw ConfigError("sample count M must be at least 1");
  check_dataset(net, data);
  controls.check_conforms(net);
  const LossSpec loss{net.label_dim};
  const std::size_t total = samples_per_datum * data.size();
  const double sum = ordered_reduce(
      total, workers, 0.0,
      [&](std::size_t i) {
        RandomStream rng = base.substream(i);
        const auto& sample = data.samples[i / samples_per_datum];
        const auto path = simulate_path(net, sample.input, controls, rng);
        return loss.loss(path.states.back(), sample.label);
      },
      [](double& acc, double v) { acc += v; });
  return sum / static_cast<double>(total);
}

ControlPath init_controls(const NetConfig& net, RandomStream& rng) {
  net.validate();
  ControlPath path;
  path.layers.reserve(static_cast<std::size_t>(net.depth));
  for (int n = 0; n < net.depth; ++n) {
    LayerControl u;
    u.weights.resize(net.width, net.width);
    rng.fill_normal(std::span<double>(u.weights.data(), static_cast<std::size_t>(u.weights.size())));
    u.bias = Vector::Constant(net.width, kInitBias);
    u.sigma = Vector::Constant(net.width, kInitSigma);
    path.layers.push_back(std::move(u));
  }
  return path;
}

}  // namespace snn
