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

#include "snn/dynamics.hpp"

#include <cmath>
#include <string>

#include "snn/errors.hpp"

namespace snn {
namespace {

inline double sigmoid_scalar(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

void check_layer(const Vector& x, const LayerControl& ctrl) {
  const auto d = x.size();
  require(ctrl.weights.rows() == d && ctrl.weights.cols() == d && ctrl.bias.size() == d &&
              ctrl.sigma.size() == d,
          "layer control does not match state dimension");
}

}  // namespace

void NetConfig::validate() const {
  require(width >= 1, "width must be positive");
  require(depth >= 1, "depth must be positive");
  require(std::isfinite(step) && step > 0.0, "step size must be positive");
  require(input_dim >= 1 && input_dim <= width, "input_dim must lie in [1, width]");
  require(label_dim >= 1 && label_dim <= width, "label_dim must lie in [1, width]");
}

LayerControl LayerControl::zeros(int width) {
  return {Matrix::Zero(width, width), Vector::Zero(width), Vector::Zero(width)};
}

bool LayerControl::conforms(int width) const {
  return weights.rows() == width && weights.cols() == width && bias.size() == width &&
         sigma.size() == width;
}

bool LayerControl::all_finite() const {
  return weights.allFinite() && bias.allFinite() && sigma.allFinite();
}

ControlPath ControlPath::zeros(const NetConfig& net) {
  return {std::vector<LayerControl>(static_cast<std::size_t>(net.depth), LayerControl::zeros(net.width))};
}

void ControlPath::check_conforms(const NetConfig& net) const {
  if (depth() != net.depth) {
    throw ConfigError("control path has " + std::to_string(depth()) + " layers, expected " +
                      std::to_string(net.depth));
  }
  for (const auto& layer : layers) {
    require(layer.conforms(net.width), "layer control does not match network width");
  }
}

Vector sigmoid(const Vector& z) { return z.unaryExpr(&sigmoid_scalar); }

Vector drift(const Vector& x, const LayerControl& ctrl) {
  check_layer(x, ctrl);
  return sigmoid(ctrl.weights * x + ctrl.bias);
}

Matrix drift_jacobian_state(const Vector& x, const LayerControl& ctrl) {
  const Vector s = drift(x, ctrl);
  const Vector slope = s.array() * (1.0 - s.array());
  return slope.asDiagonal() * ctrl.weights;
}

DriftParamGradient drift_param_gradient(const Vector& x, const LayerControl& ctrl, const Vector& y) {
  const Vector s = drift(x, ctrl);
  if (y.size() != x.size()) throw ConfigError("adjoint does not match state dimension");
  Vector v = s.array() * (1.0 - s.array()) * y.array();
  Matrix gw = v * x.transpose();
  return {std::move(gw), std::move(v)};
}

Vector forward_step(const Vector& x, const LayerControl& ctrl, const Vector& omega, double h) {
  if (omega.size() != x.size()) throw ConfigError("noise does not match state dimension");
  Vector next = x + h * drift(x, ctrl) + std::sqrt(h) * ctrl.sigma.cwiseProduct(omega);
  if (!next.allFinite()) throw PropagationError("non-finite state in forward step");
  return next;
}

Vector embed_input(const Vector& x0, const NetConfig& net) {
  if (x0.size() != net.input_dim) {
    throw ConfigError("input has dimension " + std::to_string(x0.size()) + ", expected " +
                      std::to_string(net.input_dim));
  }
  Vector x = Vector::Zero(net.width);
  x.head(net.input_dim) = x0;
  return x;
}

StatePath simulate_path(const NetConfig& net, const Vector& x0, const ControlPath& controls,
                        RandomStream& rng) {
  StatePath path;
  path.noises.reserve(static_cast<std::size_t>(net.depth));
  for (int n = 0; n < net.depth; ++n) path.noises.push_back(rng.normal_vector(net.width));
  path = replay_path(net, x0, controls, path.noises);
  return path;
}

StatePath replay_path(const NetConfig& net, const Vector& x0, const ControlPath& controls,
                      const std::vector<Vector>& noises) {
  controls.check_conforms(net);
  if (static_cast<int>(noises.size()) != net.depth) throw ConfigError("noise path length mismatch");
  StatePath path;
  path.noises = noises;
  path.states.reserve(static_cast<std::size_t>(net.depth) + 1);
  path.states.push_back(embed_input(x0, net));
  for (int n = 0; n < net.depth; ++n) {
    path.states.push_back(forward_step(path.states.back(), controls.layers[n], noises[n], net.step));
  }
  return path;
}

}  // namespace snn
