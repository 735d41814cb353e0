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

#include <vector>

#include <Eigen/Dense>

#include "snn/random.hpp"

namespace snn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { Sigmoid };

// Shape of a residual SNN: `width` neurons per layer, `depth` layers, each
// layer advancing time by `step`.
struct NetConfig {
  int width = 1;
  int depth = 1;
  double step = 1.0;
  int input_dim = 1;
  int label_dim = 1;
  Activation activation = Activation::Sigmoid;

  // Throws ConfigError when any invariant is violated.
  void validate() const;
  double horizon() const { return depth * step; }

  bool operator==(const NetConfig&) const = default;
};

// Control u_n = (W_n, b_n, sigma_n) of one layer. Diffusion is diagonal.
struct LayerControl {
  Matrix weights;
  Vector bias;
  Vector sigma;

  static LayerControl zeros(int width);
  bool conforms(int width) const;
  bool all_finite() const;
};

struct ControlPath {
  std::vector<LayerControl> layers;

  static ControlPath zeros(const NetConfig& net);
  int depth() const { return static_cast<int>(layers.size()); }
  // Throws ConfigError when the path does not match `net`.
  void check_conforms(const NetConfig& net) const;
};

struct StatePath {
  std::vector<Vector> states;  // X_0..X_N
  std::vector<Vector> noises;  // omega_0..omega_{N-1}
};

Vector sigmoid(const Vector& z);

// f(x, u) = sigmoid(W x + b)
Vector drift(const Vector& x, const LayerControl& ctrl);

// d f_i / d x_j = s_i (1 - s_i) W_ij
Matrix drift_jacobian_state(const Vector& x, const LayerControl& ctrl);

struct DriftParamGradient {
  Matrix weights;
  Vector bias;
};

// Gradients of y . f(x, u) with respect to W and b.
DriftParamGradient drift_param_gradient(const Vector& x, const LayerControl& ctrl, const Vector& y);

// Gradient of (g(u) z) with respect to the diagonal of sigma; the identity.
inline Vector diffusion_gradient(const Vector& z) { return z; }

// x + h f(x, u) + sqrt(h) sigma .* omega. Throws PropagationError on
// non-finite output.
Vector forward_step(const Vector& x, const LayerControl& ctrl, const Vector& omega, double h);

// Zero-padded embedding of an input into the state space.
Vector embed_input(const Vector& x0, const NetConfig& net);

StatePath simulate_path(const NetConfig& net, const Vector& x0, const ControlPath& controls,
                        RandomStream& rng);

// Replays a path under (possibly different) controls with the stored noise.
StatePath replay_path(const NetConfig& net, const Vector& x0, const ControlPath& controls,
                      const std::vector<Vector>& noises);

}  // namespace snn
