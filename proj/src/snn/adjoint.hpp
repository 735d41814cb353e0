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

#include "snn/dynamics.hpp"

namespace snn {

// Where the backward recursion evaluates the drift Jacobian. RightPoint uses
// (X_{n+1}, u_{n+1}); LeftPoint uses (X_n, u_n) and equals exact reverse-mode
// differentiation of the discrete forward recursion.
enum class Scheme { RightPoint, LeftPoint };

const char* scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

// Squared Euclidean loss on the first `label_dim` state coordinates.
struct LossSpec {
  int label_dim = 1;

  Vector readout(const Vector& x) const { return x.head(label_dim); }
  double loss(const Vector& x, const Vector& gamma) const;
};

struct AdjointPath {
  std::vector<Vector> y;  // Y_0..Y_N
  std::vector<Vector> z;  // Z_0..Z_{N-1}
};

// 2 R^T (R x_N - gamma)
Vector terminal_condition(const Vector& xN, const Vector& gamma, const LossSpec& loss);

// y_next + h J^T y_next with J the drift Jacobian at (x_eval, ctrl).
Vector backward_step(const Vector& y_next, const Vector& x_eval, const LayerControl& ctrl, double h);

// y_next .* omega * sqrt(h) / h
Vector z_estimate(const Vector& y_next, const Vector& omega, double h);

AdjointPath solve_adjoint(const NetConfig& net, const StatePath& path, const ControlPath& controls,
                          const Vector& gamma, const LossSpec& loss, Scheme scheme);

}  // namespace snn
