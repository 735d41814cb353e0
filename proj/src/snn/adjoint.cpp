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

#include "snn/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snn/errors.hpp"

namespace snn {

const char* scheme_name(Scheme scheme) {
  return scheme == Scheme::RightPoint ? "right" : "left";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "right" || name == "right-point") return Scheme::RightPoint;
  if (name == "left" || name == "left-point") return Scheme::LeftPoint;
  throw ConfigError("unknown scheme '" + name + "' (expected right or left)");
}

double LossSpec::loss(const Vector& x, const Vector& gamma) const {
  return (readout(x) - gamma).squaredNorm();
}

Vector terminal_condition(const Vector& xN, const Vector& gamma, const LossSpec& loss) {
  if (gamma.size() != loss.label_dim || xN.size() < loss.label_dim) {
    throw ConfigError("label does not match loss readout");
  }
  Vector y = Vector::Zero(xN.size());
  y.head(loss.label_dim) = 2.0 * (xN.head(loss.label_dim) - gamma);
  return y;
}

Vector backward_step(const Vector& y_next, const Vector& x_eval, const LayerControl& ctrl, double h) {
  if (y_next.size() != x_eval.size()) throw ConfigError("adjoint does not match state dimension");
  // J^T y = W^T (s(1-s) .* y)
  const Vector s = drift(x_eval, ctrl);
  const Vector weighted = s.array() * (1.0 - s.array()) * y_next.array();
  Vector y = y_next + h * (ctrl.weights.transpose() * weighted);
  if (!y.allFinite()) throw PropagationError("non-finite adjoint in backward step");
  return y;
}

Vector z_estimate(const Vector& y_next, const Vector& omega, double h) {
  return y_next.cwiseProduct(omega) * (std::sqrt(h) / h);
}

AdjointPath solve_adjoint(const NetConfig& net, const StatePath& path, const ControlPath& controls,
                          const Vector& gamma, const LossSpec& loss, Scheme scheme) {
  controls.check_conforms(net);
  const int depth = net.depth;
  if (static_cast<int>(path.states.size()) != depth + 1 || static_cast<int>(path.noises.size()) != depth) {
    throw ConfigError("state path does not match network depth");
  }
  AdjointPath adj;
  adj.y.resize(static_cast<std::size_t>(depth) + 1);
  adj.z.resize(static_cast<std::size_t>(depth));
  adj.y[depth] = terminal_condition(path.states[depth], gamma, loss);
  for (int n = depth - 1; n >= 0; --n) {
    const Vector& y_next = adj.y[n + 1];
    if (scheme == Scheme::RightPoint) {
      // u_N does not exist; the last step reuses u_{N-1}.
      const int ctrl_index = std::min(n + 1, depth - 1);
      adj.y[n] = backward_step(y_next, path.states[n + 1], controls.layers[ctrl_index], net.step);
    } else {
      adj.y[n] = backward_step(y_next, path.states[n], controls.layers[n], net.step);
    }
    adj.z[n] = z_estimate(y_next, path.noises[n], net.step);
  }
  return adj;
}

}  // namespace snn
