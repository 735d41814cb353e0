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

#include <gtest/gtest.h>

#include <cmath>

#include "snn/adjoint.hpp"
#include "snn/errors.hpp"
#include "test_util.hpp"

using namespace snn;
using snn::testing::random_controls;
using snn::testing::random_layer;

namespace {

NetConfig small_net(int D, int N, double h) {
  NetConfig net;
  net.width = D;
  net.depth = N;
  net.step = h;
  net.input_dim = 1;
  net.label_dim = 1;
  return net;
}

}  // namespace

TEST(TerminalCondition, ZeroAtLossMinimum) {
  const LossSpec loss{2};
  EXPECT_TRUE(terminal_condition(Vector{{0.3, -1.0, 5.0}}, Vector{{0.3, -1.0}}, loss).isZero(0.0));
}

TEST(TerminalCondition, HandEvaluation) {
  const Vector y = terminal_condition(Vector{{0.7, 0.3}}, Vector::Constant(1, 0.5), LossSpec{1});
  EXPECT_NEAR(y[0], 0.4, 1e-15);
  EXPECT_EQ(y[1], 0.0);
}

TEST(TerminalCondition, ScalesWithResidual) {
  const LossSpec loss{1};
  const Vector gamma = Vector::Constant(1, 0.25);
  const Vector a = terminal_condition(Vector{{1.25, 0.0}}, gamma, loss);  // residual 1
  const Vector b = terminal_condition(Vector{{3.25, 0.0}}, gamma, loss);  // residual 3
  EXPECT_EQ(b, 3.0 * a);
}

TEST(TerminalCondition, DimensionMismatch) {
  EXPECT_THROW(terminal_condition(Vector::Zero(2), Vector::Zero(3), LossSpec{2}), ConfigError);
}

TEST(BackwardStep, HomogeneousInAdjoint) {
  RandomStream rng(1);
  const auto u = random_layer(3, rng);
  EXPECT_TRUE(backward_step(Vector::Zero(3), rng.normal_vector(3), u, 1.0).isZero(0.0));
}

TEST(BackwardStep, ZeroJacobianTransportsUnchanged) {
  LayerControl u = LayerControl::zeros(3);
  u.bias.setConstant(0.7);
  const Vector y{{1.0, -2.0, 0.5}};
  EXPECT_EQ(backward_step(y, Vector::Ones(3), u, 1.0), y);
}

TEST(BackwardStep, HandEvaluation) {
  LayerControl u = LayerControl::zeros(1);
  u.weights(0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(backward_step(Vector::Ones(1), Vector::Zero(1), u, 1.0)[0], 1.25);
}

TEST(BackwardStep, UsesJacobianTranspose) {
  LayerControl u = LayerControl::zeros(2);
  u.weights(0, 1) = 4.0;  // f_0 depends on x_1 only
  // J = [[0, 1], [0, 0]]; J^T y moves y_0 into coordinate 1.
  const Vector out = backward_step(Vector{{1.0, 0.0}}, Vector::Zero(2), u, 1.0);
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], 1.0);
}

TEST(ZEstimate, Examples) {
  EXPECT_TRUE(z_estimate(Vector::Ones(2), Vector::Zero(2), 0.5).isZero(0.0));
  EXPECT_DOUBLE_EQ(z_estimate(Vector::Constant(1, 2.0), Vector::Constant(1, 0.5), 1.0)[0], 1.0);
  const Vector y{{1.0, -3.0}}, w{{0.2, 0.7}};
  EXPECT_EQ(z_estimate(2.0 * y, w, 0.25), 2.0 * z_estimate(y, w, 0.25));
}

TEST(SolveAdjoint, ZeroJacobiansTransportTerminalValue) {
  const auto net = small_net(2, 4, 0.5);
  ControlPath c = ControlPath::zeros(net);
  for (auto& l : c.layers) l.sigma.setConstant(0.3);
  RandomStream rng(2);
  const auto path = simulate_path(net, Vector::Constant(1, 0.1), c, rng);
  for (auto scheme : {Scheme::RightPoint, Scheme::LeftPoint}) {
    const auto adj = solve_adjoint(net, path, c, Vector::Constant(1, -1.0), LossSpec{1}, scheme);
    for (int n = 0; n <= net.depth; ++n) EXPECT_EQ(adj.y[n], adj.y[net.depth]);
  }
}

TEST(SolveAdjoint, ZeroResidualGivesZeroPath) {
  const auto net = small_net(3, 3, 1.0);
  RandomStream rng(3);
  const auto c = random_controls(net, rng, 0.1, 0.4);
  const auto path = simulate_path(net, Vector::Constant(1, 0.2), c, rng);
  const Vector gamma = path.states.back().head(1);
  const auto adj = solve_adjoint(net, path, c, gamma, LossSpec{1}, Scheme::RightPoint);
  for (const auto& y : adj.y) EXPECT_TRUE(y.isZero(0.0));
  for (const auto& z : adj.z) EXPECT_TRUE(z.isZero(0.0));
}

TEST(SolveAdjoint, LinearInTerminalResidual) {
  const auto net = small_net(3, 4, 0.5);
  RandomStream rng(4);
  const auto c = random_controls(net, rng, 0.1, 0.4);
  const auto path = simulate_path(net, Vector::Constant(1, 0.2), c, rng);
  const double x = path.states.back()[0];
  // Residuals 2^-3 and 2^-2; both subtractions are exact.
  const Vector g1 = Vector::Constant(1, x - 0.125), g2 = Vector::Constant(1, x - 0.25);
  ASSERT_EQ(x - g1[0], 0.125);
  ASSERT_EQ(x - g2[0], 0.25);
  for (auto scheme : {Scheme::RightPoint, Scheme::LeftPoint}) {
    const auto a = solve_adjoint(net, path, c, g1, LossSpec{1}, scheme);
    const auto b = solve_adjoint(net, path, c, g2, LossSpec{1}, scheme);
    for (int n = 0; n <= net.depth; ++n) EXPECT_EQ(b.y[n], 2.0 * a.y[n]);
    for (int n = 0; n < net.depth; ++n) EXPECT_EQ(b.z[n], 2.0 * a.z[n]);
  }
}

TEST(SolveAdjoint, ZIdentityHolds) {
  const auto net = small_net(3, 5, 0.25);
  RandomStream rng(5);
  const auto c = random_controls(net, rng, 0.1, 0.4);
  const auto path = simulate_path(net, Vector::Constant(1, 0.2), c, rng);
  const auto adj = solve_adjoint(net, path, c, Vector::Constant(1, 3.0), LossSpec{1}, Scheme::RightPoint);
  for (int n = 0; n < net.depth; ++n) {
    const Vector lhs = adj.z[n] * std::sqrt(net.step);
    const Vector rhs = adj.y[n + 1].cwiseProduct(path.noises[n]);
    for (int i = 0; i < net.width; ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-15 * (1.0 + std::abs(rhs[i])));
  }
}

TEST(SolveAdjoint, RightPointUsesNextStateAndClampedControl) {
  const auto net = small_net(2, 3, 0.5);
  RandomStream rng(6);
  const auto c = random_controls(net, rng, 0.2, 0.3);
  const auto path = simulate_path(net, Vector::Constant(1, 0.2), c, rng);
  const Vector gamma = Vector::Constant(1, 2.0);
  const auto adj = solve_adjoint(net, path, c, gamma, LossSpec{1}, Scheme::RightPoint);
  Vector y = terminal_condition(path.states[3], gamma, LossSpec{1});
  y = backward_step(y, path.states[3], c.layers[2], net.step);  // u_N clamped to u_{N-1}
  EXPECT_EQ(adj.y[2], y);
  y = backward_step(y, path.states[2], c.layers[2], net.step);
  EXPECT_EQ(adj.y[1], y);
  y = backward_step(y, path.states[1], c.layers[1], net.step);
  EXPECT_EQ(adj.y[0], y);
}

// Smooth controls u(t) on [0, 1]; halving h must roughly halve the gap
// between the two schemes' Y_0.
TEST(SolveAdjoint, SchemeGapIsFirstOrder) {
  RandomStream rng(7);
  const Matrix W0 = Matrix::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
  const Matrix W1 = Matrix::NullaryExpr(2, 2, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
  const Vector b0{{0.2, -0.4}}, b1{{-0.5, 0.3}};
  auto gap = [&](int N) {
    NetConfig net = small_net(2, N, 1.0 / N);
    ControlPath c;
    for (int n = 0; n < N; ++n) {
      const double t = static_cast<double>(n) / N;
      LayerControl u = LayerControl::zeros(2);
      u.weights = W0 + t * W1;
      u.bias = b0 + t * b1;
      c.layers.push_back(u);
    }
    RandomStream r(0);
    const auto path = simulate_path(net, Vector::Constant(1, 0.3), c, r);
    const Vector gamma = Vector::Constant(1, -1.0);
    const auto right = solve_adjoint(net, path, c, gamma, LossSpec{1}, Scheme::RightPoint);
    const auto left = solve_adjoint(net, path, c, gamma, LossSpec{1}, Scheme::LeftPoint);
    return (right.y[0] - left.y[0]).cwiseAbs().maxCoeff();
  };
  for (int N : {8, 16, 32}) {
    const double ratio = gap(N) / gap(2 * N);
    EXPECT_GE(ratio, 1.5) << "N=" << N;
    EXPECT_LE(ratio, 2.5) << "N=" << N;
  }
}

TEST(Scheme, ParsesNames) {
  EXPECT_EQ(parse_scheme("right"), Scheme::RightPoint);
  EXPECT_EQ(parse_scheme("left-point"), Scheme::LeftPoint);
  EXPECT_THROW(parse_scheme("middle"), ConfigError);
}
