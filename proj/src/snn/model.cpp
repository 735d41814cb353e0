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

#include "snn/model.hpp"

#include <cmath>

#include "snn/errors.hpp"

namespace snn {
namespace {

void moments(const std::vector<Vector>& rows, Vector& mean, Vector& scale) {
  const auto dim = rows.front().size();
  mean = Vector::Zero(dim);
  for (const auto& r : rows) mean += r;
  mean /= static_cast<double>(rows.size());
  Vector var = Vector::Zero(dim);
  for (const auto& r : rows) var.array() += (r - mean).array().square();
  var /= static_cast<double>(rows.size());
  scale = var.cwiseSqrt();
  // Constant columns are left unscaled.
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(scale[i] > 0.0)) scale[i] = 1.0;
  }
}

}  // namespace

Normalizer Normalizer::identity(int input_dim, int label_dim) {
  return {Vector::Zero(input_dim), Vector::Ones(input_dim), Vector::Zero(label_dim), Vector::Ones(label_dim), 0.0};
}

Normalizer Normalizer::standardize(const Dataset& data, double label_offset) {
  data.validate();
  std::vector<Vector> inputs, labels;
  inputs.reserve(data.size());
  labels.reserve(data.size());
  for (const auto& s : data.samples) {
    inputs.push_back(s.input);
    labels.push_back(s.label);
  }
  Normalizer n;
  moments(inputs, n.input_mean, n.input_scale);
  moments(labels, n.label_mean, n.label_scale);
  n.label_offset = label_offset;
  return n;
}

Vector Normalizer::input_to_network(const Vector& x) const {
  if (x.size() != input_mean.size()) throw ConfigError("input dimension does not match normalizer");
  return (x - input_mean).cwiseQuotient(input_scale);
}

Vector Normalizer::label_to_network(const Vector& y) const {
  if (y.size() != label_mean.size()) throw ConfigError("label dimension does not match normalizer");
  return (y - label_mean).cwiseQuotient(label_scale).array() + label_offset;
}

Vector Normalizer::readout_to_label(const Vector& r) const {
  if (r.size() != label_mean.size()) throw ConfigError("readout dimension does not match normalizer");
  return (r.array() - label_offset).matrix().cwiseProduct(label_scale) + label_mean;
}

Dataset Normalizer::apply(const Dataset& data) const {
  Dataset out = data;
  for (auto& s : out.samples) {
    s.input = input_to_network(s.input);
    s.label = label_to_network(s.label);
  }
  return out;
}

std::vector<Vector> Model::sample_outputs(const Vector& raw_input, std::size_t S, RandomStream& rng) const {
  const Vector x0 = normalizer.input_to_network(raw_input);
  std::vector<Vector> outs;
  outs.reserve(S);
  for (std::size_t s = 0; s < S; ++s) {
    const auto path = simulate_path(net, x0, controls, rng);
    outs.push_back(normalizer.readout_to_label(path.states.back().head(net.label_dim)));
  }
  return outs;
}

}  // namespace snn
