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

#include "snn/dataset.hpp"
#include "snn/dynamics.hpp"
#include "snn/random.hpp"

namespace snn {

// Affine maps between data units and network units. Inputs are standardized;
// labels are standardized and shifted by `label_offset` so targets sit inside
// the range the positive sigmoid increments can reach. The identity
// normalizer leaves data untouched.
struct Normalizer {
  Vector input_mean;
  Vector input_scale;
  Vector label_mean;
  Vector label_scale;
  double label_offset = 0.0;

  static Normalizer identity(int input_dim, int label_dim);
  // Fits moments on `data`; `label_offset` is added after standardization.
  static Normalizer standardize(const Dataset& data, double label_offset);

  Vector input_to_network(const Vector& x) const;
  Vector label_to_network(const Vector& y) const;
  Vector readout_to_label(const Vector& r) const;
  // Converts a width (difference of two readouts) of coordinate i to label units.
  double width_to_label(double width, int i = 0) const { return width * label_scale[i]; }

  Dataset apply(const Dataset& data) const;
  bool operator==(const Normalizer&) const = default;
};

// A trained SNN together with the data transform it was trained under.
struct Model {
  NetConfig net;
  ControlPath controls;
  Normalizer normalizer;

  // S readouts for one raw input, in label units; noise from `rng`.
  std::vector<Vector> sample_outputs(const Vector& raw_input, std::size_t S, RandomStream& rng) const;
};

}  // namespace snn
