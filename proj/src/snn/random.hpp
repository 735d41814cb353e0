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

#include <array>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace snn {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A block is a
// pure function of (key, counter), so any draw can be replayed from its
// coordinates without stepping through the sequence.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

struct StreamState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t position = 0;

  bool operator==(const StreamState&) const = default;
};

// A random stream is addressed by (seed, stream id); position counts consumed
// blocks. Counter layout: words 0-1 = position, words 2-3 = stream id.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t position = 0);
  explicit RandomStream(const StreamState& state)
      : RandomStream(state.seed, state.stream, state.position) {}

  PhiloxCounter next_block();

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

  // Box-Muller pairs; one block per two values.
  void fill_normal(std::span<double> out);
  Eigen::VectorXd normal_vector(Eigen::Index n);

  // Independent child stream; depends only on (seed, stream, id).
  RandomStream substream(std::uint64_t id) const;

  StreamState state() const { return {seed_, stream_, position_}; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_;
  PhiloxKey key_;
};

}  // namespace snn
