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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "snn/dynamics.hpp"

namespace snn {

struct Sample {
  Vector input;
  Vector label;
};

// Labeled samples (x0, gamma) plus the generator that produced them.
struct Dataset {
  std::string task;
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
  int input_dim = 0;
  int label_dim = 0;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  // Throws DataError if samples disagree on dimensions or the set is empty.
  void validate() const;
};

bool operator==(const Dataset& a, const Dataset& b);

// JSON document: {"header": {...}, "records": [[inputs..., labels...], ...]}.
// Numbers are written with round-trip precision.
void write_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);
std::string dataset_to_string(const Dataset& data);
Dataset dataset_from_string(const std::string& text);

}  // namespace snn
