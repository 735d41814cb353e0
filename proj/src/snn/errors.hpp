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
#include <stdexcept>
#include <string>

namespace snn {

// Error classes map one-to-one onto the C API status codes and CLI exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

// Inconsistent dimensions, invalid hyperparameters, unknown task names.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config-error"; }
};

// Malformed or inconsistent files; filesystem failures.
class DataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "data-error"; }
};

// A forward or backward recursion produced a non-finite value.
class PropagationError : public Error {
 public:
  explicit PropagationError(const std::string& what, std::int64_t iteration = -1)
      : Error(iteration >= 0 ? what + " (iteration " + std::to_string(iteration) + ")" : what),
        iteration_(iteration) {}
  const char* kind() const noexcept override { return "propagation-error"; }
  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace snn
