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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace snn {

// Work is cut into fixed-size chunks independent of the worker count; each
// chunk is reduced sequentially and chunk results are combined in index
// order, so the result is bitwise identical for any number of workers.
inline constexpr std::size_t kReductionChunk = 64;

template <class T, class Term, class Add>
T ordered_reduce(std::size_t count, int workers, const T& zero, Term term, Add add) {
  const std::size_t chunks = (count + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(chunks, zero);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        T acc = zero;
        const std::size_t end = std::min(count, (c + 1) * kReductionChunk);
        for (std::size_t i = c * kReductionChunk; i < end; ++i) add(acc, term(i));
        partial[c] = std::move(acc);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = chunks;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  T total = zero;
  for (auto& p : partial) add(total, std::move(p));
  return total;
}

// Maps `fn` over [0, count) into an ordered vector using up to `workers` threads.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, int workers, Fn fn) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace snn
