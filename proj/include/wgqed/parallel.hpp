// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace wgqed {

enum class Execution { serial, parallel };

/// Evaluates fn(i) for i in [0, n) and returns the results in index order.
/// The parallel branch writes each result to its own slot, so the output is
/// identical to the serial branch regardless of the number of threads.
template <class Fn>
auto parallel_map(std::size_t n, Execution exec, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(n);
  if (exec == Execution::serial || n < 2 || omp_get_max_threads() == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }

  std::exception_ptr failure;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(wgqed_parallel_map_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Pairwise summation in fixed index order.
template <class T>
T pairwise_sum(std::span<const T> values) {
  if (values.empty()) return T{};
  if (values.size() <= 8) {
    T acc = values[0];
    for (std::size_t i = 1; i < values.size(); ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <class T>
T pairwise_mean(std::span<const T> values) {
  return pairwise_sum(values) / static_cast<double>(values.size());
}

/// Caps the worker count used by Execution::parallel. n <= 0 keeps the default.
inline void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace wgqed
