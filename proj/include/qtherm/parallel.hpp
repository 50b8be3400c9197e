// Copyright 2026 The qtherm Authors
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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace qtherm {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. If any call throws,
/// the exception of the smallest failing index is rethrown after all threads
/// finish, so error reports do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::optional<std::pair<std::size_t, std::exception_ptr>> failure;
  std::mutex failure_mutex;
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure || i < failure->first) failure.emplace(i, std::current_exception());
    }
  };
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
  }
  if (failure) std::rethrow_exception(failure->second);
}

/// Maps make(i) over [0, n) in parallel chunks and folds each result with
/// fold(i, result) strictly in index order. Memory is bounded by the chunk.
template <typename Make, typename Fold>
void ordered_map_fold(std::size_t n, unsigned workers, std::size_t chunk,
                      Make&& make, Fold&& fold) {
  using Result = decltype(make(std::size_t{}));
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<std::optional<Result>> buffer;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t count = std::min(chunk, n - start);
    buffer.assign(count, std::nullopt);
    parallel_for(count, workers,
                 [&](std::size_t j) { buffer[j].emplace(make(start + j)); });
    for (std::size_t j = 0; j < count; ++j) fold(start + j, std::move(*buffer[j]));
  }
}

}  // namespace qtherm
