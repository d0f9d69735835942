// Copyright 2026 The coarsemed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <thread>
#include <vector>

namespace coarsemed {

inline unsigned worker_count() {
  if (const char* env = std::getenv("COARSEMED_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(begin, end, chunk) over contiguous chunks of [0, n). Chunks are
// numbered in index order so callers can reduce per-chunk results
// deterministically.
template <class Fn>
std::size_t parallel_chunks(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return 1;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * step);
    const std::size_t e = std::min(n, b + step);
    pool.emplace_back([&fn, &errors, b, e, w] {
      try {
        fn(b, e, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return workers;
}

// Running maximum of a raw scaled distance together with the witness tuple
// that first attained it. Strict comparison keeps the earliest witness in
// enumeration order.
template <std::size_t N>
struct RawExtremum {
  std::int64_t value = -1;
  std::uint32_t witness[N] = {};

  void offer(std::int64_t v, std::initializer_list<std::uint32_t> w) {
    if (v > value) {
      value = v;
      std::copy(w.begin(), w.end(), witness);
    }
  }
  void merge(const RawExtremum& other) {
    if (other.value > value) *this = other;
  }
};

// Chunked max-reduction: body(begin, end, local) fills a local extremum.
template <std::size_t N, class Body>
RawExtremum<N> parallel_max(std::size_t n, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
  std::vector<RawExtremum<N>> partial(workers);
  parallel_chunks(n, [&](std::size_t b, std::size_t e, std::size_t w) { body(b, e, partial[w]); });
  RawExtremum<N> out;
  for (const auto& p : partial) out.merge(p);
  return out;
}

}  // namespace coarsemed
