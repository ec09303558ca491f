// Copyright 2026 The dirlab Authors
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

#ifndef DIRLAB_PARALLEL_HPP
#define DIRLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dirlab {

// Global worker cap, set once from the CLI --threads flag.
inline std::atomic<int>& thread_cap() {
  static std::atomic<int> cap{0};  // 0 = hardware default
  return cap;
}

inline int effective_threads() {
  int cap = thread_cap().load();
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (cap <= 0) return hw;
  return std::min(cap, hw);
}

// Runs fn(chunk) for chunk in [0, n_chunks). The chunk grid is fixed by the
// caller, independent of the worker count, so per-chunk results (and any
// reduction over them done in chunk order) do not depend on --threads.
template <typename Fn>
void parallel_chunks(std::size_t n_chunks, Fn&& fn) {
  const int workers = std::min<std::size_t>(effective_threads(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        fn(c);
      }
    });
  }
  for (auto& t : pool) t.join();
}

// Ordered reduction: partials[c] = fn(c), then summed left to right.
template <typename Fn>
double parallel_reduce_chunks(std::size_t n_chunks, Fn&& fn) {
  std::vector<double> partials(n_chunks, 0.0);
  parallel_chunks(n_chunks, [&](std::size_t c) { partials[c] = fn(c); });
  double s = 0.0;
  for (double p : partials) s += p;
  return s;
}

}  // namespace dirlab

#endif  // DIRLAB_PARALLEL_HPP
