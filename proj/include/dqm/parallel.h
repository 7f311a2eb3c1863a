//
// Copyright 2026 The dqmetrics Authors
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
//

#ifndef DQM_PARALLEL_H_
#define DQM_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace dqm {

// Number of workers to use for `jobs`; 0 means hardware concurrency.
inline size_t ResolveJobs(size_t jobs) {
  if (jobs > 0) return jobs;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) on a bounded pool. Callers write results into
// pre-sized slots indexed by i, so output never depends on scheduling.
template <typename Fn>
void ParallelFor(size_t n, size_t jobs, Fn&& fn) {
  const size_t workers = std::min(ResolveJobs(jobs), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace dqm

#endif  // DQM_PARALLEL_H_
