// Copyright 2026 The psvgd Authors. All Rights Reserved.
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

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "psvgd/types.hpp"

namespace psvgd {

// Fixed set of K workers executing one data-parallel phase at a time.
//
// `for_each_block` splits [0, count) into K contiguous blocks, hands block k to
// worker k and returns only after every worker finished: the return is the
// barrier, and whatever the workers wrote into disjoint row ranges is then
// visible to the caller as a complete (all-gathered) table. Any reduction
// across rows must happen after the barrier in a fixed order, which keeps
// results independent of K.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return workers_; }

  using BlockFn = std::function<void(Index begin, Index end)>;

  // Rethrows the first exception raised by any worker.
  void for_each_block(Index count, const BlockFn& fn);

  // Convenience wrapper calling fn(i) for every row.
  void for_each(Index count, const std::function<void(Index)>& fn);

 private:
  void worker_loop(std::size_t id);
  void run_block(std::size_t id);

  std::size_t workers_;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;

  const BlockFn* task_ = nullptr;
  Index task_count_ = 0;
  std::exception_ptr error_;
};

// Runs on `pool` when given, inline otherwise.
void parallel_rows(WorkerPool* pool, Index count, const std::function<void(Index)>& fn);

}  // namespace psvgd
