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

#include "psvgd/parallel.hpp"

#include <algorithm>

#include "psvgd/errors.hpp"

namespace psvgd {

WorkerPool::WorkerPool(std::size_t workers) : workers_(workers) {
  if (workers_ == 0) throw ConfigError("worker count must be at least 1");
  // Worker 0 is the calling thread.
  threads_.reserve(workers_ - 1);
  for (std::size_t id = 1; id < workers_; ++id) {
    threads_.emplace_back([this, id] { worker_loop(id); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::run_block(std::size_t id) {
  const Index k = static_cast<Index>(workers_);
  const Index begin = task_count_ * static_cast<Index>(id) / k;
  const Index end = task_count_ * static_cast<Index>(id + 1) / k;
  if (begin >= end) return;
  try {
    (*task_)(begin, end);
  } catch (...) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!error_) error_ = std::current_exception();
  }
}

void WorkerPool::worker_loop(std::size_t id) {
  std::uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      start_cv_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
    }
    run_block(id);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (--pending_ == 0) done_cv_.notify_one();
    }
  }
}

void WorkerPool::for_each_block(Index count, const BlockFn& fn) {
  if (count <= 0) return;
  if (workers_ == 1) {
    fn(0, count);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    task_ = &fn;
    task_count_ = count;
    error_ = nullptr;
    pending_ = workers_ - 1;
    ++generation_;
  }
  start_cv_.notify_all();
  run_block(0);
  std::exception_ptr error;
  {
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [&] { return pending_ == 0; });
    task_ = nullptr;
    error = error_;
    error_ = nullptr;
  }
  if (error) std::rethrow_exception(error);
}

void WorkerPool::for_each(Index count, const std::function<void(Index)>& fn) {
  for_each_block(count, [&fn](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) fn(i);
  });
}

void parallel_rows(WorkerPool* pool, Index count, const std::function<void(Index)>& fn) {
  if (pool != nullptr) {
    pool->for_each(count, fn);
    return;
  }
  for (Index i = 0; i < count; ++i) fn(i);
}

}  // namespace psvgd
