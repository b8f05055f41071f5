// SPDX-License-Identifier: Apache-2.0
//
// digeo: simulation and direct geolocation of GNSS interference sources
// Copyright (C) 2026 The digeo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Pluggable correlation backends. A backend stages one snapshot's capture
// pair into backend-local storage (the "load" step), then evaluates batches
// of candidate offsets (the "compute" step) and hands back host-resident
// values (the "offload" step). Grid accumulation and thresholding always
// stay on the host side.
//
// Every backend evaluates each candidate with the same fixed-order scalar
// kernel, so results are bit-identical across runs, batch partitions, and
// worker counts.

#pragma once

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "digeo/capture.hpp"
#include "digeo/correlate.hpp"

namespace digeo {

struct BackendDescriptor {
    std::string name;
    std::string kind;  ///< "serial-reference" | "parallel-batched"
    unsigned workers = 1;
};

/// Partition of a flattened candidate range into contiguous batches under a
/// memory budget.
struct BatchPlan {
    std::size_t n_points = 0;
    std::size_t batch_size = 0;
    std::uint64_t memory_budget_bytes = 0;

    std::size_t batch_count() const { return (n_points + batch_size - 1) / batch_size; }
    std::pair<std::size_t, std::size_t> batch_range(std::size_t batch) const {
        const std::size_t begin = batch * batch_size;
        return {begin, std::min(begin + batch_size, n_points)};
    }
};

inline constexpr std::uint64_t default_memory_budget_bytes = 512ull << 20;

/// Conservative working-set estimate: per-batch offsets and outputs plus the
/// two staged captures.
inline std::uint64_t estimate_working_set_bytes(std::size_t batch_size,
                                                std::uint64_t capture_bytes_total) {
    return static_cast<std::uint64_t>(batch_size) * (sizeof(PairOffsets) + sizeof(double)) +
           capture_bytes_total;
}

inline BatchPlan plan_batches(std::size_t n_points, std::size_t batch_size,
                              std::uint64_t memory_budget_bytes = default_memory_budget_bytes,
                              std::uint64_t capture_bytes_total = 0) {
    if (n_points < 1) throw std::invalid_argument("plan_batches: n_points < 1");
    if (batch_size < 1) throw std::invalid_argument("plan_batches: batch_size < 1");
    if (capture_bytes_total > memory_budget_bytes)
        throw std::invalid_argument(
            "plan_batches: staged captures (" + std::to_string(capture_bytes_total) +
            " bytes) exceed the memory budget of " + std::to_string(memory_budget_bytes));
    const std::uint64_t working_set = estimate_working_set_bytes(batch_size, capture_bytes_total);
    if (working_set > memory_budget_bytes)
        throw std::invalid_argument(
            "plan_batches: batch working set (" + std::to_string(working_set) +
            " bytes at batch_size " + std::to_string(batch_size) +
            ") exceeds the memory budget of " + std::to_string(memory_budget_bytes));
    return {n_points, batch_size, memory_budget_bytes};
}

namespace detail {

/// Fixed-size worker pool executing contiguous chunks of an index range.
/// Output determinism comes from chunk bodies writing disjoint ranges.
class TaskPool {
public:
    explicit TaskPool(unsigned workers) {
        const unsigned count = workers ? workers : 1;
        threads_.reserve(count);
        for (unsigned i = 0; i < count; ++i)
            threads_.emplace_back([this] { worker_loop(); });
    }

    TaskPool(const TaskPool&) = delete;
    TaskPool& operator=(const TaskPool&) = delete;

    ~TaskPool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    unsigned worker_count() const { return static_cast<unsigned>(threads_.size()); }

    /// Runs body(begin, end) over contiguous chunks of [begin, end); the
    /// calling thread executes the last chunk itself.
    void parallel_for(std::size_t begin, std::size_t end,
                      const std::function<void(std::size_t, std::size_t)>& body) {
        const std::size_t total = end - begin;
        const std::size_t chunks = std::min<std::size_t>(worker_count() + 1, total);
        if (total == 0) return;
        if (chunks <= 1) {
            body(begin, end);
            return;
        }

        std::mutex done_mutex;
        std::condition_variable done_cv;
        std::size_t remaining = chunks - 1;

        const std::size_t chunk_len = total / chunks;
        const std::size_t leftover = total % chunks;
        std::size_t cursor = begin;
        for (std::size_t c = 0; c + 1 < chunks; ++c) {
            const std::size_t len = chunk_len + (c < leftover ? 1 : 0);
            const std::size_t c_begin = cursor;
            const std::size_t c_end = cursor + len;
            cursor = c_end;
            submit([&, c_begin, c_end] {
                body(c_begin, c_end);
                {
                    std::lock_guard lock(done_mutex);
                    --remaining;
                }
                done_cv.notify_one();
            });
        }
        body(cursor, end);

        std::unique_lock lock(done_mutex);
        done_cv.wait(lock, [&] { return remaining == 0; });
    }

private:
    void submit(std::function<void()> task) {
        {
            std::lock_guard lock(mutex_);
            tasks_.push(std::move(task));
        }
        cv_.notify_one();
    }

    void worker_loop() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [&] { return stop_ || !tasks_.empty(); });
                if (stop_ && tasks_.empty()) return;
                task = std::move(tasks_.front());
                tasks_.pop();
            }
            task();
        }
    }

    std::vector<std::thread> threads_;
    std::queue<std::function<void()>> tasks_;
    std::mutex mutex_;
    std::condition_variable cv_;
    bool stop_ = false;
};

}  // namespace detail

/// One snapshot's captures staged into backend-local storage. Sessions are
/// independent, so distinct snapshots may be correlated concurrently by
/// creating one session each.
class CorrelationSession {
public:
    virtual ~CorrelationSession() = default;

    /// Correlation values for a batch of candidate offsets, one per entry.
    virtual void correlate_batch(std::span<const PairOffsets> batch,
                                 std::span<double> out) = 0;

    std::vector<double> correlate_batch(std::span<const PairOffsets> batch) {
        std::vector<double> out(batch.size());
        correlate_batch(batch, out);
        return out;
    }
};

class CorrelationBackend {
public:
    virtual ~CorrelationBackend() = default;
    virtual const BackendDescriptor& descriptor() const = 0;
    virtual std::unique_ptr<CorrelationSession> stage(const BasebandCapture& y1,
                                                      const BasebandCapture& y2) const = 0;
};

namespace detail {

inline void check_pair(const BasebandCapture& y1, const BasebandCapture& y2) {
    y1.validate();
    y2.validate();
    if (y1.sample_rate_hz != y2.sample_rate_hz)
        throw std::invalid_argument("backend stage: sample rates differ");
    if (y1.size() != y2.size())
        throw std::invalid_argument("backend stage: sample counts differ");
}

class SerialSession final : public CorrelationSession {
public:
    SerialSession(const BasebandCapture& y1, const BasebandCapture& y2)
        : y1_(y1.samples), y2_(y2.samples), sample_rate_hz_(y1.sample_rate_hz) {}

    void correlate_batch(std::span<const PairOffsets> batch, std::span<double> out) override {
        if (batch.empty()) throw std::invalid_argument("correlate_batch: empty batch");
        if (out.size() != batch.size())
            throw std::invalid_argument("correlate_batch: output size mismatch");
        for (std::size_t i = 0; i < batch.size(); ++i)
            out[i] = correlate_kernel(y1_, y2_, batch[i].tdoa_samples, batch[i].fdoa_hz,
                                      sample_rate_hz_);
    }

private:
    std::vector<cplx> y1_, y2_;
    double sample_rate_hz_;
};

class ParallelSession final : public CorrelationSession {
public:
    ParallelSession(const BasebandCapture& y1, const BasebandCapture& y2, TaskPool& pool)
        : y1_(y1.samples), y2_(y2.samples), sample_rate_hz_(y1.sample_rate_hz), pool_(pool) {}

    void correlate_batch(std::span<const PairOffsets> batch, std::span<double> out) override {
        if (batch.empty()) throw std::invalid_argument("correlate_batch: empty batch");
        if (out.size() != batch.size())
            throw std::invalid_argument("correlate_batch: output size mismatch");
        pool_.parallel_for(0, batch.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                out[i] = correlate_kernel(y1_, y2_, batch[i].tdoa_samples, batch[i].fdoa_hz,
                                          sample_rate_hz_);
        });
    }

private:
    std::vector<cplx> y1_, y2_;
    double sample_rate_hz_;
    TaskPool& pool_;
};

}  // namespace detail

/// Reference backend: one thread, plain loop.
class SerialBackend final : public CorrelationBackend {
public:
    SerialBackend() : descriptor_{"serial", "serial-reference", 1} {}

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    std::unique_ptr<CorrelationSession> stage(const BasebandCapture& y1,
                                              const BasebandCapture& y2) const override {
        detail::check_pair(y1, y2);
        return std::make_unique<detail::SerialSession>(y1, y2);
    }

private:
    BackendDescriptor descriptor_;
};

/// Batched data-parallel backend: candidates of each batch are spread over a
/// fixed worker pool.
class ParallelBatchedBackend final : public CorrelationBackend {
public:
    explicit ParallelBatchedBackend(unsigned workers = 0)
        : pool_(workers ? workers : std::max(1u, std::thread::hardware_concurrency())),
          descriptor_{"parallel", "parallel-batched", pool_.worker_count()} {}

    const BackendDescriptor& descriptor() const override { return descriptor_; }

    std::unique_ptr<CorrelationSession> stage(const BasebandCapture& y1,
                                              const BasebandCapture& y2) const override {
        detail::check_pair(y1, y2);
        return std::make_unique<detail::ParallelSession>(y1, y2, pool_);
    }

private:
    mutable detail::TaskPool pool_;
    BackendDescriptor descriptor_;
};

inline std::unique_ptr<CorrelationBackend> make_backend(const std::string& name,
                                                        unsigned workers = 0) {
    if (name == "serial") return std::make_unique<SerialBackend>();
    if (name == "parallel") return std::make_unique<ParallelBatchedBackend>(workers);
    throw std::invalid_argument("make_backend: unknown backend '" + name +
                                "' (expected serial | parallel)");
}

/// One-shot convenience: stage the pair, evaluate a single batch.
inline std::vector<double> correlate_batch(const CorrelationBackend& backend,
                                           std::span<const PairOffsets> batch,
                                           const BasebandCapture& y1,
                                           const BasebandCapture& y2) {
    return backend.stage(y1, y2)->correlate_batch(batch);
}

}  // namespace digeo
