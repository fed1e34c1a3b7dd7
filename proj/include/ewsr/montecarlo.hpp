// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
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

#ifndef EWSR_MONTECARLO_HPP
#define EWSR_MONTECARLO_HPP

#include "ewsr/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace ewsr
{

struct MonteCarloEstimate
{
    double value = 0.0;
    double std_error = 0.0; // sample standard deviation / sqrt(n_samples)
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::optional<double> rho; // linear SNR, when the estimate is a function of it
};

struct McOptions
{
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0; // 0: hardware concurrency
};

// Running mean / second central moment (Welford), mergeable (Chan et al.).
struct Moments
{
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept
    {
        count += 1.0;
        const double delta = x - mean;
        mean += delta / count;
        m2 += delta * (x - mean);
    }

    void merge(const Moments &o) noexcept
    {
        if (o.count == 0.0)
            return;
        if (count == 0.0)
        {
            *this = o;
            return;
        }
        const double n = count + o.count;
        const double delta = o.mean - mean;
        mean += delta * (o.count / n);
        m2 += o.m2 + delta * delta * (count * o.count / n);
        count = n;
    }

    double variance() const noexcept { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
    double std_error() const noexcept { return count > 0.0 ? std::sqrt(variance() / count) : 0.0; }
};

inline unsigned resolve_workers(unsigned requested) noexcept
{
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Fixed partition of the sample index range; independent of the worker count.
inline constexpr std::size_t mc_block_size = 2048;

// Runs sample(index, out) for index in [0, n_samples) where `out` receives
// n_outputs values, and returns the moments of each output. Samples are grouped
// into fixed blocks whose partial moments are merged in block order, so the
// result is bit-identical for any worker count.
template <class SampleFn>
std::vector<Moments> run_monte_carlo(std::size_t n_samples, std::size_t n_outputs, unsigned workers, SampleFn &&sample)
{
    const std::size_t n_blocks = (n_samples + mc_block_size - 1) / mc_block_size;
    std::vector<Moments> partial(n_blocks * n_outputs);

    auto run_block = [&](std::size_t b, std::vector<double> &buf) {
        const std::size_t lo = b * mc_block_size;
        const std::size_t hi = std::min(n_samples, lo + mc_block_size);
        Moments *acc = partial.data() + b * n_outputs;
        for (std::size_t i = lo; i < hi; ++i)
        {
            sample(i, std::span<double>(buf));
            for (std::size_t j = 0; j < n_outputs; ++j)
                acc[j].add(buf[j]);
        }
    };

    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n_blocks, 1)));
    if (n_threads <= 1)
    {
        std::vector<double> buf(n_outputs);
        for (std::size_t b = 0; b < n_blocks; ++b)
            run_block(b, buf);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                std::vector<double> buf(n_outputs);
                try
                {
                    for (std::size_t b = next++; b < n_blocks; b = next++)
                        run_block(b, buf);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = n_blocks;
                }
            });
        for (auto &th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    std::vector<Moments> total(n_outputs);
    for (std::size_t b = 0; b < n_blocks; ++b)
        for (std::size_t j = 0; j < n_outputs; ++j)
            total[j].merge(partial[b * n_outputs + j]);
    return total;
}

inline MonteCarloEstimate to_estimate(const Moments &m, std::uint64_t seed, std::optional<double> rho = std::nullopt)
{
    return {m.mean, m.std_error(), static_cast<std::size_t>(m.count), seed, rho};
}

} // namespace ewsr

#endif // EWSR_MONTECARLO_HPP
