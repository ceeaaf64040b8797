// SPDX-License-Identifier: Apache-2.0
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

#ifndef RISNOMA_PARALLEL_HPP
#define RISNOMA_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace risnoma
{

// Monte Carlo run settings shared by every estimator.
struct MonteCarlo
{
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::size_t workers = 1; // 0 selects hardware concurrency
};

// Trials are grouped in fixed-size blocks; the block layout is independent of
// the worker count, which makes every block-ordered reduction bit-identical.
inline constexpr std::size_t trial_block_size = 256;

std::size_t resolve_workers(std::size_t requested);

// Runs body(block_index, begin, end) for every block of [0, n).
// Blocks are claimed dynamically; the first exception is rethrown.
template <class Body>
void for_each_block(std::size_t n, std::size_t workers, Body &&body)
{
    const std::size_t n_blocks = (n + trial_block_size - 1) / trial_block_size;
    workers = std::min(resolve_workers(workers), std::max<std::size_t>(n_blocks, 1));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&]()
    {
        for (std::size_t b = next++; b < n_blocks; b = next++)
        {
            try
            {
                body(b, b * trial_block_size, std::min(n, (b + 1) * trial_block_size));
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = n_blocks;
            }
        }
    };

    if (workers <= 1)
        run();
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run);
    }
    if (failure)
        std::rethrow_exception(failure);
}

// Mean / variance accumulator with a deterministic merge (Chan et al.).
struct RunningStats
{
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningStats &other)
    {
        if (other.count == 0)
            return;
        if (count == 0)
        {
            *this = other;
            return;
        }
        const double n_a = static_cast<double>(count), n_b = static_cast<double>(other.count);
        const double delta = other.mean - mean;
        const double n = n_a + n_b;
        mean += delta * n_b / n;
        m2 += other.m2 + delta * delta * n_a * n_b / n;
        count += other.count;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }

    // 95% normal-approximation half-width of the mean.
    double half_width() const
    {
        return count > 1 ? 1.96 * std::sqrt(variance() / static_cast<double>(count)) : 0.0;
    }
};

} // namespace risnoma

#endif
