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

#ifndef RISNOMA_PARTITION_HPP
#define RISNOMA_PARTITION_HPP

#include "risnoma/parallel.hpp"
#include "risnoma/phy_core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace risnoma::partition
{

// (mean)^2 / mean of squares. Throws std::domain_error when every rate is zero.
double jain_index(std::span<const double> rates);

struct SearchBounds
{
    std::size_t n_thr = 1;
    std::size_t step = 1;
    double q = 1.0;       // interference margin factor
    double epsilon = 0.1; // tail probability target
    double r_bar = 0.1;   // ergodic-rate resolution, bits/s/Hz

    void validate(std::size_t n, std::size_t m2) const;
};

// High-SNR probability that an N_thr-element sub-surface is swamped by the
// interference of the remaining N - N_thr elements scaled by q.
double sipc_probability(std::size_t n, std::size_t n_thr, double q);

struct ThresholdResult
{
    std::size_t n_thr = 1;
    double probability = 1.0; // sipc_probability at n_thr
    bool capped = false;      // target not reached before M2 * N_thr hit N
    std::size_t iterations = 0;
};

// Smallest N_thr whose sipc_probability is at most epsilon, scanning upward
// from 1 while M2 * N_thr <= N.
ThresholdResult find_n_thr(std::size_t n, std::size_t m2, double q, double epsilon);

inline constexpr std::uint64_t step_search_seed = 0x5eedb0b;

struct StepResult
{
    std::size_t step = 1;
    std::vector<double> gaps; // rate gap for b = 1, 2, ... as evaluated
    bool capped = false;      // loop stopped at N - M2 * N_thr
    std::size_t iterations = 0;
};

// Interference-limited ergodic rate of a user owning the first k of n
// elements while the rest serve other users, for k = 1..n-1. Unit gains,
// no noise, no BS link.
std::vector<double> interference_limited_rates(std::size_t n, const MonteCarlo &mc);

// Grows b from 1 until the rate gain of N_thr + b over N_thr elements exceeds
// r_bar or b reaches N - M2 * N_thr; returns that b.
StepResult find_step(std::size_t n, std::size_t m2, std::size_t n_thr, double r_bar,
                     const MonteCarlo &mc = {10000, step_search_seed, 1});

// Sizes (N_1, ..., N_M2) summing to n. The first m2 - 1 sizes are drawn from
// {n_thr, n_thr + step, ...} up to n - n_thr (m2 - 1); the last user takes
// the remainder, which must be at least n_thr. With `ordered` the sizes are
// non-increasing. Results are in descending lexicographic order.
std::vector<phy::Partition> enumerate_partitions(std::size_t n, std::size_t m2, std::size_t n_thr, std::size_t step,
                                                 bool ordered = true);

struct PartitionEvaluation
{
    phy::Partition partition;
    std::vector<phy::Estimate> rates; // per C2 user
    double jain = 0.0;
};

struct PartitionSearchResult
{
    phy::Partition best_partition;
    double jain = 0.0;
    std::vector<PartitionEvaluation> per_partition_rates;
    std::size_t candidates_examined = 0;
    std::size_t iterations = 0; // rate evaluations plus fairness evaluations
};

// Jain-maximizing candidate under common random numbers. Ties keep the
// earlier candidate. Throws config_error when candidates is empty.
PartitionSearchResult evaluate_partitions(const phy::SystemConfig &config, std::span<const phy::Partition> candidates,
                                          const MonteCarlo &mc);

// Selects from a precomputed sample table at transmit SNR rho.
PartitionSearchResult select_partition(const phy::C2Samples &samples, double rho);

PartitionSearchResult optimize_partition(const phy::SystemConfig &config, const SearchBounds &bounds,
                                         const MonteCarlo &mc);

} // namespace risnoma::partition

#endif
