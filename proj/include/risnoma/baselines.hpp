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

#ifndef RISNOMA_BASELINES_HPP
#define RISNOMA_BASELINES_HPP

#include "risnoma/parallel.hpp"
#include "risnoma/phy_core.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace risnoma::baselines
{

enum class Scheme
{
    proposed,
    tdma,
    ris_tdma,
    pd_noma,
    ris_noma
};

inline constexpr std::array<Scheme, 5> all_schemes{Scheme::proposed, Scheme::tdma, Scheme::ris_tdma, Scheme::pd_noma,
                                                   Scheme::ris_noma};

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

enum class Objective
{
    jain,
    min_rate
};

std::string_view objective_name(Objective o);
std::optional<Objective> parse_objective(std::string_view name);

struct BenchmarkConfig
{
    Scheme scheme = Scheme::tdma;
    std::size_t grid_points = 101; // per simplex dimension
    Objective objective = Objective::jain;

    void validate() const;
};

// Jain index or minimum of the rates; 0 when every rate is zero.
double fairness(std::span<const double> rates, Objective objective);

// Grid search over the probability simplex of dimension m with spacing
// 1 / (grid_points - 1). Exhaustive for m <= 2; for larger m a coarse grid
// is refined around its best point. Returns the first maximizer found.
std::vector<double> simplex_search(std::size_t m, std::size_t grid_points,
                                   const std::function<double(std::span<const double>)> &objective,
                                   std::size_t *evaluations = nullptr);

// Per-block rates. gains are effective channel power gains.
std::vector<double> tdma_rates(std::span<const double> gains, std::span<const double> time_shares, double rho);
std::vector<double> pd_noma_rates(std::span<const double> gains, std::span<const double> allocation, double rho);

// Effective power gain of `user` when the whole surface coherently aligns the
// cascade of `target` with target's direct link. Phase quantization and
// errors follow the realization.
double aligned_gain(const phy::Realization &r, const phy::Environment &env, const phy::SystemConfig &config,
                    std::size_t target, std::size_t user);

// Weakest C2 user by mean received power over the direct link plus the full surface.
std::size_t ris_noma_target(const phy::Environment &env, const phy::SystemConfig &config);

// trials x users matrix of per-block gains.
struct GainTable
{
    std::size_t trials = 0;
    std::size_t users = 0;
    std::vector<double> values; // [trial * users + user]

    double at(std::size_t trial, std::size_t user) const { return values[trial * users + user]; }
    std::span<const double> row(std::size_t trial) const
    {
        return std::span<const double>(values).subspan(trial * users, users);
    }
    GainTable columns(std::size_t begin, std::size_t end) const;
};

// Users are ordered C1 first, then C2.
struct GainSamples
{
    GainTable direct;   // |v|^2
    GainTable ris_tdma; // C2 users with the surface aligned to them, C1 direct
    GainTable ris_noma; // surface aligned to the weakest C2 user, C1 direct
    std::size_t ris_noma_target = 0;
};

// Uses the same coherence blocks as phy::sample_c2 for the same seed.
GainSamples sample_gains(const phy::SystemConfig &config, const phy::Environment &env, const MonteCarlo &mc);

struct Allocation
{
    std::vector<double> fractions;    // time shares or power fractions
    std::vector<phy::Estimate> rates; // ergodic rates at the chosen fractions
    double objective = 0.0;
    std::size_t evaluations = 0;
};

Allocation best_tdma(const GainTable &gains, double rho, const BenchmarkConfig &cfg);
Allocation best_noma(const GainTable &gains, double rho, const BenchmarkConfig &cfg);

// Ergodic rates of one benchmark scheme (not `proposed`).
Allocation run_benchmark(const GainSamples &samples, double rho, const BenchmarkConfig &cfg);

} // namespace risnoma::baselines

#endif
