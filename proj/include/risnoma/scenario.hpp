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

#ifndef RISNOMA_SCENARIO_HPP
#define RISNOMA_SCENARIO_HPP

#include "risnoma/baselines.hpp"
#include "risnoma/parallel.hpp"
#include "risnoma/partition.hpp"
#include "risnoma/phy_core.hpp"
#include "risnoma/report.hpp"

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risnoma::sim
{

enum class PartitionMode
{
    uniform,
    list,     // system.partition as given
    automatic // threshold, step and fairness search
};

struct Scenario
{
    std::string name = "scenario";
    phy::SystemConfig system;
    PartitionMode partition_mode = PartitionMode::uniform;
    bool auto_power_allocation = true;
    std::vector<double> p_dbm;
    std::vector<baselines::Scheme> schemes{baselines::Scheme::proposed};
    std::vector<Metric> metrics{Metric::ergodic_rate};
    std::vector<double> target_rates{1.0}; // one value for every user, or one per user (C1 first)
    partition::SearchBounds bounds{1, 1, 1.5, 0.1, 0.3};
    std::optional<std::size_t> n_thr_override;
    std::optional<std::size_t> step_override;
    baselines::BenchmarkConfig benchmark;
    MonteCarlo mc;

    double target_rate(std::size_t user) const;
    // Throws config_error.
    void validate() const;
};

// Reference deployments: "table1-row1" (M1 = 0, M2 = 2), "table1-row2" (M1 = M2 = 1),
// "table1-row3" (M1 = M2 = 2). Applies distances and cluster sizes.
void apply_preset(Scenario &s, std::string_view preset);
std::vector<std::string> preset_names();

// INI text with [scenario], [system], [users], [sweep], [metrics] and
// [partitioning] sections. Unknown sections or keys are errors. Throws
// config_error with the offending line or key in the message.
Scenario parse_scenario(std::istream &in, const std::string &source = "<input>");
Scenario load_scenario(const std::filesystem::path &path);

// Command-line overrides shared by every verb.
struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> workers;
    std::optional<bool> correlated;
    std::optional<unsigned> phase_levels; // 0 = continuous
    std::optional<double> kappa;
};

void apply_overrides(Scenario &s, const Overrides &o);

// Monte Carlo sweep of every requested scheme and metric.
MetricReport run_scenario(const Scenario &scenario);

struct PowerPointSearch
{
    double p_dbm = 0.0;
    partition::PartitionSearchResult result;
};

struct PartitioningReport
{
    partition::ThresholdResult threshold;
    partition::StepResult step;
    std::size_t n_thr = 0;   // used bound (override or search)
    std::size_t b = 0;
    std::size_t feasible = 0; // |S|
    std::size_t unrestricted = 0; // compositions with n_thr = b = 1 and no ordering
    std::vector<PowerPointSearch> points;
};

PartitioningReport run_partitioning(const Scenario &scenario);

// Closed-form and simulated outage of the C2 users.
MetricReport run_outage_table(const Scenario &scenario);

void write_partitioning_csv(const Scenario &scenario, const PartitioningReport &report, std::ostream &out);

} // namespace risnoma::sim

#endif
