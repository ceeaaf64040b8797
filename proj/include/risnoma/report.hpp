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

#ifndef RISNOMA_REPORT_HPP
#define RISNOMA_REPORT_HPP

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace risnoma::sim
{

enum class Metric
{
    ergodic_rate,
    sum_rate,
    outage,
    jain,
    outage_theory,
    outage_asymptotic
};

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);

// "c1-2", "c2-1", or "all" for scheme-wide metrics.
std::string user_label(std::size_t m1, std::size_t user);

struct ReportRow
{
    std::string scenario;
    std::string scheme;
    std::string user;
    double p_dbm = 0.0;
    std::string metric;
    double value = 0.0;
    double half_width = 0.0;

    bool operator==(const ReportRow &) const = default;
};

struct MetricReport
{
    std::vector<ReportRow> rows;

    // (scenario, scheme, user, power, metric) with schemes, users and metrics
    // in their natural order rather than alphabetically.
    void sort();
    bool operator==(const MetricReport &) const = default;
};

inline constexpr std::string_view csv_header = "scenario,scheme,user,p_dbm,metric,value,half_width";

// Shortest decimal that parses back to the same double.
std::string format_number(double v);

void write_csv(const MetricReport &report, std::ostream &out);
// Throws std::runtime_error naming the path on I/O failure.
void emit_report(const MetricReport &report, const std::filesystem::path &path);

// Throws std::runtime_error with the line number on malformed input.
MetricReport parse_csv(std::istream &in);

} // namespace risnoma::sim

#endif
