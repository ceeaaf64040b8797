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

#include "risnoma/report.hpp"
#include "risnoma/baselines.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace risnoma::sim
{

namespace
{

constexpr std::array<std::string_view, 6> metric_names{"ergodic-rate", "sum-rate",          "outage",
                                                       "jain",         "outage-theory",     "outage-asymptotic"};

std::size_t scheme_rank(const std::string &s)
{
    const auto parsed = baselines::parse_scheme(s);
    return parsed ? static_cast<std::size_t>(*parsed) : baselines::all_schemes.size();
}

std::size_t user_rank(const std::string &u)
{
    if (u == "all")
        return std::numeric_limits<std::size_t>::max();
    std::size_t cluster = 0, index = 0;
    if (u.size() > 3 && u[0] == 'c' && u[2] == '-')
    {
        cluster = static_cast<std::size_t>(u[1] - '0');
        std::from_chars(u.data() + 3, u.data() + u.size(), index);
    }
    return cluster * 1000000 + index;
}

std::size_t metric_rank(const std::string &m)
{
    const auto parsed = parse_metric(m);
    return parsed ? static_cast<std::size_t>(*parsed) : metric_names.size();
}

double parse_double(std::string_view s, std::size_t line)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("line " + std::to_string(line) + ": not a number: '" + std::string(s) + "'");
    return v;
}

} // namespace

std::string_view metric_name(Metric m) { return metric_names[static_cast<std::size_t>(m)]; }

std::optional<Metric> parse_metric(std::string_view name)
{
    for (std::size_t i = 0; i < metric_names.size(); ++i)
        if (metric_names[i] == name)
            return static_cast<Metric>(i);
    return std::nullopt;
}

std::string user_label(std::size_t m1, std::size_t user)
{
    return user < m1 ? fmt::format("c1-{}", user + 1) : fmt::format("c2-{}", user - m1 + 1);
}

void MetricReport::sort()
{
    auto key = [](const ReportRow &r)
    {
        return std::make_tuple(std::cref(r.scenario), scheme_rank(r.scheme), std::cref(r.scheme), user_rank(r.user),
                               std::cref(r.user), r.p_dbm, metric_rank(r.metric), std::cref(r.metric));
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const ReportRow &a, const ReportRow &b) { return key(a) < key(b); });
}

std::string format_number(double v) { return fmt::format("{}", v); }

void write_csv(const MetricReport &report, std::ostream &out)
{
    out << csv_header << '\n';
    for (const auto &r : report.rows)
        out << r.scenario << ',' << r.scheme << ',' << r.user << ',' << format_number(r.p_dbm) << ',' << r.metric << ','
            << format_number(r.value) << ',' << format_number(r.half_width) << '\n';
}

void emit_report(const MetricReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_csv(report, out);
    out.flush();
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

MetricReport parse_csv(std::istream &in)
{
    MetricReport report;
    std::string line;
    std::size_t n = 0;
    if (!std::getline(in, line) || line != csv_header)
        throw std::runtime_error("line 1: expected header '" + std::string(csv_header) + "'");
    ++n;
    while (std::getline(in, line))
    {
        ++n;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 7)
            throw std::runtime_error("line " + std::to_string(n) + ": expected 7 fields, got " +
                                     std::to_string(f.size()));
        ReportRow r;
        r.scenario = f[0];
        r.scheme = f[1];
        r.user = f[2];
        r.p_dbm = parse_double(f[3], n);
        r.metric = f[4];
        r.value = parse_double(f[5], n);
        r.half_width = parse_double(f[6], n);
        report.rows.push_back(std::move(r));
    }
    return report;
}

} // namespace risnoma::sim
