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

#include "risnoma/scenario.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/outage.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace risnoma::sim
{

namespace
{

using boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>> &allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"scenario", {"name", "preset", "trials", "seed", "workers"}},
        {"system",
         {"n", "m1", "m2", "noise_dbm", "carrier_ghz", "phase_bits", "kappa", "correlated", "element_spacing", "n_h",
          "psk_order", "partition", "power_allocation", "bs_ris_distance", "los_indexing", "elevation_deg",
          "azimuth_deg"}},
        {"users", {"c1_bs_distance", "c1_ris_distance", "c2_bs_distance", "c2_ris_distance"}},
        {"sweep", {"p_dbm", "p_start", "p_stop", "p_step"}},
        {"metrics", {"schemes", "metrics", "target_rate", "objective", "grid_points"}},
        {"partitioning", {"q", "epsilon", "r_bar", "n_thr", "step"}},
    };
    return keys;
}

[[noreturn]] void bad(const std::string &field, const std::string &msg, const std::string &value)
{
    throw config_error(fmt::format("{}: {} (got '{}')", field, msg, value));
}

std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        boost::algorithm::trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double to_double(const std::string &field, const std::string &s)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        bad(field, "expected a finite number", s);
    return v;
}

std::uint64_t to_uint(const std::string &field, const std::string &s)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        bad(field, "expected a non-negative integer", s);
    return v;
}

bool to_bool(const std::string &field, const std::string &s)
{
    if (s == "on" || s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "off" || s == "false" || s == "0" || s == "no")
        return false;
    bad(field, "expected on/off", s);
}

std::vector<double> to_doubles(const std::string &field, const std::string &s)
{
    std::vector<double> out;
    for (const auto &item : split_list(s))
        out.push_back(to_double(field, item));
    if (out.empty())
        bad(field, "expected a comma-separated list of numbers", s);
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    long double r = 1.0L;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return static_cast<std::size_t>(std::llround(r));
}

bool wants(const Scenario &s, Metric m) { return std::find(s.metrics.begin(), s.metrics.end(), m) != s.metrics.end(); }

struct Candidates
{
    std::vector<phy::Partition> partitions;
    std::optional<partition::ThresholdResult> threshold;
    std::optional<partition::StepResult> step;
    std::size_t n_thr = 0;
    std::size_t b = 0;
};

Candidates resolve_candidates(const Scenario &s, bool force_search)
{
    const auto &sys = s.system;
    Candidates c;
    if (!force_search && s.partition_mode == PartitionMode::uniform)
    {
        c.partitions.push_back(phy::Partition::uniform(sys.n, sys.m2));
        return c;
    }
    if (!force_search && s.partition_mode == PartitionMode::list)
    {
        c.partitions.push_back(sys.partition);
        return c;
    }
    if (sys.m2 < 2)
    {
        if (force_search)
            throw config_error("partitioning needs at least two C2 users");
        c.partitions.push_back(phy::Partition{{sys.n}});
        return c;
    }

    c.threshold = partition::find_n_thr(sys.n, sys.m2, s.bounds.q, s.bounds.epsilon);
    c.n_thr = s.n_thr_override.value_or(c.threshold->n_thr);
    if (sys.m2 * c.n_thr > sys.n)
        throw config_error(fmt::format("partitioning.n_thr = {} leaves no room for {} users on {} elements", c.n_thr,
                                       sys.m2, sys.n));
    c.step = partition::find_step(sys.n, sys.m2, c.n_thr, s.bounds.r_bar,
                                  MonteCarlo{10000, partition::step_search_seed, s.mc.workers});
    c.b = s.step_override.value_or(c.step->step);
    c.partitions = partition::enumerate_partitions(sys.n, sys.m2, c.n_thr, c.b);
    spdlog::info("partition search: n_thr = {}, b = {}, {} candidates", c.n_thr, c.b, c.partitions.size());
    if (c.partitions.empty())
        throw config_error(fmt::format("partition bounds n_thr = {}, b = {} admit no feasible partition", c.n_thr, c.b));
    return c;
}

// Per-trial rates of one scheme at fixed allocations.
struct SchemeRates
{
    std::vector<phy::Estimate> ergodic;
    RunningStats sum;
    std::vector<std::size_t> outages;
};

SchemeRates accumulate(std::size_t trials, std::size_t users, const std::function<void(std::size_t, std::vector<double> &)> &rates,
                       const Scenario &s)
{
    std::vector<RunningStats> stats(users);
    SchemeRates out;
    out.outages.assign(users, 0);
    std::vector<double> r(users);
    for (std::size_t t = 0; t < trials; ++t)
    {
        rates(t, r);
        double sum = 0.0;
        for (std::size_t u = 0; u < users; ++u)
        {
            stats[u].add(r[u]);
            sum += r[u];
            if (r[u] < s.target_rate(u))
                ++out.outages[u];
        }
        out.sum.add(sum);
    }
    for (const auto &st : stats)
        out.ergodic.push_back({st.mean, st.half_width()});
    return out;
}

} // namespace

double Scenario::target_rate(std::size_t user) const
{
    return target_rates.size() == 1 ? target_rates.front() : target_rates.at(user);
}

void Scenario::validate() const
{
    if (name.empty() || name.find_first_of(",\n\r") != std::string::npos)
        throw config_error("scenario.name must be non-empty and free of commas and line breaks");
    if (p_dbm.empty())
        throw config_error("sweep: at least one power point is required");
    for (std::size_t i = 0; i < p_dbm.size(); ++i)
    {
        if (!std::isfinite(p_dbm[i]))
            throw config_error("sweep: power points must be finite");
        if (i > 0 && !(p_dbm[i] > p_dbm[i - 1]))
            throw config_error("sweep: power points must be strictly increasing");
    }
    if (mc.trials < 1)
        throw config_error("scenario.trials must be at least 1");
    if (schemes.empty())
        throw config_error("metrics.schemes must name at least one scheme");
    if (metrics.empty())
        throw config_error("metrics.metrics must name at least one metric");
    const std::size_t users = system.m1 + system.m2;
    if (target_rates.size() != 1 && target_rates.size() != users)
        throw config_error(fmt::format("metrics.target_rate needs 1 or {} values", users));
    for (double r : target_rates)
        if (!(r >= 0.0))
            throw config_error("metrics.target_rate must be non-negative");

    phy::SystemConfig sys = system;
    if (partition_mode != PartitionMode::list)
    {
        if (sys.m2 < 1 || sys.n < sys.m2)
            throw config_error("system: need 1 <= m2 <= n");
        sys.partition = phy::Partition::uniform(sys.n, sys.m2);
    }
    if (!auto_power_allocation && sys.m1 > 0 && sys.power_allocation.empty())
        throw config_error("system.power_allocation must list one fraction per C1 user");
    sys.validate();

    partition::SearchBounds b = bounds;
    b.n_thr = 1;
    b.step = 1;
    b.validate(sys.n, sys.m2);
    if (n_thr_override && *n_thr_override < 1)
        throw config_error("partitioning.n_thr must be at least 1");
    if (step_override && *step_override < 1)
        throw config_error("partitioning.step must be at least 1");
    benchmark.validate();
}

std::vector<std::string> preset_names() { return {"table1-row1", "table1-row2", "table1-row3"}; }

void apply_preset(Scenario &s, std::string_view preset)
{
    auto &sys = s.system;
    if (preset == "table1-row1")
    {
        sys.m1 = 0;
        sys.m2 = 2;
        sys.c1_users = {};
        sys.c2_users = {{150.0, 146.0}, {100.0, 104.0}};
    }
    else if (preset == "table1-row2")
    {
        sys.m1 = 1;
        sys.m2 = 1;
        sys.c1_users = {{150.0, 146.0}};
        sys.c2_users = {{100.0, 104.0}};
    }
    else if (preset == "table1-row3")
    {
        sys.m1 = 2;
        sys.m2 = 2;
        sys.c1_users = {{150.0, 154.0}, {100.0, 104.0}};
        sys.c2_users = {{250.0, 254.0}, {200.0, 204.0}};
    }
    else
        throw config_error(fmt::format("scenario.preset: unknown preset '{}' (known: {})", preset,
                                       fmt::join(preset_names(), ", ")));
}

Scenario parse_scenario(std::istream &in, const std::string &source)
{
    ptree tree;
    try
    {
        boost::property_tree::ini_parser::read_ini(in, tree);
    }
    catch (const boost::property_tree::ini_parser_error &e)
    {
        throw config_error(fmt::format("{}:{}: {}", source, e.line(), e.message()));
    }

    for (const auto &[section, body] : tree)
    {
        const auto it = allowed_keys().find(section);
        if (it == allowed_keys().end())
        {
            if (body.empty())
                throw config_error(fmt::format("{}: key '{}' outside any section", source, section));
            throw config_error(fmt::format("{}: unknown section [{}]", source, section));
        }
        for (const auto &[key, value] : body)
            if (!it->second.count(key))
                throw config_error(fmt::format("{}: unknown key '{}' in [{}]", source, key, section));
    }

    auto get = [&](const std::string &path) -> std::optional<std::string>
    {
        if (auto v = tree.get_optional<std::string>(ptree::path_type(path, '.')))
        {
            std::string s = *v;
            boost::algorithm::trim(s);
            return s;
        }
        return std::nullopt;
    };

    Scenario s;
    auto &sys = s.system;
    bool have_users = false;
    if (auto v = get("scenario.preset"))
    {
        apply_preset(s, *v);
        s.name = *v;
        have_users = true;
    }
    if (auto v = get("scenario.name"))
        s.name = *v;
    if (auto v = get("scenario.trials"))
        s.mc.trials = to_uint("scenario.trials", *v);
    if (auto v = get("scenario.seed"))
        s.mc.seed = to_uint("scenario.seed", *v);
    if (auto v = get("scenario.workers"))
        s.mc.workers = to_uint("scenario.workers", *v);

    sys.n = 40;
    if (auto v = get("system.n"))
        sys.n = to_uint("system.n", *v);
    if (auto v = get("system.m1"))
        sys.m1 = to_uint("system.m1", *v);
    if (auto v = get("system.m2"))
        sys.m2 = to_uint("system.m2", *v);
    if (auto v = get("system.noise_dbm"))
        sys.noise_power = channel::dbm_to_watts(to_double("system.noise_dbm", *v));
    if (auto v = get("system.carrier_ghz"))
        sys.carrier_hz = to_double("system.carrier_ghz", *v) * 1e9;
    if (auto v = get("system.phase_bits"))
    {
        if (*v == "cont")
            sys.phase_levels = 0;
        else
        {
            const auto bits = to_uint("system.phase_bits", *v);
            if (bits < 1 || bits > 16)
                bad("system.phase_bits", "expected 1..16 or 'cont'", *v);
            sys.phase_levels = 1u << bits;
        }
    }
    if (auto v = get("system.kappa"))
    {
        if (*v == "inf")
            sys.von_mises_kappa = phy::infinite_kappa;
        else
            sys.von_mises_kappa = to_double("system.kappa", *v);
    }
    if (auto v = get("system.correlated"))
        sys.correlated = to_bool("system.correlated", *v);
    if (auto v = get("system.element_spacing"))
        sys.element_pitch = to_double("system.element_spacing", *v);
    if (auto v = get("system.n_h"))
        sys.n_h = to_uint("system.n_h", *v);
    if (auto v = get("system.psk_order"))
        sys.psk_order = static_cast<unsigned>(to_uint("system.psk_order", *v));
    if (auto v = get("system.bs_ris_distance"))
        sys.bs_ris_distance = to_double("system.bs_ris_distance", *v);
    if (auto v = get("system.los_indexing"))
    {
        if (*v == "whole-surface")
            sys.los_indexing = channel::RisGeometry::LosIndexing::whole_surface;
        else if (*v == "per-row")
            sys.los_indexing = channel::RisGeometry::LosIndexing::per_row;
        else
            bad("system.los_indexing", "expected whole-surface or per-row", *v);
    }
    if (auto v = get("system.elevation_deg"))
        sys.elevation_aoa = to_double("system.elevation_deg", *v) * std::numbers::pi / 180.0;
    if (auto v = get("system.azimuth_deg"))
        sys.azimuth_aoa = to_double("system.azimuth_deg", *v) * std::numbers::pi / 180.0;
    if (auto v = get("system.partition"))
    {
        if (*v == "uniform")
            s.partition_mode = PartitionMode::uniform;
        else if (*v == "auto")
            s.partition_mode = PartitionMode::automatic;
        else
        {
            s.partition_mode = PartitionMode::list;
            sys.partition.sizes.clear();
            for (const auto &item : split_list(*v))
                sys.partition.sizes.push_back(to_uint("system.partition", item));
        }
    }
    if (auto v = get("system.power_allocation"))
    {
        if (*v == "auto")
            s.auto_power_allocation = true;
        else
        {
            s.auto_power_allocation = false;
            sys.power_allocation = to_doubles("system.power_allocation", *v);
        }
    }

    auto distances = [&](const char *key) -> std::optional<std::vector<double>>
    {
        if (auto v = get(std::string("users.") + key))
            return to_doubles(std::string("users.") + key, *v);
        return std::nullopt;
    };
    const auto c1d = distances("c1_bs_distance");
    const auto c1r = distances("c1_ris_distance");
    const auto c2d = distances("c2_bs_distance");
    const auto c2r = distances("c2_ris_distance");
    if (c1d || c1r)
    {
        if (!c1d)
            throw config_error("users.c1_bs_distance is required when c1_ris_distance is given");
        if (c1r && c1r->size() != c1d->size())
            throw config_error("users.c1_ris_distance must match users.c1_bs_distance in length");
        sys.c1_users.clear();
        for (std::size_t i = 0; i < c1d->size(); ++i)
            sys.c1_users.push_back({(*c1d)[i], c1r ? (*c1r)[i] : (*c1d)[i]});
        if (!get("system.m1"))
            sys.m1 = sys.c1_users.size();
    }
    if (c2d || c2r)
    {
        if (!c2d || !c2r || c2d->size() != c2r->size())
            throw config_error("users.c2_bs_distance and users.c2_ris_distance must both be given with equal lengths");
        sys.c2_users.clear();
        for (std::size_t i = 0; i < c2d->size(); ++i)
            sys.c2_users.push_back({(*c2d)[i], (*c2r)[i]});
        if (!get("system.m2"))
            sys.m2 = sys.c2_users.size();
        have_users = true;
    }
    if (!have_users)
        throw config_error("users.c2_bs_distance and users.c2_ris_distance are required unless scenario.preset is set");

    if (auto v = get("sweep.p_dbm"))
    {
        if (get("sweep.p_start") || get("sweep.p_stop") || get("sweep.p_step"))
            throw config_error("sweep: give either p_dbm or p_start/p_stop/p_step, not both");
        s.p_dbm = to_doubles("sweep.p_dbm", *v);
    }
    else if (get("sweep.p_start") || get("sweep.p_stop") || get("sweep.p_step"))
    {
        const auto a = get("sweep.p_start"), b = get("sweep.p_stop"), c = get("sweep.p_step");
        if (!a || !b || !c)
            throw config_error("sweep: p_start, p_stop and p_step must all be given");
        const double start = to_double("sweep.p_start", *a), stop = to_double("sweep.p_stop", *b),
                     step = to_double("sweep.p_step", *c);
        if (!(step > 0.0) || stop < start)
            throw config_error("sweep: need p_step > 0 and p_stop >= p_start");
        const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            s.p_dbm.push_back(start + static_cast<double>(i) * step);
    }
    else
    {
        for (double p = 10.0; p <= 50.0; p += 5.0)
            s.p_dbm.push_back(p);
    }

    if (auto v = get("metrics.schemes"))
    {
        s.schemes.clear();
        for (const auto &item : split_list(*v))
        {
            const auto sc = baselines::parse_scheme(item);
            if (!sc)
                bad("metrics.schemes", "unknown scheme", item);
            if (std::find(s.schemes.begin(), s.schemes.end(), *sc) == s.schemes.end())
                s.schemes.push_back(*sc);
        }
    }
    if (auto v = get("metrics.metrics"))
    {
        s.metrics.clear();
        for (const auto &item : split_list(*v))
        {
            const auto m = parse_metric(item);
            if (!m)
                bad("metrics.metrics", "unknown metric", item);
            if (std::find(s.metrics.begin(), s.metrics.end(), *m) == s.metrics.end())
                s.metrics.push_back(*m);
        }
    }
    if (auto v = get("metrics.target_rate"))
        s.target_rates = to_doubles("metrics.target_rate", *v);
    if (auto v = get("metrics.objective"))
    {
        const auto o = baselines::parse_objective(*v);
        if (!o)
            bad("metrics.objective", "expected jain or min-rate", *v);
        s.benchmark.objective = *o;
    }
    if (auto v = get("metrics.grid_points"))
        s.benchmark.grid_points = to_uint("metrics.grid_points", *v);

    if (auto v = get("partitioning.q"))
        s.bounds.q = to_double("partitioning.q", *v);
    if (auto v = get("partitioning.epsilon"))
        s.bounds.epsilon = to_double("partitioning.epsilon", *v);
    if (auto v = get("partitioning.r_bar"))
        s.bounds.r_bar = to_double("partitioning.r_bar", *v);
    if (auto v = get("partitioning.n_thr"))
        s.n_thr_override = to_uint("partitioning.n_thr", *v);
    if (auto v = get("partitioning.step"))
        s.step_override = to_uint("partitioning.step", *v);

    sys.seed = s.mc.seed;
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open " + path.string());
    return parse_scenario(in, path.string());
}

void apply_overrides(Scenario &s, const Overrides &o)
{
    if (o.seed)
    {
        s.mc.seed = *o.seed;
        s.system.seed = *o.seed;
    }
    if (o.trials)
        s.mc.trials = *o.trials;
    if (o.workers)
        s.mc.workers = *o.workers;
    if (o.correlated)
        s.system.correlated = *o.correlated;
    if (o.phase_levels)
        s.system.phase_levels = *o.phase_levels;
    if (o.kappa)
        s.system.von_mises_kappa = *o.kappa;
    s.validate();
}

MetricReport run_scenario(const Scenario &scenario)
{
    scenario.validate();
    using baselines::Scheme;

    const auto candidates = resolve_candidates(scenario, false);
    phy::SystemConfig cfg = scenario.system;
    cfg.partition = candidates.partitions.front();
    cfg.validate();
    const phy::Environment env = phy::make_environment(cfg);

    const std::size_t m1 = cfg.m1, m2 = cfg.m2, users = m1 + m2;
    const std::size_t trials = scenario.mc.trials;
    const bool proposed = std::find(scenario.schemes.begin(), scenario.schemes.end(), Scheme::proposed) !=
                          scenario.schemes.end();
    const bool benchmarks = std::any_of(scenario.schemes.begin(), scenario.schemes.end(),
                                        [](Scheme s) { return s != Scheme::proposed; });

    phy::C2Samples c2;
    if (proposed)
        c2 = phy::sample_c2(cfg, env, candidates.partitions, scenario.mc);
    baselines::GainSamples gains;
    if (benchmarks || (proposed && m1 > 0))
        gains = baselines::sample_gains(cfg, env, scenario.mc);

    std::vector<Scheme> schemes = scenario.schemes;
    std::sort(schemes.begin(), schemes.end());

    MetricReport report;
    auto row = [&](Scheme s, const std::string &user, double p, Metric m, double value, double hw)
    {
        if (!wants(scenario, m))
            return;
        report.rows.push_back({scenario.name, std::string(baselines::scheme_name(s)), user, p,
                               std::string(metric_name(m)), value, hw});
    };

    for (const double p : scenario.p_dbm)
    {
        cfg.transmit_power = channel::dbm_to_watts(p);
        const double rho = cfg.rho();

        for (const Scheme scheme : schemes)
        {
            std::function<void(std::size_t, std::vector<double> &)> trial_rates;
            std::vector<double> fractions;
            std::size_t chosen = 0;
            const baselines::GainTable *table = nullptr;

            if (scheme == Scheme::proposed)
            {
                if (candidates.partitions.size() > 1)
                {
                    const auto sel = partition::select_partition(c2, rho);
                    chosen = static_cast<std::size_t>(
                        std::find(c2.partitions.begin(), c2.partitions.end(), sel.best_partition) -
                        c2.partitions.begin());
                    spdlog::info("{} dBm: partition {} (Jain {:.4f})", p, sel.best_partition.to_string(), sel.jain);
                }
                if (m1 > 0)
                {
                    if (scenario.auto_power_allocation)
                        fractions =
                            baselines::best_noma(gains.direct.columns(0, m1), rho, scenario.benchmark).fractions;
                    else
                        fractions = cfg.power_allocation;
                }
                trial_rates = [&, chosen, fractions](std::size_t t, std::vector<double> &r)
                {
                    if (m1 > 0)
                    {
                        const auto c1 = phy::sic_rates(gains.direct.row(t).subspan(0, m1), fractions, rho);
                        std::copy(c1.begin(), c1.end(), r.begin());
                    }
                    for (std::size_t m = 0; m < m2; ++m)
                        r[m1 + m] = c2.rate(chosen, t, m, rho);
                };
            }
            else
            {
                baselines::BenchmarkConfig bc = scenario.benchmark;
                bc.scheme = scheme;
                fractions = baselines::run_benchmark(gains, rho, bc).fractions;
                const bool tdma = scheme == Scheme::tdma || scheme == Scheme::ris_tdma;
                table = scheme == Scheme::tdma || scheme == Scheme::pd_noma ? &gains.direct
                        : scheme == Scheme::ris_tdma                       ? &gains.ris_tdma
                                                                           : &gains.ris_noma;
                trial_rates = [table, tdma, fractions, rho](std::size_t t, std::vector<double> &r)
                {
                    const auto g = table->row(t);
                    const auto v =
                        tdma ? baselines::tdma_rates(g, fractions, rho) : baselines::pd_noma_rates(g, fractions, rho);
                    std::copy(v.begin(), v.end(), r.begin());
                };
            }

            const SchemeRates res = accumulate(trials, users, trial_rates, scenario);
            std::vector<double> means;
            for (std::size_t u = 0; u < users; ++u)
            {
                const std::string label = user_label(m1, u);
                row(scheme, label, p, Metric::ergodic_rate, res.ergodic[u].mean, res.ergodic[u].half_width);
                const auto o = outage::wilson(res.outages[u], trials);
                row(scheme, label, p, Metric::outage, o.value, o.half_width);
                means.push_back(res.ergodic[u].mean);
            }
            row(scheme, "all", p, Metric::sum_rate, res.sum.mean, res.sum.half_width());
            row(scheme, "all", p, Metric::jain, baselines::fairness(means, baselines::Objective::jain), 0.0);

            if (scheme == Scheme::proposed &&
                (wants(scenario, Metric::outage_theory) || wants(scenario, Metric::outage_asymptotic)))
            {
                phy::SystemConfig at = cfg;
                at.partition = c2.partitions[chosen];
                for (std::size_t m = 0; m < m2; ++m)
                {
                    const auto params = outage::outage_params(at, env, m, scenario.target_rate(m1 + m));
                    const std::string label = user_label(m1, m1 + m);
                    row(scheme, label, p, Metric::outage_theory, outage::outage_exact(params), 0.0);
                    row(scheme, label, p, Metric::outage_asymptotic, outage::outage_asymptotic(params), 0.0);
                }
            }
        }
    }
    report.sort();
    return report;
}

PartitioningReport run_partitioning(const Scenario &scenario)
{
    scenario.validate();
    const auto candidates = resolve_candidates(scenario, true);

    PartitioningReport rep;
    rep.threshold = *candidates.threshold;
    rep.step = *candidates.step;
    rep.n_thr = candidates.n_thr;
    rep.b = candidates.b;
    rep.feasible = candidates.partitions.size();
    rep.unrestricted = binomial(scenario.system.n - 1, scenario.system.m2 - 1);

    phy::SystemConfig cfg = scenario.system;
    cfg.partition = candidates.partitions.front();
    cfg.validate();
    const phy::Environment env = phy::make_environment(cfg);
    const auto samples = phy::sample_c2(cfg, env, candidates.partitions, scenario.mc);
    for (const double p : scenario.p_dbm)
    {
        cfg.transmit_power = channel::dbm_to_watts(p);
        rep.points.push_back({p, partition::select_partition(samples, cfg.rho())});
    }
    return rep;
}

MetricReport run_outage_table(const Scenario &scenario)
{
    Scenario s = scenario;
    s.schemes = {baselines::Scheme::proposed};
    s.metrics = {Metric::outage, Metric::outage_theory, Metric::outage_asymptotic};
    return run_scenario(s);
}

void write_partitioning_csv(const Scenario &scenario, const PartitioningReport &report, std::ostream &out)
{
    out << "scenario,p_dbm,partition,user,rate,half_width,jain,selected\n";
    for (const auto &pt : report.points)
        for (const auto &e : pt.result.per_partition_rates)
            for (std::size_t m = 0; m < e.rates.size(); ++m)
                out << scenario.name << ',' << format_number(pt.p_dbm) << ',' << e.partition.to_string() << ','
                    << user_label(0, m) << ',' << format_number(e.rates[m].mean) << ','
                    << format_number(e.rates[m].half_width) << ',' << format_number(e.jain) << ','
                    << (e.partition == pt.result.best_partition ? 1 : 0) << '\n';
}

} // namespace risnoma::sim
