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

// risnoma-sim: batch driver for partitioned-RIS NOMA experiments.

#include "risnoma/errors.hpp"
#include "risnoma/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

namespace
{

constexpr const char *version_string = "risnoma-sim 1.0.0";

enum Exit
{
    ok = 0,
    io_failure = 1,
    config_failure = 2,
    numerical_failure = 3
};

struct Options
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> workers;
    std::string correlated;
    std::string phase_bits;
    std::string kappa;
    int verbosity = 0;
};

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("config", o.config, "Scenario file (INI)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out,-o", o.out, "Write CSV here instead of stdout");
    cmd->add_option("--seed", o.seed, "Override scenario seed");
    cmd->add_option("--trials", o.trials, "Override Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
    cmd->add_option("--correlated", o.correlated, "Spatially correlated RIS channels")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--phase-bits", o.phase_bits, "Phase resolution in bits, or 'cont'");
    cmd->add_option("--kappa", o.kappa, "von Mises phase-error concentration, or 'inf'");
    cmd->add_flag("-v,--verbose", o.verbosity, "More log output (repeatable)");
}

risnoma::sim::Overrides to_overrides(const Options &o)
{
    risnoma::sim::Overrides ov;
    ov.seed = o.seed;
    ov.trials = o.trials;
    ov.workers = o.workers;
    if (!o.correlated.empty())
        ov.correlated = o.correlated == "on";
    if (!o.phase_bits.empty())
    {
        if (o.phase_bits == "cont")
            ov.phase_levels = 0;
        else
        {
            int bits = 0;
            try
            {
                bits = std::stoi(o.phase_bits);
            }
            catch (const std::exception &)
            {
                throw risnoma::config_error("--phase-bits: expected an integer or 'cont'");
            }
            if (bits < 1 || bits > 16)
                throw risnoma::config_error("--phase-bits: expected 1..16 or 'cont'");
            ov.phase_levels = 1u << bits;
        }
    }
    if (!o.kappa.empty())
    {
        if (o.kappa == "inf")
            ov.kappa = std::numeric_limits<double>::infinity();
        else
        {
            try
            {
                ov.kappa = std::stod(o.kappa);
            }
            catch (const std::exception &)
            {
                throw risnoma::config_error("--kappa: expected a number or 'inf'");
            }
        }
    }
    return ov;
}

risnoma::sim::Scenario load(const Options &o)
{
    auto s = risnoma::sim::load_scenario(o.config);
    risnoma::sim::apply_overrides(s, to_overrides(o));
    return s;
}

void write_report(const risnoma::sim::MetricReport &report, const Options &o)
{
    if (o.out.empty())
        risnoma::sim::write_csv(report, std::cout);
    else
        risnoma::sim::emit_report(report, o.out);
}

void set_verbosity(int v)
{
    spdlog::set_level(v >= 2 ? spdlog::level::debug : v == 1 ? spdlog::level::info : spdlog::level::warn);
}

} // namespace

int main(int argc, char **argv)
{
    spdlog::set_default_logger(spdlog::stderr_color_mt("risnoma"));
    spdlog::set_level(spdlog::level::warn);

    CLI::App app{"Partitioned-RIS NOMA link-level simulator"};
    app.require_subcommand(1);

    Options opt;
    auto *simulate = app.add_subcommand("simulate", "Ergodic rate, sum rate, outage and fairness sweep");
    add_common(simulate, opt);
    auto *partition = app.add_subcommand("partition", "Threshold, step and fairness-optimal partition search");
    add_common(partition, opt);
    auto *outage = app.add_subcommand("outage-table", "Closed-form and simulated outage of the C2 users");
    add_common(outage, opt);
    auto *version = app.add_subcommand("version", "Print the version");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return config_failure;
    }

    try
    {
        if (version->parsed())
        {
            std::cout << version_string << '\n';
            return ok;
        }
        set_verbosity(opt.verbosity);
        const auto scenario = load(opt);

        if (simulate->parsed())
            write_report(risnoma::sim::run_scenario(scenario), opt);
        else if (outage->parsed())
            write_report(risnoma::sim::run_outage_table(scenario), opt);
        else if (partition->parsed())
        {
            const auto rep = risnoma::sim::run_partitioning(scenario);
            std::ostream &summary = opt.out.empty() ? std::cerr : std::cout;
            summary << fmt::format("n_thr {} (probability {:.4g}{}, {} iterations)\n", rep.n_thr,
                                   rep.threshold.probability, rep.threshold.capped ? ", capped" : "",
                                   rep.threshold.iterations);
            summary << fmt::format("step {} ({} iterations{})\n", rep.b, rep.step.iterations,
                                   rep.step.capped ? ", capped" : "");
            summary << fmt::format("candidates {} of {}\n", rep.feasible, rep.unrestricted);
            for (const auto &pt : rep.points)
                summary << fmt::format("p_dbm {}: best {} jain {:.6f}\n", pt.p_dbm,
                                       pt.result.best_partition.to_string(), pt.result.jain);
            if (opt.out.empty())
                risnoma::sim::write_partitioning_csv(scenario, rep, std::cout);
            else
            {
                std::ofstream out(opt.out, std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot open " + opt.out + " for writing");
                risnoma::sim::write_partitioning_csv(scenario, rep, out);
                if (!out)
                    throw std::runtime_error("write to " + opt.out + " failed");
            }
        }
        return ok;
    }
    catch (const risnoma::config_error &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return config_failure;
    }
    catch (const risnoma::numerical_error &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return numerical_failure;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return numerical_failure;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return config_failure;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return io_failure;
    }
}
