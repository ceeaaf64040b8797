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

#include "risnoma/partition.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/outage.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace risnoma::partition
{

double jain_index(std::span<const double> rates)
{
    if (rates.empty())
        throw std::domain_error("jain_index needs at least one rate");
    double sum = 0.0, sq = 0.0;
    for (double r : rates)
    {
        sum += r;
        sq += r * r;
    }
    if (!(sq > 0.0))
        throw std::domain_error("jain_index needs a nonzero rate");
    return sum * sum / (static_cast<double>(rates.size()) * sq);
}

void SearchBounds::validate(std::size_t n, std::size_t m2) const
{
    if (n_thr < 1)
        throw config_error("n_thr must be at least 1");
    if (step < 1)
        throw config_error("step must be at least 1");
    if (!(q > 0.0))
        throw config_error("q must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw config_error("epsilon must lie in (0, 1)");
    if (!(r_bar > 0.0))
        throw config_error("r_bar must be positive");
    if (m2 * n_thr > n)
        throw config_error("M2 * n_thr exceeds the surface size");
}

double sipc_probability(std::size_t n, std::size_t n_thr, double q)
{
    if (n_thr < 1 || n_thr > n)
        throw std::domain_error("sipc_probability needs 1 <= n_thr <= n");
    // Unit RIS gain; the gain cancels in the ratio.
    outage::OutageTerms t;
    const double k = static_cast<double>(n_thr);
    t.mu = k * std::sqrt(std::numbers::pi) / 2.0;
    t.s1_sq = k * (4.0 - std::numbers::pi) / 4.0;
    t.s2_sq = 0.5 * q * static_cast<double>(n - n_thr);
    return outage::outage_asymptotic(t);
}

ThresholdResult find_n_thr(std::size_t n, std::size_t m2, double q, double epsilon)
{
    if (m2 < 1 || n < m2)
        throw config_error("find_n_thr needs 1 <= M2 <= N");
    if (!(q > 0.0) || !(epsilon > 0.0 && epsilon < 1.0))
        throw config_error("find_n_thr needs q > 0 and epsilon in (0, 1)");

    ThresholdResult r;
    r.n_thr = 1;
    r.probability = sipc_probability(n, 1, q);
    r.iterations = 1;
    while (r.probability > epsilon && m2 * (r.n_thr + 1) <= n)
    {
        ++r.n_thr;
        r.probability = sipc_probability(n, r.n_thr, q);
        ++r.iterations;
    }
    r.capped = r.probability > epsilon;
    if (r.capped)
        spdlog::warn("find_n_thr: probability {:.4g} still above {} at the cap N_thr = {}", r.probability, epsilon,
                     r.n_thr);
    return r;
}

std::vector<double> interference_limited_rates(std::size_t n, const MonteCarlo &mc)
{
    if (n < 2)
        throw std::invalid_argument("interference_limited_rates needs at least two elements");

    phy::SystemConfig config;
    config.m1 = 0;
    config.m2 = 2;
    config.n = n;
    const phy::Environment env = phy::unit_gain_environment(n, 2);

    const std::size_t n_blocks = (mc.trials + trial_block_size - 1) / trial_block_size;
    std::vector<std::vector<RunningStats>> blocks(n_blocks, std::vector<RunningStats>(n));
    for_each_block(mc.trials, mc.workers,
                   [&](std::size_t b, std::size_t begin, std::size_t end)
                   {
                       for (std::size_t t = begin; t < end; ++t)
                       {
                           Rng rng = Rng::substream(mc.seed, Stream::step_search, t);
                           const phy::Realization r(env, config, rng);
                           for (std::size_t k = 1; k < n; ++k)
                           {
                               const double a = std::norm(r.cascade(0, 0, 0, k));
                               const double i = std::norm(r.cascade(1, 0, k, n));
                               blocks[b][k].add(std::log2(1.0 + a / i));
                           }
                       }
                   });

    std::vector<double> out(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
    {
        RunningStats s;
        for (const auto &b : blocks)
            s.merge(b[k]);
        out[k] = s.mean;
    }
    return out;
}

StepResult find_step(std::size_t n, std::size_t m2, std::size_t n_thr, double r_bar, const MonteCarlo &mc)
{
    if (m2 < 2)
        throw config_error("find_step needs at least two C2 users");
    if (n_thr < 1 || m2 * n_thr > n)
        throw config_error("find_step needs 1 <= n_thr and M2 * n_thr <= N");
    if (!(r_bar > 0.0))
        throw config_error("r_bar must be positive");

    StepResult r;
    const std::size_t cap = n - m2 * n_thr;
    if (cap == 0)
    {
        r.capped = true;
        return r;
    }

    const auto rates = interference_limited_rates(n, mc);
    std::size_t b = 1;
    double gap = 0.0;
    do
    {
        gap = rates[n_thr + b] - rates[n_thr];
        r.gaps.push_back(gap);
        ++r.iterations;
        ++b;
    } while (gap <= r_bar && b <= cap);

    r.step = b - 1;
    r.capped = gap <= r_bar;
    return r;
}

std::vector<phy::Partition> enumerate_partitions(std::size_t n, std::size_t m2, std::size_t n_thr, std::size_t step,
                                                 bool ordered)
{
    if (m2 < 1 || n_thr < 1 || step < 1)
        throw std::invalid_argument("enumerate_partitions needs m2, n_thr, step >= 1");
    std::vector<phy::Partition> out;
    if (m2 * n_thr > n)
        return out;

    const std::size_t top = n - n_thr * (m2 - 1);
    std::vector<std::size_t> sizes(m2);

    std::function<void(std::size_t, std::size_t)> place = [&](std::size_t i, std::size_t left)
    {
        if (i + 1 == m2)
        {
            if (left < n_thr || (ordered && i > 0 && left > sizes[i - 1]))
                return;
            sizes[i] = left;
            out.push_back(phy::Partition{sizes});
            return;
        }
        const std::size_t users_after = m2 - i - 1;
        std::size_t hi = std::min(top, left - n_thr * users_after);
        if (ordered && i > 0)
            hi = std::min(hi, sizes[i - 1]);
        if (hi < n_thr)
            return;
        // Largest member of {n_thr + k step} not above hi, then downward.
        for (std::size_t v = n_thr + (hi - n_thr) / step * step;; v -= step)
        {
            sizes[i] = v;
            place(i + 1, left - v);
            if (v < n_thr + step)
                break;
        }
    };
    place(0, n);
    return out;
}

PartitionSearchResult select_partition(const phy::C2Samples &samples, double rho)
{
    if (samples.partitions.empty())
        throw config_error("no feasible partition to evaluate");

    PartitionSearchResult res;
    res.candidates_examined = samples.partitions.size();
    for (std::size_t p = 0; p < samples.partitions.size(); ++p)
    {
        PartitionEvaluation e;
        e.partition = samples.partitions[p];
        e.rates = samples.rates(p, rho);
        std::vector<double> means;
        for (const auto &x : e.rates)
            means.push_back(x.mean);
        e.jain = jain_index(means);
        res.iterations += 2;
        if (p == 0 || e.jain > res.jain)
        {
            res.jain = e.jain;
            res.best_partition = e.partition;
        }
        res.per_partition_rates.push_back(std::move(e));
    }
    return res;
}

PartitionSearchResult evaluate_partitions(const phy::SystemConfig &config, std::span<const phy::Partition> candidates,
                                          const MonteCarlo &mc)
{
    if (candidates.empty())
        throw config_error("no feasible partition to evaluate");
    phy::SystemConfig cfg = config;
    cfg.partition = candidates.front();
    cfg.validate();
    const phy::Environment env = phy::make_environment(cfg);
    const auto samples = phy::sample_c2(cfg, env, candidates, mc);
    return select_partition(samples, cfg.rho());
}

PartitionSearchResult optimize_partition(const phy::SystemConfig &config, const SearchBounds &bounds,
                                         const MonteCarlo &mc)
{
    bounds.validate(config.n, config.m2);
    const auto candidates = enumerate_partitions(config.n, config.m2, bounds.n_thr, bounds.step);
    if (candidates.empty())
        throw config_error("partition bounds admit no feasible partition");
    return evaluate_partitions(config, candidates, mc);
}

} // namespace risnoma::partition
