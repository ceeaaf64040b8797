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

#include "risnoma/baselines.hpp"
#include "risnoma/errors.hpp"
#include "risnoma/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace risnoma::baselines
{

namespace
{

constexpr std::array<std::string_view, 5> scheme_names{"proposed", "tdma", "ris-tdma", "pd-noma", "ris-noma"};

// Calls visit(k) for every k in Z^m with k_i in [lo_i, hi_i] and sum k = total.
template <class Visit>
void for_each_composition(std::size_t m, long total, const std::vector<long> &lo, const std::vector<long> &hi,
                          Visit &&visit)
{
    std::vector<long> k(m, 0);
    auto rec = [&](auto &&self, std::size_t i, long left) -> void
    {
        if (i + 1 == m)
        {
            if (left >= lo[i] && left <= hi[i])
            {
                k[i] = left;
                visit(k);
            }
            return;
        }
        for (long v = std::max(0L, lo[i]); v <= std::min(left, hi[i]); ++v)
        {
            k[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, total);
}

// SIC inside one superposition-coded message with per-trial decoding order
// cached, since the order depends only on the gains.
class NomaEvaluator
{
public:
    NomaEvaluator(const GainTable &gains, double rho) : gains_(gains), rho_(rho), order_(gains.trials * gains.users)
    {
        for (std::size_t t = 0; t < gains.trials; ++t)
        {
            auto first = order_.begin() + static_cast<std::ptrdiff_t>(t * gains.users);
            std::iota(first, first + static_cast<std::ptrdiff_t>(gains.users), std::size_t{0});
            const auto row = gains.row(t);
            std::stable_sort(first, first + static_cast<std::ptrdiff_t>(gains.users),
                             [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
        }
    }

    template <class Sink>
    void each_rate(std::span<const double> zeta, Sink &&sink) const
    {
        const std::size_t m = gains_.users;
        for (std::size_t t = 0; t < gains_.trials; ++t)
        {
            const std::size_t *order = order_.data() + t * m;
            double later = 0.0;
            for (std::size_t k = m; k-- > 0;)
            {
                const std::size_t u = order[k];
                const double snr = rho_ * gains_.at(t, u);
                sink(u, std::log2(1.0 + snr * zeta[u] / (snr * later + 1.0)));
                later += zeta[u];
            }
        }
    }

    std::vector<double> mean_rates(std::span<const double> zeta) const
    {
        std::vector<double> sum(gains_.users, 0.0);
        each_rate(zeta, [&](std::size_t u, double r) { sum[u] += r; });
        for (auto &s : sum)
            s /= static_cast<double>(gains_.trials);
        return sum;
    }

private:
    const GainTable &gains_;
    double rho_;
    std::vector<std::size_t> order_;
};

} // namespace

std::string_view scheme_name(Scheme s) { return scheme_names[static_cast<std::size_t>(s)]; }

std::optional<Scheme> parse_scheme(std::string_view name)
{
    for (std::size_t i = 0; i < scheme_names.size(); ++i)
        if (scheme_names[i] == name)
            return static_cast<Scheme>(i);
    return std::nullopt;
}

std::string_view objective_name(Objective o) { return o == Objective::jain ? "jain" : "min-rate"; }

std::optional<Objective> parse_objective(std::string_view name)
{
    if (name == "jain")
        return Objective::jain;
    if (name == "min-rate")
        return Objective::min_rate;
    return std::nullopt;
}

void BenchmarkConfig::validate() const
{
    if (grid_points < 2)
        throw config_error("allocation grid needs at least 2 points");
}

double fairness(std::span<const double> rates, Objective objective)
{
    if (rates.empty())
        return 0.0;
    if (objective == Objective::min_rate)
        return *std::min_element(rates.begin(), rates.end());
    if (std::all_of(rates.begin(), rates.end(), [](double r) { return r == 0.0; }))
        return 0.0;
    return partition::jain_index(rates);
}

std::vector<double> simplex_search(std::size_t m, std::size_t grid_points,
                                   const std::function<double(std::span<const double>)> &objective,
                                   std::size_t *evaluations)
{
    if (m == 0)
        throw std::invalid_argument("simplex_search needs at least one coordinate");
    if (grid_points < 2)
        throw std::invalid_argument("simplex_search needs at least two grid points");
    std::size_t evals = 0;
    const long full = static_cast<long>(grid_points - 1);

    std::vector<double> x(m), best_x;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<long> best_k;
    long res = m <= 2 ? full : std::min(full, 10L);

    auto try_point = [&](const std::vector<long> &k)
    {
        for (std::size_t i = 0; i < m; ++i)
            x[i] = static_cast<double>(k[i]) / static_cast<double>(res);
        const double v = objective(x);
        ++evals;
        if (v > best)
        {
            best = v;
            best_x = x;
            best_k = k;
        }
    };

    for_each_composition(m, res, std::vector<long>(m, 0), std::vector<long>(m, res), try_point);

    while (res < full)
    {
        const long next = std::min(full, res * 5);
        const long window = (next + res - 1) / res;
        std::vector<long> lo(m), hi(m);
        for (std::size_t i = 0; i < m; ++i)
        {
            const long c = static_cast<long>(std::llround(static_cast<double>(best_k[i]) * static_cast<double>(next) /
                                                          static_cast<double>(res)));
            lo[i] = std::max(0L, c - window);
            hi[i] = std::min(next, c + window);
        }
        res = next;
        for_each_composition(m, res, lo, hi, try_point);
    }

    if (evaluations)
        *evaluations = evals;
    return best_x;
}

std::vector<double> tdma_rates(std::span<const double> gains, std::span<const double> time_shares, double rho)
{
    if (gains.size() != time_shares.size())
        throw std::invalid_argument("tdma_rates: one time share per user expected");
    std::vector<double> r(gains.size());
    for (std::size_t m = 0; m < gains.size(); ++m)
        r[m] = time_shares[m] * std::log2(1.0 + rho * gains[m]);
    return r;
}

std::vector<double> pd_noma_rates(std::span<const double> gains, std::span<const double> allocation, double rho)
{
    return phy::sic_rates(gains, allocation, rho);
}

double aligned_gain(const phy::Realization &r, const phy::Environment &env, const phy::SystemConfig &config,
                    std::size_t target, std::size_t user)
{
    const auto &f = r.fading();
    const auto &gt = f.ris_user.at(target);
    const auto &gu = f.ris_user.at(user);
    const auto errors = r.phase_errors();
    const double anchor = std::arg(f.bs_c2[target]);

    phy::cplx acc = f.bs_c2[user];
    for (std::size_t n = 0; n < env.los.size(); ++n)
    {
        double phase = anchor - std::arg(env.los[n] * gt[n]);
        if (!errors.empty())
            phase += errors[n];
        phase = phy::quantize_phase(phase, config.phase_levels);
        acc += env.los[n] * gu[n] * std::polar(1.0, phase);
    }
    return std::norm(acc);
}

std::size_t ris_noma_target(const phy::Environment &env, const phy::SystemConfig &config)
{
    const double n2 = static_cast<double>(config.n) * static_cast<double>(config.n);
    std::size_t best = 0;
    double weakest = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < env.c2.size(); ++m)
    {
        const double g = env.c2[m].bs_user_gain + env.c2[m].ris_total_gain() * n2;
        if (g < weakest)
        {
            weakest = g;
            best = m;
        }
    }
    return best;
}

GainTable GainTable::columns(std::size_t begin, std::size_t end) const
{
    if (begin > end || end > users)
        throw std::invalid_argument("GainTable::columns out of range");
    GainTable t;
    t.trials = trials;
    t.users = end - begin;
    t.values.reserve(t.trials * t.users);
    for (std::size_t i = 0; i < trials; ++i)
        for (std::size_t u = begin; u < end; ++u)
            t.values.push_back(at(i, u));
    return t;
}

GainSamples sample_gains(const phy::SystemConfig &config, const phy::Environment &env, const MonteCarlo &mc)
{
    if (mc.trials == 0)
        throw std::invalid_argument("sample_gains needs at least one trial");
    const std::size_t m1 = config.m1, m2 = config.m2, users = m1 + m2;
    GainSamples s;
    for (GainTable *t : {&s.direct, &s.ris_tdma, &s.ris_noma})
    {
        t->trials = mc.trials;
        t->users = users;
        t->values.resize(mc.trials * users);
    }
    s.ris_noma_target = ris_noma_target(env, config);

    for_each_block(mc.trials, mc.workers,
                   [&](std::size_t, std::size_t begin, std::size_t end)
                   {
                       for (std::size_t t = begin; t < end; ++t)
                       {
                           Rng rng = Rng::substream(mc.seed, Stream::trials, t);
                           const phy::Realization r(env, config, rng);
                           const auto &f = r.fading();
                           double *direct = s.direct.values.data() + t * users;
                           double *tdma = s.ris_tdma.values.data() + t * users;
                           double *noma = s.ris_noma.values.data() + t * users;
                           for (std::size_t m = 0; m < m1; ++m)
                           {
                               direct[m] = tdma[m] = noma[m] = std::norm(f.bs_c1[m]);
                           }
                           for (std::size_t m = 0; m < m2; ++m)
                           {
                               direct[m1 + m] = std::norm(f.bs_c2[m]);
                               tdma[m1 + m] = aligned_gain(r, env, config, m, m);
                               noma[m1 + m] = aligned_gain(r, env, config, s.ris_noma_target, m);
                           }
                       }
                   });
    return s;
}

Allocation best_tdma(const GainTable &gains, double rho, const BenchmarkConfig &cfg)
{
    cfg.validate();
    if (gains.trials == 0 || gains.users == 0)
        throw std::invalid_argument("best_tdma needs a non-empty gain table");
    // Rates are linear in the time shares, so full-slot capacities suffice.
    std::vector<RunningStats> cap(gains.users);
    for (std::size_t t = 0; t < gains.trials; ++t)
        for (std::size_t u = 0; u < gains.users; ++u)
            cap[u].add(std::log2(1.0 + rho * gains.at(t, u)));

    std::vector<double> rates(gains.users);
    auto objective = [&](std::span<const double> tau)
    {
        for (std::size_t u = 0; u < gains.users; ++u)
            rates[u] = tau[u] * cap[u].mean;
        return fairness(rates, cfg.objective);
    };
    Allocation a;
    a.fractions = simplex_search(gains.users, cfg.grid_points, objective, &a.evaluations);
    a.objective = objective(a.fractions);
    for (std::size_t u = 0; u < gains.users; ++u)
        a.rates.push_back({a.fractions[u] * cap[u].mean, a.fractions[u] * cap[u].half_width()});
    return a;
}

Allocation best_noma(const GainTable &gains, double rho, const BenchmarkConfig &cfg)
{
    cfg.validate();
    if (gains.trials == 0 || gains.users == 0)
        throw std::invalid_argument("best_noma needs a non-empty gain table");
    const NomaEvaluator eval(gains, rho);
    auto objective = [&](std::span<const double> zeta) { return fairness(eval.mean_rates(zeta), cfg.objective); };

    Allocation a;
    a.fractions = simplex_search(gains.users, cfg.grid_points, objective, &a.evaluations);
    std::vector<RunningStats> stats(gains.users);
    eval.each_rate(a.fractions, [&](std::size_t u, double r) { stats[u].add(r); });
    std::vector<double> means;
    for (const auto &s : stats)
    {
        a.rates.push_back({s.mean, s.half_width()});
        means.push_back(s.mean);
    }
    a.objective = fairness(means, cfg.objective);
    return a;
}

Allocation run_benchmark(const GainSamples &samples, double rho, const BenchmarkConfig &cfg)
{
    switch (cfg.scheme)
    {
    case Scheme::tdma:
        return best_tdma(samples.direct, rho, cfg);
    case Scheme::ris_tdma:
        return best_tdma(samples.ris_tdma, rho, cfg);
    case Scheme::pd_noma:
        return best_noma(samples.direct, rho, cfg);
    case Scheme::ris_noma:
        return best_noma(samples.ris_noma, rho, cfg);
    case Scheme::proposed:
        break;
    }
    throw std::invalid_argument("run_benchmark: the proposed scheme is not a benchmark");
}

} // namespace risnoma::baselines
