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

#include "risnoma/phy_core.hpp"
#include "risnoma/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace risnoma::phy
{

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Partition

std::size_t Partition::total() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }

std::size_t Partition::offset(std::size_t i) const
{
    return std::accumulate(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

bool Partition::non_increasing() const { return std::is_sorted(sizes.rbegin(), sizes.rend()); }

void Partition::validate(std::size_t n, std::size_t m2) const
{
    if (sizes.size() != m2)
        throw std::invalid_argument("partition has " + std::to_string(sizes.size()) + " sub-surfaces, expected " +
                                    std::to_string(m2));
    if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end())
        throw std::invalid_argument("partition contains an empty sub-surface");
    if (total() != n)
        throw std::invalid_argument("partition sums to " + std::to_string(total()) + ", expected " +
                                    std::to_string(n));
}

std::string Partition::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        if (i)
            s += '-';
        s += std::to_string(sizes[i]);
    }
    return s;
}

Partition Partition::uniform(std::size_t n, std::size_t m2)
{
    if (m2 == 0 || n < m2)
        throw std::invalid_argument("uniform partition needs 1 <= m2 <= n");
    Partition p;
    p.sizes.assign(m2, n / m2);
    for (std::size_t i = 0; i < n % m2; ++i)
        ++p.sizes[i]; // larger shares go to the farther users
    return p;
}

// ---------------------------------------------------------------------------
// Configuration

void SystemConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw config_error(msg); };

    if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
        fail("transmit power must be positive and finite");
    if (!(noise_power > 0.0))
        fail("noise power must be positive");
    if (!std::isfinite(rho()))
        fail("transmit SNR must be finite");
    if (m2 < 1)
        fail("C2 needs at least one user");
    if (n < m2)
        fail("RIS needs at least one element per C2 user");
    if (c2_users.size() != m2)
        fail("expected " + std::to_string(m2) + " C2 user positions, got " + std::to_string(c2_users.size()));
    if (c1_users.size() != m1)
        fail("expected " + std::to_string(m1) + " C1 user positions, got " + std::to_string(c1_users.size()));
    for (const auto &u : c1_users)
        if (!(u.bs_distance > 0.0))
            fail("C1 user distances must be positive");
    for (const auto &u : c2_users)
        if (!(u.bs_distance > 0.0) || !(u.ris_distance > 0.0))
            fail("C2 user distances must be positive");

    try
    {
        partition.validate(n, m2);
    }
    catch (const std::invalid_argument &e)
    {
        fail(e.what());
    }

    if (!power_allocation.empty())
    {
        if (power_allocation.size() != m1)
            fail("power allocation needs one fraction per C1 user");
        double sum = 0.0;
        for (double z : power_allocation)
        {
            if (!(z >= 0.0))
                fail("power allocation fractions must be non-negative");
            sum += z;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            fail("power allocation fractions must sum to 1");
    }
    if (psk_order < 2)
        fail("PSK order must be at least 2");
    if (!(von_mises_kappa >= 0.0))
        fail("von Mises concentration must be non-negative");
    if (n_h != 0 && n % n_h != 0)
        fail("elements per row must divide the RIS size");
    if (!(element_pitch > 0.0))
        fail("element pitch must be positive");
    if (!(carrier_hz > 0.0))
        fail("carrier frequency must be positive");
    if (bs_ris_distance < 0.0)
        fail("BS-RIS distance must be non-negative");
}

Environment make_environment(const SystemConfig &config)
{
    const double lambda = channel::wavelength_for(config.carrier_hz);
    const std::size_t n_h = config.n_h == 0 ? config.n : config.n_h;

    Environment env;
    env.geometry = channel::RisGeometry::linear(config.n, lambda, config.element_pitch);
    env.geometry.n_h = n_h;
    env.geometry.n_v = config.n / n_h;
    env.geometry.indexing = config.los_indexing;

    Rng angles = Rng::substream(config.seed, Stream::geometry, 0);
    const double elevation = angles.uniform() * pi;
    const double azimuth = angles.uniform() * pi - pi / 2.0;
    env.geometry.elevation_aoa = std::isnan(config.elevation_aoa) ? elevation : config.elevation_aoa;
    env.geometry.azimuth_aoa = std::isnan(config.azimuth_aoa) ? azimuth : config.azimuth_aoa;

    env.bs_ris_distance =
        config.bs_ris_distance > 0.0 ? config.bs_ris_distance : channel::far_field_distance(config.n, lambda);

    for (const auto &u : config.c2_users)
        env.c2.push_back(channel::make_link_budget(lambda, u.bs_distance, env.bs_ris_distance, u.ris_distance,
                                                   config.path_exponent, config.ref_gain, config.ref_distance));
    for (const auto &u : config.c1_users)
        env.c1_gain.push_back(
            channel::bs_user_gain(u.bs_distance, config.path_exponent, config.ref_gain, config.ref_distance));

    env.los = channel::los_vector(env.geometry, channel::ris_hop_gain(lambda, env.bs_ris_distance));
    env.correlation = config.correlated
                          ? channel::CorrelationFactor::from_matrix(channel::correlation_matrix(env.geometry))
                          : channel::CorrelationFactor::identity(config.n);
    return env;
}

Environment unit_gain_environment(std::size_t n, std::size_t m2)
{
    Environment env;
    env.geometry = channel::RisGeometry::linear(n, 1.0);
    env.bs_ris_distance = 1.0;
    env.c2.assign(m2, channel::LinkBudget{0.0, 1.0, 1.0});
    env.los.assign(n, cplx(1.0, 0.0));
    env.correlation = channel::CorrelationFactor::identity(n);
    return env;
}

// ---------------------------------------------------------------------------
// Transmit side

cplx superpose(std::span<const cplx> symbols, std::span<const double> allocations, double power)
{
    if (symbols.size() != allocations.size())
        throw std::invalid_argument("superpose: symbol and allocation counts differ");
    cplx x = 0.0;
    for (std::size_t m = 0; m < symbols.size(); ++m)
        x += std::sqrt(power * allocations[m]) * symbols[m];
    return x;
}

double quantize_phase(double phase, unsigned levels)
{
    const double two_pi = 2.0 * pi;
    double wrapped = std::fmod(phase, two_pi);
    if (wrapped < 0.0)
        wrapped += two_pi;
    if (levels == 0)
        return wrapped;
    const double step = two_pi / static_cast<double>(levels);
    const auto k = static_cast<unsigned long>(std::llround(wrapped / step)) % levels;
    return static_cast<double>(k) * step;
}

std::vector<double> phase_adjust(std::span<const cplx> ris_user, std::span<const cplx> los, double theta_user,
                                 double theta_x, const PhaseImpairments &impairments,
                                 std::span<const double> phase_errors)
{
    if (ris_user.size() != los.size())
        throw std::invalid_argument("phase_adjust: channel and LoS lengths differ");
    if (!phase_errors.empty() && phase_errors.size() != los.size())
        throw std::invalid_argument("phase_adjust: one phase error per element expected");

    std::vector<double> phases(los.size());
    for (std::size_t k = 0; k < los.size(); ++k)
    {
        const double phi = -std::arg(ris_user[k]);
        const double psi = -std::arg(los[k]);
        double p = phi + psi + theta_user + theta_x;
        if (!phase_errors.empty())
            p += phase_errors[k];
        phases[k] = quantize_phase(p, impairments.levels);
    }
    return phases;
}

// ---------------------------------------------------------------------------
// Realization

Realization::Realization(const Environment &env, const SystemConfig &config, Rng &rng)
    : m1_(config.m1), m2_(config.m2), n_(config.n), bs_link_(config.m1 > 0)
{
    if (env.c2.size() != m2_ || env.c1_gain.size() != m1_ || env.los.size() != n_)
        throw std::invalid_argument("environment does not match the system configuration");

    fading_ = channel::sample_fading(env.c2, env.c1_gain, env.correlation, rng);

    const double psk_step = 2.0 * pi / static_cast<double>(config.psk_order);
    theta_c2_.resize(m2_);
    for (auto &t : theta_c2_)
        t = psk_step * std::floor(rng.uniform() * static_cast<double>(config.psk_order));

    if (m1_ > 0)
    {
        std::vector<cplx> symbols(m1_);
        for (auto &s : symbols)
            s = std::polar(1.0, pi / 4.0 + pi / 2.0 * std::floor(rng.uniform() * 4.0));
        std::vector<double> zeta = config.power_allocation;
        if (zeta.empty())
            zeta.assign(m1_, 1.0 / static_cast<double>(m1_));
        theta_x_ = -std::arg(superpose(symbols, zeta, 1.0));
    }

    if (std::isfinite(config.von_mises_kappa))
    {
        errors_.resize(n_);
        for (auto &e : errors_)
            e = rng.von_mises(config.von_mises_kappa);
    }

    const PhaseImpairments impairments{config.phase_levels, config.von_mises_kappa};
    phases_.resize(m2_ * n_);
    for (std::size_t i = 0; i < m2_; ++i)
    {
        auto p = phase_adjust(fading_.ris_user[i], env.los, theta_c2_[i], theta_x_, impairments, errors_);
        std::copy(p.begin(), p.end(), phases_.begin() + static_cast<std::ptrdiff_t>(i * n_));
    }

    // Prefix sums of h_n g_{m,n} e^{j(Phi^(i)_n - theta_x)} for every (owner i, user m).
    prefix_.assign(m2_ * m2_ * (n_ + 1), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m2_; ++i)
    {
        const double *phi = phases_.data() + i * n_;
        std::vector<cplx> rot(n_);
        for (std::size_t k = 0; k < n_; ++k)
            rot[k] = env.los[k] * std::polar(1.0, phi[k] - theta_x_);
        for (std::size_t m = 0; m < m2_; ++m)
        {
            cplx *out = prefix_.data() + (i * m2_ + m) * (n_ + 1);
            const auto &g = fading_.ris_user[m];
            cplx acc = 0.0;
            for (std::size_t k = 0; k < n_; ++k)
            {
                acc += g[k] * rot[k];
                out[k + 1] = acc;
            }
        }
    }
}

std::span<const double> Realization::phases_for(std::size_t owner) const
{
    return std::span<const double>(phases_).subspan(owner * n_, n_);
}

cplx Realization::cascade(std::size_t owner, std::size_t user, std::size_t begin, std::size_t end) const
{
    const cplx *p = prefix_.data() + (owner * m2_ + user) * (n_ + 1);
    return p[end] - p[begin];
}

RealizationMetrics Realization::receive_c2(std::size_t user, const Partition &partition, double rho,
                                           LinkTerms terms) const
{
    if (user >= m2_ || partition.users() != m2_ || partition.total() != n_)
        throw std::invalid_argument("receive_c2: partition does not match the realization");

    RealizationMetrics out;
    cplx own = 0.0, ris_interference = 0.0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < m2_; ++i)
    {
        const std::size_t end = begin + partition.sizes[i];
        const cplx c = cascade(i, user, begin, end);
        if (i == user)
            own = c;
        else
            ris_interference += c;
        begin = end;
    }

    cplx interference = ris_interference;
    if (bs_link_ && terms.bs_interference)
        interference += fading_.bs_c2[user] * std::polar(1.0, -theta_x_);

    out.signal_power = std::norm(own);
    out.interference_power = std::norm(interference);
    out.ris_interference = ris_interference;
    const double denom = out.interference_power + (terms.noise ? 1.0 / rho : 0.0);
    if (out.signal_power == 0.0)
        out.sinr = 0.0;
    else
        out.sinr = denom > 0.0 ? out.signal_power / denom : std::numeric_limits<double>::infinity();
    out.rate = std::log2(1.0 + out.sinr);
    return out;
}

std::vector<double> Realization::c1_gains() const
{
    std::vector<double> g(m1_);
    for (std::size_t m = 0; m < m1_; ++m)
        g[m] = std::norm(fading_.bs_c1[m]);
    return g;
}

std::vector<RealizationMetrics> Realization::receive_c1(std::span<const double> allocation, double rho) const
{
    if (allocation.size() != m1_)
        throw std::invalid_argument("receive_c1: one allocation per C1 user expected");
    const auto gains = c1_gains();

    std::vector<std::size_t> order(m1_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });

    std::vector<RealizationMetrics> out(m1_);
    double later = 0.0; // allocation of users decoded after the current one
    for (std::size_t k = m1_; k-- > 0;)
    {
        const std::size_t u = order[k];
        auto &r = out[u];
        r.signal_power = allocation[u] * gains[u];
        r.interference_power = later * gains[u];
        r.sinr = rho * r.signal_power / (rho * r.interference_power + 1.0);
        r.rate = std::log2(1.0 + r.sinr);
        later += allocation[u];
    }
    return out;
}

std::vector<double> sic_rates(std::span<const double> gains, std::span<const double> allocation, double rho)
{
    if (gains.size() != allocation.size())
        throw std::invalid_argument("sic_rates: one allocation per user expected");
    const std::size_t m = gains.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] < gains[b]; });

    std::vector<double> rates(m);
    double later = 0.0;
    for (std::size_t k = m; k-- > 0;)
    {
        const std::size_t u = order[k];
        const double snr = rho * gains[u];
        rates[u] = std::log2(1.0 + snr * allocation[u] / (snr * later + 1.0));
        later += allocation[u];
    }
    return rates;
}

// ---------------------------------------------------------------------------
// Monte Carlo

ErgodicRates ergodic_rate(const SystemConfig &config, const MonteCarlo &mc)
{
    config.validate();
    if (config.m1 > 0 && config.power_allocation.empty())
        throw config_error("ergodic_rate needs a C1 power allocation");
    if (mc.trials == 0)
        throw std::invalid_argument("ergodic_rate needs at least one trial");

    const Environment env = make_environment(config);
    const double rho = config.rho();
    const std::size_t users = config.m1 + config.m2;
    const std::size_t n_blocks = (mc.trials + trial_block_size - 1) / trial_block_size;
    std::vector<std::vector<RunningStats>> blocks(n_blocks, std::vector<RunningStats>(users));

    for_each_block(mc.trials, mc.workers,
                   [&](std::size_t b, std::size_t begin, std::size_t end)
                   {
                       auto &stats = blocks[b];
                       for (std::size_t t = begin; t < end; ++t)
                       {
                           Rng rng = Rng::substream(mc.seed, Stream::trials, t);
                           const Realization r(env, config, rng);
                           const auto c1 = r.receive_c1(config.power_allocation, rho);
                           for (std::size_t m = 0; m < config.m1; ++m)
                               stats[m].add(c1[m].rate);
                           for (std::size_t m = 0; m < config.m2; ++m)
                               stats[config.m1 + m].add(r.receive_c2(m, config.partition, rho).rate);
                       }
                   });

    std::vector<RunningStats> total(users);
    for (const auto &b : blocks)
        for (std::size_t u = 0; u < users; ++u)
            total[u].merge(b[u]);

    ErgodicRates out;
    for (std::size_t u = 0; u < users; ++u)
    {
        const Estimate e{total[u].mean, total[u].half_width()};
        (u < config.m1 ? out.c1 : out.c2).push_back(e);
    }
    return out;
}

double C2Samples::rate(std::size_t partition, std::size_t trial, std::size_t user, double rho) const
{
    const std::size_t k = (partition * trials + trial) * users + user;
    const double a = signal[k];
    return a == 0.0 ? 0.0 : std::log2(1.0 + a / (interference[k] + 1.0 / rho));
}

std::vector<Estimate> C2Samples::rates(std::size_t partition, double rho) const
{
    std::vector<RunningStats> stats(users);
    for (std::size_t t = 0; t < trials; ++t)
        for (std::size_t m = 0; m < users; ++m)
            stats[m].add(rate(partition, t, m, rho));
    std::vector<Estimate> out;
    for (const auto &s : stats)
        out.push_back({s.mean, s.half_width()});
    return out;
}

std::vector<std::size_t> C2Samples::outages(std::size_t partition, double rho, double target_rate) const
{
    std::vector<std::size_t> count(users, 0);
    for (std::size_t t = 0; t < trials; ++t)
        for (std::size_t m = 0; m < users; ++m)
            if (rate(partition, t, m, rho) < target_rate)
                ++count[m];
    return count;
}

C2Samples sample_c2(const SystemConfig &config, const Environment &env, std::span<const Partition> partitions,
                    const MonteCarlo &mc)
{
    if (mc.trials == 0)
        throw std::invalid_argument("sample_c2 needs at least one trial");
    for (const auto &p : partitions)
        p.validate(config.n, config.m2);

    C2Samples s;
    s.partitions.assign(partitions.begin(), partitions.end());
    s.trials = mc.trials;
    s.users = config.m2;
    const std::size_t size = partitions.size() * s.trials * s.users;
    s.signal.resize(size);
    s.interference.resize(size);

    for_each_block(mc.trials, mc.workers,
                   [&](std::size_t, std::size_t begin, std::size_t end)
                   {
                       for (std::size_t t = begin; t < end; ++t)
                       {
                           Rng rng = Rng::substream(mc.seed, Stream::trials, t);
                           const Realization r(env, config, rng);
                           for (std::size_t p = 0; p < s.partitions.size(); ++p)
                               for (std::size_t m = 0; m < s.users; ++m)
                               {
                                   const auto metrics = r.receive_c2(m, s.partitions[p], 1.0, {true, false});
                                   const std::size_t k = (p * s.trials + t) * s.users + m;
                                   s.signal[k] = metrics.signal_power;
                                   s.interference[k] = metrics.interference_power;
                               }
                       }
                   });
    return s;
}

double sum_rate(std::span<const double> rates) { return std::accumulate(rates.begin(), rates.end(), 0.0); }

} // namespace risnoma::phy
