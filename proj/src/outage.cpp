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

#include "risnoma/outage.hpp"
#include "risnoma/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risnoma::outage
{

using std::numbers::pi;

namespace
{

// Upper Gaussian tail 1 - Phi(x).
double gauss_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// log(1 - Phi(x)), accurate far into the tail.
double log_gauss_tail(double x)
{
    if (x < 25.0)
        return std::log(gauss_tail(x));
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2;
    return -0.5 * x * x - std::log(x * std::sqrt(2.0 * pi)) + std::log(series);
}

double log_marcum_q_half(double a, double b)
{
    const double l1 = log_gauss_tail(b - a);
    const double l2 = log_gauss_tail(b + a);
    const double hi = std::max(l1, l2);
    return hi + std::log1p(std::exp(std::min(l1, l2) - hi));
}

void check_marcum_args(double a, double b)
{
    if (!(a >= 0.0) || !(b >= 0.0))
        throw std::domain_error("Marcum Q arguments must be non-negative");
}

double clamp_probability(double p, const char *what)
{
    const double c = std::clamp(p, 0.0, 1.0);
    if (c != p)
        spdlog::debug("{}: clamped {:.3e} into [0, 1]", what, std::abs(c - p));
    return c;
}

} // namespace

void OutageParams::validate() const
{
    if (!(target_rate >= 0.0))
        throw std::domain_error("target rate must be non-negative");
    if (!(transmit_snr > 0.0))
        throw std::domain_error("transmit SNR must be positive");
    if (n_own > n_total)
        throw std::domain_error("sub-surface larger than the surface");
    if (!(ris_gain >= 0.0) || !(bs_gain >= 0.0))
        throw std::domain_error("gains must be non-negative");
}

OutageTerms outage_terms(const OutageParams &p)
{
    p.validate();
    const double nm = static_cast<double>(p.n_own);
    const double rest = static_cast<double>(p.n_total - p.n_own);
    const double q = std::exp2(p.target_rate) - 1.0;
    OutageTerms t;
    t.mu = std::sqrt(p.ris_gain) * nm * std::sqrt(pi) / 2.0;
    t.s1_sq = p.ris_gain * nm * (4.0 - pi) / 4.0;
    t.s2_sq = 0.5 * q * (p.ris_gain * rest + p.bs_gain);
    t.y = q / p.transmit_snr;
    return t;
}

double marcum_q_half(double a, double b)
{
    check_marcum_args(a, b);
    if (b == 0.0)
        return 1.0;
    return std::min(1.0, gauss_tail(b - a) + gauss_tail(b + a));
}

double marcum_q_half_complement(double a, double b)
{
    check_marcum_args(a, b);
    if (b == 0.0)
        return 0.0;
    // 1 - Phi_c(b-a) - Phi_c(b+a) = Phi_c(a-b) - Phi_c(a+b)
    return std::max(0.0, gauss_tail(a - b) - gauss_tail(a + b));
}

double outage_exact(const OutageTerms &t)
{
    if (!(t.s1_sq > 0.0))
        throw std::domain_error("outage needs at least one own element and a positive RIS gain");
    const double s1 = std::sqrt(t.s1_sq);
    const double a = t.mu / s1;
    double p = marcum_q_half_complement(a, std::sqrt(t.y) / s1);

    if (t.s2_sq > 0.0)
    {
        const double sum = t.s1_sq + t.s2_sq;
        const double ratio = t.s2_sq / sum;
        const double a2 = a * std::sqrt(ratio);
        const double b2 = std::sqrt(t.y * sum / (t.s1_sq * t.s2_sq));
        const double log_term = 0.5 * std::log(ratio) + t.y / (2.0 * t.s2_sq) - t.mu * t.mu / (2.0 * sum) +
                                log_marcum_q_half(a2, b2);
        p += std::exp(log_term);
    }
    return clamp_probability(p, "outage_exact");
}

double outage_exact(const OutageParams &params) { return outage_exact(outage_terms(params)); }

double outage_asymptotic(const OutageTerms &t)
{
    const double sum = t.s1_sq + t.s2_sq;
    if (!(sum > 0.0))
        throw std::domain_error("asymptotic outage needs a nonzero variance");
    if (t.s2_sq == 0.0)
        return 0.0;
    return std::sqrt(t.s2_sq / sum) * std::exp(-t.mu * t.mu / (2.0 * sum));
}

double outage_asymptotic(const OutageParams &params) { return outage_asymptotic(outage_terms(params)); }

UniformOutage outage_uniform(std::size_t m2, std::size_t n_m)
{
    if (m2 < 1 || n_m < 1)
        throw std::domain_error("uniform outage needs m2 >= 1 and n_m >= 1");
    const double m = static_cast<double>(m2), n = static_cast<double>(n_m);
    const double d = 2.0 * m + 4.0 - pi;
    UniformOutage u;
    u.full = std::sqrt(2.0 * m / d) * std::exp(-pi * n / (2.0 * d));
    u.simplified = std::exp(-pi * n / (4.0 * m));
    return u;
}

std::size_t required_elements(std::size_t m2, double target_outage)
{
    if (m2 < 1)
        throw std::domain_error("required_elements needs m2 >= 1");
    if (!(target_outage > 0.0) || !(target_outage < 1.0))
        throw std::domain_error("target outage must lie in (0, 1)");
    const double n = std::ceil(-4.0 * static_cast<double>(m2) / pi * std::log(target_outage));
    if (n < 1.0)
    {
        spdlog::warn("required_elements: target {} needs no elements, using 1", target_outage);
        return 1;
    }
    return static_cast<std::size_t>(n);
}

RicianCfParams rayleigh_matched(const OutageTerms &t)
{
    return RicianCfParams{t.mu, std::sqrt(t.s1_sq), 0.0, std::sqrt(t.s2_sq)};
}

std::complex<double> rician_cf(const RicianCfParams &p, double w)
{
    using C = std::complex<double>;
    const C j(0.0, 1.0);
    const C da = 1.0 - 2.0 * j * w * p.std_a * p.std_a;
    const C di = 1.0 + 2.0 * j * w * p.std_i * p.std_i;
    const C ex = j * w * p.mean_a * p.mean_a / da - j * w * p.mean_i * p.mean_i / di;
    return std::exp(ex) / (std::sqrt(da) * di);
}

double gil_pelaez_cdf(const RicianCfParams &params, double y)
{
    if (!(params.std_a >= 0.0) || !(params.std_i >= 0.0))
        throw std::domain_error("CF standard deviations must be non-negative");
    const double scale = params.mean_a * params.mean_a + params.std_a * params.std_a +
                         params.mean_i * params.mean_i + params.std_i * params.std_i;
    if (!(scale > 0.0) || (params.std_a == 0.0 && params.std_i == 0.0))
        throw std::domain_error("CF inversion needs a non-degenerate variable");

    // Work with Y / scale so the oscillation frequency is O(1).
    const double r = std::sqrt(scale);
    const RicianCfParams n{params.mean_a / r, params.std_a / r, params.mean_i / r, params.std_i / r};
    const double yn = y / scale;

    auto integrand = [&](double w)
    {
        const auto v = std::exp(std::complex<double>(0.0, -w * yn)) * rician_cf(n, w);
        return v.imag() / w;
    };

    constexpr double w_min = 1e-10;
    constexpr double panel_tol = 1e-9;
    constexpr int max_doublings = 40;

    using Gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    double lo = w_min, hi = 1.0, total = 0.0, last = 0.0;
    int quiet = 0;
    for (int k = 0; k <= max_doublings; ++k)
    {
        last = Gk::integrate(integrand, lo, hi, 12, 1e-11);
        total += last;
        quiet = std::abs(last) < panel_tol ? quiet + 1 : 0;
        if (quiet >= 2)
            return clamp_probability(0.5 - total / pi, "gil_pelaez_cdf");
        lo = hi;
        hi *= 2.0;
    }
    throw numerical_error("Gil-Pelaez integral did not settle after " + std::to_string(max_doublings) +
                          " doublings (upper limit " + std::to_string(lo) + ", last panel " +
                          std::to_string(last) + ")");
}

Proportion wilson(std::size_t events, std::size_t trials, double z)
{
    Proportion p;
    p.events = events;
    p.trials = trials;
    if (trials == 0)
        return p;
    const double n = static_cast<double>(trials);
    const double ph = static_cast<double>(events) / n;
    const double z2 = z * z;
    p.value = ph;
    p.half_width = z / (1.0 + z2 / n) * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
    return p;
}

OutageParams outage_params(const phy::SystemConfig &config, const phy::Environment &env, std::size_t user,
                           double target_rate)
{
    if (user >= config.m2)
        throw std::invalid_argument("outage_params: user index out of range");
    OutageParams p;
    p.target_rate = target_rate;
    p.transmit_snr = config.rho();
    p.n_total = config.n;
    p.n_own = config.partition.sizes.at(user);
    p.ris_gain = env.c2[user].ris_total_gain();
    p.bs_gain = config.m1 > 0 ? env.c2[user].bs_user_gain : 0.0;
    return p;
}

std::vector<Proportion> outage_monte_carlo(const phy::SystemConfig &config, double target_rate,
                                           const MonteCarlo &mc)
{
    config.validate();
    if (mc.trials == 0)
        throw std::invalid_argument("outage_monte_carlo needs at least one trial");
    const phy::Environment env = phy::make_environment(config);
    const double rho = config.rho();
    const std::size_t n_blocks = (mc.trials + trial_block_size - 1) / trial_block_size;
    std::vector<std::vector<std::size_t>> counts(n_blocks, std::vector<std::size_t>(config.m2, 0));

    for_each_block(mc.trials, mc.workers,
                   [&](std::size_t b, std::size_t begin, std::size_t end)
                   {
                       for (std::size_t t = begin; t < end; ++t)
                       {
                           Rng rng = Rng::substream(mc.seed, Stream::trials, t);
                           const phy::Realization r(env, config, rng);
                           for (std::size_t m = 0; m < config.m2; ++m)
                               if (r.receive_c2(m, config.partition, rho).rate < target_rate)
                                   ++counts[b][m];
                       }
                   });

    std::vector<Proportion> out;
    for (std::size_t m = 0; m < config.m2; ++m)
    {
        std::size_t events = 0;
        for (const auto &c : counts)
            events += c[m];
        out.push_back(wilson(events, mc.trials));
    }
    return out;
}

} // namespace risnoma::outage
