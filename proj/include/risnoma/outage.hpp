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

#ifndef RISNOMA_OUTAGE_HPP
#define RISNOMA_OUTAGE_HPP

#include "risnoma/parallel.hpp"
#include "risnoma/phy_core.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace risnoma::outage
{

// Inputs of the C2 outage closed forms for one user.
struct OutageParams
{
    double target_rate = 1.0;  // gamma*, bits/s/Hz
    double transmit_snr = 1.0; // rho, linear
    std::size_t n_total = 1;   // N
    std::size_t n_own = 1;     // N_m
    double ris_gain = 0.0;     // L^RIS_m
    double bs_gain = 0.0;      // L^BS_m, 0 when no BS interference reaches the user

    void validate() const;
};

// Gaussian-approximation moments. sqrt(A) ~ N(mu, s1^2), (2^gamma* - 1) I is
// exponential with mean 2 s2^2, outage = P(A - (2^gamma* - 1) I < y).
struct OutageTerms
{
    double mu = 0.0;
    double s1_sq = 0.0;
    double s2_sq = 0.0;
    double y = 0.0; // (2^gamma* - 1) / rho
};

OutageTerms outage_terms(const OutageParams &params);

// Generalized Marcum Q of order 1/2 and its complement 1 - Q (computed
// without cancellation).
double marcum_q_half(double a, double b);
double marcum_q_half_complement(double a, double b);

double outage_exact(const OutageParams &params);
double outage_exact(const OutageTerms &terms);

// High-SNR limit (y -> 0).
double outage_asymptotic(const OutageParams &params);
double outage_asymptotic(const OutageTerms &terms);

struct UniformOutage
{
    double full = 0.0;
    double simplified = 0.0;
};

// High-SNR outage of a uniformly partitioned surface with unit target rate.
UniformOutage outage_uniform(std::size_t m2, std::size_t n_m);

// Elements per sub-surface so that the simplified uniform outage meets the
// target. Never returns less than 1.
std::size_t required_elements(std::size_t m2, double target_outage);

// Y = A - B, A a scaled noncentral chi-square with one degree of freedom
// (A = X^2, X ~ N(mean_a, std_a^2)) and B one with two degrees of freedom
// (B = |Z|^2, Z complex with mean magnitude mean_i and per-dimension std std_i).
struct RicianCfParams
{
    double mean_a = 0.0;
    double std_a = 0.0;
    double mean_i = 0.0;
    double std_i = 0.0;
};

// Moments that reproduce the Rayleigh closed form.
RicianCfParams rayleigh_matched(const OutageTerms &terms);

std::complex<double> rician_cf(const RicianCfParams &params, double w);

// P(Y < y) by characteristic-function inversion. Throws numerical_error when
// the truncated integral does not settle.
double gil_pelaez_cdf(const RicianCfParams &params, double y);

struct Proportion
{
    double value = 0.0;
    double half_width = 0.0; // 95% Wilson interval half-width
    std::size_t events = 0;
    std::size_t trials = 0;
};

Proportion wilson(std::size_t events, std::size_t trials, double z = 1.96);

// Closed-form inputs of C2 user `user` under config.partition.
OutageParams outage_params(const phy::SystemConfig &config, const phy::Environment &env, std::size_t user,
                           double target_rate);

// Fraction of coherence blocks with R_m < target_rate for every C2 user.
std::vector<Proportion> outage_monte_carlo(const phy::SystemConfig &config, double target_rate,
                                           const MonteCarlo &mc);

} // namespace risnoma::outage

#endif
