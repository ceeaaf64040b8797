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

#ifndef RISNOMA_PHY_CORE_HPP
#define RISNOMA_PHY_CORE_HPP

#include "risnoma/channel_model.hpp"
#include "risnoma/parallel.hpp"
#include "risnoma/random.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace risnoma::phy
{

using channel::cplx;

inline constexpr double infinite_kappa = std::numeric_limits<double>::infinity();

// Ordered element counts (N_1, ..., N_M2). Sub-surface i occupies the
// contiguous element range [offset(i), offset(i) + sizes[i]).
struct Partition
{
    std::vector<std::size_t> sizes;

    std::size_t users() const { return sizes.size(); }
    std::size_t total() const;
    std::size_t offset(std::size_t i) const;
    bool non_increasing() const;

    // Throws std::invalid_argument unless there are m2 positive sizes summing to n.
    void validate(std::size_t n, std::size_t m2) const;

    // "35-15"
    std::string to_string() const;

    static Partition uniform(std::size_t n, std::size_t m2);

    bool operator==(const Partition &) const = default;
};

struct UserPosition
{
    double bs_distance = 0.0;  // d, meters
    double ris_distance = 0.0; // r, meters
};

struct SystemConfig
{
    double transmit_power = 1.0;                           // P, watts
    double noise_power = channel::dbm_to_watts(-90.0);     // sigma^2, watts
    std::size_t m1 = 0;
    std::size_t m2 = 1;
    std::size_t n = 1;
    Partition partition;
    std::vector<double> power_allocation; // zeta_1..zeta_M1
    unsigned psk_order = 4;
    unsigned phase_levels = 0;            // Z, 0 = continuous phases
    double von_mises_kappa = infinite_kappa;
    std::vector<UserPosition> c1_users;
    std::vector<UserPosition> c2_users;   // farthest from the RIS first

    double carrier_hz = channel::default_carrier_hz;
    double path_exponent = channel::default_path_exponent;
    double ref_gain = channel::default_ref_gain;
    double ref_distance = channel::default_ref_distance;
    double bs_ris_distance = 0.0;         // 0 selects ceil(N lambda / 2)
    std::size_t n_h = 0;                  // elements per row, 0 selects a single row
    double element_pitch = 0.5;           // wavelengths
    double elevation_aoa = std::numeric_limits<double>::quiet_NaN(); // NaN: drawn from the seed
    double azimuth_aoa = std::numeric_limits<double>::quiet_NaN();
    channel::RisGeometry::LosIndexing los_indexing = channel::RisGeometry::LosIndexing::whole_surface;
    bool correlated = false;
    std::uint64_t seed = 1;

    double rho() const { return transmit_power / noise_power; }

    // Throws config_error on any violated invariant.
    void validate() const;
};

// Scenario quantities that stay fixed across coherence blocks.
struct Environment
{
    channel::RisGeometry geometry;
    double bs_ris_distance = 0.0;
    std::vector<channel::LinkBudget> c2;
    std::vector<double> c1_gain;
    std::vector<cplx> los; // [h]_n including sqrt(L^RISh)
    channel::CorrelationFactor correlation;
};

Environment make_environment(const SystemConfig &config);

// Environment with unit large-scale gains and zero BS links (no correlation),
// used where only the RIS interference ratio matters.
Environment unit_gain_environment(std::size_t n, std::size_t m2);

struct PhaseImpairments
{
    unsigned levels = 0;                // Z, 0 = continuous
    double kappa = infinite_kappa;      // von Mises concentration
};

// sum_m sqrt(P zeta_m) x_m
cplx superpose(std::span<const cplx> symbols, std::span<const double> allocations, double power);

// Nearest point of {0, 2pi/Z, ..., 2pi(Z-1)/Z}; identity (wrapped to [0, 2pi)) when Z = 0.
double quantize_phase(double phase, unsigned levels);

// Reflection phases for a sub-surface serving one user:
// Phi_n = phi_n + psi_n + theta_user + theta_x, where g_n = |g_n| e^{-j phi_n},
// h_n = |h_n| e^{-j psi_n}, and the transmitted signal is |x| e^{-j theta_x}.
// phase_errors (may be empty) are added before quantization.
std::vector<double> phase_adjust(std::span<const cplx> ris_user, std::span<const cplx> los, double theta_user,
                                 double theta_x, const PhaseImpairments &impairments,
                                 std::span<const double> phase_errors = {});

struct RealizationMetrics
{
    double signal_power = 0.0;       // A_m
    double interference_power = 0.0; // I_m
    cplx ris_interference = 0.0;     // I_RIS
    double sinr = 0.0;
    double rate = 0.0;               // log2(1 + sinr)
};

// Which impairments enter the C2 SINR denominator.
struct LinkTerms
{
    bool bs_interference = true;
    bool noise = true;
};

// One coherence block: fading, PSK and superposed symbols, and phase errors.
// Reflection phases are precomputed for every (serving user, element) pair, so
// any partition can be evaluated on the same block.
class Realization
{
public:
    Realization(const Environment &env, const SystemConfig &config, Rng &rng);

    const channel::FadingDraw &fading() const { return fading_; }
    std::size_t m1() const { return m1_; }
    std::size_t m2() const { return m2_; }
    std::size_t n() const { return n_; }

    // theta_x with the transmitted BS signal written x = |x| e^{-j theta_x}.
    double theta_x() const { return theta_x_; }
    double c2_symbol(std::size_t user) const { return theta_c2_[user]; }

    // Per-element von Mises errors of this block, empty when kappa is infinite.
    std::span<const double> phase_errors() const { return errors_; }

    // Reflection phases of the whole surface if every element served `owner`.
    std::span<const double> phases_for(std::size_t owner) const;

    // sum over elements [begin, end) of h_n g_{user,n} e^{j Phi_n}, with the
    // elements configured for `owner`; the common signal phase is factored out.
    cplx cascade(std::size_t owner, std::size_t user, std::size_t begin, std::size_t end) const;

    RealizationMetrics receive_c2(std::size_t user, const Partition &partition, double rho,
                                  LinkTerms terms = {}) const;

    // Downlink SIC inside C1 (no C2 term reaches C1 users).
    std::vector<RealizationMetrics> receive_c1(std::span<const double> allocation, double rho) const;

    // |v~_m|^2 of the C1 users.
    std::vector<double> c1_gains() const;

private:
    std::size_t m1_ = 0, m2_ = 0, n_ = 0;
    bool bs_link_ = false;
    channel::FadingDraw fading_;
    double theta_x_ = 0.0;
    std::vector<double> theta_c2_;
    std::vector<double> errors_;
    std::vector<double> phases_;   // m2 x n
    std::vector<cplx> prefix_;     // m2 (owner) x m2 (user) x (n + 1)
};

// SIC rates of users sharing one superposition-coded message. gains are
// effective channel power gains; users decode in ascending gain order (index
// breaks ties) and see interference from users decoded after them.
std::vector<double> sic_rates(std::span<const double> gains, std::span<const double> allocation, double rho);

struct Estimate
{
    double mean = 0.0;
    double half_width = 0.0; // 1.96 standard errors
};

struct ErgodicRates
{
    std::vector<Estimate> c1;
    std::vector<Estimate> c2;
};

// Signal and interference powers of every C2 user under several candidate
// partitions, all evaluated on the same coherence blocks. Rates follow for any
// transmit SNR without redrawing.
struct C2Samples
{
    std::vector<Partition> partitions;
    std::size_t trials = 0;
    std::size_t users = 0;
    std::vector<double> signal;       // [(partition * trials + trial) * users + user]
    std::vector<double> interference;

    double rate(std::size_t partition, std::size_t trial, std::size_t user, double rho) const;
    std::vector<Estimate> rates(std::size_t partition, double rho) const;
    // Trials with rate below target_rate, per user.
    std::vector<std::size_t> outages(std::size_t partition, double rho, double target_rate) const;
};

C2Samples sample_c2(const SystemConfig &config, const Environment &env, std::span<const Partition> partitions,
                    const MonteCarlo &mc);

// Mean instantaneous rates over mc.trials coherence blocks, using
// config.partition and config.power_allocation.
ErgodicRates ergodic_rate(const SystemConfig &config, const MonteCarlo &mc);

double sum_rate(std::span<const double> rates);

} // namespace risnoma::phy

#endif
