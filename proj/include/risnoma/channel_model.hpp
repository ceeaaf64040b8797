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

#ifndef RISNOMA_CHANNEL_MODEL_HPP
#define RISNOMA_CHANNEL_MODEL_HPP

#include "risnoma/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace risnoma::channel
{

using cplx = std::complex<double>;

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double default_carrier_hz = 1.8e9;

// Reference path-gain law of the direct BS-user links.
inline constexpr double default_path_exponent = -3.5;
inline constexpr double default_ref_gain = 1e-3; // -30 dB at the reference distance
inline constexpr double default_ref_distance = 1.0;

double wavelength_for(double carrier_hz);
double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Large-scale gains of one user. All values are linear power gains that
// multiply signal power; the RIS cascade gain is the product of its hops.
struct LinkBudget
{
    double bs_user_gain = 0.0; // L^BS
    double bs_ris_gain = 0.0;  // L^RISh
    double ris_user_gain = 0.0; // L^RISg

    double ris_total_gain() const { return bs_ris_gain * ris_user_gain; }
};

// Planar surface of n_h x n_v elements. Element n (zero based) sits at
// column n % n_h and row n / n_h.
struct RisGeometry
{
    enum class LosIndexing
    {
        whole_surface, // phase index runs row-major over all N elements
        per_row        // phase index restarts on every row
    };

    std::size_t n_h = 1;
    std::size_t n_v = 1;
    double d_l = 0.0; // element length (horizontal pitch), meters
    double d_w = 0.0; // element width (vertical pitch), meters
    double wavelength = 0.0;
    double elevation_aoa = 0.0; // radians
    double azimuth_aoa = 0.0;   // radians
    LosIndexing indexing = LosIndexing::whole_surface;

    std::size_t size() const { return n_h * n_v; }
    void validate() const;

    // Single row of n elements at the given pitch (in wavelengths).
    static RisGeometry linear(std::size_t n, double wavelength, double pitch_wavelengths = 0.5);
};

// ref_gain * (distance / ref_distance)^exponent.
double bs_user_gain(double distance, double exponent = default_path_exponent,
                    double ref_gain = default_ref_gain, double ref_distance = default_ref_distance);

// Far-field BS-RIS-user gain with maximum-gain elements, identical for every
// element: lambda^4 / (256 pi^2 r_s^2 r_m^2).
double ris_path_gain(double wavelength, double bs_ris_distance, double ris_user_distance);

// The two hops of ris_path_gain, each lambda^2 / (16 pi r^2).
double ris_hop_gain(double wavelength, double distance);

// Smallest integer BS-RIS distance ceil(N lambda / 2) that keeps the RIS in the far field.
double far_field_distance(std::size_t n_elements, double wavelength);

LinkBudget make_link_budget(double wavelength, double bs_user_distance, double bs_ris_distance,
                            double ris_user_distance, double exponent = default_path_exponent,
                            double ref_gain = default_ref_gain, double ref_distance = default_ref_distance);

// Deterministic LoS BS-RIS vector, [h]_n = sqrt(gain) exp(-j pi k(n) sin(psi_A) sin(psi_E)),
// where k(n) is the element's phase index under geometry.indexing.
std::vector<cplx> los_vector(const RisGeometry &geometry, double gain);

// Phase psi(n) the LoS vector applies to element n (the vector carries exp(-j psi)).
double los_phase(const RisGeometry &geometry, std::size_t n);

// Normalized sinc, sin(pi x) / (pi x). Exactly zero at nonzero integers.
double sinc(double x);

// [R]_{n,n'} = sinc(2 |u_n - u_n'| / lambda).
Eigen::MatrixXd correlation_matrix(const RisGeometry &geometry);

// Square-root factor F with F F^T = R (negative eigenvalues clamped).
class CorrelationFactor
{
public:
    static CorrelationFactor identity(std::size_t n);

    // Throws std::invalid_argument when R is not symmetric or has an
    // eigenvalue below -1e-8.
    static CorrelationFactor from_matrix(const Eigen::MatrixXd &correlation);

    std::size_t size() const { return n_; }
    bool is_identity() const { return identity_; }

    // Sum of the eigenvalues that were clamped to zero (magnitude).
    double clamped_mass() const { return clamped_mass_; }

    // out = F * in. in and out may not alias.
    void apply(std::span<const cplx> in, std::span<cplx> out) const;

private:
    std::size_t n_ = 0;
    bool identity_ = true;
    double clamped_mass_ = 0.0;
    Eigen::MatrixXd factor_;
};

// One coherence-block draw of the small-scale channels, already scaled by the
// large-scale gains.
struct FadingDraw
{
    std::vector<cplx> bs_c2;                 // v_m, per C2 user
    std::vector<cplx> bs_c1;                 // v~_m, per C1 user
    std::vector<std::vector<cplx>> ris_user; // g_m, length N per C2 user
    bool correlated = false;
};

// RIS-user vector ~ CN(0, gain * R), R given by its factor.
std::vector<cplx> sample_ris_vector(double ris_user_gain, const CorrelationFactor &correlation, Rng &rng);

// Draws v_m ~ CN(0, L^BS_m) and g_m for every C2 user, then v~_m for every C1 user.
FadingDraw sample_fading(std::span<const LinkBudget> c2, std::span<const double> c1_bs_gains,
                         const CorrelationFactor &correlation, Rng &rng);

} // namespace risnoma::channel

#endif
