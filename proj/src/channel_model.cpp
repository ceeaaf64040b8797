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

#include "risnoma/channel_model.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace risnoma::channel
{

using std::numbers::pi;

double wavelength_for(double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw std::domain_error("carrier frequency must be positive");
    return speed_of_light / carrier_hz;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void RisGeometry::validate() const
{
    if (n_h == 0 || n_v == 0)
        throw std::invalid_argument("RIS geometry needs at least one element per row and column");
    if (!(d_l > 0.0) || !(d_w > 0.0))
        throw std::invalid_argument("RIS element length and width must be positive");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("wavelength must be positive");
}

RisGeometry RisGeometry::linear(std::size_t n, double wavelength, double pitch_wavelengths)
{
    RisGeometry g;
    g.n_h = n;
    g.n_v = 1;
    g.d_l = pitch_wavelengths * wavelength;
    g.d_w = pitch_wavelengths * wavelength;
    g.wavelength = wavelength;
    return g;
}

double bs_user_gain(double distance, double exponent, double ref_gain, double ref_distance)
{
    if (!(distance > 0.0) || !(ref_distance > 0.0))
        throw std::domain_error("BS-user distance must be positive");
    if (distance < ref_distance)
        throw std::domain_error("BS-user distance below the reference distance");
    return ref_gain * std::pow(distance / ref_distance, exponent);
}

double ris_hop_gain(double wavelength, double distance)
{
    if (!(distance > 0.0))
        throw std::domain_error("RIS link distance must be positive");
    return wavelength * wavelength / (16.0 * pi * distance * distance);
}

double ris_path_gain(double wavelength, double bs_ris_distance, double ris_user_distance)
{
    if (!(bs_ris_distance > 0.0) || !(ris_user_distance > 0.0))
        throw std::domain_error("RIS link distances must be positive");
    const double l2 = wavelength * wavelength;
    return l2 * l2 / (256.0 * pi * pi * bs_ris_distance * bs_ris_distance * ris_user_distance * ris_user_distance);
}

double far_field_distance(std::size_t n_elements, double wavelength)
{
    return std::ceil(static_cast<double>(n_elements) * wavelength / 2.0);
}

LinkBudget make_link_budget(double wavelength, double bs_user_distance, double bs_ris_distance,
                            double ris_user_distance, double exponent, double ref_gain, double ref_distance)
{
    LinkBudget b;
    b.bs_user_gain = bs_user_gain(bs_user_distance, exponent, ref_gain, ref_distance);
    b.bs_ris_gain = ris_hop_gain(wavelength, bs_ris_distance);
    b.ris_user_gain = ris_hop_gain(wavelength, ris_user_distance);
    return b;
}

double los_phase(const RisGeometry &geometry, std::size_t n)
{
    const std::size_t k = geometry.indexing == RisGeometry::LosIndexing::whole_surface ? n : n % geometry.n_h;
    return pi * static_cast<double>(k) * std::sin(geometry.azimuth_aoa) * std::sin(geometry.elevation_aoa);
}

std::vector<cplx> los_vector(const RisGeometry &geometry, double gain)
{
    if (!(gain > 0.0))
        throw std::domain_error("LoS gain must be positive");
    const double amplitude = std::sqrt(gain);
    std::vector<cplx> h(geometry.size());
    for (std::size_t n = 0; n < h.size(); ++n)
        h[n] = std::polar(amplitude, -los_phase(geometry, n));
    return h;
}

double sinc(double x)
{
    if (x == 0.0)
        return 1.0;
    // sin(pi k) is not exactly zero in floating point
    const double nearest = std::round(x);
    if (nearest != 0.0 && std::abs(x - nearest) < 1e-12)
        return 0.0;
    return std::sin(pi * x) / (pi * x);
}

Eigen::MatrixXd correlation_matrix(const RisGeometry &geometry)
{
    geometry.validate();
    const std::size_t n = geometry.size();
    Eigen::MatrixXd r(n, n);
    for (std::size_t a = 0; a < n; ++a)
    {
        r(a, a) = 1.0;
        const double ya = static_cast<double>(a % geometry.n_h) * geometry.d_l;
        const double za = static_cast<double>(a / geometry.n_h) * geometry.d_w;
        for (std::size_t b = a + 1; b < n; ++b)
        {
            const double yb = static_cast<double>(b % geometry.n_h) * geometry.d_l;
            const double zb = static_cast<double>(b / geometry.n_h) * geometry.d_w;
            const double v = sinc(2.0 * std::hypot(ya - yb, za - zb) / geometry.wavelength);
            r(a, b) = v;
            r(b, a) = v;
        }
    }
    return r;
}

CorrelationFactor CorrelationFactor::identity(std::size_t n)
{
    CorrelationFactor f;
    f.n_ = n;
    f.identity_ = true;
    return f;
}

CorrelationFactor CorrelationFactor::from_matrix(const Eigen::MatrixXd &correlation)
{
    if (correlation.rows() != correlation.cols())
        throw std::invalid_argument("correlation matrix must be square");
    if (!correlation.isApprox(correlation.transpose(), 1e-12))
        throw std::invalid_argument("correlation matrix must be symmetric");

    CorrelationFactor f;
    f.n_ = static_cast<std::size_t>(correlation.rows());
    if (correlation.isIdentity(0.0))
    {
        f.identity_ = true;
        return f;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(correlation);
    if (solver.info() != Eigen::Success)
        throw std::invalid_argument("eigendecomposition of the correlation matrix failed");

    Eigen::VectorXd eig = solver.eigenvalues();
    const double min_eig = eig.minCoeff();
    if (min_eig < -1e-8)
        throw std::invalid_argument("correlation matrix is indefinite (min eigenvalue " + std::to_string(min_eig) + ")");
    for (Eigen::Index i = 0; i < eig.size(); ++i)
    {
        if (eig(i) < 0.0)
        {
            f.clamped_mass_ += -eig(i);
            eig(i) = 0.0;
        }
    }
    if (f.clamped_mass_ > 0.0)
        spdlog::debug("correlation factor: clamped {:.3e} of negative eigenvalue mass", f.clamped_mass_);

    f.identity_ = false;
    f.factor_ = solver.eigenvectors() * eig.cwiseSqrt().asDiagonal();
    return f;
}

void CorrelationFactor::apply(std::span<const cplx> in, std::span<cplx> out) const
{
    if (in.size() != n_ || out.size() != n_)
        throw std::invalid_argument("correlation factor size mismatch");
    if (identity_)
    {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    for (std::size_t r = 0; r < n_; ++r)
    {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < n_; ++c)
            acc += factor_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * in[c];
        out[r] = acc;
    }
}

std::vector<cplx> sample_ris_vector(double ris_user_gain, const CorrelationFactor &correlation, Rng &rng)
{
    const std::size_t n = correlation.size();
    std::vector<cplx> white(n);
    for (auto &w : white)
        w = rng.complex_normal(ris_user_gain);
    if (correlation.is_identity())
        return white;
    std::vector<cplx> out(n);
    correlation.apply(white, out);
    return out;
}

FadingDraw sample_fading(std::span<const LinkBudget> c2, std::span<const double> c1_bs_gains,
                         const CorrelationFactor &correlation, Rng &rng)
{
    FadingDraw d;
    d.correlated = !correlation.is_identity();
    d.bs_c2.reserve(c2.size());
    d.ris_user.reserve(c2.size());
    for (const auto &b : c2)
    {
        d.bs_c2.push_back(rng.complex_normal(b.bs_user_gain));
        d.ris_user.push_back(sample_ris_vector(b.ris_user_gain, correlation, rng));
    }
    d.bs_c1.reserve(c1_bs_gains.size());
    for (double g : c1_bs_gains)
        d.bs_c1.push_back(rng.complex_normal(g));
    return d;
}

} // namespace risnoma::channel
