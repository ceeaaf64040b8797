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

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace risnoma;
using namespace risnoma::channel;
using std::numbers::pi;

namespace
{
constexpr double lambda_18 = 0.16655;
}

TEST_CASE("direct link gain law")
{
    CHECK(bs_user_gain(1.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(bs_user_gain(100.0) == doctest::Approx(1e-10).epsilon(1e-12));
    CHECK(bs_user_gain(150.0) / bs_user_gain(100.0) == doctest::Approx(0.2422).epsilon(1e-3));
    CHECK(bs_user_gain(150.0) < bs_user_gain(149.0));
    CHECK_THROWS_AS(bs_user_gain(0.0), std::domain_error);
    CHECK_THROWS_AS(bs_user_gain(-3.0), std::domain_error);
    CHECK_THROWS_AS(bs_user_gain(0.5), std::domain_error);
}

TEST_CASE("RIS cascade gain")
{
    CHECK(ris_path_gain(lambda_18, 4.0, 104.0) == doctest::Approx(1.76e-12).epsilon(0.01));
    const double g = ris_path_gain(lambda_18, 4.0, 104.0);
    CHECK(ris_path_gain(lambda_18, 4.0, 208.0) == doctest::Approx(g / 4.0).epsilon(1e-15));
    CHECK(ris_path_gain(2.0 * lambda_18, 4.0, 104.0) == doctest::Approx(16.0 * g).epsilon(1e-15));
    CHECK_THROWS_AS(ris_path_gain(lambda_18, 0.0, 104.0), std::domain_error);
    CHECK_THROWS_AS(ris_path_gain(lambda_18, 4.0, 0.0), std::domain_error);

    const LinkBudget b = make_link_budget(lambda_18, 100.0, 4.0, 104.0);
    CHECK(b.ris_total_gain() == doctest::Approx(g).epsilon(1e-15));
    CHECK(b.ris_total_gain() == b.bs_ris_gain * b.ris_user_gain);
    CHECK(b.bs_user_gain > 0.0);
    CHECK(b.bs_ris_gain > 0.0);
    CHECK(b.ris_user_gain > 0.0);
}

TEST_CASE("far-field distance")
{
    CHECK(far_field_distance(40, lambda_18) == 4.0);
    CHECK(far_field_distance(80, lambda_18) == 7.0);
    CHECK(far_field_distance(2, 1.0) == 1.0);
    CHECK(wavelength_for(1.8e9) == doctest::Approx(lambda_18).epsilon(1e-4));
}

TEST_CASE("LoS vector")
{
    RisGeometry g = RisGeometry::linear(8, lambda_18);
    g.azimuth_aoa = 0.0;
    g.elevation_aoa = 0.7;
    for (const auto &h : los_vector(g, 4.0))
    {
        CHECK(h.real() == doctest::Approx(2.0));
        CHECK(h.imag() == doctest::Approx(0.0));
    }

    g.azimuth_aoa = pi / 2.0;
    g.elevation_aoa = pi / 2.0;
    const auto h = los_vector(g, 1.0);
    CHECK(los_phase(g, 1) == doctest::Approx(pi));
    CHECK(h[1].real() == doctest::Approx(-1.0));
    CHECK(std::abs(h[1].imag()) < 1e-12);

    g.azimuth_aoa = 0.3;
    g.elevation_aoa = 1.1;
    const auto a = los_vector(g, 1.0);
    const auto b = los_vector(g, 9.0);
    for (std::size_t n = 0; n < a.size(); ++n)
    {
        CHECK(std::abs(a[n]) == doctest::Approx(1.0));
        CHECK(std::abs(b[n] - 3.0 * a[n]) < 1e-12);
    }
    CHECK_THROWS(los_vector(g, 0.0));
}

TEST_CASE("LoS indexing on planar surfaces")
{
    RisGeometry g;
    g.n_h = 4;
    g.n_v = 2;
    g.d_l = g.d_w = lambda_18 / 2.0;
    g.wavelength = lambda_18;
    g.azimuth_aoa = 0.4;
    g.elevation_aoa = 0.9;
    CHECK(los_phase(g, 5) == doctest::Approx(5.0 * pi * std::sin(0.4) * std::sin(0.9)));
    g.indexing = RisGeometry::LosIndexing::per_row;
    CHECK(los_phase(g, 5) == doctest::Approx(1.0 * pi * std::sin(0.4) * std::sin(0.9)));
}

TEST_CASE("sinc and correlation matrix")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1.0) == 0.0);
    CHECK(sinc(-3.0) == 0.0);
    CHECK(sinc(0.5) == doctest::Approx(2.0 / pi));

    // single row at half-wavelength pitch: every distance is a multiple of lambda/2
    const auto r = correlation_matrix(RisGeometry::linear(16, lambda_18, 0.5));
    CHECK(r.isIdentity(0.0));

    const auto q = correlation_matrix(RisGeometry::linear(6, lambda_18, 0.25));
    CHECK(q(0, 0) == 1.0);
    CHECK(q(0, 1) == doctest::Approx(2.0 / pi));
    CHECK(q(2, 3) == doctest::Approx(2.0 / pi));
    CHECK(q(0, 2) == 0.0);
    CHECK(q.isApprox(q.transpose(), 0.0));

    // on a planar grid the diagonal neighbours sit sqrt(2) lambda/2 apart
    RisGeometry p;
    p.n_h = 3;
    p.n_v = 3;
    p.d_l = p.d_w = lambda_18 / 2.0;
    p.wavelength = lambda_18;
    const auto m = correlation_matrix(p);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(0, 3) == 0.0);
    CHECK(m(0, 4) == doctest::Approx(std::sin(pi * std::sqrt(2.0)) / (pi * std::sqrt(2.0))));
    CHECK(m(0, 4) < -0.2);
}

TEST_CASE("correlation factor")
{
    const auto id = CorrelationFactor::from_matrix(Eigen::MatrixXd::Identity(5, 5));
    CHECK(id.is_identity());

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;
    CHECK_THROWS_AS(CorrelationFactor::from_matrix(bad), std::invalid_argument);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(CorrelationFactor::from_matrix(asym), std::invalid_argument);

    const auto r = correlation_matrix(RisGeometry::linear(12, lambda_18, 0.25));
    const auto f = CorrelationFactor::from_matrix(r);
    CHECK_FALSE(f.is_identity());
    CHECK(f.clamped_mass() < 1e-8);
}

TEST_CASE("uncorrelated Rayleigh amplitudes")
{
    Rng rng = Rng::substream(11, Stream::test, 0);
    const auto f = CorrelationFactor::identity(10);
    const double gain = 2.5e-6;
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (int t = 0; t < 100000; ++t)
    {
        for (const auto &g : sample_ris_vector(gain, f, rng))
        {
            const double a = std::abs(g) / std::sqrt(gain);
            sum += a;
            sq += a * a;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sq / static_cast<double>(count) - mean * mean;
    CHECK(mean == doctest::Approx(std::sqrt(pi) / 2.0).epsilon(0.01));
    CHECK(var == doctest::Approx((4.0 - pi) / 4.0).epsilon(0.02));

    for (const auto &g : sample_ris_vector(0.0, f, rng))
        CHECK(g == cplx(0.0, 0.0));
}

TEST_CASE("BS coefficients have the link variance")
{
    Rng rng = Rng::substream(12, Stream::test, 0);
    const std::vector<LinkBudget> c2{{3e-10, 1.0, 1.0}};
    const std::vector<double> c1{7e-11};
    const auto f = CorrelationFactor::identity(2);
    double s2 = 0.0, s1 = 0.0;
    const int n = 200000;
    for (int t = 0; t < n; ++t)
    {
        const auto d = sample_fading(c2, c1, f, rng);
        s2 += std::norm(d.bs_c2[0]);
        s1 += std::norm(d.bs_c1[0]);
        CHECK(d.ris_user[0].size() == 2);
    }
    CHECK(s2 / n == doctest::Approx(3e-10).epsilon(0.02));
    CHECK(s1 / n == doctest::Approx(7e-11).epsilon(0.02));
}

TEST_CASE("correlated draws reproduce the covariance")
{
    const auto geom = RisGeometry::linear(5, lambda_18, 0.25);
    const auto r = correlation_matrix(geom);
    const auto f = CorrelationFactor::from_matrix(r);
    const double gain = 3.0;
    const int n = 100000;
    Rng rng = Rng::substream(13, Stream::test, 0);

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(5, 5);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(5, 5);
    for (int t = 0; t < n; ++t)
    {
        const auto g = sample_ris_vector(gain, f, rng);
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
            {
                const cplx p = g[a] * std::conj(g[b]);
                sum(a, b) += p;
                sq(a, b) += p.real() * p.real();
            }
    }
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
        {
            const double mean = sum(a, b).real() / n;
            const double se = std::sqrt((sq(a, b) / n - mean * mean) / n);
            CHECK(std::abs(mean - gain * r(a, b)) < 3.0 * se + 1e-12);
        }
}
