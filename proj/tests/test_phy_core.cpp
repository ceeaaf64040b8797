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

#include "oracles.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/phy_core.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace risnoma;
using namespace risnoma::phy;
using std::numbers::pi;

namespace
{

SystemConfig two_user_config(std::size_t n = 40)
{
    SystemConfig c;
    c.m1 = 0;
    c.m2 = 2;
    c.n = n;
    c.partition = Partition::uniform(n, 2);
    c.c2_users = {{150.0, 146.0}, {100.0, 104.0}};
    c.transmit_power = channel::dbm_to_watts(30.0);
    return c;
}

SystemConfig general_config()
{
    SystemConfig c;
    c.m1 = 2;
    c.m2 = 2;
    c.n = 40;
    c.partition = Partition{{22, 18}};
    c.power_allocation = {0.7, 0.3};
    c.c1_users = {{150.0, 154.0}, {100.0, 104.0}};
    c.c2_users = {{250.0, 254.0}, {200.0, 204.0}};
    c.transmit_power = channel::dbm_to_watts(20.0);
    return c;
}

} // namespace

TEST_CASE("partition helpers")
{
    CHECK(Partition::uniform(50, 2).sizes == std::vector<std::size_t>{25, 25});
    CHECK(Partition::uniform(49, 2).sizes == std::vector<std::size_t>{25, 24});
    CHECK(Partition::uniform(10, 3).sizes == std::vector<std::size_t>{4, 3, 3});
    const Partition p{{35, 15}};
    CHECK(p.to_string() == "35-15");
    CHECK(p.total() == 50);
    CHECK(p.offset(1) == 35);
    CHECK(p.non_increasing());
    CHECK_FALSE(Partition{{15, 35}}.non_increasing());
    CHECK_NOTHROW(p.validate(50, 2));
    CHECK_THROWS(p.validate(51, 2));
    CHECK_THROWS(p.validate(50, 3));
    CHECK_THROWS(Partition{{50, 0}}.validate(50, 2));
}

TEST_CASE("system configuration validation")
{
    auto c = general_config();
    CHECK_NOTHROW(c.validate());
    c.power_allocation = {0.7, 0.3 + 1e-9};
    CHECK_THROWS_AS(c.validate(), config_error);
    c = general_config();
    c.partition = Partition{{20, 21}};
    CHECK_THROWS_AS(c.validate(), config_error);
    c = general_config();
    c.m2 = 0;
    CHECK_THROWS_AS(c.validate(), config_error);
    c = general_config();
    c.c1_users.pop_back();
    CHECK_THROWS_AS(c.validate(), config_error);
    c = general_config();
    c.noise_power = 0.0;
    CHECK_THROWS_AS(c.validate(), config_error);
}

TEST_CASE("superposition coding")
{
    const double p = 2.0;
    for (double z1 : {0.1, 0.5, 0.8})
    {
        const std::vector<cplx> x{cplx(1.0, 1.0) / std::sqrt(2.0), cplx(1.0, -1.0) / std::sqrt(2.0)};
        const std::vector<double> zeta{z1, 1.0 - z1};
        CHECK(std::abs(superpose(x, zeta, p) / std::sqrt(p)) == doctest::Approx(1.0));
    }
    const std::vector<cplx> one{cplx(0.3, -0.4)};
    const std::vector<double> full{1.0};
    CHECK(std::abs(superpose(one, full, p) - std::sqrt(p) * one[0]) < 1e-15);

    const std::vector<cplx> same{cplx(0.6, 0.8), cplx(0.6, 0.8)};
    const std::vector<double> half{0.5, 0.5};
    CHECK(std::abs(superpose(same, half, p) - std::sqrt(2.0 * p) * same[0]) < 1e-14);

    const std::vector<double> three{0.2, 0.3, 0.5};
    CHECK_THROWS(superpose(same, three, p));
}

TEST_CASE("phase quantization")
{
    for (double phase = -7.0; phase < 7.0; phase += 0.013)
    {
        const double q = quantize_phase(phase, 8);
        const double k = q / (pi / 4.0);
        CHECK(std::abs(k - std::round(k)) < 1e-12);
        const double err = std::remainder(q - phase, 2.0 * pi);
        CHECK(std::abs(err) <= pi / 8.0 + 1e-12);
        const double c = quantize_phase(phase, 0);
        CHECK(c >= 0.0);
        CHECK(c < 2.0 * pi);
        CHECK(std::abs(std::remainder(c - phase, 2.0 * pi)) < 1e-12);
    }
}

TEST_CASE("phase adjustment cancels the own-channel phases")
{
    Rng rng = Rng::substream(3, Stream::test, 0);
    std::vector<cplx> g(16), h(16);
    for (std::size_t n = 0; n < 16; ++n)
    {
        g[n] = rng.complex_normal(1.0);
        h[n] = std::polar(0.5, rng.uniform() * 6.0);
    }
    const double theta_m = pi / 2.0, theta_x = 0.7;
    const auto phi = phase_adjust(g, h, theta_m, theta_x, {});
    for (std::size_t n = 0; n < 16; ++n)
    {
        // residual after removing the symbol and signal phases
        const cplx term = h[n] * g[n] * std::polar(1.0, phi[n] - theta_m - theta_x);
        CHECK(std::abs(term.imag()) < 1e-12);
        CHECK(term.real() > 0.0);
    }

    const std::vector<double> zeros(16, 0.0);
    const auto with_zero_errors = phase_adjust(g, h, theta_m, theta_x, {}, zeros);
    for (std::size_t n = 0; n < 16; ++n)
        CHECK(with_zero_errors[n] == phi[n]);

    const auto coarse = phase_adjust(g, h, theta_m, theta_x, {8, infinite_kappa});
    for (double p : coarse)
    {
        const double k = p / (pi / 4.0);
        CHECK(std::abs(k - std::round(k)) < 1e-12);
    }
}

TEST_CASE("single-user link without interference")
{
    SystemConfig c;
    c.m1 = 0;
    c.m2 = 1;
    c.n = 32;
    c.partition = Partition{{32}};
    c.c2_users = {{100.0, 104.0}};
    const auto env = make_environment(c);
    Rng rng = Rng::substream(5, Stream::test, 0);
    const Realization r(env, c, rng);
    const auto m = r.receive_c2(0, c.partition, c.rho());

    double sum_beta = 0.0;
    for (std::size_t n = 0; n < c.n; ++n)
        sum_beta += std::abs(env.los[n] * r.fading().ris_user[0][n]);
    CHECK(m.interference_power == 0.0);
    CHECK(m.signal_power == doctest::Approx(sum_beta * sum_beta).epsilon(1e-12));
    CHECK(m.sinr == doctest::Approx(c.rho() * sum_beta * sum_beta).epsilon(1e-12));
    CHECK(m.rate == doctest::Approx(std::log2(1.0 + m.sinr)).epsilon(1e-14));
}

TEST_CASE("mean signal power matches the Rayleigh moments")
{
    auto c = two_user_config(40);
    c.partition = Partition{{24, 16}};
    const auto env = make_environment(c);
    const double l = env.c2[0].ris_total_gain();
    const double nm = 24.0;
    double sum = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t)
    {
        Rng rng = Rng::substream(21, Stream::trials, static_cast<std::uint64_t>(t));
        const Realization r(env, c, rng);
        sum += r.receive_c2(0, c.partition, c.rho()).signal_power;
    }
    const double expected = l * (nm * pi / 4.0 + nm * (nm - 1.0) * pi * pi / 16.0);
    CHECK(sum / trials == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("C1 SIC rates")
{
    const double rho = 1e3;
    const std::vector<double> g1{0.4};
    const std::vector<double> z1{1.0};
    CHECK(sic_rates(g1, z1, rho)[0] == doctest::Approx(std::log2(1.0 + rho * 0.4)));

    const std::vector<double> g{0.2, 1.5};
    const std::vector<double> z{0.8, 0.2};
    const auto r = sic_rates(g, z, rho);
    CHECK(r[0] == doctest::Approx(std::log2(1.0 + rho * 0.8 * 0.2 / (rho * 0.2 * 0.2 + 1.0))));
    CHECK(r[1] == doctest::Approx(std::log2(1.0 + rho * 0.2 * 1.5)));

    const std::vector<double> zs{1.0, 0.0};
    const auto free = sic_rates(g, zs, rho);
    CHECK(free[0] == doctest::Approx(std::log2(1.0 + rho * 0.2)));
    CHECK(free[1] == 0.0);

    // equal gains: index order breaks the tie, user 0 decodes first
    const std::vector<double> eq{1.0, 1.0};
    const auto tie = sic_rates(eq, z, rho);
    CHECK(tie[0] == doctest::Approx(std::log2(1.0 + rho * 0.8 / (rho * 0.2 + 1.0))));
    CHECK(tie[1] == doctest::Approx(std::log2(1.0 + rho * 0.2)));

    auto c = general_config();
    const auto env = make_environment(c);
    Rng rng = Rng::substream(9, Stream::test, 0);
    const Realization real(env, c, rng);
    const auto gains = real.c1_gains();
    const auto via = real.receive_c1(c.power_allocation, c.rho());
    const auto direct = sic_rates(gains, c.power_allocation, c.rho());
    for (std::size_t m = 0; m < 2; ++m)
        CHECK(via[m].rate == doctest::Approx(direct[m]).epsilon(1e-14));
}

TEST_CASE("SINR increases with transmit SNR")
{
    auto c = general_config();
    const auto env = make_environment(c);
    Rng rng = Rng::substream(10, Stream::test, 0);
    const Realization r(env, c, rng);
    for (std::size_t m = 0; m < 2; ++m)
    {
        double last = -1.0;
        for (double rho = 1e6; rho < 1e16; rho *= 3.0)
        {
            const double s = r.receive_c2(m, c.partition, rho).sinr;
            CHECK(s > last);
            last = s;
        }
    }
}

TEST_CASE("signal power invariant to symbols and arrival angles")
{
    auto a = general_config();
    a.elevation_aoa = 0.3;
    a.azimuth_aoa = -0.4;
    auto b = a;
    b.elevation_aoa = 1.2;
    b.azimuth_aoa = 0.9;
    auto c = a;
    c.psk_order = 8;
    const auto ea = make_environment(a), eb = make_environment(b), ec = make_environment(c);

    std::vector<double> ia, ib;
    for (int t = 0; t < 4000; ++t)
    {
        Rng ra = Rng::substream(31, Stream::trials, static_cast<std::uint64_t>(t));
        Rng rb = Rng::substream(31, Stream::trials, static_cast<std::uint64_t>(t));
        Rng rc = Rng::substream(31, Stream::trials, static_cast<std::uint64_t>(t));
        Rng rd = Rng::substream(32, Stream::trials, static_cast<std::uint64_t>(t));
        const Realization xa(ea, a, ra), xb(eb, b, rb), xc(ec, c, rc), xd(eb, b, rd);
        for (std::size_t m = 0; m < 2; ++m)
        {
            const double sa = xa.receive_c2(m, a.partition, a.rho()).signal_power;
            CHECK(xb.receive_c2(m, b.partition, b.rho()).signal_power == doctest::Approx(sa).epsilon(1e-10));
            CHECK(xc.receive_c2(m, c.partition, c.rho()).signal_power == doctest::Approx(sa).epsilon(1e-10));
        }
        ia.push_back(xa.receive_c2(0, a.partition, a.rho()).interference_power);
        ib.push_back(xd.receive_c2(0, b.partition, b.rho()).interference_power);
    }
    CHECK(oracle::ks_pvalue_two(ia, ib) > 0.01);
}

TEST_CASE("signal power ignores the other users' layout")
{
    SystemConfig c;
    c.m1 = 0;
    c.m2 = 3;
    c.n = 40;
    c.partition = Partition{{20, 12, 8}};
    c.c2_users = {{150.0, 146.0}, {120.0, 124.0}, {100.0, 104.0}};
    const auto env = make_environment(c);
    const Partition swapped{{20, 8, 12}};
    for (int t = 0; t < 50; ++t)
    {
        Rng rng = Rng::substream(4, Stream::trials, static_cast<std::uint64_t>(t));
        const Realization r(env, c, rng);
        CHECK(r.receive_c2(0, c.partition, c.rho()).signal_power ==
              r.receive_c2(0, swapped, c.rho()).signal_power);
    }
}

TEST_CASE("fine quantization approaches continuous phases")
{
    auto c = two_user_config();
    auto q = c;
    q.phase_levels = 1u << 16;
    auto z = c;
    z.phase_levels = 8;
    const auto env = make_environment(c);
    for (int t = 0; t < 20; ++t)
    {
        Rng r1 = Rng::substream(8, Stream::trials, static_cast<std::uint64_t>(t));
        Rng r2 = Rng::substream(8, Stream::trials, static_cast<std::uint64_t>(t));
        Rng r3 = Rng::substream(8, Stream::trials, static_cast<std::uint64_t>(t));
        const Realization a(env, c, r1), b(env, q, r2), d(env, z, r3);
        const double sa = a.receive_c2(0, c.partition, c.rho()).signal_power;
        CHECK(b.receive_c2(0, c.partition, c.rho()).signal_power == doctest::Approx(sa).epsilon(1e-7));
        CHECK(d.receive_c2(0, c.partition, c.rho()).signal_power < sa * (1.0 + 1e-12));
        for (std::size_t n = 0; n < c.n; ++n)
        {
            const double err = std::remainder(b.phases_for(0)[n] - a.phases_for(0)[n], 2.0 * pi);
            CHECK(std::abs(err) <= pi / q.phase_levels + 1e-12);
        }
    }
}

TEST_CASE("infinite concentration is the error-free path")
{
    auto c = two_user_config();
    const auto env = make_environment(c);
    Rng r1 = Rng::substream(1, Stream::trials, 0);
    const Realization a(env, c, r1);
    CHECK(a.phase_errors().empty());

    auto k = c;
    k.von_mises_kappa = 1e14;
    Rng r2 = Rng::substream(1, Stream::trials, 0);
    const Realization b(env, k, r2);
    CHECK(b.phase_errors().size() == c.n);
    CHECK(b.receive_c2(0, c.partition, c.rho()).signal_power ==
          doctest::Approx(a.receive_c2(0, c.partition, c.rho()).signal_power).epsilon(1e-9));
}

TEST_CASE("von Mises sampler")
{
    Rng rng = Rng::substream(77, Stream::test, 0);
    const double kappa = 4.0;
    double c = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        c += std::cos(rng.von_mises(kappa));
    // E[cos] = I1(kappa) / I0(kappa)
    const double expected = boost::math::cyl_bessel_i(1, kappa) / boost::math::cyl_bessel_i(0, kappa);
    CHECK(c / n == doctest::Approx(expected).epsilon(0.005));
    CHECK(rng.von_mises(infinite_kappa) == 0.0);
}

TEST_CASE("no BS interference without C1 users")
{
    auto c = two_user_config();
    const auto env = make_environment(c);
    for (int t = 0; t < 20; ++t)
    {
        Rng rng = Rng::substream(6, Stream::trials, static_cast<std::uint64_t>(t));
        const Realization r(env, c, rng);
        for (std::size_t m = 0; m < 2; ++m)
        {
            const auto with = r.receive_c2(m, c.partition, c.rho(), {true, true});
            const auto without = r.receive_c2(m, c.partition, c.rho(), {false, true});
            CHECK(with.sinr == without.sinr);
            CHECK(with.interference_power == doctest::Approx(std::norm(with.ris_interference)).epsilon(1e-14));
        }
    }

    auto g = general_config();
    const auto eg = make_environment(g);
    Rng rng = Rng::substream(6, Stream::trials, 0);
    const Realization r(eg, g, rng);
    const auto full = r.receive_c2(0, g.partition, g.rho());
    const auto ris_only = r.receive_c2(0, g.partition, g.rho(), {false, true});
    CHECK(ris_only.interference_power == doctest::Approx(std::norm(full.ris_interference)).epsilon(1e-14));
    const cplx v = r.fading().bs_c2[0] * std::polar(1.0, -r.theta_x());
    CHECK(full.interference_power == doctest::Approx(std::norm(full.ris_interference + v)).epsilon(1e-12));
}

TEST_CASE("ergodic rate")
{
    MonteCarlo mc{2000, 3, 1};
    auto c = general_config();
    c.transmit_power = 1e-20;
    const auto low = ergodic_rate(c, mc);
    for (const auto &e : low.c1)
        CHECK(e.mean < 1e-6);
    for (const auto &e : low.c2)
        CHECK(e.mean < 1e-6);

    // doubling the surface of a lone user adds about 2 bits at high SNR
    SystemConfig s;
    s.m1 = 0;
    s.m2 = 1;
    s.c2_users = {{100.0, 104.0}};
    s.bs_ris_distance = 10.0;
    s.transmit_power = channel::dbm_to_watts(40.0);
    s.n = 40;
    s.partition = Partition{{40}};
    const double r40 = ergodic_rate(s, {10000, 5, 1}).c2[0].mean;
    s.n = 80;
    s.partition = Partition{{80}};
    const double r80 = ergodic_rate(s, {10000, 5, 1}).c2[0].mean;
    CHECK(r80 - r40 == doctest::Approx(2.0).epsilon(0.05));

    // Monte Carlo self-consistency
    auto g = general_config();
    const auto small = ergodic_rate(g, {10000, 41, 1});
    const auto large = ergodic_rate(g, {100000, 42, 1});
    for (std::size_t m = 0; m < 2; ++m)
    {
        CHECK(std::abs(small.c2[m].mean - large.c2[m].mean) <= small.c2[m].half_width + large.c2[m].half_width);
        CHECK(std::abs(small.c1[m].mean - large.c1[m].mean) <= small.c1[m].half_width + large.c1[m].half_width);
    }

    // bit-identical across worker counts
    const auto w1 = ergodic_rate(g, {3000, 9, 1});
    const auto w3 = ergodic_rate(g, {3000, 9, 3});
    for (std::size_t m = 0; m < 2; ++m)
    {
        CHECK(w1.c2[m].mean == w3.c2[m].mean);
        CHECK(w1.c2[m].half_width == w3.c2[m].half_width);
        CHECK(w1.c1[m].mean == w3.c1[m].mean);
    }
}

TEST_CASE("C2 sample table agrees with direct evaluation")
{
    auto c = general_config();
    const auto env = make_environment(c);
    const std::vector<Partition> parts{c.partition, Partition{{30, 10}}};
    const auto s = sample_c2(c, env, parts, {500, 17, 2});
    for (std::size_t t = 0; t < 500; t += 37)
    {
        Rng rng = Rng::substream(17, Stream::trials, t);
        const Realization r(env, c, rng);
        for (std::size_t p = 0; p < parts.size(); ++p)
            for (std::size_t m = 0; m < 2; ++m)
                CHECK(s.rate(p, t, m, c.rho()) ==
                      doctest::Approx(r.receive_c2(m, parts[p], c.rho()).rate).epsilon(1e-12));
    }
}

TEST_CASE("sum rate")
{
    const std::vector<double> zero{0.0, 0.0};
    const std::vector<double> one{1.7};
    const std::vector<double> two{1.0, 2.0};
    CHECK(sum_rate(zero) == 0.0);
    CHECK(sum_rate(one) == 1.7);
    CHECK(sum_rate(two) == 3.0);
}
