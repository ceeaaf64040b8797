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

// Independent reference computations shared by the test binaries.

#ifndef RISNOMA_TESTS_ORACLES_HPP
#define RISNOMA_TESTS_ORACLES_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle
{

// Q_{1/2}(a, b) from its Bessel-integral definition,
// a^{1/2} int_b^inf x^{1/2} exp(-(x^2 + a^2)/2) I_{-1/2}(a x) dx.
inline double marcum_q_half(double a, double b)
{
    if (b == 0.0)
        return 1.0;
    if (a == 0.0)
        return boost::math::gamma_q(0.5, 0.5 * b * b);
    auto f = [a](double x)
    {
        if (x <= 0.0)
            return 0.0;
        const double log_i = std::log(boost::math::cyl_bessel_i(-0.5, a * x));
        return std::exp(0.5 * std::log(a) + 0.5 * std::log(x) + log_i - 0.5 * (x * x + a * a));
    };
    const double upper = std::max(a, b) + 12.0;
    if (b >= upper)
        return 0.0;
    // split at the peak so the adaptive rule sees a smooth bump on each side
    double total = 0.0;
    const double mid = std::clamp(a, b, upper);
    using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    if (mid > b)
        total += Gk::integrate(f, b, mid, 12, 1e-13);
    total += Gk::integrate(f, mid, upper, 12, 1e-13);
    return total;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Asymptotic Kolmogorov tail probability P(K > lambda).
inline double kolmogorov_tail(double lambda)
{
    if (lambda < 1e-3)
        return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k)
    {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// One-sample KS p-value against a continuous CDF.
template <class Cdf>
double ks_pvalue(std::vector<double> x, Cdf cdf)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double f = cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    const double sn = std::sqrt(n);
    return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

// Two-sample KS p-value.
inline double ks_pvalue_two(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size())
    {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v)
            ++i;
        while (j < b.size() && b[j] <= v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
}

inline double binomial(unsigned n, unsigned k)
{
    if (k > n)
        return 0.0;
    double r = 1.0;
    for (unsigned i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return std::round(r);
}

} // namespace oracle

#endif
