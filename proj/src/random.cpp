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

#include "risnoma/random.hpp"
#include "risnoma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace risnoma
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t seed, Stream stream, std::uint64_t index)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    h = splitmix64(h ^ index);
    return Rng(h);
}

std::complex<double> Rng::complex_normal(double variance)
{
    const double scale = std::sqrt(0.5 * variance);
    const double re = normal();
    const double im = normal();
    return {scale * re, scale * im};
}

double Rng::von_mises(double kappa)
{
    using std::numbers::pi;
    if (!(kappa > 0.0))
        return pi * (2.0 * uniform() - 1.0); // kappa = 0 is uniform on the circle
    if (std::isinf(kappa))
        return 0.0;
    if (kappa > 1e6)
        return normal() / std::sqrt(kappa); // wrapped normal limit, rejection loses precision here

    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);

    for (;;)
    {
        const double u1 = uniform(), u2 = uniform(), u3 = uniform();
        const double z = std::cos(pi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0)
        {
            const double theta = std::acos(std::clamp(f, -1.0, 1.0));
            return u3 > 0.5 ? theta : -theta;
        }
    }
}

std::size_t resolve_workers(std::size_t requested)
{
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace risnoma
