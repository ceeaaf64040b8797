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

#ifndef RISNOMA_RANDOM_HPP
#define RISNOMA_RANDOM_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace risnoma
{

// Stream identifiers keep independent consumers of one scenario seed apart.
enum class Stream : std::uint64_t
{
    trials = 1,
    step_search = 2,
    geometry = 3,
    test = 99
};

// Seeded random stream. Every Monte Carlo trial owns one, derived from
// (seed, stream, trial index), so results do not depend on scheduling.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, Stream stream, std::uint64_t index);

    double uniform() { return unit_(engine_); }
    double normal() { return normal_(engine_); }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0);

    // von Mises(0, kappa) by the Best-Fisher rejection sampler.
    double von_mises(double kappa);

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace risnoma

#endif
