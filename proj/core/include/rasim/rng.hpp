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

#ifndef RASIM_RNG_HPP
#define RASIM_RNG_HPP

#include <cstdint>
#include <random>

#include "rasim/types.hpp"

namespace rasim
{
    using Rng = std::mt19937_64;

    // Independent random streams within one trial. Each stream is derived from
    // (master seed, trial index, stream id) so results do not depend on the
    // order in which trials are executed.
    enum class Stream : std::uint64_t
    {
        Channel = 1,
        Solver = 2,
        Symbols = 3,
        LoadError = 4,
        Partition = 5,
    };

    // splitmix64 finalizer.
    constexpr std::uint64_t mix64(std::uint64_t x) noexcept
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, Stream stream) noexcept
    {
        return mix64(mix64(mix64(master) ^ trial) ^ static_cast<std::uint64_t>(stream));
    }

    inline Rng make_rng(std::uint64_t master, std::uint64_t trial, Stream stream)
    {
        return Rng(derive_seed(master, trial, stream));
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    inline cplx complex_normal(Rng &rng, double variance = 1.0)
    {
        std::normal_distribution<double> nd(0.0, 1.0);
        const double s = std::sqrt(variance / 2.0);
        const double re = nd(rng);
        const double im = nd(rng);
        return {s * re, s * im};
    }

    inline CVec complex_normal_vector(Rng &rng, Eigen::Index n, double variance = 1.0)
    {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = complex_normal(rng, variance);
        return v;
    }

    inline double uniform(Rng &rng, double lo, double hi)
    {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    inline int uniform_int(Rng &rng, int lo, int hi_inclusive)
    {
        return std::uniform_int_distribution<int>(lo, hi_inclusive)(rng);
    }

} // namespace rasim

#endif
