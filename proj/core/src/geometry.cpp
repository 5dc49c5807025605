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

#include "rasim/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rasim/error.hpp"
#include "rasim/rng.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    double PortGrid::wavelength_m() const noexcept
    {
        return kSpeedOfLight / carrier_hz;
    }

    double PortGrid::metric_position(int port) const
    {
        return positions.at(static_cast<std::size_t>(port)) * wavelength_m();
    }

    PortGrid build_grid(int num_ras, int ports_per_ra, double spacing, double carrier_hz)
    {
        if (num_ras < 1)
            throw std::invalid_argument("build_grid: number of RAs must be positive");
        if (ports_per_ra < 1)
            throw std::invalid_argument("build_grid: ports per RA must be positive");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw std::invalid_argument("build_grid: port spacing must be positive");
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw std::invalid_argument("build_grid: carrier frequency must be positive");

        PortGrid g;
        g.num_ras = num_ras;
        g.ports_per_ra = ports_per_ra;
        g.spacing = spacing;
        g.carrier_hz = carrier_hz;
        g.positions.resize(static_cast<std::size_t>(num_ras) * static_cast<std::size_t>(ports_per_ra));
        for (std::size_t l = 0; l < g.positions.size(); ++l)
            g.positions[l] = static_cast<double>(l) * spacing;
        return g;
    }

    double ra_distance(std::span<const double> config, int a, int b)
    {
        const auto n = static_cast<int>(config.size());
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw std::out_of_range("ra_distance: RA index out of range");
        if (a == b)
            throw std::invalid_argument("ra_distance: RA indices must differ");
        const double dist = std::abs(config[static_cast<std::size_t>(b)] - config[static_cast<std::size_t>(a)]);
        if (dist == 0.0)
            throw DegenerateGeometry("RAs " + std::to_string(a) + " and " + std::to_string(b) +
                                     " occupy the same position");
        return dist;
    }

    int ArrayPartition::active_ra(int subarray) const
    {
        return subarray * subarray_size() + active_offset.at(static_cast<std::size_t>(subarray));
    }

    bool ArrayPartition::is_active(int ra) const
    {
        return ra == active_ra(subarray_of(ra));
    }

    std::vector<int> ArrayPartition::active_ras() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(num_active));
        for (int i = 0; i < num_active; ++i)
            out.push_back(active_ra(i));
        return out;
    }

    std::vector<int> ArrayPartition::passive_ras() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(num_passive));
        for (int m = 0; m < num_ras(); ++m)
            if (!is_active(m))
                out.push_back(m);
        return out;
    }

    std::vector<int> ArrayPartition::passive_ras_of(int subarray) const
    {
        std::vector<int> out;
        const int first = subarray * subarray_size();
        const int active = active_ra(subarray);
        for (int m = first; m < first + subarray_size(); ++m)
            if (m != active)
                out.push_back(m);
        return out;
    }

    ArrayPartition make_partition(int num_active, int passive_per_active, std::uint64_t seed)
    {
        if (num_active < 1)
            throw std::invalid_argument("make_partition: need at least one active RA");
        if (passive_per_active < 0)
            throw std::invalid_argument("make_partition: passive RAs per active RA must be nonnegative");

        ArrayPartition p;
        p.num_active = num_active;
        p.passive_per_active = passive_per_active;
        p.num_passive = num_active * passive_per_active;
        p.seed = seed;
        p.active_offset.resize(static_cast<std::size_t>(num_active));

        const int q = passive_per_active;
        if (q % 2 == 0)
        {
            for (auto &off : p.active_offset)
                off = q / 2;
        }
        else
        {
            Rng rng(mix64(seed ^ static_cast<std::uint64_t>(Stream::Partition)));
            std::bernoulli_distribution coin(0.5);
            for (auto &off : p.active_offset)
                off = q / 2 + (coin(rng) ? 1 : 0);
        }
        return p;
    }

    ArrayPartition all_active_partition(int num_ras)
    {
        return make_partition(num_ras, 0, 0);
    }

} // namespace rasim
