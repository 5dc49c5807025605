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

#ifndef RASIM_GEOMETRY_HPP
#define RASIM_GEOMETRY_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace rasim
{
    // Linear grid of L = N*M discrete ports. RA m (0-based) owns ports
    // [m*N, (m+1)*N). Positions are wavelength-normalized: x_l = l*d.
    struct PortGrid
    {
        int num_ras = 0;        // M
        int ports_per_ra = 0;   // N
        double spacing = 0.0;   // d = physical spacing / lambda
        double carrier_hz = 0.0;
        std::vector<double> positions; // size L

        int num_ports() const noexcept { return num_ras * ports_per_ra; }
        int port_index(int ra, int port) const noexcept { return ra * ports_per_ra + port; }
        double position(int ra, int port) const { return positions.at(static_cast<std::size_t>(port_index(ra, port))); }

        double wavelength_m() const noexcept;
        double metric_position(int port) const;
    };

    PortGrid build_grid(int num_ras, int ports_per_ra, double spacing, double carrier_hz);

    // Wavelength-normalized positions of the selected port of every RA.
    using ConfigVector = std::vector<double>;

    /// |t[b] - t[a]|. Throws DegenerateGeometry when two distinct RAs share a
    /// position (impossible on a block grid, but other geometries may feed in).
    double ra_distance(std::span<const double> config, int a, int b);

    // Split of M RAs into M_a sub-arrays of (Q+1) consecutive RAs, one of them
    // active. RA indices here are physical (grid-order) indices.
    struct ArrayPartition
    {
        int num_active = 0;         // M_a
        int num_passive = 0;        // M_p = Q * M_a
        int passive_per_active = 0; // Q
        std::vector<int> active_offset; // per sub-array, 0-based offset of the active RA
        std::uint64_t seed = 0;

        int num_ras() const noexcept { return num_active + num_passive; }
        int subarray_size() const noexcept { return passive_per_active + 1; }
        int subarray_of(int ra) const noexcept { return ra / subarray_size(); }
        int active_ra(int subarray) const;
        bool is_active(int ra) const;

        std::vector<int> active_ras() const;
        std::vector<int> passive_ras() const;
        // Passive RAs of one sub-array in grid order.
        std::vector<int> passive_ras_of(int subarray) const;
    };

    /// Even Q: the active RA sits at offset Q/2 of each sub-array. Odd Q: a
    /// fair coin seeded by `seed` picks offset floor(Q/2) or floor(Q/2)+1,
    /// independently per sub-array.
    ArrayPartition make_partition(int num_active, int passive_per_active, std::uint64_t seed);

    // Everything active (Q = 0).
    ArrayPartition all_active_partition(int num_ras);

} // namespace rasim

#endif
