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

#ifndef RASIM_SELECTION_HPP
#define RASIM_SELECTION_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rasim/geometry.hpp"
#include "rasim/rng.hpp"

namespace rasim
{
    // One active port per RA. Stored in compressed form: ports()[m] is the
    // 0-based port index n chosen by RA m, which is the position of the single
    // 1 in row m of the M x N matrix B.
    class SelectionMatrix
    {
    public:
        SelectionMatrix() = default;
        SelectionMatrix(std::vector<int> ports, int ports_per_ra);

        static SelectionMatrix uniform(int num_ras, int ports_per_ra, int port);
        static SelectionMatrix random(int num_ras, int ports_per_ra, Rng &rng);
        // Accepts an M x N 0/1 matrix; throws unless every row is one-hot.
        static SelectionMatrix from_binary(const Eigen::MatrixXi &b);

        int num_ras() const noexcept { return static_cast<int>(ports_.size()); }
        int ports_per_ra() const noexcept { return ports_per_ra_; }
        int port(int ra) const { return ports_.at(static_cast<std::size_t>(ra)); }
        std::span<const int> ports() const noexcept { return ports_; }

        // Grid-wide port index l = m*N + n of RA m's selection.
        int global_port(int ra) const { return ra * ports_per_ra_ + port(ra); }

        Eigen::MatrixXi to_binary() const; // B, M x N
        Eigen::MatrixXi to_sigma() const;  // Sigma = blkdiag(b_1..b_M), L x M
        ConfigVector config(const PortGrid &grid) const;

        bool operator==(const SelectionMatrix &) const = default;

    private:
        std::vector<int> ports_;
        int ports_per_ra_ = 0;
    };

    // True iff every row of the M x N matrix sums to one with 0/1 entries.
    bool is_one_hot(const Eigen::MatrixXi &b);

} // namespace rasim

#endif
