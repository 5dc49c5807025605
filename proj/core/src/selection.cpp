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

#include "rasim/selection.hpp"

#include <stdexcept>

namespace rasim
{
    SelectionMatrix::SelectionMatrix(std::vector<int> ports, int ports_per_ra)
        : ports_(std::move(ports)), ports_per_ra_(ports_per_ra)
    {
        if (ports_per_ra_ < 1)
            throw std::invalid_argument("SelectionMatrix: ports per RA must be positive");
        for (int p : ports_)
            if (p < 0 || p >= ports_per_ra_)
                throw std::invalid_argument("SelectionMatrix: port index out of range");
    }

    SelectionMatrix SelectionMatrix::uniform(int num_ras, int ports_per_ra, int port)
    {
        return SelectionMatrix(std::vector<int>(static_cast<std::size_t>(num_ras), port), ports_per_ra);
    }

    SelectionMatrix SelectionMatrix::random(int num_ras, int ports_per_ra, Rng &rng)
    {
        std::vector<int> ports(static_cast<std::size_t>(num_ras));
        for (auto &p : ports)
            p = uniform_int(rng, 0, ports_per_ra - 1);
        return SelectionMatrix(std::move(ports), ports_per_ra);
    }

    SelectionMatrix SelectionMatrix::from_binary(const Eigen::MatrixXi &b)
    {
        if (!is_one_hot(b))
            throw std::invalid_argument("SelectionMatrix: every row must contain exactly one 1");
        std::vector<int> ports(static_cast<std::size_t>(b.rows()));
        for (Eigen::Index m = 0; m < b.rows(); ++m)
        {
            Eigen::Index n;
            b.row(m).maxCoeff(&n);
            ports[static_cast<std::size_t>(m)] = static_cast<int>(n);
        }
        return SelectionMatrix(std::move(ports), static_cast<int>(b.cols()));
    }

    Eigen::MatrixXi SelectionMatrix::to_binary() const
    {
        Eigen::MatrixXi b = Eigen::MatrixXi::Zero(num_ras(), ports_per_ra_);
        for (int m = 0; m < num_ras(); ++m)
            b(m, port(m)) = 1;
        return b;
    }

    Eigen::MatrixXi SelectionMatrix::to_sigma() const
    {
        Eigen::MatrixXi s = Eigen::MatrixXi::Zero(num_ras() * ports_per_ra_, num_ras());
        for (int m = 0; m < num_ras(); ++m)
            s(global_port(m), m) = 1;
        return s;
    }

    ConfigVector SelectionMatrix::config(const PortGrid &grid) const
    {
        if (grid.num_ras != num_ras() || grid.ports_per_ra != ports_per_ra_)
            throw std::invalid_argument("SelectionMatrix::config: grid shape mismatch");
        ConfigVector t(ports_.size());
        for (int m = 0; m < num_ras(); ++m)
            t[static_cast<std::size_t>(m)] = grid.positions[static_cast<std::size_t>(global_port(m))];
        return t;
    }

    bool is_one_hot(const Eigen::MatrixXi &b)
    {
        if (b.rows() == 0 || b.cols() == 0)
            return false;
        for (Eigen::Index m = 0; m < b.rows(); ++m)
        {
            int sum = 0;
            for (Eigen::Index n = 0; n < b.cols(); ++n)
            {
                if (b(m, n) != 0 && b(m, n) != 1)
                    return false;
                sum += b(m, n);
            }
            if (sum != 1)
                return false;
        }
        return true;
    }

} // namespace rasim
