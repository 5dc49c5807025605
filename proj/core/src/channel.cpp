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

#include "rasim/channel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rasim/special_functions.hpp"

namespace rasim
{
    namespace
    {
        void check_aod(double aod)
        {
            if (!(std::abs(aod) <= kPi / 2.0))
                throw std::invalid_argument("angle of departure outside [-pi/2, pi/2]");
        }

        // FNV-1a over raw bytes of doubles.
        struct Fnv
        {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            void add(double v)
            {
                auto bits = std::bit_cast<std::uint64_t>(v);
                for (int i = 0; i < 8; ++i)
                {
                    h ^= (bits >> (8 * i)) & 0xffU;
                    h *= 0x100000001b3ULL;
                }
            }
        };
    } // namespace

    void SVChannelParams::validate() const
    {
        if (num_clusters < 1 || paths_per_cluster < 1 || num_users < 1)
            throw std::invalid_argument("SVChannelParams: counts must be positive");
        const auto n = static_cast<std::size_t>(num_clusters) * paths_per_cluster * num_users;
        if (gains.size() != n || aods.size() != n)
            throw std::invalid_argument("SVChannelParams: gain/AoD arrays must have Nc*Np*K entries");
        for (double a : aods)
            check_aod(a);
    }

    void RayleighChannelParams::validate() const
    {
        if (num_directions < 1 || num_users < 1)
            throw std::invalid_argument("RayleighChannelParams: counts must be positive");
        const auto n = static_cast<std::size_t>(num_directions) * num_users;
        if (fading.size() != n || aods.size() != n)
            throw std::invalid_argument("RayleighChannelParams: fading/AoD arrays must have Nr*K entries");
        if (!(angular_spread >= 0.0))
            throw std::invalid_argument("RayleighChannelParams: angular spread must be nonnegative");
    }

    CVec steering_vector_sv(const PortGrid &grid, double aod)
    {
        check_aod(aod);
        const auto L = static_cast<Eigen::Index>(grid.positions.size());
        const double scale = 1.0 / std::sqrt(static_cast<double>(L));
        const double c = std::cos(aod);
        CVec a(L);
        for (Eigen::Index l = 0; l < L; ++l)
            a(l) = scale * std::polar(1.0, -2.0 * kPi * grid.positions[static_cast<std::size_t>(l)] * c);
        return a;
    }

    SVChannelParams draw_sv_params(int num_clusters, int paths_per_cluster, int num_users, Rng &rng)
    {
        SVChannelParams p;
        p.num_clusters = num_clusters;
        p.paths_per_cluster = paths_per_cluster;
        p.num_users = num_users;
        const auto n = static_cast<std::size_t>(num_clusters) * paths_per_cluster * num_users;
        p.gains.resize(n);
        p.aods.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            p.gains[i] = complex_normal(rng);
            p.aods[i] = uniform(rng, -kPi / 2.0, kPi / 2.0);
        }
        return p;
    }

    CMat synthesize_sv(const PortGrid &grid, const SVChannelParams &params)
    {
        params.validate();
        const auto L = static_cast<Eigen::Index>(grid.positions.size());
        const double norm = std::sqrt(static_cast<double>(L) / (params.num_clusters * params.paths_per_cluster));
        CMat h = CMat::Zero(L, params.num_users);
        for (int k = 0; k < params.num_users; ++k)
            for (int c = 0; c < params.num_clusters; ++c)
                for (int p = 0; p < params.paths_per_cluster; ++p)
                {
                    const auto i = params.index(k, c, p);
                    h.col(k) += params.gains[i] * steering_vector_sv(grid, params.aods[i]);
                }
        h *= norm;
        return h;
    }

    RMat correlation_matrix(const PortGrid &grid)
    {
        const auto L = static_cast<Eigen::Index>(grid.positions.size());
        RMat r(L, L);
        for (Eigen::Index i = 0; i < L; ++i)
        {
            r(i, i) = 1.0;
            for (Eigen::Index j = i + 1; j < L; ++j)
            {
                const double dist = std::abs(grid.positions[static_cast<std::size_t>(j)] -
                                             grid.positions[static_cast<std::size_t>(i)]);
                r(i, j) = r(j, i) = bessel_j0(2.0 * kPi * dist);
            }
        }
        return r;
    }

    RMat correlation_sqrt(const RMat &r)
    {
        if (r.rows() != r.cols())
            throw std::invalid_argument("correlation_sqrt: matrix must be square");
        const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
        if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw std::invalid_argument("correlation_sqrt: matrix is not symmetric");

        Eigen::SelfAdjointEigenSolver<RMat> eig(r);
        if (eig.info() != Eigen::Success)
            throw std::invalid_argument("correlation_sqrt: eigendecomposition failed");
        RVec lambda = eig.eigenvalues();
        const double tol = 1e-10 * std::max(1.0, lambda.maxCoeff());
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
        {
            if (lambda(i) < -tol)
                throw std::invalid_argument("correlation_sqrt: matrix is indefinite beyond tolerance");
            lambda(i) = lambda(i) > 0.0 ? std::sqrt(lambda(i)) : 0.0;
        }
        const RMat &v = eig.eigenvectors();
        return v * lambda.asDiagonal() * v.transpose();
    }

    CMat apply_correlation(const CMat &h_hat, const RMat &r)
    {
        if (r.rows() != h_hat.rows())
            throw std::invalid_argument("apply_correlation: dimension mismatch");
        return correlation_sqrt(r).cast<cplx>() * h_hat;
    }

    CVec steering_vector_rayleigh(const PortGrid &grid, double aod)
    {
        const auto L = static_cast<Eigen::Index>(grid.positions.size());
        const double s = std::sin(aod);
        CVec a(L);
        for (Eigen::Index l = 0; l < L; ++l)
            a(l) = std::polar(1.0, 2.0 * kPi * grid.positions[static_cast<std::size_t>(l)] * s);
        return a;
    }

    RayleighChannelParams draw_rayleigh_params(int num_directions, int num_users, double angular_spread, Rng &rng)
    {
        RayleighChannelParams p;
        p.num_directions = num_directions;
        p.num_users = num_users;
        p.angular_spread = angular_spread;
        p.centers.resize(static_cast<std::size_t>(num_users));
        p.fading.resize(static_cast<std::size_t>(num_directions) * num_users);
        p.aods.resize(p.fading.size());
        for (int k = 0; k < num_users; ++k)
        {
            const double center = uniform(rng, -kPi / 2.0, kPi / 2.0);
            p.centers[static_cast<std::size_t>(k)] = center;
            for (int r = 0; r < num_directions; ++r)
            {
                const auto i = p.index(k, r);
                p.fading[i] = complex_normal(rng);
                p.aods[i] = angular_spread > 0.0 ? uniform(rng, center - angular_spread, center + angular_spread) : center;
            }
        }
        return p;
    }

    CMat synthesize_rayleigh(const PortGrid &grid, const RayleighChannelParams &params)
    {
        params.validate();
        const auto L = static_cast<Eigen::Index>(grid.positions.size());
        CMat h = CMat::Zero(L, params.num_users);
        for (int k = 0; k < params.num_users; ++k)
            for (int r = 0; r < params.num_directions; ++r)
            {
                const auto i = params.index(k, r);
                h.col(k) += params.fading[i] * steering_vector_rayleigh(grid, params.aods[i]).conjugate();
            }
        return h;
    }

    CMat select_ports(const CMat &port_channels, const SelectionMatrix &selection)
    {
        const int M = selection.num_ras();
        if (port_channels.rows() != static_cast<Eigen::Index>(M) * selection.ports_per_ra())
            throw std::invalid_argument("select_ports: selection does not match the port grid");
        CMat h(M, port_channels.cols());
        for (int m = 0; m < M; ++m)
            h.row(m) = port_channels.row(selection.global_port(m));
        return h;
    }

    std::uint64_t channel_hash(const SVChannelParams &params)
    {
        Fnv f;
        for (const auto &g : params.gains)
        {
            f.add(g.real());
            f.add(g.imag());
        }
        for (double a : params.aods)
            f.add(a);
        return f.h;
    }

    std::uint64_t channel_hash(const RayleighChannelParams &params)
    {
        Fnv f;
        for (const auto &g : params.fading)
        {
            f.add(g.real());
            f.add(g.imag());
        }
        for (double a : params.aods)
            f.add(a);
        return f.h;
    }

} // namespace rasim
