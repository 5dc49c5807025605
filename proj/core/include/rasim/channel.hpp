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

#ifndef RASIM_CHANNEL_HPP
#define RASIM_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "rasim/geometry.hpp"
#include "rasim/rng.hpp"
#include "rasim/selection.hpp"
#include "rasim/types.hpp"

// Matrix orientation: every channel matrix in this library is stored with one
// column per user. Column k of an L x K port-level matrix is h~_k, so the
// K x L "H dagger" of the model is simply its adjoint. Correlation is applied
// as H~ = R^(1/2) H^, which is the same statement as H~^dagger =
// H^^dagger (R^(1/2))^T for a real symmetric R.

namespace rasim
{
    enum class ChannelModel
    {
        SalehValenzuela,
        Rayleigh,
    };

    // Geometric clustered model. Gains and AoDs are indexed [k][c][p] and
    // flattened as (k * clusters + c) * paths + p.
    struct SVChannelParams
    {
        int num_clusters = 3;
        int paths_per_cluster = 10;
        int num_users = 0;
        std::vector<cplx> gains;
        std::vector<double> aods; // radians, |aod| <= pi/2

        std::size_t index(int k, int c, int p) const noexcept
        {
            return (static_cast<std::size_t>(k) * num_clusters + c) * paths_per_cluster + p;
        }
        void validate() const;
    };

    // Correlated Rayleigh model; fading and AoDs are indexed [k][r].
    struct RayleighChannelParams
    {
        int num_directions = 50;
        int num_users = 0;
        double angular_spread = kPi / 8.0;
        std::vector<double> centers; // per-user mean AoD
        std::vector<cplx> fading;    // g_k(r)
        std::vector<double> aods;

        std::size_t index(int k, int r) const noexcept
        {
            return static_cast<std::size_t>(k) * num_directions + r;
        }
        void validate() const;
    };

    struct ChannelSet
    {
        CMat port_channels;     // L x K
        CMat selected_channels; // M x K (empty until ports are selected)
        ChannelModel model = ChannelModel::SalehValenzuela;
    };

    /// Unit-norm ULA response: entry l = exp(-j 2 pi x_l cos(aod)) / sqrt(L).
    CVec steering_vector_sv(const PortGrid &grid, double aod);

    /// Gains i.i.d. CN(0,1), AoDs i.i.d. U[-pi/2, pi/2].
    SVChannelParams draw_sv_params(int num_clusters, int paths_per_cluster, int num_users, Rng &rng);

    /// h^_k = sqrt(L / (Nc Np)) sum_c sum_p beta_{c,p,k} a(phi_{c,p,k}).
    CMat synthesize_sv(const PortGrid &grid, const SVChannelParams &params);

    /// rho_{l,l} = 1, rho_{l,l'} = J0(2 pi |x_l - x_l'|).
    RMat correlation_matrix(const PortGrid &grid);

    /// Principal square root through a symmetric eigendecomposition.
    /// Eigenvalues in [-1e-10 * max(1, lambda_max), 0) are clamped to zero;
    /// anything more negative, or an asymmetric input, throws
    /// std::invalid_argument.
    RMat correlation_sqrt(const RMat &r);

    /// H~ = R^(1/2) H^ for an L x K port-level channel.
    CMat apply_correlation(const CMat &h_hat, const RMat &r);

    /// Unnormalized response with the sine convention:
    /// entry l = exp(j 2 pi x_l sin(aod)).
    CVec steering_vector_rayleigh(const PortGrid &grid, double aod);

    /// Fading i.i.d. CN(0,1). Each user's mean AoD is U[-pi/2, pi/2] and its
    /// direction AoDs are U[center - spread, center + spread].
    RayleighChannelParams draw_rayleigh_params(int num_directions, int num_users, double angular_spread, Rng &rng);

    /// h~_k^dagger = g_k^dagger A~_k, i.e. h~_k = A~_k^dagger g_k.
    CMat synthesize_rayleigh(const PortGrid &grid, const RayleighChannelParams &params);

    /// Rows of the port-level channel at the selected ports (Sigma^T H~).
    CMat select_ports(const CMat &port_channels, const SelectionMatrix &selection);

    // Fingerprints of the random draws; equal hashes mean paired trials saw the
    // same channel realization.
    std::uint64_t channel_hash(const SVChannelParams &params);
    std::uint64_t channel_hash(const RayleighChannelParams &params);

} // namespace rasim

#endif
