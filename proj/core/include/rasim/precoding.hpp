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

#ifndef RASIM_PRECODING_HPP
#define RASIM_PRECODING_HPP

#include <string_view>
#include <vector>

#include "rasim/types.hpp"

namespace rasim
{
    enum class PrecoderKind
    {
        MF,
        ZF,
        WF,
    };

    std::string_view to_string(PrecoderKind kind);
    PrecoderKind parse_precoder_kind(std::string_view name);

    // W = alpha * F with trace(W^dagger W) = P_max.
    struct Precoder
    {
        PrecoderKind kind = PrecoderKind::WF;
        CMat F;
        double alpha = 0.0;
        CMat W;
    };

    struct RatePoint
    {
        std::vector<double> sinr;
        std::vector<double> rates;
        double sum_rate = 0.0;
        double noise_power = 1.0;
    };

    /// Unnormalized precoder direction for an M x K channel (column per user).
    ///   MF: H.  ZF: H (H^dagger H)^-1.  WF: H (H^dagger H + zeta I)^-1, zeta = sigma2 K / P_max.
    /// ZF goes through a truncated SVD (singular values below 1e-10 sigma_max
    /// dropped) and throws RankDeficient when fewer than K survive. WF with
    /// P_max = 0 falls back to the MF direction.
    CMat precoder_direction(const CMat &H, PrecoderKind kind, double p_max, double sigma2);

    /// Direction plus power normalization. P_max = 0 yields W = 0, alpha = 0.
    Precoder make_precoder(const CMat &H, PrecoderKind kind, double p_max, double sigma2);

    /// Scales F to Frobenius power P_max.
    CMat normalize_power(const CMat &F, double p_max);

    RatePoint rate_point(std::vector<double> sinr, double sigma2);

    /// gamma_k = |h_k^dagger w_k|^2 / (sum_{i != k} |h_k^dagger w_i|^2 + sigma2).
    RatePoint sinr_mamp(const CMat &H, const CMat &W, double sigma2);

    struct CoupledPrecoder
    {
        CMat V;
        double f = 0.0;
    };

    /// V = C^-1 F / f with f = ||C^-1 F||_F / sqrt(P_max).
    CoupledPrecoder compensate_coupling(const CMat &C, const CMat &F, double p_max);

    /// Same, with F computed from H_bar.
    CoupledPrecoder coupled_precoder(const CMat &H_bar, const CMat &C, PrecoderKind kind, double p_max, double sigma2);

    /// gamma_k = |h_k^dagger f_k|^2 / (sum_{i != k} |h_k^dagger f_i|^2 + f^2 sigma2).
    RatePoint sinr_allactive(const CMat &H, const CMat &F, double f, double sigma2);

} // namespace rasim

#endif
