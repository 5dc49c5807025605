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

#include "rasim/precoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "rasim/error.hpp"

namespace rasim
{
    std::string_view to_string(PrecoderKind kind)
    {
        switch (kind)
        {
        case PrecoderKind::MF:
            return "mf";
        case PrecoderKind::ZF:
            return "zf";
        case PrecoderKind::WF:
            return "wf";
        }
        return "?";
    }

    PrecoderKind parse_precoder_kind(std::string_view name)
    {
        if (name == "mf")
            return PrecoderKind::MF;
        if (name == "zf")
            return PrecoderKind::ZF;
        if (name == "wf")
            return PrecoderKind::WF;
        throw std::invalid_argument("unknown precoder '" + std::string(name) + "' (expected mf, zf or wf)");
    }

    CMat precoder_direction(const CMat &H, PrecoderKind kind, double p_max, double sigma2)
    {
        const auto K = H.cols();
        switch (kind)
        {
        case PrecoderKind::MF:
            return H;
        case PrecoderKind::ZF:
        {
            Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const RVec &sv = svd.singularValues();
            if (sv.size() < K || sv.size() == 0 || !(sv(0) > 0.0))
                throw RankDeficient("zero-forcing needs a channel of rank K");
            const double cut = 1e-10 * sv(0);
            if (sv(K - 1) <= cut)
                throw RankDeficient("zero-forcing on a rank-deficient channel");
            // (H^dagger)^+ = U S^-1 V^dagger
            return svd.matrixU() * sv.cwiseInverse().asDiagonal() * svd.matrixV().adjoint();
        }
        case PrecoderKind::WF:
        {
            if (!(p_max > 0.0))
                return H;
            const double zeta = sigma2 * static_cast<double>(K) / p_max;
            CMat g = H.adjoint() * H;
            g.diagonal().array() += zeta;
            return H * g.ldlt().solve(CMat::Identity(K, K));
        }
        }
        throw std::invalid_argument("precoder_direction: unknown kind");
    }

    CMat normalize_power(const CMat &F, double p_max)
    {
        const double n = F.norm();
        if (!(p_max > 0.0) || !(n > 0.0))
            return CMat::Zero(F.rows(), F.cols());
        return F * (std::sqrt(p_max) / n);
    }

    Precoder make_precoder(const CMat &H, PrecoderKind kind, double p_max, double sigma2)
    {
        if (!(p_max >= 0.0))
            throw std::invalid_argument("make_precoder: P_max must be nonnegative");
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("make_precoder: noise power must be positive");
        Precoder p;
        p.kind = kind;
        p.F = precoder_direction(H, kind, p_max, sigma2);
        const double n = p.F.norm();
        p.alpha = (p_max > 0.0 && n > 0.0) ? std::sqrt(p_max) / n : 0.0;
        p.W = p.alpha * p.F;
        return p;
    }

    RatePoint rate_point(std::vector<double> sinr, double sigma2)
    {
        RatePoint r;
        r.noise_power = sigma2;
        r.rates.reserve(sinr.size());
        for (double g : sinr)
        {
            const double rate = std::log2(1.0 + g);
            r.rates.push_back(rate);
            r.sum_rate += rate;
        }
        r.sinr = std::move(sinr);
        return r;
    }

    namespace
    {
        std::vector<double> sinr_from_gains(const CMat &gains, const RVec &extra_noise)
        {
            // gains(k, i) = h_k^dagger w_i
            const auto K = gains.rows();
            std::vector<double> out(static_cast<std::size_t>(K));
            for (Eigen::Index k = 0; k < K; ++k)
            {
                const double signal = std::norm(gains(k, k));
                const double interference = gains.row(k).squaredNorm() - signal;
                out[static_cast<std::size_t>(k)] = signal / (std::max(interference, 0.0) + extra_noise(k));
            }
            return out;
        }
    } // namespace

    RatePoint sinr_mamp(const CMat &H, const CMat &W, double sigma2)
    {
        if (H.rows() != W.rows() || H.cols() != W.cols())
            throw std::invalid_argument("sinr_mamp: dimension mismatch");
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("sinr_mamp: noise power must be positive");
        return rate_point(sinr_from_gains(H.adjoint() * W, RVec::Constant(H.cols(), sigma2)), sigma2);
    }

    CoupledPrecoder compensate_coupling(const CMat &C, const CMat &F, double p_max)
    {
        if (C.rows() != C.cols() || C.rows() != F.rows())
            throw std::invalid_argument("compensate_coupling: dimension mismatch");
        if (!(p_max > 0.0))
            throw std::invalid_argument("compensate_coupling: P_max must be positive");
        Eigen::PartialPivLU<CMat> lu(C);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-12))
            throw SingularMatrix("coupling matrix C is singular", rcond > 0.0 ? 1.0 / rcond : INFINITY);
        CoupledPrecoder out;
        const CMat g = lu.solve(F);
        out.f = g.norm() / std::sqrt(p_max);
        if (!(out.f > 0.0))
            throw std::invalid_argument("compensate_coupling: zero precoder");
        out.V = g / out.f;
        return out;
    }

    CoupledPrecoder coupled_precoder(const CMat &H_bar, const CMat &C, PrecoderKind kind, double p_max, double sigma2)
    {
        return compensate_coupling(C, precoder_direction(H_bar, kind, p_max, sigma2), p_max);
    }

    RatePoint sinr_allactive(const CMat &H, const CMat &F, double f, double sigma2)
    {
        if (H.rows() != F.rows() || H.cols() != F.cols())
            throw std::invalid_argument("sinr_allactive: dimension mismatch");
        if (!(f > 0.0) || !(sigma2 > 0.0))
            throw std::invalid_argument("sinr_allactive: f and noise power must be positive");
        return rate_point(sinr_from_gains(H.adjoint() * F, RVec::Constant(H.cols(), f * f * sigma2)), sigma2);
    }

} // namespace rasim
