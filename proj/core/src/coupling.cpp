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

#include "rasim/coupling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

#include "rasim/error.hpp"
#include "rasim/special_functions.hpp"

namespace rasim
{
    namespace
    {
        constexpr double kEta = kFreeSpaceImpedance;
        constexpr double kKappa = 2.0 * kPi; // wavenumber in wavelength units
    } // namespace

    void DipoleSpec::validate() const
    {
        if (!(length > 0.0) || !(radius > 0.0))
            throw std::invalid_argument("dipole length and radius must be positive");
        if (!(radius < length / 10.0))
            throw std::invalid_argument("thin-dipole model requires radius < length / 10");
    }

    DipoleSpec make_dipole(double length, double radius)
    {
        DipoleSpec spec;
        spec.length = length;
        spec.radius = radius;
        spec.validate();
        spec.self_impedance = self_impedance(length, radius);
        spec.source_impedance = std::conj(spec.self_impedance);
        return spec;
    }

    DipoleSpec default_dipole() { return make_dipole(0.5, 1e-4); }

    cplx self_impedance(double length, double radius)
    {
        if (!(length > 0.0) || !(radius > 0.0))
            throw std::invalid_argument("self_impedance: length and radius must be positive");
        const double u = kKappa * length;
        const auto [si_u, ci_u] = sin_cos_integrals(u);
        const auto [si_2u, ci_2u] = sin_cos_integrals(2.0 * u);
        const double ci_a = cosine_integral(2.0 * kKappa * radius * radius / length);
        const double su = std::sin(u);
        const double cu = std::cos(u);

        const double braces = std::log(u) - ci_u + 0.5 * su * (si_2u - 2.0 * si_u) +
                              0.5 * cu * (kEulerGamma + std::log(u / 2.0) + ci_2u - 2.0 * ci_u);
        const double r = kEta / (2.0 * kPi) * braces + kEulerGamma * kEta / (2.0 * kPi);
        const double x = kEta / (4.0 * kPi) *
                         (2.0 * si_u + cu * (2.0 * si_u - si_2u) - su * (2.0 * ci_u - ci_2u - ci_a));
        return {r, x};
    }

    cplx mutual_impedance(double length, double dist)
    {
        if (!(length > 0.0))
            throw std::invalid_argument("mutual_impedance: length must be positive");
        if (!(dist > 0.0))
            throw std::invalid_argument("mutual_impedance: distance must be positive");
        const double s = std::hypot(dist, length);
        const auto m0 = sin_cos_integrals(kKappa * dist);
        const auto m1 = sin_cos_integrals(kKappa * (s + length));
        // s - l loses precision when d << l; d^2 / (s + l) is the same quantity.
        const auto m2 = sin_cos_integrals(kKappa * dist * dist / (s + length));
        const double r = kEta / (4.0 * kPi) * (2.0 * m0.ci - m1.ci - m2.ci);
        const double x = -kEta / (4.0 * kPi) * (2.0 * m0.si - m1.si - m2.si);
        return {r, x};
    }

    CMat build_impedance_matrix(const DipoleSpec &spec, std::span<const double> config)
    {
        const auto M = static_cast<Eigen::Index>(config.size());
        CMat z(M, M);
        for (Eigen::Index m = 0; m < M; ++m)
        {
            z(m, m) = spec.self_impedance;
            for (Eigen::Index n = m + 1; n < M; ++n)
            {
                const double dist = ra_distance(config, static_cast<int>(m), static_cast<int>(n));
                z(m, n) = z(n, m) = mutual_impedance(spec.length, dist);
            }
        }
        return z;
    }

    CMat uncoupled_impedance(int num_ras, cplx z_A)
    {
        return z_A * CMat::Identity(num_ras, num_ras);
    }

    CouplingState effective_coupling(const CMat &Z, const CVec &z_L, cplx z_A)
    {
        const auto M = Z.rows();
        if (Z.cols() != M || z_L.size() != M)
            throw std::invalid_argument("effective_coupling: dimension mismatch");

        CouplingState s;
        s.Z = Z;
        s.z_L = z_L;
        s.z_A = z_A;
        CMat zx = Z;
        zx.diagonal() += z_L;
        Eigen::PartialPivLU<CMat> lu(zx);
        const double rcond = lu.rcond();
        s.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
        if (!(s.condition <= kMaxCondition))
            throw SingularMatrix("Z + X is singular or ill-conditioned", s.condition);
        s.Z_T = lu.inverse();
        CVec diag = z_L.array() + z_A;
        s.C = diag.asDiagonal() * s.Z_T;
        return s;
    }

    CMat coupled_channel(const CMat &H, const CouplingState &state)
    {
        if (H.rows() != state.C.rows())
            throw std::invalid_argument("coupled_channel: dimension mismatch");
        return state.C.adjoint() * H;
    }

} // namespace rasim
