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

#ifndef RASIM_COUPLING_HPP
#define RASIM_COUPLING_HPP

#include <span>

#include "rasim/geometry.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    // Thin dipole, wavelength-normalized length and radius.
    struct DipoleSpec
    {
        double length = 0.5;
        double radius = 1e-4;
        cplx self_impedance{};   // z_A
        cplx source_impedance{}; // z_0

        void validate() const;
    };

    /// Half-wave thin dipole with z_A from the induced-EMF formulas and
    /// z_0 = conj(z_A).
    DipoleSpec default_dipole();

    /// Builds a spec and fills z_A; z_0 defaults to conj(z_A).
    DipoleSpec make_dipole(double length, double radius);

    /// Induced-EMF self impedance with u = 2*pi*l.
    cplx self_impedance(double length, double radius);

    /// Induced-EMF mutual impedance of two parallel side-by-side dipoles at
    /// wavelength-normalized separation `dist` (> 0).
    cplx mutual_impedance(double length, double dist);

    /// diag = z_A, off-diagonal (m, m') = mutual_impedance(|t_m - t_m'|).
    CMat build_impedance_matrix(const DipoleSpec &spec, std::span<const double> config);

    // Z_T = (Z + X)^-1 and C = (z_A I + X) Z_T for X = diag(z_L).
    struct CouplingState
    {
        CMat Z;
        CVec z_L;
        CMat Z_T;
        CMat C;
        cplx z_A{};
        double condition = 1.0; // 1-norm condition estimate of Z + X
    };

    inline constexpr double kMaxCondition = 1e12;

    /// Throws SingularMatrix when Z + X is singular or its condition estimate
    /// exceeds kMaxCondition.
    CouplingState effective_coupling(const CMat &Z, const CVec &z_L, cplx z_A);

    /// H_bar with H_bar^dagger = H^dagger C, i.e. H_bar = C^dagger H.
    CMat coupled_channel(const CMat &H, const CouplingState &state);

    /// Z with all mutual terms removed.
    CMat uncoupled_impedance(int num_ras, cplx z_A);

} // namespace rasim

#endif
