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

#ifndef RASIM_TYPES_HPP
#define RASIM_TYPES_HPP

#include <complex>

#include <Eigen/Dense>

namespace rasim
{
    using cplx = std::complex<double>;

    using RVec = Eigen::VectorXd;
    using CVec = Eigen::VectorXcd;
    using RMat = Eigen::MatrixXd;
    using CMat = Eigen::MatrixXcd;

    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kEulerGamma = 0.57721566490153286061;
    inline constexpr double kFreeSpaceImpedance = 120.0 * kPi; // eta, ohms
    inline constexpr double kSpeedOfLight = 3.0e8;              // m/s

} // namespace rasim

#endif
