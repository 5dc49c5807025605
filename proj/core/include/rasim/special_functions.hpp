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

#ifndef RASIM_SPECIAL_FUNCTIONS_HPP
#define RASIM_SPECIAL_FUNCTIONS_HPP

namespace rasim
{
    struct SinCosIntegrals
    {
        double si; // Si(x) = int_0^x sin(t)/t dt
        double ci; // Ci(x) = -int_x^inf cos(t)/t dt
    };

    /// Sine and cosine integrals for x > 0, absolute error below 1e-10
    /// (typically ~1e-15). Si(0) = 0 is accepted; Ci(0) diverges, so x = 0
    /// throws std::domain_error. Negative x throws std::domain_error.
    ///
    /// Power series below x = 6; above it the auxiliary functions f and g
    /// come from the continued fraction of E1(ix).
    SinCosIntegrals sin_cos_integrals(double x);

    double sine_integral(double x);
    double cosine_integral(double x);

    /// Zero-order Bessel function of the first kind.
    double bessel_j0(double x);

} // namespace rasim

#endif
