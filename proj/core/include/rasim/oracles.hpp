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

#ifndef RASIM_ORACLES_HPP
#define RASIM_ORACLES_HPP

#include <functional>
#include <vector>

#include "rasim/raps.hpp"
#include "rasim/types.hpp"

// Slow, independent reference computations used to cross-check the fast
// implementations (tests and the verify command).
namespace rasim::oracle
{
    /// Adaptive Gauss-Kronrod quadrature of sin(t)/t over [0, x].
    double sine_integral(double x);

    /// gamma + ln x + int_0^x (cos t - 1)/t dt by adaptive quadrature.
    double cosine_integral(double x);

    /// (1/pi) int_0^pi cos(x sin theta) d theta.
    double bessel_j0(double x);

    /// Induced-EMF self impedance evaluated with the quadrature Si/Ci.
    cplx self_impedance(double length, double radius);

    /// Induced-EMF mutual impedance evaluated with the quadrature Si/Ci.
    cplx mutual_impedance(double length, double dist);

    /// Central differences on Re and Im of every coordinate, packed as
    /// df/dRe + j df/dIm. Step h_m = rel_step (1 + |z_m|).
    CVec finite_difference_gradient(const std::function<double(const CVec &)> &f, const CVec &z,
                                    double rel_step = 1e-4);

    struct Enumeration
    {
        std::vector<int> best;
        double fitness = 0.0;
        long evaluations = 0;
    };

    /// Exhaustive maximization walking configurations with the first RA as
    /// the fastest digit; ties resolve to the lexicographically smallest.
    Enumeration enumerate(const FitnessFn &fitness, int num_ras, int ports_per_ra);

    /// Per-user SINR with an explicit double loop over |h_k^dagger w_i|^2.
    std::vector<double> sinr_loop(const CMat &H, const CMat &W, const std::vector<double> &noise);

    /// Plain projected gradient (step 1/L, no momentum) for
    /// min ||A^-1 (dv - E i)||^2 s.t. Re(dv) >= 0.
    CVec projected_gradient_p4(const CMat &A, const CVec &errors, const CVec &i_ideal, int max_iter = 2000000,
                               double tol = 1e-14);

} // namespace rasim::oracle

#endif
