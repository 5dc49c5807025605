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

#ifndef RASIM_LOADS_HPP
#define RASIM_LOADS_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "rasim/geometry.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    // Source voltages and terminations that make the MAMP array carry the
    // currents i = W s.
    struct MampDrive
    {
        CVec voltages;      // zero at passive RAs
        CVec loads_pre;     // z_0 at active RAs, X_m at passive RAs
        CVec loads;         // same, negative resistances folded to |Re|
        CVec symbols;       // s
        CVec target;        // i = W s
    };

    /// Throws DegenerateSymbol when a passive RA's target current satisfies
    /// |i_m| < 1e-9 ||w_m||.
    MampDrive mamp_drive(const CMat &Z, const CMat &W, const CVec &s, cplx z0, const ArrayPartition &partition);

    /// (Z + diag(loads))^-1 v, throwing SingularMatrix on failure.
    CVec port_currents(const CMat &Z, const CVec &loads, const CVec &v);

    /// J(z_L) = ||C^-1 F||_F = ||(Z + X) diag(1 / (z_A + z_L)) F||_F, X = diag(z_L).
    double grad_load_objective(const CVec &z_L, const CMat &Z, const CMat &F, cplx z_A);

    /// Real-coordinate gradient packed as dJ/dRe(z_m) + j dJ/dIm(z_m).
    /// Throws std::domain_error when J = 0.
    CVec grad_load_gradient(const CVec &z_L, const CMat &Z, const CMat &F, cplx z_A);

    enum class LineSearch
    {
        Backtracking,          // Armijo halving, step doubled after each accepted iterate
        Fixed,
        BarzilaiBorwein,       // BB trial step, then Armijo halving
    };

    struct GradDescentParams
    {
        double step = 0.0; // initial step; 0 picks 1e-2 |z_A|
        // Stop when ||grad|| * |z_A| / J falls below tol.
        double tol = 1e-6;
        int max_iter = 500;
        LineSearch line_search = LineSearch::Backtracking;
        double armijo = 1e-4;
        int max_halvings = 50;
        // Objective values at or below this count as converged.
        double f_floor = -INFINITY;
    };

    struct DescentResult
    {
        CVec z;
        std::vector<double> trace; // objective per accepted iterate
        int iterations = 0;
        bool converged = false;
        bool stagnated = false; // line search gave up
    };

    using RealObjective = std::function<double(const CVec &)>;
    using ComplexGradient = std::function<CVec(const CVec &)>;

    /// z <- z - mu g with Armijo backtracking (or a fixed step). `scale`
    /// converts the gradient norm into the dimensionless stopping quantity
    /// ||g|| * scale / max(f, tiny).
    DescentResult gradient_descent(const RealObjective &f, const ComplexGradient &grad, CVec z_init,
                                   const GradDescentParams &params, double scale);

    /// Global minimizer of J. With y_m = 1/(z_A + z_m) the objective is
    /// ||F + (Z - z_A I) diag(y) F||_F, a linear least-squares problem in y.
    /// Throws RankDeficient when the minimizer is not unique and
    /// DegenerateGeometry when some y_m vanishes (an open-circuited RA).
    CVec optimal_loads_allactive(const CMat &Z, const CMat &F, cplx z_A);

    /// Minimizes J over the full load vector z_L = z_0 + z_m starting at z_init.
    DescentResult optimize_loads_allactive(const CMat &Z, const CMat &F, cplx z_A, const GradDescentParams &params,
                                           const CVec &z_init);

} // namespace rasim

#endif
