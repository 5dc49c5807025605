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

#ifndef RASIM_QUANTIZATION_HPP
#define RASIM_QUANTIZATION_HPP

#include <vector>

#include "rasim/loads.hpp"
#include "rasim/precoding.hpp"
#include "rasim/rng.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    struct QuantModel
    {
        double beta = 0.0;
        double epsilon = 0.0; // error variance, beta * z_bar
        double grid_step = 1.0;
        CVec errors;          // e_m, zero where no load is fitted
    };

    /// Mean squared magnitude of the given load values.
    double mean_squared_load(const std::vector<cplx> &loads);

    /// e_m ~ CN(0, epsilon) where `loaded[m]` is set, zero elsewhere.
    CVec draw_load_errors(const std::vector<bool> &loaded, double epsilon, Rng &rng);

    // A = Z_T^-1 + E_q, xi = ||A^-1||_F^2, sigma_q^2 = M xi epsilon.
    struct QuantizedState
    {
        CMat A;
        double xi = 0.0;
        double sigma_q2 = 0.0;
    };

    /// `zt_inv` is Z + X (the inverse of Z_T).
    QuantizedState quantized_state(const CMat &zt_inv, const CVec &errors, double epsilon);

    /// i_hat = i - (Z_T^-1 + E_q)^-1 E_q i.
    CVec perturbed_currents(const CMat &zt_inv, const CVec &errors, const CVec &i_ideal);

    /// i_hat = (Z_T^-1 + E_q)^-1 Z_T^-1 i, the same quantity without the difference.
    CVec perturbed_currents_direct(const CMat &zt_inv, const CVec &errors, const CVec &i_ideal);

    /// Ideal MAMP SINR with sigma_q^2 added to the noise.
    RatePoint quantized_sinr_mamp(const CMat &H, const CMat &W, double sigma2, const QuantizedState &state);

    struct RobustMampParams
    {
        int max_iter = 10000;
        double tol = 1e-10;
        // RAs allowed to receive a voltage correction; empty means all of them.
        std::vector<bool> support;
    };

    struct RobustMampResult
    {
        CVec dv;
        double objective = 0.0;
        int iterations = 0;
        bool converged = false;
        bool unconstrained = false; // dv = E_q i was feasible
    };

    /// ||A^-1 (dv - E_q i)||^2.
    double robust_mamp_objective(const CMat &A, const CVec &errors, const CVec &i_ideal, const CVec &dv);

    /// Minimizes the objective over Re(dv_m) >= 0 (dv_m = 0 outside the
    /// support) by accelerated projected gradient with adaptive restart. The
    /// result is never worse than dv = 0.
    RobustMampResult robust_mamp(const CMat &A, const CVec &errors, const CVec &i_ideal,
                                 const RobustMampParams &params = {});

    /// Independent rounding of Re and Im to the nearest multiple of D.
    CVec quantize_to_grid(const CVec &z, double grid_step);

    struct RobustAllActiveParams
    {
        GradDescentParams descent;
        int max_rounds = 50;
    };

    struct RobustAllActiveResult
    {
        CVec loads;         // grid-feasible z_m
        double objective = 0.0;
        double naive_objective = 0.0; // at quantize(z_star)
        int rounds = 0;
        bool fixpoint = false;
    };

    /// Quantize-and-iterate for (J(z_0 + z_m + e_m) - J_target)^2 over grid
    /// values z_m. Starts from quantize(z_star) and keeps the best grid iterate.
    RobustAllActiveResult robust_allactive(const CMat &Z, const CMat &F, cplx z_A, cplx z0, const CVec &errors,
                                           const CVec &z_star, double j_target, double grid_step,
                                           const RobustAllActiveParams &params = {});

} // namespace rasim

#endif
