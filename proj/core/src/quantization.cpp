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

#include "rasim/quantization.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rasim/error.hpp"

namespace rasim
{
    namespace
    {
        Eigen::PartialPivLU<CMat> factor(const CMat &a, const char *what)
        {
            Eigen::PartialPivLU<CMat> lu(a);
            const double rcond = lu.rcond();
            if (!(rcond > 1e-12))
                throw SingularMatrix(what, rcond > 0.0 ? 1.0 / rcond : INFINITY);
            return lu;
        }

        CMat with_errors(const CMat &zt_inv, const CVec &errors)
        {
            if (zt_inv.rows() != zt_inv.cols() || errors.size() != zt_inv.rows())
                throw std::invalid_argument("quantization: dimension mismatch");
            CMat a = zt_inv;
            a.diagonal() += errors;
            return a;
        }
    } // namespace

    double mean_squared_load(const std::vector<cplx> &loads)
    {
        if (loads.empty())
            return 0.0;
        double s = 0.0;
        for (const auto &z : loads)
            s += std::norm(z);
        return s / static_cast<double>(loads.size());
    }

    CVec draw_load_errors(const std::vector<bool> &loaded, double epsilon, Rng &rng)
    {
        if (!(epsilon >= 0.0))
            throw std::invalid_argument("draw_load_errors: variance must be nonnegative");
        CVec e = CVec::Zero(static_cast<Eigen::Index>(loaded.size()));
        for (std::size_t m = 0; m < loaded.size(); ++m)
            if (loaded[m])
                e(static_cast<Eigen::Index>(m)) = complex_normal(rng, epsilon);
        return e;
    }

    QuantizedState quantized_state(const CMat &zt_inv, const CVec &errors, double epsilon)
    {
        if (!(epsilon >= 0.0))
            throw std::invalid_argument("quantized_state: variance must be nonnegative");
        QuantizedState s;
        s.A = with_errors(zt_inv, errors);
        const CMat a_inv = factor(s.A, "A = Z_T^-1 + E_q is singular").inverse();
        s.xi = a_inv.squaredNorm();
        s.sigma_q2 = static_cast<double>(s.A.rows()) * s.xi * epsilon;
        return s;
    }

    CVec perturbed_currents(const CMat &zt_inv, const CVec &errors, const CVec &i_ideal)
    {
        const CMat a = with_errors(zt_inv, errors);
        return i_ideal - factor(a, "A = Z_T^-1 + E_q is singular").solve(errors.cwiseProduct(i_ideal));
    }

    CVec perturbed_currents_direct(const CMat &zt_inv, const CVec &errors, const CVec &i_ideal)
    {
        const CMat a = with_errors(zt_inv, errors);
        return factor(a, "A = Z_T^-1 + E_q is singular").solve(zt_inv * i_ideal);
    }

    RatePoint quantized_sinr_mamp(const CMat &H, const CMat &W, double sigma2, const QuantizedState &state)
    {
        RatePoint r = sinr_mamp(H, W, sigma2 + state.sigma_q2);
        r.noise_power = sigma2;
        return r;
    }

    double robust_mamp_objective(const CMat &A, const CVec &errors, const CVec &i_ideal, const CVec &dv)
    {
        return factor(A, "A is singular").solve(dv - errors.cwiseProduct(i_ideal)).squaredNorm();
    }

    RobustMampResult robust_mamp(const CMat &A, const CVec &errors, const CVec &i_ideal, const RobustMampParams &params)
    {
        const auto M = A.rows();
        if (A.cols() != M || errors.size() != M || i_ideal.size() != M)
            throw std::invalid_argument("robust_mamp: dimension mismatch");
        if (!params.support.empty() && static_cast<Eigen::Index>(params.support.size()) != M)
            throw std::invalid_argument("robust_mamp: support mask has the wrong length");
        auto in_support = [&](Eigen::Index m) {
            return params.support.empty() || params.support[static_cast<std::size_t>(m)];
        };
        auto project = [&](CVec x) {
            for (Eigen::Index m = 0; m < M; ++m)
                x(m) = in_support(m) ? cplx{std::max(x(m).real(), 0.0), x(m).imag()} : cplx{};
            return x;
        };

        const CMat B = factor(A, "A is singular").inverse();
        const CVec b = errors.cwiseProduct(i_ideal);
        auto objective = [&](const CVec &x) { return (B * (x - b)).squaredNorm(); };

        RobustMampResult r;
        if ((project(b) - b).norm() == 0.0)
        {
            r.dv = b;
            r.objective = 0.0;
            r.converged = true;
            r.unconstrained = true;
            return r;
        }

        const CMat BhB = B.adjoint() * B;
        Eigen::SelfAdjointEigenSolver<CMat> eig(BhB, Eigen::EigenvaluesOnly);
        const double lip = 2.0 * eig.eigenvalues().maxCoeff();
        const CVec BhBb = BhB * b;

        CVec x = CVec::Zero(M);
        CVec y = x;
        double t = 1.0;
        r.dv = x;
        r.objective = objective(x);
        for (int k = 0; k < params.max_iter; ++k)
        {
            const CVec grad = 2.0 * (BhB * y - BhBb);
            CVec xn = project(y - grad / lip);
            const double step = (xn - x).norm();
            // Restart the momentum when it points uphill.
            if ((y - xn).dot(xn - x).real() > 0.0)
            {
                t = 1.0;
                y = xn;
            }
            else
            {
                const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                y = xn + ((t - 1.0) / tn) * (xn - x);
                t = tn;
            }
            x = std::move(xn);
            r.iterations = k + 1;
            const double fx = objective(x);
            if (fx < r.objective)
            {
                r.objective = fx;
                r.dv = x;
            }
            if (step <= params.tol * std::max(1.0, x.norm()))
            {
                r.converged = true;
                break;
            }
        }
        return r;
    }

    CVec quantize_to_grid(const CVec &z, double grid_step)
    {
        if (!(grid_step > 0.0))
            throw std::invalid_argument("quantize_to_grid: step must be positive");
        CVec q(z.size());
        for (Eigen::Index m = 0; m < z.size(); ++m)
            q(m) = {std::round(z(m).real() / grid_step) * grid_step, std::round(z(m).imag() / grid_step) * grid_step};
        return q;
    }

    RobustAllActiveResult robust_allactive(const CMat &Z, const CMat &F, cplx z_A, cplx z0, const CVec &errors,
                                           const CVec &z_star, double j_target, double grid_step,
                                           const RobustAllActiveParams &params)
    {
        const auto M = Z.rows();
        if (errors.size() != M || z_star.size() != M)
            throw std::invalid_argument("robust_allactive: dimension mismatch");
        auto realized = [&](const CVec &z) { return CVec((z.array() + z0 + errors.array()).matrix()); };
        auto phi = [&](const CVec &z) {
            const double d = grad_load_objective(realized(z), Z, F, z_A) - j_target;
            return d * d;
        };
        auto grad_phi = [&](const CVec &z) {
            const CVec zl = realized(z);
            const double d = grad_load_objective(zl, Z, F, z_A) - j_target;
            return CVec(2.0 * d * grad_load_gradient(zl, Z, F, z_A));
        };

        GradDescentParams dp = params.descent;
        if (!(dp.step > 0.0))
            dp.step = 1e-2 * std::abs(z_A);
        dp.f_floor = std::max(dp.f_floor, std::pow(1e-9 * std::max(j_target, 1.0), 2));

        RobustAllActiveResult r;
        CVec cur = quantize_to_grid(z_star, grid_step);
        r.loads = cur;
        r.objective = r.naive_objective = phi(cur);
        for (int round = 0; round < params.max_rounds; ++round)
        {
            r.rounds = round + 1;
            const DescentResult d = gradient_descent(phi, grad_phi, cur, dp, std::abs(z_A));
            CVec next = quantize_to_grid(d.z, grid_step);
            const double fn = phi(next);
            if (fn < r.objective)
            {
                r.objective = fn;
                r.loads = next;
            }
            if (next == cur)
            {
                r.fixpoint = true;
                break;
            }
            cur = std::move(next);
        }
        return r;
    }

} // namespace rasim
