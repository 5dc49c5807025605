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

#include "rasim/loads.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>

#include "rasim/error.hpp"

namespace rasim
{
    MampDrive mamp_drive(const CMat &Z, const CMat &W, const CVec &s, cplx z0, const ArrayPartition &partition)
    {
        const auto M = Z.rows();
        if (Z.cols() != M || W.rows() != M || W.cols() != s.size() || partition.num_ras() != M)
            throw std::invalid_argument("mamp_drive: dimension mismatch");

        MampDrive d;
        d.symbols = s;
        d.target = W * s;
        const CVec zi = Z * d.target;
        d.voltages = CVec::Zero(M);
        d.loads_pre.resize(M);
        for (Eigen::Index m = 0; m < M; ++m)
        {
            if (partition.is_active(static_cast<int>(m)))
            {
                d.voltages(m) = zi(m) + z0 * d.target(m);
                d.loads_pre(m) = z0;
                continue;
            }
            const double wnorm = W.row(m).norm();
            if (!(std::abs(d.target(m)) >= 1e-9 * wnorm) || wnorm == 0.0)
                throw DegenerateSymbol("passive RA " + std::to_string(m) + " has a vanishing target current");
            d.loads_pre(m) = -zi(m) / d.target(m);
        }
        d.loads = d.loads_pre;
        for (Eigen::Index m = 0; m < M; ++m)
            if (!partition.is_active(static_cast<int>(m)))
                d.loads(m) = {std::abs(d.loads(m).real()), d.loads(m).imag()};
        return d;
    }

    CVec port_currents(const CMat &Z, const CVec &loads, const CVec &v)
    {
        CMat a = Z;
        a.diagonal() += loads;
        Eigen::PartialPivLU<CMat> lu(a);
        const double rcond = lu.rcond();
        if (!(rcond > 1e-12))
            throw SingularMatrix("Z + X is singular or ill-conditioned", rcond > 0.0 ? 1.0 / rcond : INFINITY);
        return lu.solve(v);
    }

    namespace
    {
        CVec denominators(const CVec &z_L, cplx z_A)
        {
            CVec c = z_L.array() + z_A;
            for (Eigen::Index m = 0; m < c.size(); ++m)
                if (c(m) == cplx{})
                    throw std::domain_error("load equals -z_A; (z_A I + X) is singular");
            return c;
        }

        CMat compensated(const CVec &z_L, const CMat &Z, const CMat &F, const CVec &c)
        {
            CMat zx = Z;
            zx.diagonal() += z_L;
            return zx * (c.cwiseInverse().asDiagonal() * F);
        }
    } // namespace

    double grad_load_objective(const CVec &z_L, const CMat &Z, const CMat &F, cplx z_A)
    {
        if (Z.rows() != z_L.size() || F.rows() != z_L.size())
            throw std::invalid_argument("grad_load_objective: dimension mismatch");
        return compensated(z_L, Z, F, denominators(z_L, z_A)).norm();
    }

    CVec grad_load_gradient(const CVec &z_L, const CMat &Z, const CMat &F, cplx z_A)
    {
        if (Z.rows() != z_L.size() || F.rows() != z_L.size())
            throw std::invalid_argument("grad_load_gradient: dimension mismatch");
        const CVec c = denominators(z_L, z_A);
        const CMat G = compensated(z_L, Z, F, c);
        const double J = G.norm();
        if (!(J > 0.0))
            throw std::domain_error("grad_load_gradient: objective is zero");
        // Only the z_m-dependence of column m of (Z + X) diag(1/c) survives:
        // d/dz_m [(Z + X) e_m / c_m] = -(Z - z_A I) e_m / c_m^2.
        CMat B = Z;
        B.diagonal().array() -= z_A;
        const CMat GhB = G.adjoint() * B; // K x M
        CVec g(z_L.size());
        for (Eigen::Index m = 0; m < z_L.size(); ++m)
        {
            const cplx s = -(F.row(m) * GhB.col(m))(0, 0) / (c(m) * c(m));
            g(m) = std::conj(s) / J;
        }
        return g;
    }

    DescentResult gradient_descent(const RealObjective &f, const ComplexGradient &grad, CVec z_init,
                                   const GradDescentParams &params, double scale)
    {
        if (!(params.tol > 0.0) || params.max_iter < 0 || !(params.step > 0.0))
            throw std::invalid_argument("gradient_descent: step and tol must be positive");

        DescentResult r;
        r.z = std::move(z_init);
        double fz = f(r.z);
        r.trace.push_back(fz);
        double mu = params.step;
        CVec z_prev, g_prev;
        for (int it = 0; it < params.max_iter; ++it)
        {
            if (fz <= params.f_floor)
            {
                r.converged = true;
                return r;
            }
            const CVec g = grad(r.z);
            const double gn = g.norm();
            if (gn * scale <= params.tol * std::max(std::abs(fz), 1e-300))
            {
                r.converged = true;
                return r;
            }
            if (params.line_search == LineSearch::BarzilaiBorwein && g_prev.size() == g.size())
            {
                const CVec s = r.z - z_prev, y = g - g_prev;
                const double sy = s.dot(y).real();
                if (sy > 0.0)
                    mu = s.squaredNorm() / sy;
            }
            z_prev = r.z;
            g_prev = g;
            if (params.line_search == LineSearch::Fixed)
            {
                r.z -= mu * g;
                fz = f(r.z);
                r.trace.push_back(fz);
                ++r.iterations;
                continue;
            }
            bool accepted = false;
            for (int h = 0; h <= params.max_halvings; ++h)
            {
                CVec cand = r.z - mu * g;
                double fc;
                try
                {
                    fc = f(cand);
                }
                catch (const std::domain_error &)
                {
                    fc = INFINITY;
                }
                if (fc <= fz - params.armijo * mu * gn * gn)
                {
                    r.z = std::move(cand);
                    fz = fc;
                    accepted = true;
                    break;
                }
                mu *= 0.5;
            }
            if (!accepted)
            {
                r.stagnated = true;
                return r;
            }
            r.trace.push_back(fz);
            ++r.iterations;
            if (params.line_search == LineSearch::Backtracking)
                mu *= 2.0;
        }
        return r;
    }

    CVec optimal_loads_allactive(const CMat &Z, const CMat &F, cplx z_A)
    {
        const Eigen::Index M = Z.rows(), K = F.cols();
        if (Z.cols() != M || F.rows() != M)
            throw std::invalid_argument("optimal_loads_allactive: dimension mismatch");
        CMat B = Z;
        B.diagonal().array() -= z_A;
        CMat A(M * K, M);
        for (Eigen::Index m = 0; m < M; ++m)
        {
            const CMat outer = B.col(m) * F.row(m);
            A.col(m) = Eigen::Map<const CVec>(outer.data(), M * K);
        }
        const CMat f = F;
        const Eigen::ColPivHouseholderQR<CMat> qr(A);
        if (qr.rank() < M)
            throw RankDeficient("optimal_loads_allactive: load problem is rank deficient");
        const CVec y = -qr.solve(Eigen::Map<const CVec>(f.data(), M * K));
        if (y.cwiseAbs().minCoeff() <= 1e-12 * y.cwiseAbs().maxCoeff())
            throw DegenerateGeometry("optimal_loads_allactive: optimum open-circuits an RA");
        return (y.cwiseInverse().array() - z_A).matrix();
    }

    DescentResult optimize_loads_allactive(const CMat &Z, const CMat &F, cplx z_A, const GradDescentParams &params,
                                           const CVec &z_init)
    {
        GradDescentParams p = params;
        if (!(p.step > 0.0))
            p.step = 1e-2 * std::abs(z_A);
        return gradient_descent([&](const CVec &z) { return grad_load_objective(z, Z, F, z_A); },
                                [&](const CVec &z) { return grad_load_gradient(z, Z, F, z_A); }, z_init, p,
                                std::abs(z_A));
    }

} // namespace rasim
