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

#include "rasim/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rasim::oracle
{
    namespace
    {
        // Integrates over panels of length pi so each one sees at most one
        // oscillation of the integrand.
        template <class F>
        double panels(F f, double a, double b)
        {
            using boost::math::quadrature::gauss_kronrod;
            double total = 0.0;
            for (double lo = a; lo < b; lo += kPi)
            {
                const double hi = std::min(b, lo + kPi);
                total += gauss_kronrod<double, 31>::integrate(f, lo, hi, 8, 1e-13);
            }
            return total;
        }

        constexpr double kEta = kFreeSpaceImpedance;
    } // namespace

    double sine_integral(double x)
    {
        if (x < 0.0)
            return -sine_integral(-x);
        return panels([](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }, 0.0, x);
    }

    double cosine_integral(double x)
    {
        if (!(x > 0.0))
            throw std::domain_error("cosine integral needs x > 0");
        const double tail = panels(
            [](double t) {
                // (cos t - 1)/t = -2 sin^2(t/2)/t avoids cancellation near 0.
                const double s = std::sin(0.5 * t);
                return t == 0.0 ? 0.0 : -2.0 * s * s / t;
            },
            0.0, x);
        return kEulerGamma + std::log(x) + tail;
    }

    double bessel_j0(double x)
    {
        using boost::math::quadrature::gauss_kronrod;
        const double v = gauss_kronrod<double, 61>::integrate([x](double th) { return std::cos(x * std::sin(th)); },
                                                              0.0, kPi, 10, 1e-13);
        return v / kPi;
    }

    cplx self_impedance(double length, double radius)
    {
        const double u = 2.0 * kPi * length;
        const double si_u = sine_integral(u), ci_u = cosine_integral(u);
        const double si_2u = sine_integral(2.0 * u), ci_2u = cosine_integral(2.0 * u);
        const double ci_a = cosine_integral(4.0 * kPi * radius * radius / length);
        const double r = kEta / (2.0 * kPi) *
                             (std::log(u) - ci_u + 0.5 * std::sin(u) * (si_2u - 2.0 * si_u) +
                              0.5 * std::cos(u) * (kEulerGamma + std::log(u / 2.0) + ci_2u - 2.0 * ci_u)) +
                         kEulerGamma * kEta / (2.0 * kPi);
        const double x = kEta / (4.0 * kPi) *
                         (2.0 * si_u + std::cos(u) * (2.0 * si_u - si_2u) - std::sin(u) * (2.0 * ci_u - ci_2u - ci_a));
        return {r, x};
    }

    cplx mutual_impedance(double length, double dist)
    {
        const double k = 2.0 * kPi;
        const double s = std::sqrt(dist * dist + length * length);
        const double m0 = k * dist, m1 = k * (s + length), m2 = k * (s - length);
        const double r = kEta / (4.0 * kPi) * (2.0 * cosine_integral(m0) - cosine_integral(m1) - cosine_integral(m2));
        const double x = -kEta / (4.0 * kPi) * (2.0 * sine_integral(m0) - sine_integral(m1) - sine_integral(m2));
        return {r, x};
    }

    CVec finite_difference_gradient(const std::function<double(const CVec &)> &f, const CVec &z, double rel_step)
    {
        CVec g(z.size());
        for (Eigen::Index m = 0; m < z.size(); ++m)
        {
            const double h = rel_step * (1.0 + std::abs(z(m)));
            CVec zp = z, zm = z;
            zp(m) += h;
            zm(m) -= h;
            const double dx = (f(zp) - f(zm)) / (2.0 * h);
            zp = z;
            zm = z;
            zp(m) += cplx(0.0, h);
            zm(m) -= cplx(0.0, h);
            const double dy = (f(zp) - f(zm)) / (2.0 * h);
            g(m) = {dx, dy};
        }
        return g;
    }

    Enumeration enumerate(const FitnessFn &fitness, int num_ras, int ports_per_ra)
    {
        if (num_ras < 1 || ports_per_ra < 1)
            throw std::invalid_argument("enumerate: M and N must be positive");
        Enumeration e;
        std::vector<int> cur(static_cast<std::size_t>(num_ras), 0);
        bool first = true;
        while (true)
        {
            const double v = fitness(cur);
            ++e.evaluations;
            if (first || v > e.fitness || (v == e.fitness && cur < e.best))
            {
                e.fitness = v;
                e.best = cur;
                first = false;
            }
            std::size_t m = 0;
            while (m < cur.size() && ++cur[m] == ports_per_ra)
                cur[m++] = 0;
            if (m == cur.size())
                break;
        }
        return e;
    }

    std::vector<double> sinr_loop(const CMat &H, const CMat &W, const std::vector<double> &noise)
    {
        const auto K = H.cols();
        std::vector<double> out(static_cast<std::size_t>(K));
        for (Eigen::Index k = 0; k < K; ++k)
        {
            double signal = 0.0, interference = 0.0;
            for (Eigen::Index i = 0; i < K; ++i)
            {
                cplx acc{};
                for (Eigen::Index m = 0; m < H.rows(); ++m)
                    acc += std::conj(H(m, k)) * W(m, i);
                (i == k ? signal : interference) += std::norm(acc);
            }
            out[static_cast<std::size_t>(k)] = signal / (interference + noise[static_cast<std::size_t>(k)]);
        }
        return out;
    }

    CVec projected_gradient_p4(const CMat &A, const CVec &errors, const CVec &i_ideal, int max_iter, double tol)
    {
        const CMat B = A.fullPivLu().inverse();
        const CMat BhB = B.adjoint() * B;
        const CVec b = errors.cwiseProduct(i_ideal);
        Eigen::SelfAdjointEigenSolver<CMat> eig(BhB, Eigen::EigenvaluesOnly);
        const double lip = 2.0 * eig.eigenvalues().maxCoeff();
        CVec x = CVec::Zero(A.rows());
        for (int k = 0; k < max_iter; ++k)
        {
            CVec y = x - (2.0 / lip) * (BhB * (x - b));
            for (Eigen::Index m = 0; m < y.size(); ++m)
                y(m) = {std::max(y(m).real(), 0.0), y(m).imag()};
            const double step = (y - x).norm();
            x = std::move(y);
            if (step <= tol * std::max(1.0, x.norm()))
                break;
        }
        return x;
    }

} // namespace rasim::oracle
