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

#include "rasim/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "rasim/types.hpp"

namespace rasim
{
    namespace
    {
        constexpr double kSeriesLimit = 6.0;
        constexpr double kEps = 1e-17;
        constexpr int kMaxTerms = 200;

        // Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)
        // Ci(x) = gamma + ln x + sum_k>=1 (-1)^k x^(2k) / (2k (2k)!)
        SinCosIntegrals series(double x)
        {
            const double x2 = x * x;
            double si = 0.0;
            double ci = 0.0;

            double term = x; // x^(2k+1)/(2k+1)! with sign
            for (int k = 0; k < kMaxTerms; ++k)
            {
                const double contrib = term / (2.0 * k + 1.0);
                si += contrib;
                if (std::abs(contrib) < kEps * std::abs(si))
                    break;
                term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            }

            term = 1.0; // x^(2k)/(2k)! with sign
            for (int k = 1; k < kMaxTerms; ++k)
            {
                term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
                const double contrib = term / (2.0 * k);
                ci += contrib;
                if (std::abs(contrib) < kEps * (1.0 + std::abs(ci)))
                    break;
            }
            ci += kEulerGamma + std::log(x);
            return {si, ci};
        }

        // E1(ix) = -Ci(x) + i(Si(x) - pi/2) via the continued fraction
        //   E1(z) = e^-z / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
        // evaluated with the modified Lentz method.
        SinCosIntegrals continued_fraction(double x)
        {
            const std::complex<double> z(0.0, x);
            constexpr double tiny = 1e-300;

            std::complex<double> b = z + 1.0;
            std::complex<double> c = 1.0 / tiny;
            std::complex<double> d = 1.0 / b;
            std::complex<double> h = d;
            for (int i = 1; i < kMaxTerms; ++i)
            {
                const double a = -static_cast<double>(i) * static_cast<double>(i);
                b += 2.0;
                d = 1.0 / (a * d + b);
                c = b + a / c;
                const std::complex<double> del = c * d;
                h *= del;
                if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16)
                    break;
            }
            h *= std::complex<double>(std::cos(x), -std::sin(x)); // e^{-ix}
            return {kPi / 2.0 + h.imag(), -h.real()};
        }
    } // namespace

    SinCosIntegrals sin_cos_integrals(double x)
    {
        if (!(x >= 0.0))
            throw std::domain_error("sin_cos_integrals: argument must be nonnegative");
        if (x == 0.0)
            throw std::domain_error("sin_cos_integrals: Ci(0) diverges");
        if (std::isinf(x))
            return {kPi / 2.0, 0.0};
        return x < kSeriesLimit ? series(x) : continued_fraction(x);
    }

    double sine_integral(double x)
    {
        if (x == 0.0)
            return 0.0;
        if (x < 0.0)
            return -sin_cos_integrals(-x).si;
        return sin_cos_integrals(x).si;
    }

    double cosine_integral(double x)
    {
        return sin_cos_integrals(x).ci;
    }

    double bessel_j0(double x)
    {
        return std::cyl_bessel_j(0.0, std::abs(x));
    }

} // namespace rasim
