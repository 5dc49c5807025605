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

#include "rasim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "rasim/geometry.hpp"
#include "rasim/loads.hpp"
#include "rasim/oracles.hpp"
#include "rasim/quantization.hpp"
#include "rasim/raps.hpp"
#include "rasim/selection.hpp"
#include "rasim/special_functions.hpp"

namespace rasim
{
    namespace
    {
        std::string num(double v)
        {
            std::ostringstream s;
            s.precision(3);
            s << std::scientific << v;
            return s.str();
        }

        void add(std::vector<Check> &out, const char *suite, std::string name, bool ok, std::string detail)
        {
            out.push_back({suite, std::move(name), ok, std::move(detail)});
        }

        void special_fns(std::vector<Check> &out)
        {
            double worst_si = 0.0, worst_ci = 0.0;
            for (int i = 0; i <= 60; ++i)
            {
                const double x = std::pow(10.0, -3.0 + 6.0 * i / 60.0);
                worst_si = std::max(worst_si, std::abs(sine_integral(x) - oracle::sine_integral(x)));
                worst_ci = std::max(worst_ci, std::abs(cosine_integral(x) - oracle::cosine_integral(x)));
            }
            add(out, "special_fns", "Si vs quadrature on [1e-3, 1e3]", worst_si <= 1e-9, "max abs err " + num(worst_si));
            add(out, "special_fns", "Ci vs quadrature on [1e-3, 1e3]", worst_ci <= 1e-9, "max abs err " + num(worst_ci));

            double worst_j0 = 0.0;
            for (int i = 0; i <= 40; ++i)
            {
                const double x = 0.5 * i;
                worst_j0 = std::max(worst_j0, std::abs(bessel_j0(x) - oracle::bessel_j0(x)));
            }
            add(out, "special_fns", "J0 vs integral representation on [0, 20]", worst_j0 <= 1e-12,
                "max abs err " + num(worst_j0));

            const double zero = 2.404825557695773;
            const double j = std::abs(bessel_j0(zero));
            add(out, "special_fns", "J0 first zero", j <= 1e-6, "|J0(2.404826)| = " + num(j));
        }

        void gradient(std::vector<Check> &out, const GradientFn &grad)
        {
            Rng rng(20240917);
            double worst = 0.0;
            for (int n = 0; n < 50; ++n)
            {
                const int M = 2 + n % 3;
                const CircuitInstance c = random_circuit(rng, M);
                const cplx zA = c.dipole.self_impedance;
                const CVec g = grad(c.z_L, c.Z, c.F, zA);
                const CVec fd = oracle::finite_difference_gradient(
                    [&](const CVec &z) { return grad_load_objective(z, c.Z, c.F, zA); }, c.z_L);
                worst = std::max(worst, gradient_relative_error(g, fd));
            }
            add(out, "gradient", "load gradient vs central differences (50 instances)", worst <= 1e-3,
                "max rel err " + num(worst));
        }

        void oracle_suite(std::vector<Check> &out)
        {
            Rng rng(7);
            bool es_ok = true, greedy_ok = true, hot_ok = true;
            for (int n = 0; n < 10; ++n)
            {
                const int M = 3, N = 4, K = 2;
                CMat h(M * N, K);
                for (Eigen::Index i = 0; i < h.size(); ++i)
                    h.data()[i] = complex_normal(rng);
                const FitnessFn f = make_sum_rate_fitness(h, N, PrecoderKind::WF, 100.0, 1.0);
                const SolverTrace es = exhaustive_search(f, M, N);
                const oracle::Enumeration ref = oracle::enumerate(f, M, N);
                es_ok = es_ok && std::vector<int>(es.best.ports().begin(), es.best.ports().end()) == ref.best &&
                        es.best_fitness == ref.fitness;
                const SolverTrace gr = greedy_allactive(f, M, N);
                greedy_ok = greedy_ok && gr.best_fitness <= es.best_fitness + 1e-12;
                Rng srng(static_cast<std::uint64_t>(n));
                const SolverTrace b = bpso(f, M, N, {}, srng);
                const SolverTrace t = tabu_search(f, M, N, {}, srng);
                for (const auto *tr : {&es, &gr, &b, &t})
                    hot_ok = hot_ok && is_one_hot(tr->best.to_binary()) && tr->best_fitness <= es.best_fitness + 1e-12;
            }
            add(out, "oracle", "exhaustive search vs nested enumeration (M=3, N=4)", es_ok, "10 instances");
            add(out, "oracle", "greedy never beats exhaustive search", greedy_ok, "10 instances");
            add(out, "oracle", "solver outputs one-hot and bounded by ES", hot_ok, "ES, greedy, BPSO, TS");
        }

        void circuit(std::vector<Check> &out)
        {
            Rng rng(11);
            double inv = 0.0, decoupled = 0.0, trip = 0.0, forms = 0.0;
            for (int n = 0; n < 100; ++n)
            {
                const int M = 2 + n % 5;
                const CircuitInstance c = random_circuit(rng, M);
                const cplx zA = c.dipole.self_impedance;
                const CouplingState st = effective_coupling(c.Z, c.z_L, zA);
                CMat zx = c.Z;
                zx.diagonal() += c.z_L;
                inv = std::max(inv, (st.Z_T * zx - CMat::Identity(M, M)).norm());
                const CouplingState free = effective_coupling(uncoupled_impedance(M, zA), c.z_L, zA);
                decoupled = std::max(decoupled, (free.C - CMat::Identity(M, M)).norm());

                // MAMP round trip on a partition with one active RA per pair.
                if (M % 2 == 0)
                {
                    const ArrayPartition part = make_partition(M / 2, 1, static_cast<std::uint64_t>(n));
                    const CVec s = complex_normal_vector(rng, c.F.cols());
                    const MampDrive d = mamp_drive(c.Z, c.F, s, c.dipole.source_impedance, part);
                    CMat a = c.Z;
                    a.diagonal() += d.loads_pre;
                    const CVec i = a.fullPivLu().solve(d.voltages);
                    trip = std::max(trip, (i - d.target).norm() / d.target.norm());
                }

                const CVec e = complex_normal_vector(rng, M, 25.0);
                const CVec i = complex_normal_vector(rng, M);
                const CVec a = perturbed_currents(zx, e, i);
                const CVec b = perturbed_currents_direct(zx, e, i);
                forms = std::max(forms, (a - b).norm() / std::max(1.0, b.norm()));
            }
            add(out, "circuit", "Z_T (Z + X) = I", inv <= 1e-9, "max Frobenius residual " + num(inv));
            add(out, "circuit", "C = I without coupling", decoupled <= 1e-12, "max ||C - I|| " + num(decoupled));
            add(out, "circuit", "MAMP drive round trip", trip <= 1e-8, "max rel residual " + num(trip));
            add(out, "circuit", "perturbed current forms agree", forms <= 1e-10, "max rel diff " + num(forms));
        }

        std::size_t edit_distance(std::string_view a, std::string_view b)
        {
            std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
            for (std::size_t j = 0; j <= b.size(); ++j)
                prev[j] = j;
            for (std::size_t i = 1; i <= a.size(); ++i)
            {
                cur[0] = i;
                for (std::size_t j = 1; j <= b.size(); ++j)
                    cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
                std::swap(prev, cur);
            }
            return prev[b.size()];
        }
    } // namespace

    CircuitInstance random_circuit(Rng &rng, int num_ras, int users)
    {
        CircuitInstance c;
        c.dipole = default_dipole();
        const PortGrid grid = build_grid(num_ras, 4, 0.125, 3e9);
        const SelectionMatrix sel = SelectionMatrix::random(num_ras, 4, rng);
        c.Z = build_impedance_matrix(c.dipole, sel.config(grid));
        c.F = CMat(num_ras, users);
        for (Eigen::Index i = 0; i < c.F.size(); ++i)
            c.F.data()[i] = complex_normal(rng);
        c.z_L = CVec(num_ras);
        for (Eigen::Index m = 0; m < num_ras; ++m)
            c.z_L(m) = c.dipole.source_impedance + complex_normal(rng, 400.0);
        return c;
    }

    double gradient_relative_error(const CVec &analytic, const CVec &fd)
    {
        const double scale = fd.norm();
        double worst = 0.0;
        for (Eigen::Index m = 0; m < fd.size(); ++m)
        {
            const double denom = std::max(std::abs(fd(m)), 1e-9 * scale);
            if (denom == 0.0)
                worst = std::max(worst, std::abs(analytic(m)) > 0.0 ? INFINITY : 0.0);
            else
                worst = std::max(worst, std::abs(analytic(m) - fd(m)) / denom);
        }
        return worst;
    }

    const std::vector<std::string> &verify_suites()
    {
        static const std::vector<std::string> names{"special_fns", "gradient", "oracle", "circuit", "all"};
        return names;
    }

    std::string suggest_suite(std::string_view name)
    {
        const auto &names = verify_suites();
        return *std::min_element(names.begin(), names.end(), [&](const std::string &a, const std::string &b) {
            return edit_distance(name, a) < edit_distance(name, b);
        });
    }

    std::vector<Check> run_verify(std::string_view suite, const VerifyOptions &options)
    {
        const auto &names = verify_suites();
        if (std::find(names.begin(), names.end(), suite) == names.end())
            throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
        const GradientFn grad = options.gradient ? options.gradient : GradientFn(grad_load_gradient);
        const bool all = suite == "all";
        std::vector<Check> out;
        if (all || suite == "special_fns")
            special_fns(out);
        if (all || suite == "gradient")
            gradient(out, grad);
        if (all || suite == "oracle")
            oracle_suite(out);
        if (all || suite == "circuit")
            circuit(out);
        return out;
    }

} // namespace rasim
