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

// Acceptance harness: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `rasim_acceptance 4 6`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include <Eigen/LU>

#include "cli.hpp"
#include "rasim/channel.hpp"
#include "rasim/coupling.hpp"
#include "rasim/geometry.hpp"
#include "rasim/loads.hpp"
#include "rasim/montecarlo.hpp"
#include "rasim/oracles.hpp"
#include "rasim/quantization.hpp"
#include "rasim/raps.hpp"
#include "rasim/scenario.hpp"
#include "rasim/special_functions.hpp"
#include "rasim/verify.hpp"

using namespace rasim;

namespace
{
    struct Outcome
    {
        bool passed;
        std::string detail;
    };

    std::string fmt(double v, int precision = 4)
    {
        std::ostringstream s;
        s.precision(precision);
        s << v;
        return s.str();
    }

    int threads()
    {
        return std::max(1u, std::thread::hardware_concurrency());
    }

    std::string config_path(const std::string &name)
    {
        return std::string(RASIM_CONFIG_DIR) + "/" + name;
    }

    Outcome special_functions()
    {
        const double si = std::abs(sine_integral(100.0) - oracle::sine_integral(100.0));
        const double ci = std::abs(cosine_integral(1.0) - oracle::cosine_integral(1.0));
        const double j0 = std::abs(bessel_j0(2.40482555769577));
        return {si <= 1e-9 && ci <= 1e-9 && j0 <= 1e-6,
                "|dSi(100)| = " + fmt(si) + ", |dCi(1)| = " + fmt(ci) + ", |J0(2.40483)| = " + fmt(j0)};
    }

    Outcome impedance()
    {
        const cplx zs = self_impedance(0.5, 1e-4);
        const cplx zs_ref = oracle::self_impedance(0.5, 1e-4);
        const cplx zm = mutual_impedance(0.5, 0.5);
        const cplx zm_ref = oracle::mutual_impedance(0.5, 0.5);
        const double rel_s = std::abs(zs - zs_ref) / std::abs(zs_ref);
        const double rel_m = std::abs(zm - zm_ref) / std::abs(zm_ref);
        const double gold_s = std::abs(zs - cplx(73.1, 42.5)) / std::abs(cplx(73.1, 42.5));
        const double gold_m = std::abs(zm - cplx(-12.5, -29.9)) / std::abs(cplx(-12.5, -29.9));
        const bool ok = rel_s <= 1e-6 && rel_m <= 1e-6 && gold_s <= 0.02 && gold_m <= 0.02;
        return {ok, "z_A = " + fmt(zs.real(), 7) + (zs.imag() < 0 ? " - j" : " + j") + fmt(std::abs(zs.imag()), 7) +
                        " (oracle rel " + fmt(rel_s) + "), Z(0.5) = " + fmt(zm.real(), 7) + " - j" +
                        fmt(-zm.imag(), 7) + " (oracle rel " + fmt(rel_m) + ")"};
    }

    Outcome circuit()
    {
        Rng rng(301);
        double inv = 0.0, decoupled = 0.0, trip = 0.0;
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

            // Sub-arrays of size q + 1 with q chosen so that M splits evenly.
            const int q = (M % 3 == 0) ? 2 : (M % 2 == 0 ? 1 : 0);
            const ArrayPartition part = make_partition(M / (q + 1), q, static_cast<std::uint64_t>(n));
            const CVec s = complex_normal_vector(rng, c.F.cols());
            const MampDrive d = mamp_drive(c.Z, c.F, s, c.dipole.source_impedance, part);
            CMat a = c.Z;
            a.diagonal() += d.loads_pre;
            trip = std::max(trip, (a.partialPivLu().solve(d.voltages) - d.target).norm() / d.target.norm());
        }
        return {inv <= 1e-9 && decoupled <= 1e-12 && trip <= 1e-8,
                "max ||Z_T(Z+X) - I|| = " + fmt(inv) + ", max ||C - I|| = " + fmt(decoupled) +
                    ", max round-trip residual = " + fmt(trip) + " over 100 instances"};
    }

    Outcome solvers()
    {
        const int M = 4, N = 4, K = 2;
        int bpso_close = 0, tabu_close = 0;
        bool greedy_ok = true, one_hot = true;
        for (int n = 0; n < 100; ++n)
        {
            Rng rng(derive_seed(404, static_cast<std::uint64_t>(n), Stream::Channel));
            const PortGrid grid = build_grid(M, N, 0.25, 3e9);
            const RayleighChannelParams p = draw_rayleigh_params(50, K, kPi / 8.0, rng);
            const CMat ht = synthesize_rayleigh(grid, p);
            const FitnessFn f = make_sum_rate_fitness(ht, N, PrecoderKind::WF, 100.0, 1.0);
            const SolverTrace es = exhaustive_search(f, M, N);
            const SolverTrace gr = greedy_allactive(f, M, N);
            Rng srng(derive_seed(404, static_cast<std::uint64_t>(n), Stream::Solver));
            const SolverTrace b = bpso(f, M, N, {}, srng);
            const SolverTrace t = tabu_search(f, M, N, {}, srng);
            greedy_ok = greedy_ok && gr.best_fitness <= es.best_fitness;
            bpso_close += b.best_fitness >= 0.98 * es.best_fitness ? 1 : 0;
            tabu_close += t.best_fitness >= 0.98 * es.best_fitness ? 1 : 0;
            for (const SolverTrace *tr : {&es, &gr, &b, &t})
                one_hot = one_hot && is_one_hot(tr->best.to_binary());
        }
        return {greedy_ok && one_hot && bpso_close >= 90 && tabu_close >= 90,
                "greedy <= ES: " + std::string(greedy_ok ? "always" : "violated") + ", BPSO within 2%: " +
                    std::to_string(bpso_close) + "/100, TS within 2%: " + std::to_string(tabu_close) +
                    "/100, one-hot: " + (one_hot ? "yes" : "no")};
    }

    Outcome gradient()
    {
        Rng rng(505);
        double worst = 0.0;
        bool monotone = true;
        for (int n = 0; n < 50; ++n)
        {
            const int M = 2 + n % 3;
            const CircuitInstance c = random_circuit(rng, M);
            const cplx zA = c.dipole.self_impedance;
            const CVec g = grad_load_gradient(c.z_L, c.Z, c.F, zA);
            const CVec fd = oracle::finite_difference_gradient(
                [&](const CVec &z) { return grad_load_objective(z, c.Z, c.F, zA); }, c.z_L);
            worst = std::max(worst, gradient_relative_error(g, fd));
            const DescentResult r = optimize_loads_allactive(c.Z, c.F, zA, {}, c.z_L);
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                monotone = monotone && r.trace[i] <= r.trace[i - 1];
        }
        return {worst <= 1e-3 && monotone,
                "max per-component rel err " + fmt(worst) + ", traces monotone: " + (monotone ? "yes" : "no")};
    }

    std::map<std::string, double> means(const SweepResult &r, double value)
    {
        std::map<std::string, double> m;
        for (const auto &row : r.rows)
            if (row.value == value)
                m[row.mode] = row.mean_sr;
        return m;
    }

    Outcome trends()
    {
        std::string detail;
        bool ok = true;
        auto timed = [&](const std::string &label, const std::function<bool(std::string &)> &body) {
            const auto t0 = std::chrono::steady_clock::now();
            std::string d;
            bool pass = body(d);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            pass = pass && secs < 600.0;
            ok = ok && pass;
            detail += (detail.empty() ? "" : "; ") + label + (pass ? " ok " : " FAILED ") + d + " [" + fmt(secs, 3) + " s]";
        };

        SweepResult sweep;
        timed("(a)", [&](std::string &d) {
            sweep = run_sweep(load_scenario(config_path("allactive_sweep.toml")), threads());
            double with = 0.0, without = 0.0;
            for (const auto &p : sweep.points)
            {
                auto m = means(sweep, p.value);
                with += m["all_active_with_loads"];
                without += m["all_active_no_loads"];
            }
            const double gain = with / without - 1.0;
            d = "loads vs no loads +" + fmt(100.0 * gain, 3) + "% (need >= 10%)";
            return gain >= 0.10;
        });
        timed("(b)", [&](std::string &d) {
            double ra = 0.0, fpa = 0.0;
            for (const auto &p : sweep.points)
            {
                auto m = means(sweep, p.value);
                ra += m["all_active_with_loads"];
                fpa += m["fpa_fixed"];
            }
            const double gain = ra / fpa - 1.0;
            d = "RA vs FPA +" + fmt(100.0 * gain, 3) + "% (need >= 30%)";
            return gain >= 0.30;
        });
        timed("(c)", [&](std::string &d) {
            const SweepResult r = run_sweep(load_scenario(config_path("ports_sweep.toml")), threads());
            bool mono = true;
            d = "ES mean SR over N:";
            for (std::size_t i = 0; i < r.rows.size(); ++i)
            {
                d += " " + fmt(r.rows[i].mean_sr);
                if (i > 0)
                    mono = mono && r.rows[i].mean_sr >= r.rows[i - 1].mean_sr;
            }
            return mono;
        });
        timed("(d)", [&](std::string &d) {
            auto recovery = [&](const std::string &file, const std::string &mode, double &ratio) {
                const SweepResult r = run_sweep(load_scenario(config_path(file)), threads());
                auto m = means(r, 0.0);
                const double ideal = m[mode], q = m[mode + "/quantized"], rob = m[mode + "/robust"];
                ratio = (rob - q) / (ideal - q);
                return q < ideal;
            };
            double p4 = 0.0, p5 = 0.0;
            const bool degr_m = recovery("mamp_quantized.toml", "mamp_with_loads", p4);
            const bool degr_a = recovery("allactive_quantized.toml", "all_active_with_loads", p5);
            d = "MAMP degraded " + std::string(degr_m ? "yes" : "no") + ", P4 recovers " + fmt(100.0 * p4, 3) +
                "%; all-active degraded " + (degr_a ? "yes" : "no") + ", P5 recovers " + fmt(100.0 * p5, 3) + "%";
            return degr_m && degr_a && p4 >= 0.30 && p5 >= 0.30;
        });
        return {ok, detail};
    }

    Outcome quantized_algebra()
    {
        Rng rng(707);
        double forms = 0.0;
        bool sinr_ok = true, robust_ok = true;
        for (int n = 0; n < 200; ++n)
        {
            const int M = 2 + n % 5;
            const CircuitInstance c = random_circuit(rng, M);
            CMat zt_inv = c.Z;
            zt_inv.diagonal() += c.z_L;
            std::vector<bool> loaded(static_cast<std::size_t>(M), true);
            loaded[0] = false;
            const double eps = 10.0 * (1 + n % 7);
            const CVec e = draw_load_errors(loaded, eps, rng);
            const CVec i = complex_normal_vector(rng, M);
            const CVec a = perturbed_currents(zt_inv, e, i);
            const CVec b = perturbed_currents_direct(zt_inv, e, i);
            forms = std::max(forms, (a - b).norm() / std::max(1.0, b.norm()));

            const CMat H = CMat::NullaryExpr(M, 2, [&](Eigen::Index, Eigen::Index) { return complex_normal(rng); });
            const CMat W = make_precoder(H, PrecoderKind::WF, 100.0, 1.0).W;
            const QuantizedState st = quantized_state(zt_inv, e, eps);
            const RatePoint ideal = sinr_mamp(H, W, 1.0);
            const RatePoint quant = quantized_sinr_mamp(H, W, 1.0, st);
            for (std::size_t k = 0; k < ideal.sinr.size(); ++k)
                sinr_ok = sinr_ok && quant.sinr[k] <= ideal.sinr[k];

            const RobustMampResult r = robust_mamp(st.A, e, i);
            robust_ok = robust_ok && robust_mamp_objective(st.A, e, i, r.dv) <=
                                         robust_mamp_objective(st.A, e, i, CVec::Zero(M));
        }
        return {forms <= 1e-10 && sinr_ok && robust_ok,
                "perturbed-current forms max rel diff " + fmt(forms) + ", quantized <= ideal SINR: " + (sinr_ok ? "yes" : "no") +
                    ", robust never worse: " + (robust_ok ? "yes" : "no") + " (200 instances)"};
    }

    std::string slurp(const std::filesystem::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    Outcome determinism()
    {
        namespace fs = std::filesystem;
        const fs::path root = fs::temp_directory_path() / "rasim_acceptance_determinism";
        fs::remove_all(root);
        std::ostringstream sink;
        cli::RunOptions first{config_path("tiny.toml"), (root / "first").string(), 1, std::nullopt, ""};
        if (cli::cmd_run(first, sink, sink) != 0)
            return {false, "initial run failed: " + sink.str()};
        const std::string manifest = (root / "first" / "manifest.json").string();
        cli::RunOptions a{manifest, (root / "a").string(), 1, std::nullopt, ""};
        cli::RunOptions b{manifest, (root / "b").string(), threads(), std::nullopt, ""};
        if (cli::cmd_run(a, sink, sink) != 0 || cli::cmd_run(b, sink, sink) != 0)
            return {false, "manifest rerun failed: " + sink.str()};
        const std::string ra = slurp(root / "a" / "results.csv"), rb = slurp(root / "b" / "results.csv");
        const bool same = !ra.empty() && ra == rb && ra == slurp(root / "first" / "results.csv");
        fs::remove_all(root);
        return {same, same ? "results.csv byte-identical across manifest reruns" : "results.csv differs"};
    }
} // namespace

int main(int argc, char **argv)
{
    struct Criterion
    {
        int id;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {1, 1.0, special_functions}, {2, 1.0, impedance},  {3, 5.0, circuit},          {4, 120.0, solvers},
        {5, 30.0, gradient},         {6, 2400.0, trends},  {7, 5.0, quantized_algebra}, {8, 600.0, determinism},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const Criterion &c : all)
    {
        if (!wanted.empty() && !wanted.count(c.id))
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.passed && in_time;
        failed += pass ? 0 : 1;
        std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << o.detail << " ["
                  << fmt(secs, 3) << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
