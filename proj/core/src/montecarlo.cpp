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

#include "rasim/montecarlo.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <Eigen/LU>
#include <json.hpp>

#include "rasim/channel.hpp"
#include "rasim/coupling.hpp"
#include "rasim/loads.hpp"
#include "rasim/precoding.hpp"
#include "rasim/quantization.hpp"

#ifndef RASIM_VERSION
#define RASIM_VERSION "0.0.0"
#endif

namespace rasim
{
    std::string library_version() { return RASIM_VERSION; }

    std::string format_double(double v)
    {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
    }

    namespace
    {
        struct Drawn
        {
            CMat port_channels;
            std::uint64_t hash = 0;
            SVChannelParams sv;
            RayleighChannelParams rayleigh;
        };

        Drawn draw_channel(const ScenarioConfig &cfg, int trial)
        {
            Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::Channel);
            Drawn d;
            if (cfg.sv_channel)
            {
                d.sv = draw_sv_params(cfg.clusters, cfg.paths_per_cluster, cfg.users, rng);
                d.hash = channel_hash(d.sv);
            }
            else
            {
                d.rayleigh = draw_rayleigh_params(cfg.directions, cfg.users, cfg.angular_spread, rng);
                d.hash = channel_hash(d.rayleigh);
            }
            return d;
        }

        CMat synthesize(const ScenarioConfig &cfg, const Drawn &d, const PortGrid &grid)
        {
            CMat h = cfg.sv_channel ? synthesize_sv(grid, d.sv) : synthesize_rayleigh(grid, d.rayleigh);
            if (cfg.correlation)
                h = apply_correlation(h, correlation_matrix(grid));
            return h;
        }

        SolverTrace select(const ScenarioConfig &cfg, const FitnessFn &fitness, const ArrayPartition &partition,
                           Rng &rng)
        {
            const int M = partition.num_ras();
            const int N = cfg.ports_per_ra;
            auto bpso_fn = [&](const FitnessFn &f, int m, int n) { return bpso(f, m, n, cfg.bpso, rng); };
            auto tabu_fn = [&](const FitnessFn &f, int m, int n) { return tabu_search(f, m, n, cfg.tabu, rng); };
            switch (cfg.solver)
            {
            case SolverKind::Exhaustive:
                return exhaustive_search(fitness, M, N);
            case SolverKind::Bpso:
                return bpso_fn(fitness, M, N);
            case SolverKind::Tabu:
                return tabu_fn(fitness, M, N);
            case SolverKind::Greedy:
                return partition.num_passive > 0 ? greedy_mamp(fitness, partition, N) : greedy_allactive(fitness, M, N);
            case SolverKind::SparseBpso:
                return sparse_wrap(bpso_fn, fitness, partition, N);
            case SolverKind::SparseTabu:
                return sparse_wrap(tabu_fn, fitness, partition, N);
            }
            throw std::logic_error("unknown solver");
        }

        ModeResult from_rates(std::string mode, std::string solver, const RatePoint &r)
        {
            ModeResult m;
            m.mode = std::move(mode);
            m.solver = std::move(solver);
            m.sum_rate = r.sum_rate;
            m.rates = r.rates;
            return m;
        }

        ModeResult zero_rate(std::string mode, std::string solver, int users)
        {
            ModeResult m;
            m.mode = std::move(mode);
            m.solver = std::move(solver);
            m.rates.assign(static_cast<std::size_t>(users), 0.0);
            return m;
        }

        CMat impedance(const ScenarioConfig &cfg, const DipoleSpec &dip, std::span<const double> config)
        {
            return cfg.coupling ? build_impedance_matrix(dip, config)
                                : uncoupled_impedance(static_cast<int>(config.size()), dip.self_impedance);
        }

        // Precoder designed on the coupled channel with every port terminated in z_0.
        RatePoint no_load_rate(const CMat &H, const CMat &Z, PrecoderKind kind, const DipoleSpec &dip, double p_max,
                               double sigma2)
        {
            const CVec z0 = CVec::Constant(H.rows(), dip.source_impedance);
            const CMat h_bar = coupled_channel(H, effective_coupling(Z, z0, dip.self_impedance));
            return sinr_mamp(h_bar, make_precoder(h_bar, kind, p_max, sigma2).W, sigma2);
        }

        DescentResult optimize_loads(const ScenarioConfig &cfg, const CMat &Z, const CMat &F, cplx z_A, cplx z0)
        {
            const CVec z_init = CVec::Constant(Z.rows(), z0);
            if (cfg.load_method == LoadMethod::LeastSquares)
            {
                try
                {
                    DescentResult r;
                    r.z = optimal_loads_allactive(Z, F, z_A);
                    const double j0 = grad_load_objective(z_init, Z, F, z_A);
                    const double j = grad_load_objective(r.z, Z, F, z_A);
                    if (j <= j0)
                    {
                        r.trace = {j0, j};
                        r.iterations = 1;
                        r.converged = true;
                        return r;
                    }
                }
                catch (const Error &)
                {
                }
            }
            return optimize_loads_allactive(Z, F, z_A, cfg.loads, z_init);
        }

        void run_mamp(const ScenarioConfig &cfg, int trial, const Drawn &drawn, TrialResult &out)
        {
            const std::string mode(csv_name(ArrayMode::MampWithLoads));
            const std::string solver(to_string(cfg.solver));
            const PortGrid grid = build_grid(cfg.num_ras, cfg.ports_per_ra, cfg.port_spacing, cfg.carrier_hz);
            const CMat ht = synthesize(cfg, drawn, grid);
            const ArrayPartition part = make_partition(
                cfg.num_active, cfg.passive_per_active,
                derive_seed(cfg.seed, static_cast<std::uint64_t>(trial), Stream::Partition));

            Rng solver_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::Solver);
            const FitnessFn fitness = make_sum_rate_fitness(ht, cfg.ports_per_ra, cfg.precoder, cfg.p_max, cfg.noise_power);
            SolverTrace trace = select(cfg, fitness, part, solver_rng);

            if (!(cfg.p_max > 0.0))
            {
                out.modes.push_back(zero_rate(mode, solver, cfg.users));
                out.modes.back().trace = std::move(trace);
                if (cfg.quantization)
                {
                    out.modes.push_back(zero_rate(mode + "/quantized", solver, cfg.users));
                    out.modes.push_back(zero_rate(mode + "/robust", solver, cfg.users));
                }
                return;
            }

            const CMat H = select_ports(ht, trace.best);
            const ConfigVector t = trace.best.config(grid);
            const DipoleSpec dip = make_dipole(cfg.dipole_length, cfg.dipole_radius);
            const CMat Z = impedance(cfg, dip, t);
            const CMat W = make_precoder(H, cfg.precoder, cfg.p_max, cfg.noise_power).W;

            Rng sym_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::Symbols);
            std::vector<MampDrive> drives;
            drives.reserve(static_cast<std::size_t>(cfg.symbols));
            int rejected = 0;
            while (static_cast<int>(drives.size()) < cfg.symbols)
            {
                const CVec s = complex_normal_vector(sym_rng, cfg.users);
                try
                {
                    drives.push_back(mamp_drive(Z, W, s, dip.source_impedance, part));
                }
                catch (const DegenerateSymbol &)
                {
                    if (++rejected > 100 * cfg.symbols)
                        throw;
                }
            }

            out.modes.push_back(from_rates(mode, solver, sinr_mamp(H, W, cfg.noise_power)));
            out.modes.back().trace = std::move(trace);

            if (!cfg.quantization)
                return;

            std::vector<bool> passive(static_cast<std::size_t>(cfg.num_ras), false);
            std::vector<cplx> passive_loads;
            for (int m = 0; m < cfg.num_ras; ++m)
                if (!part.is_active(m))
                {
                    passive[static_cast<std::size_t>(m)] = true;
                    for (const auto &d : drives)
                        passive_loads.push_back(d.loads(m));
                }
            const double eps = cfg.quantization->beta * mean_squared_load(passive_loads);
            Rng err_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::LoadError);
            const CVec e = draw_load_errors(passive, eps, err_rng);

            RobustMampParams rp;
            if (cfg.robust_active_only)
            {
                rp.support.assign(static_cast<std::size_t>(cfg.num_ras), false);
                for (int m : part.active_ras())
                    rp.support[static_cast<std::size_t>(m)] = true;
            }
            // sigma_q^2 averaged over symbols; the robust drive scales it by the
            // residual share of the perturbation energy.
            QuantizedState q;
            double before = 0.0, after = 0.0;
            for (const auto &d : drives)
            {
                CMat zt_inv = Z;
                zt_inv.diagonal() += d.loads;
                const QuantizedState st = quantized_state(zt_inv, e, eps);
                q.sigma_q2 += st.sigma_q2 / static_cast<double>(drives.size());
                const RobustMampResult r = robust_mamp(st.A, e, d.target, rp);
                before += robust_mamp_objective(st.A, e, d.target, CVec::Zero(e.size()));
                after += r.objective;
            }
            QuantizedState robust = q;
            robust.sigma_q2 = before > 0.0 ? q.sigma_q2 * after / before : 0.0;
            out.modes.push_back(
                from_rates(mode + "/quantized", solver, quantized_sinr_mamp(H, W, cfg.noise_power, q)));
            out.modes.push_back(
                from_rates(mode + "/robust", solver, quantized_sinr_mamp(H, W, cfg.noise_power, robust)));
        }

        bool wants(const ScenarioConfig &cfg, ArrayMode m)
        {
            return std::find(cfg.modes.begin(), cfg.modes.end(), m) != cfg.modes.end();
        }

        void run_allactive(const ScenarioConfig &cfg, int trial, const Drawn &drawn, TrialResult &out)
        {
            const DipoleSpec dip = make_dipole(cfg.dipole_length, cfg.dipole_radius);
            const cplx z_A = dip.self_impedance;
            const cplx z0 = dip.source_impedance;
            const double sqrt_p = std::sqrt(cfg.p_max);
            const bool live = cfg.p_max > 0.0;

            if (wants(cfg, ArrayMode::AllActiveWithLoads) || wants(cfg, ArrayMode::AllActiveNoLoads))
            {
                const std::string solver(to_string(cfg.solver));
                const PortGrid grid = build_grid(cfg.num_ras, cfg.ports_per_ra, cfg.port_spacing, cfg.carrier_hz);
                const CMat ht = synthesize(cfg, drawn, grid);
                Rng solver_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::Solver);
                const FitnessFn fitness =
                    make_sum_rate_fitness(ht, cfg.ports_per_ra, cfg.precoder, cfg.p_max, cfg.noise_power);
                const SolverTrace trace = select(cfg, fitness, all_active_partition(cfg.num_ras), solver_rng);
                const CMat H = select_ports(ht, trace.best);
                const CMat Z = impedance(cfg, dip, trace.best.config(grid));
                const CMat F = precoder_direction(H, cfg.precoder, cfg.p_max, cfg.noise_power);

                if (wants(cfg, ArrayMode::AllActiveWithLoads))
                {
                    const std::string mode(csv_name(ArrayMode::AllActiveWithLoads));
                    if (!live)
                    {
                        out.modes.push_back(zero_rate(mode, solver, cfg.users));
                        if (cfg.quantization)
                        {
                            out.modes.push_back(zero_rate(mode + "/quantized", solver, cfg.users));
                            out.modes.push_back(zero_rate(mode + "/robust", solver, cfg.users));
                        }
                    }
                    else
                    {
                        const DescentResult res = optimize_loads(cfg, Z, F, z_A, z0);
                        const double j_star = res.trace.back();
                        out.modes.push_back(
                            from_rates(mode, solver, sinr_allactive(H, F, j_star / sqrt_p, cfg.noise_power)));
                        out.modes.back().trace = trace;
                        out.modes.back().load_trace = res.trace;

                        if (cfg.quantization)
                        {
                            const CVec z_star = (res.z.array() - z0).matrix();
                            const double eps = cfg.quantization->beta *
                                               mean_squared_load(std::vector<cplx>(z_star.data(), z_star.data() + z_star.size()));
                            Rng err_rng = make_rng(cfg.seed, static_cast<std::uint64_t>(trial), Stream::LoadError);
                            const CVec e = draw_load_errors(std::vector<bool>(static_cast<std::size_t>(cfg.num_ras), true),
                                                            eps, err_rng);
                            const double D = cfg.quantization->grid_step;
                            auto realized_j = [&](const CVec &loads) {
                                return grad_load_objective((loads.array() + z0 + e.array()).matrix(), Z, F, z_A);
                            };
                            const double j_naive = realized_j(quantize_to_grid(z_star, D));
                            const RobustAllActiveResult rob = robust_allactive(Z, F, z_A, z0, e, z_star, j_star, D);
                            const double j_rob = realized_j(rob.loads);
                            out.modes.push_back(from_rates(mode + "/quantized", solver,
                                                           sinr_allactive(H, F, j_naive / sqrt_p, cfg.noise_power)));
                            out.modes.push_back(from_rates(mode + "/robust", solver,
                                                           sinr_allactive(H, F, j_rob / sqrt_p, cfg.noise_power)));
                        }
                    }
                }
                if (wants(cfg, ArrayMode::AllActiveNoLoads))
                {
                    const std::string mode(csv_name(ArrayMode::AllActiveNoLoads));
                    if (!live)
                        out.modes.push_back(zero_rate(mode, solver, cfg.users));
                    else
                        out.modes.push_back(
                            from_rates(mode, solver, no_load_rate(H, Z, cfg.precoder, dip, cfg.p_max, cfg.noise_power)));
                    out.modes.back().trace = trace;
                }
            }

            if (wants(cfg, ArrayMode::FpaFixed))
            {
                const std::string mode(csv_name(ArrayMode::FpaFixed));
                if (!live)
                {
                    out.modes.push_back(zero_rate(mode, "none", cfg.users));
                    return;
                }
                const PortGrid grid = build_grid(cfg.num_ras, 1, cfg.fpa_spacing, cfg.carrier_hz);
                const CMat H = synthesize(cfg, drawn, grid);
                const CMat Z = impedance(cfg, dip, grid.positions);
                out.modes.push_back(from_rates(mode, "none", no_load_rate(H, Z, cfg.precoder, dip, cfg.p_max, cfg.noise_power)));
            }
        }
    } // namespace

    TrialResult run_trial(const ScenarioConfig &cfg, int trial)
    {
        const auto start = std::chrono::steady_clock::now();
        TrialResult out;
        out.trial = trial;
        out.seed_used = cfg.seed;
        try
        {
            const Drawn drawn = draw_channel(cfg, trial);
            out.channel_hash = drawn.hash;
            if (cfg.has_mamp())
                run_mamp(cfg, trial, drawn, out);
            else
                run_allactive(cfg, trial, drawn, out);
        }
        catch (const TrialError &)
        {
            throw;
        }
        catch (const std::exception &e)
        {
            throw TrialError(trial, e.what());
        }
        out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    std::vector<SweepRow> aggregate(const std::string &axis, const std::vector<SweepPoint> &points)
    {
        std::vector<SweepRow> rows;
        for (const auto &p : points)
        {
            // Modes in first-seen order.
            std::vector<std::pair<std::string, std::string>> keys;
            std::map<std::string, std::vector<double>> samples;
            for (const auto &t : p.trials)
                for (const auto &m : t.modes)
                {
                    if (!samples.count(m.mode))
                        keys.emplace_back(m.mode, m.solver);
                    samples[m.mode].push_back(m.sum_rate);
                }
            for (const auto &[mode, solver] : keys)
            {
                const auto &v = samples[mode];
                const double n = static_cast<double>(v.size());
                double mean = 0.0;
                for (double x : v)
                    mean += x;
                mean /= n;
                double var = 0.0;
                for (double x : v)
                    var += (x - mean) * (x - mean);
                const double se = v.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
                rows.push_back({axis, p.value, mode, solver, mean, se, static_cast<int>(v.size())});
            }
        }
        return rows;
    }

    SweepResult run_sweep(const ScenarioConfig &cfg, const std::string &axis, const std::vector<double> &values,
                          int trials, int threads)
    {
        ScenarioConfig base = cfg;
        base.trials = trials;
        if (axis == "none")
            base.sweep.reset();
        else
            base.sweep = SweepConfig{axis, values};
        base.validate();
        return run_sweep(base, threads);
    }

    SweepResult run_sweep(const ScenarioConfig &cfg, int threads)
    {
        SweepResult result;
        std::vector<ScenarioConfig> configs;
        if (cfg.sweep)
        {
            result.axis = cfg.sweep->axis;
            for (double v : cfg.sweep->values)
            {
                configs.push_back(cfg.at_point(v));
                result.points.push_back({v, {}});
            }
        }
        else
        {
            result.axis = "none";
            configs.push_back(cfg);
            result.points.push_back({0.0, {}});
        }
        const std::size_t per_point = static_cast<std::size_t>(std::max(cfg.trials, 0));
        for (auto &p : result.points)
            p.trials.resize(per_point);
        const std::size_t total = per_point * configs.size();

        std::atomic<std::size_t> next{0};
        std::mutex err_mutex;
        std::exception_ptr first_error;
        std::size_t first_error_index = total;
        auto worker = [&] {
            while (true)
            {
                const std::size_t job = next.fetch_add(1);
                if (job >= total)
                    return;
                const std::size_t point = job / per_point;
                const int trial = static_cast<int>(job % per_point);
                try
                {
                    result.points[point].trials[static_cast<std::size_t>(trial)] = run_trial(configs[point], trial);
                }
                catch (...)
                {
                    std::lock_guard lock(err_mutex);
                    // Report the lowest failing job so the error does not depend on scheduling.
                    if (job < first_error_index)
                    {
                        first_error_index = job;
                        first_error = std::current_exception();
                    }
                }
            }
        };
        const int n = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(total, 1))));
        if (n == 1)
        {
            worker();
        }
        else
        {
            std::vector<std::thread> pool;
            for (int i = 0; i < n; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }
        if (first_error)
            std::rethrow_exception(first_error);
        result.rows = aggregate(result.axis, result.points);
        return result;
    }

    std::string results_csv(const SweepResult &result)
    {
        std::string out = "sweep_axis,value,mode,solver,mean_sr,stderr,trials\n";
        for (const auto &r : result.rows)
        {
            out += r.axis + ',' + format_double(r.value) + ',' + r.mode + ',' + r.solver + ',' +
                   format_double(r.mean_sr) + ',' + format_double(r.stderr_sr) + ',' + std::to_string(r.trials) + '\n';
        }
        return out;
    }

    std::string traces_jsonl(const SweepResult &result)
    {
        std::string out;
        for (const auto &p : result.points)
            for (const auto &t : p.trials)
                for (const auto &m : t.modes)
                {
                    if (!m.trace && m.load_trace.empty())
                        continue;
                    nlohmann::json j;
                    j["sweep_axis"] = result.axis;
                    j["value"] = p.value;
                    j["trial"] = t.trial;
                    j["mode"] = m.mode;
                    j["channel_hash"] = t.channel_hash;
                    if (m.trace)
                        j["solver_trace"] = nlohmann::json::parse(to_json(*m.trace));
                    if (!m.load_trace.empty())
                        j["load_trace"] = m.load_trace;
                    out += j.dump();
                    out += '\n';
                }
        return out;
    }

    std::string manifest_json(const std::string &config_text, const ScenarioConfig &cfg, const std::string &timestamp)
    {
        nlohmann::json j;
        j["tool"] = "rasim";
        j["version"] = library_version();
        j["seed"] = cfg.seed;
        j["trials"] = cfg.trials;
        j["timestamp"] = timestamp;
        j["config"] = config_text;
        return j.dump(2) + "\n";
    }

} // namespace rasim
