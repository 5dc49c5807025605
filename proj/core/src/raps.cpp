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

#include "rasim/raps.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "rasim/error.hpp"

namespace rasim
{
    namespace
    {
        void check_dims(int num_ras, int ports_per_ra)
        {
            if (num_ras < 1 || ports_per_ra < 1)
                throw std::invalid_argument("solver: M and N must be positive");
        }

        // Counts calls so every solver reports its evaluation budget.
        class Counted
        {
        public:
            explicit Counted(const FitnessFn &f) : f_(f) {}
            double operator()(std::span<const int> ports)
            {
                ++count_;
                return f_(ports);
            }
            long count() const noexcept { return count_; }

        private:
            const FitnessFn &f_;
            long count_ = 0;
        };

        SolverTrace finish(std::string name, std::vector<int> best, int N, double fbest, std::vector<double> history,
                           long evals, int iters, Termination why)
        {
            SolverTrace t;
            t.solver = std::move(name);
            t.best = SelectionMatrix(std::move(best), N);
            t.best_fitness = fbest;
            t.per_iteration_best = std::move(history);
            t.evaluations = evals;
            t.iterations = iters;
            t.terminated_by = why;
            return t;
        }

        std::vector<int> random_ports(int M, int N, Rng &rng)
        {
            std::vector<int> p(static_cast<std::size_t>(M));
            for (auto &x : p)
                x = uniform_int(rng, 0, N - 1);
            return p;
        }

        int argmax_row(const RMat &v, Eigen::Index row)
        {
            Eigen::Index best = 0;
            for (Eigen::Index n = 1; n < v.cols(); ++n)
                if (v(row, n) > v(row, best))
                    best = n;
            return static_cast<int>(best);
        }
    } // namespace

    FitnessFn make_sum_rate_fitness(CMat port_channels, int ports_per_ra, PrecoderKind kind, double p_max,
                                    double sigma2)
    {
        if (ports_per_ra < 1 || port_channels.rows() % ports_per_ra != 0)
            throw std::invalid_argument("make_sum_rate_fitness: channel rows must be a multiple of N");
        return [H = std::move(port_channels), ports_per_ra, kind, p_max, sigma2](std::span<const int> ports) {
            std::vector<Eigen::Index> rows;
            rows.reserve(ports.size());
            bool partial = false;
            for (std::size_t m = 0; m < ports.size(); ++m)
            {
                if (ports[m] == kUnassigned)
                {
                    partial = true;
                    continue;
                }
                rows.push_back(static_cast<Eigen::Index>(m) * ports_per_ra + ports[m]);
            }
            if (rows.empty() || !(p_max > 0.0))
                return 0.0;
            CMat h(static_cast<Eigen::Index>(rows.size()), H.cols());
            for (std::size_t r = 0; r < rows.size(); ++r)
                h.row(static_cast<Eigen::Index>(r)) = H.row(rows[r]);
            CMat f;
            try
            {
                f = precoder_direction(h, kind, p_max, sigma2);
            }
            catch (const RankDeficient &)
            {
                if (!partial)
                    return 0.0;
                f = h;
            }
            return sinr_mamp(h, normalize_power(f, p_max), sigma2).sum_rate;
        };
    }

    std::string_view to_string(Termination t)
    {
        switch (t)
        {
        case Termination::Converged:
            return "converged";
        case Termination::MaxIter:
            return "max_iter";
        case Termination::Stagnation:
            return "stagnation";
        }
        return "?";
    }

    std::string to_json(const SolverTrace &trace)
    {
        nlohmann::json j;
        j["solver"] = trace.solver;
        j["best_ports"] = std::vector<int>(trace.best.ports().begin(), trace.best.ports().end());
        j["best_fitness"] = trace.best_fitness;
        j["per_iteration_best"] = trace.per_iteration_best;
        j["evaluations"] = trace.evaluations;
        j["iterations"] = trace.iterations;
        j["terminated_by"] = std::string(to_string(trace.terminated_by));
        return j.dump();
    }

    SolverTrace exhaustive_search(const FitnessFn &fitness, int num_ras, int ports_per_ra)
    {
        check_dims(num_ras, ports_per_ra);
        const double total = std::pow(static_cast<double>(ports_per_ra), num_ras);
        if (total > kMaxExhaustiveConfigs)
            throw SearchSpaceTooLarge("exhaustive search over " + std::to_string(total) + " configurations exceeds 1e6");

        Counted f(fitness);
        std::vector<int> cur(static_cast<std::size_t>(num_ras), 0);
        std::vector<int> best = cur;
        double fbest = -INFINITY;
        std::vector<double> history;
        history.reserve(static_cast<std::size_t>(total));
        while (true)
        {
            const double v = f(cur);
            if (v > fbest)
            {
                fbest = v;
                best = cur;
            }
            history.push_back(fbest);
            // Odometer with the last RA as the fastest digit.
            int m = num_ras - 1;
            while (m >= 0 && ++cur[static_cast<std::size_t>(m)] == ports_per_ra)
                cur[static_cast<std::size_t>(m--)] = 0;
            if (m < 0)
                break;
        }
        const int iters = static_cast<int>(history.size());
        return finish("es", std::move(best), ports_per_ra, fbest, std::move(history), f.count(), iters,
                      Termination::Converged);
    }

    SolverTrace bpso(const FitnessFn &fitness, int num_ras, int ports_per_ra, const BpsoParams &params, Rng &rng)
    {
        check_dims(num_ras, ports_per_ra);
        if (params.particles < 1 || params.max_iter < 1 || params.patience < 1 || !(params.tol >= 0.0))
            throw std::invalid_argument("bpso: invalid parameters");

        const int M = num_ras;
        const int N = ports_per_ra;
        const auto P = static_cast<std::size_t>(params.particles);
        Counted f(fitness);

        std::vector<std::vector<int>> pos(P), pbest(P);
        std::vector<double> pfit(P);
        std::vector<RMat> vel(P);
        for (std::size_t i = 0; i < P; ++i)
        {
            pos[i] = random_ports(M, N, rng);
            vel[i] = RMat::NullaryExpr(M, N, [&] { return uniform(rng, -1.0, 1.0); });
            pbest[i] = pos[i];
            pfit[i] = f(pbest[i]);
        }
        std::size_t g = 0;
        for (std::size_t i = 1; i < P; ++i)
            if (pfit[i] > pfit[g])
                g = i;
        std::vector<int> gbest = pbest[g];
        double gfit = pfit[g];

        std::vector<double> history{gfit};
        int t = 0;
        int calm = 0;
        Termination why = Termination::MaxIter;
        while (t < params.max_iter)
        {
            const double w = params.w0 - (0.5 / params.max_iter) * t;
            const double prev = gfit;
            for (std::size_t i = 0; i < P; ++i)
            {
                const double fi = f(pos[i]);
                if (fi > pfit[i])
                {
                    pfit[i] = fi;
                    pbest[i] = pos[i];
                }
                if (pfit[i] > gfit)
                {
                    gfit = pfit[i];
                    gbest = pbest[i];
                }
                const double r1 = uniform(rng, 0.0, 1.0);
                const double r2 = uniform(rng, 0.0, 1.0);
                RMat &v = vel[i];
                v *= w;
                for (int m = 0; m < M; ++m)
                {
                    const auto mi = static_cast<std::size_t>(m);
                    // Differences of one-hot rows touch at most two entries each.
                    if (pbest[i][mi] != pos[i][mi])
                    {
                        v(m, pbest[i][mi]) += params.c1 * r1;
                        v(m, pos[i][mi]) -= params.c1 * r1;
                    }
                    if (gbest[mi] != pos[i][mi])
                    {
                        v(m, gbest[mi]) += params.c2 * r2;
                        v(m, pos[i][mi]) -= params.c2 * r2;
                    }
                }
                for (int m = 0; m < M; ++m)
                    pos[i][static_cast<std::size_t>(m)] = argmax_row(v, m);
            }
            ++t;
            history.push_back(gfit);
            calm = std::abs(gfit - prev) <= params.tol ? calm + 1 : 0;
            if (calm >= params.patience)
            {
                why = Termination::Converged;
                break;
            }
        }
        return finish("bpso", std::move(gbest), N, gfit, std::move(history), f.count(), t, why);
    }

    SolverTrace tabu_search(const FitnessFn &fitness, int num_ras, int ports_per_ra, const TabuParams &params,
                            Rng &rng)
    {
        check_dims(num_ras, ports_per_ra);
        if (params.max_iter < 0)
            throw std::invalid_argument("tabu_search: max_iter must be nonnegative");
        const int M = num_ras;
        const int N = ports_per_ra;
        const int tenure = params.tenure > 0 ? params.tenure
                                             : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(M) * N)));
        const int t_i = params.intensify_period > 0 ? params.intensify_period : M;
        const int t_d = params.diversify_period > 0 ? params.diversify_period : 2 * M + 1;
        const int i_c = params.max_no_improve > 0
                            ? params.max_no_improve
                            : std::max(1, static_cast<int>(std::ceil(M * std::log2(static_cast<double>(N)))));

        Counted f(fitness);
        std::vector<int> cur;
        if (params.start)
        {
            cur = *params.start;
            SelectionMatrix check(cur, N);
            if (check.num_ras() != M)
                throw std::invalid_argument("tabu_search: start has the wrong length");
        }
        else
        {
            cur = random_ports(M, N, rng);
        }
        std::vector<int> best = cur;
        double fbest = f(cur);
        std::vector<double> history{fbest};
        if (N == 1)
            return finish("ts", std::move(best), N, fbest, std::move(history), f.count(), 0, Termination::Converged);

        std::deque<TabuMove> tabu(params.initial_tabu.begin(), params.initial_tabu.end());
        while (static_cast<int>(tabu.size()) > tenure)
            tabu.pop_front();
        auto is_tabu = [&](int m, int from, int to) {
            return std::any_of(tabu.begin(), tabu.end(), [&](const TabuMove &mv) {
                return mv == TabuMove{m, from, to} || mv == TabuMove{m, to, from};
            });
        };

        int t = 0;
        int stall = 0;
        while (t < params.max_iter && stall < i_c)
        {
            double f_adm = -INFINITY, f_any = -INFINITY;
            TabuMove mv_adm{-1, 0, 0}, mv_any{-1, 0, 0};
            for (int m = 0; m < M; ++m)
            {
                const auto mi = static_cast<std::size_t>(m);
                const int from = cur[mi];
                for (int n = 0; n < N; ++n)
                {
                    if (n == from)
                        continue;
                    cur[mi] = n;
                    const double v = f(cur);
                    cur[mi] = from;
                    if (v > f_any)
                    {
                        f_any = v;
                        mv_any = {m, from, n};
                    }
                    if ((!is_tabu(m, from, n) || v > fbest) && v > f_adm)
                    {
                        f_adm = v;
                        mv_adm = {m, from, n};
                    }
                }
            }
            // Every neighbor tabu and none aspirating: take the best one anyway.
            const bool have_adm = std::get<0>(mv_adm) >= 0;
            const TabuMove mv = have_adm ? mv_adm : mv_any;
            const double fv = have_adm ? f_adm : f_any;
            cur[static_cast<std::size_t>(std::get<0>(mv))] = std::get<2>(mv);
            if (fv > fbest)
            {
                fbest = fv;
                best = cur;
                stall = 0;
            }
            else
            {
                ++stall;
            }
            tabu.push_back(mv);
            if (static_cast<int>(tabu.size()) > tenure)
                tabu.pop_front();

            if ((t + 1) % t_i == 0)
                cur = best;
            if ((t + 1) % t_d == 0)
            {
                std::vector<int> ras(static_cast<std::size_t>(M));
                std::iota(ras.begin(), ras.end(), 0);
                std::shuffle(ras.begin(), ras.end(), rng);
                for (int j = 0; j < M / 4; ++j)
                {
                    const auto m = static_cast<std::size_t>(ras[static_cast<std::size_t>(j)]);
                    const int n = uniform_int(rng, 0, N - 2);
                    cur[m] = n >= cur[m] ? n + 1 : n;
                }
                tabu.clear();
            }
            ++t;
            history.push_back(fbest);
        }
        const Termination why = stall >= i_c ? Termination::Stagnation : Termination::MaxIter;
        return finish("ts", std::move(best), N, fbest, std::move(history), f.count(), t, why);
    }

    SolverTrace greedy_mamp(const FitnessFn &fitness, const ArrayPartition &partition, int ports_per_ra)
    {
        const int M = partition.num_ras();
        const int N = ports_per_ra;
        const int Q = partition.passive_per_active;
        check_dims(M, N);
        const double inner = std::pow(static_cast<double>(N), Q);
        if (inner > kMaxGreedyInner)
            throw SearchSpaceTooLarge("greedy passive sweep of " + std::to_string(inner) + " combinations exceeds 1e5");

        Counted f(fitness);
        std::vector<int> t(static_cast<std::size_t>(M), kUnassigned);
        std::vector<double> history;
        double running = 0.0;
        for (int i = 0; i < partition.num_active; ++i)
        {
            const auto a = static_cast<std::size_t>(partition.active_ra(i));
            const std::vector<int> passive = partition.passive_ras_of(i);
            double fbest = -INFINITY;
            int best_n = 0;
            std::vector<int> best_combo(passive.size(), 0);
            std::vector<int> combo(passive.size(), 0);
            for (int n = 0; n < N; ++n)
            {
                t[a] = n;
                std::fill(combo.begin(), combo.end(), 0);
                while (true)
                {
                    for (std::size_t j = 0; j < passive.size(); ++j)
                        t[static_cast<std::size_t>(passive[j])] = combo[j];
                    const double v = f(t);
                    if (v > fbest)
                    {
                        fbest = v;
                        best_n = n;
                        best_combo = combo;
                    }
                    int j = static_cast<int>(combo.size()) - 1;
                    while (j >= 0 && ++combo[static_cast<std::size_t>(j)] == N)
                        combo[static_cast<std::size_t>(j--)] = 0;
                    if (j < 0)
                        break;
                }
            }
            t[a] = best_n;
            for (std::size_t j = 0; j < passive.size(); ++j)
                t[static_cast<std::size_t>(passive[j])] = best_combo[j];
            running = std::max(running, fbest);
            history.push_back(running);
        }
        const double final_fit = history.empty() ? 0.0 : f(t);
        return finish("greedy", std::move(t), N, final_fit, std::move(history), f.count(), partition.num_active,
                      Termination::Converged);
    }

    SolverTrace greedy_allactive(const FitnessFn &fitness, int num_ras, int ports_per_ra)
    {
        check_dims(num_ras, ports_per_ra);
        Counted f(fitness);
        std::vector<int> t(static_cast<std::size_t>(num_ras), kUnassigned);
        std::vector<double> history;
        double running = 0.0;
        double last = 0.0;
        for (int m = 0; m < num_ras; ++m)
        {
            const auto mi = static_cast<std::size_t>(m);
            double fbest = -INFINITY;
            int best_n = 0;
            for (int n = 0; n < ports_per_ra; ++n)
            {
                t[mi] = n;
                const double v = f(t);
                if (v > fbest)
                {
                    fbest = v;
                    best_n = n;
                }
            }
            t[mi] = best_n;
            last = fbest;
            running = std::max(running, fbest);
            history.push_back(running);
        }
        return finish("greedy", std::move(t), ports_per_ra, last, std::move(history), f.count(), num_ras,
                      Termination::Converged);
    }

    std::vector<int> expand_sparse(const ArrayPartition &partition, std::span<const int> active_ports)
    {
        if (static_cast<int>(active_ports.size()) != partition.num_active)
            throw std::invalid_argument("expand_sparse: one port per active RA expected");
        std::vector<int> full(static_cast<std::size_t>(partition.num_ras()));
        for (int ra = 0; ra < partition.num_ras(); ++ra)
            full[static_cast<std::size_t>(ra)] = active_ports[static_cast<std::size_t>(partition.subarray_of(ra))];
        return full;
    }

    SolverTrace sparse_wrap(const SolverFn &solver, const FitnessFn &fitness, const ArrayPartition &partition,
                            int ports_per_ra)
    {
        if (partition.passive_per_active == 0)
            return solver(fitness, partition.num_ras(), ports_per_ra);
        FitnessFn reduced = [&](std::span<const int> active) {
            return fitness(expand_sparse(partition, active));
        };
        SolverTrace inner = solver(reduced, partition.num_active, ports_per_ra);
        inner.best = SelectionMatrix(expand_sparse(partition, inner.best.ports()), ports_per_ra);
        inner.solver = "sparse-" + inner.solver;
        return inner;
    }

} // namespace rasim
