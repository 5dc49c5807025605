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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rasim/channel.hpp"
#include "rasim/error.hpp"
#include "rasim/oracles.hpp"
#include "rasim/raps.hpp"

using namespace rasim;

namespace
{
    // Arbitrary fitness backed by a random table over all N^M configurations.
    FitnessFn table_fitness(int M, int N, Rng &rng)
    {
        const auto size = static_cast<std::size_t>(std::pow(N, M));
        auto table = std::make_shared<std::vector<double>>(size);
        for (auto &v : *table)
            v = uniform(rng, 0.0, 1.0);
        return [table, N](std::span<const int> p) {
            std::size_t idx = 0;
            for (int n : p)
                idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(n);
            return (*table)[idx];
        };
    }

    // Separable fitness: every RA prefers port m mod N.
    double separable(std::span<const int> p, int N)
    {
        double v = 0.0;
        for (std::size_t m = 0; m < p.size(); ++m)
            if (p[m] != kUnassigned)
                v -= std::abs(p[m] - static_cast<int>(m) % N);
        return v;
    }

    bool nondecreasing(const std::vector<double> &v)
    {
        return std::is_sorted(v.begin(), v.end());
    }
} // namespace

TEST_CASE("exhaustive search matches the enumeration oracle")
{
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial)
    {
        const FitnessFn f = table_fitness(4, 3, rng);
        const SolverTrace es = exhaustive_search(f, 4, 3);
        const oracle::Enumeration en = oracle::enumerate(f, 4, 3);
        CHECK(es.best_fitness == en.fitness);
        CHECK(std::vector<int>(es.best.ports().begin(), es.best.ports().end()) == en.best);
        CHECK(es.evaluations == 81);
        CHECK(nondecreasing(es.per_iteration_best));
    }
}

TEST_CASE("exhaustive search ties resolve to the smallest configuration")
{
    const FitnessFn flat = [](std::span<const int>) { return 1.0; };
    const SolverTrace es = exhaustive_search(flat, 3, 4);
    CHECK(es.best == SelectionMatrix({0, 0, 0}, 4));
    CHECK_THROWS_AS(exhaustive_search(flat, 7, 8), SearchSpaceTooLarge);
    CHECK_THROWS_AS(exhaustive_search(flat, 0, 8), std::invalid_argument);
}

TEST_CASE("BPSO is seeded and never beats the optimum")
{
    Rng table_rng(2);
    const FitnessFn f = table_fitness(5, 3, table_rng);
    const double opt = exhaustive_search(f, 5, 3).best_fitness;
    Rng a(9), b(9);
    const SolverTrace ta = bpso(f, 5, 3, {}, a);
    const SolverTrace tb = bpso(f, 5, 3, {}, b);
    CHECK(ta.best == tb.best);
    CHECK(ta.per_iteration_best == tb.per_iteration_best);
    CHECK(ta.best_fitness <= opt);
    CHECK(ta.best_fitness == f(ta.best.ports()));
    CHECK(nondecreasing(ta.per_iteration_best));
    CHECK(ta.evaluations == 30L * (ta.iterations + 1));

    BpsoParams bad;
    bad.particles = 0;
    CHECK_THROWS_AS(bpso(f, 5, 3, bad, a), std::invalid_argument);
}

TEST_CASE("BPSO stops at the iteration cap")
{
    BpsoParams p;
    p.max_iter = 5;
    p.tol = -1.0;
    Rng rng(3);
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 4); };
    CHECK_THROWS_AS(bpso(f, 4, 4, p, rng), std::invalid_argument);
    p.tol = 0.0;
    p.patience = 1000;
    const SolverTrace t = bpso(f, 4, 4, p, rng);
    CHECK(t.iterations == 5);
    CHECK(t.terminated_by == Termination::MaxIter);
}

TEST_CASE("tabu search finds the optimum of a separable landscape")
{
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 4); };
    Rng rng(4);
    const SolverTrace t = tabu_search(f, 6, 4, {}, rng);
    CHECK(t.best_fitness == 0.0);
    CHECK(t.best == SelectionMatrix({0, 1, 2, 3, 0, 1}, 4));
    CHECK(nondecreasing(t.per_iteration_best));
    CHECK(t.terminated_by == Termination::Stagnation);
}

TEST_CASE("tabu search honors its start and cap")
{
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 3); };
    Rng rng(5);
    TabuParams p;
    p.start = std::vector<int>{2, 2, 2};
    p.max_iter = 0;
    const SolverTrace t = tabu_search(f, 3, 3, p, rng);
    CHECK(t.best == SelectionMatrix({2, 2, 2}, 3));
    CHECK(t.evaluations == 1);

    p.start = std::vector<int>{0, 0};
    CHECK_THROWS_AS(tabu_search(f, 3, 3, p, rng), std::invalid_argument);

    p.start.reset();
    p.max_iter = -1;
    CHECK_THROWS_AS(tabu_search(f, 3, 3, p, rng), std::invalid_argument);
}

TEST_CASE("tabu search never beats the optimum")
{
    Rng table_rng(6);
    for (int trial = 0; trial < 10; ++trial)
    {
        const FitnessFn f = table_fitness(4, 4, table_rng);
        const double opt = exhaustive_search(f, 4, 4).best_fitness;
        Rng rng(static_cast<std::uint64_t>(trial));
        const SolverTrace t = tabu_search(f, 4, 4, {}, rng);
        CHECK(t.best_fitness <= opt);
        CHECK(t.best_fitness == f(t.best.ports()));
    }
}

TEST_CASE("all-active greedy")
{
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 3); };
    const SolverTrace g = greedy_allactive(f, 5, 3);
    CHECK(g.evaluations == 15);
    CHECK(g.best == SelectionMatrix({0, 1, 2, 0, 1}, 3));
    CHECK(g.best_fitness == 0.0);
    CHECK(g.per_iteration_best.size() == 5);
}

TEST_CASE("MAMP greedy sweeps each sub-array jointly")
{
    const ArrayPartition part = make_partition(2, 2, 0);
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 3); };
    const SolverTrace g = greedy_mamp(f, part, 3);
    CHECK(g.evaluations == 2 * 27 + 1);
    CHECK(g.best_fitness == 0.0);
    CHECK(g.best == SelectionMatrix({0, 1, 2, 0, 1, 2}, 3));

    CHECK_THROWS_AS(greedy_mamp(f, make_partition(1, 11, 0), 3), SearchSpaceTooLarge);
}

TEST_CASE("sparse wrapper shares one port per sub-array")
{
    const ArrayPartition part = make_partition(3, 1, 4);
    const std::vector<int> full = expand_sparse(part, std::vector<int>{2, 0, 1});
    CHECK(full == std::vector<int>{2, 2, 0, 0, 1, 1});
    CHECK_THROWS_AS(expand_sparse(part, std::vector<int>{0}), std::invalid_argument);

    const FitnessFn f = [](std::span<const int> q) { return separable(q, 2); };
    const SolverFn es = [](const FitnessFn &fit, int M, int N) { return exhaustive_search(fit, M, N); };
    const SolverTrace t = sparse_wrap(es, f, part, 2);
    CHECK(t.solver == "sparse-es");
    CHECK(t.best.num_ras() == 6);
    CHECK(t.evaluations == 8);
    for (int s = 0; s < 3; ++s)
        CHECK(t.best.port(2 * s) == t.best.port(2 * s + 1));
}

TEST_CASE("sum-rate fitness")
{
    Rng rng(7);
    const PortGrid g = build_grid(3, 2, 0.25, 28e9);
    const CMat H = synthesize_sv(g, draw_sv_params(3, 10, 2, rng));
    const FitnessFn f = make_sum_rate_fitness(H, 2, PrecoderKind::ZF, 10.0, 1.0);

    const std::vector<int> ports{1, 0, 1};
    const CMat sel = select_ports(H, SelectionMatrix(ports, 2));
    const Precoder p = make_precoder(sel, PrecoderKind::ZF, 10.0, 1.0);
    CHECK(f(ports) == doctest::Approx(sinr_mamp(sel, p.W, 1.0).sum_rate));

    const std::vector<int> none{kUnassigned, kUnassigned, kUnassigned};
    CHECK(f(none) == 0.0);
    const std::vector<int> one{1, kUnassigned, kUnassigned};
    CHECK(f(one) > 0.0);

    CMat dup = H;
    dup.row(2) = dup.row(0);
    dup.row(4) = dup.row(0);
    const FitnessFn fd = make_sum_rate_fitness(dup, 2, PrecoderKind::ZF, 10.0, 1.0);
    CHECK(fd(std::vector<int>{0, 0, 0}) == 0.0);

    CHECK_THROWS_AS(make_sum_rate_fitness(H, 4, PrecoderKind::ZF, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("solver traces serialize to JSON")
{
    const FitnessFn f = [](std::span<const int> q) { return separable(q, 2); };
    const SolverTrace t = exhaustive_search(f, 2, 2);
    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j.at("solver") == "es");
    CHECK(j.at("evaluations") == 4);
    CHECK(j.at("terminated_by") == std::string(to_string(Termination::Converged)));
    CHECK(j.at("per_iteration_best").size() == 4);
}
