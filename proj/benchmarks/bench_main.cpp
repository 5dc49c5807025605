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

#include <benchmark/benchmark.h>

#include "rasim/channel.hpp"
#include "rasim/coupling.hpp"
#include "rasim/loads.hpp"
#include "rasim/montecarlo.hpp"
#include "rasim/quantization.hpp"
#include "rasim/raps.hpp"
#include "rasim/special_functions.hpp"

using namespace rasim;

namespace
{
    CMat random_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols)
    {
        CMat h(rows, cols);
        for (Eigen::Index i = 0; i < h.size(); ++i)
            h.data()[i] = complex_normal(rng);
        return h;
    }

    CMat impedance(int M, double spacing)
    {
        std::vector<double> t(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
            t[static_cast<std::size_t>(m)] = spacing * m;
        return build_impedance_matrix(default_dipole(), t);
    }
} // namespace

static void BM_SineCosineIntegrals(benchmark::State &state)
{
    double x = 0.1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(sin_cos_integrals(x));
        x = x > 50.0 ? 0.1 : x * 1.07;
    }
}
BENCHMARK(BM_SineCosineIntegrals);

static void BM_ImpedanceMatrix(benchmark::State &state)
{
    const int M = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(impedance(M, 0.125));
}
BENCHMARK(BM_ImpedanceMatrix)->Arg(4)->Arg(16)->Arg(64);

static void BM_SynthesizeSV(benchmark::State &state)
{
    Rng rng(1);
    const PortGrid g = build_grid(static_cast<int>(state.range(0)), 4, 1.0 / 16.0, 28e9);
    const SVChannelParams p = draw_sv_params(3, 10, 4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize_sv(g, p));
}
BENCHMARK(BM_SynthesizeSV)->Arg(4)->Arg(16);

static void BM_CorrelationSqrt(benchmark::State &state)
{
    const PortGrid g = build_grid(static_cast<int>(state.range(0)), 4, 1.0 / 16.0, 28e9);
    const RMat r = correlation_matrix(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(correlation_sqrt(r));
}
BENCHMARK(BM_CorrelationSqrt)->Arg(4)->Arg(16);

static void BM_SumRateFitness(benchmark::State &state)
{
    Rng rng(2);
    const int M = static_cast<int>(state.range(0));
    const FitnessFn f = make_sum_rate_fitness(random_matrix(rng, M * 4, 4), 4, PrecoderKind::WF, 100.0, 1.0);
    std::vector<int> ports(static_cast<std::size_t>(M), 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(f(ports));
}
BENCHMARK(BM_SumRateFitness)->Arg(4)->Arg(10);

static void BM_TabuSearch(benchmark::State &state)
{
    Rng rng(3);
    const int M = static_cast<int>(state.range(0));
    const FitnessFn f = make_sum_rate_fitness(random_matrix(rng, M * 4, 4), 4, PrecoderKind::WF, 100.0, 1.0);
    for (auto _ : state)
    {
        Rng solver(4);
        benchmark::DoNotOptimize(tabu_search(f, M, 4, {}, solver));
    }
}
BENCHMARK(BM_TabuSearch)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_Bpso(benchmark::State &state)
{
    Rng rng(5);
    const int M = static_cast<int>(state.range(0));
    const FitnessFn f = make_sum_rate_fitness(random_matrix(rng, M * 4, 4), 4, PrecoderKind::WF, 100.0, 1.0);
    for (auto _ : state)
    {
        Rng solver(6);
        benchmark::DoNotOptimize(bpso(f, M, 4, {}, solver));
    }
}
BENCHMARK(BM_Bpso)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_LoadGradient(benchmark::State &state)
{
    Rng rng(7);
    const int M = static_cast<int>(state.range(0));
    const CMat Z = impedance(M, 0.125);
    const CMat F = random_matrix(rng, M, 4);
    const DipoleSpec d = default_dipole();
    const CVec z = CVec::Constant(M, d.source_impedance);
    for (auto _ : state)
        benchmark::DoNotOptimize(grad_load_gradient(z, Z, F, d.self_impedance));
}
BENCHMARK(BM_LoadGradient)->Arg(4)->Arg(16);

static void BM_OptimalLoads(benchmark::State &state)
{
    Rng rng(8);
    const int M = static_cast<int>(state.range(0));
    const CMat Z = impedance(M, 0.125);
    const CMat F = random_matrix(rng, M, 4);
    const cplx zA = default_dipole().self_impedance;
    for (auto _ : state)
        benchmark::DoNotOptimize(optimal_loads_allactive(Z, F, zA));
}
BENCHMARK(BM_OptimalLoads)->Arg(4)->Arg(16);

static void BM_RobustMamp(benchmark::State &state)
{
    Rng rng(9);
    const int M = static_cast<int>(state.range(0));
    CMat A = impedance(M, 0.0625);
    A.diagonal().array() += default_dipole().source_impedance;
    const CVec e = random_matrix(rng, M, 1) * 5.0;
    A.diagonal() += e;
    const CVec i = random_matrix(rng, M, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(robust_mamp(A, e, i));
}
BENCHMARK(BM_RobustMamp)->Arg(8)->Arg(16);

static void BM_Trial(benchmark::State &state)
{
    const ScenarioConfig c = parse_scenario("modes = [\"all-active-with-loads\", \"all-active-no-loads\"]\n"
                                            "num-ras = 4\nports-per-ra = 4\nsolver = \"tabu\"\n");
    int trial = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_trial(c, trial++));
}
BENCHMARK(BM_Trial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
