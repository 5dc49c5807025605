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

#ifndef RASIM_RAPS_HPP
#define RASIM_RAPS_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rasim/geometry.hpp"
#include "rasim/precoding.hpp"
#include "rasim/rng.hpp"
#include "rasim/selection.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    // Entry m is RA m's 0-based port; kUnassigned marks an RA that a greedy
    // stage has not fixed yet (its row is left out of the evaluated channel).
    inline constexpr int kUnassigned = -1;
    using FitnessFn = std::function<double(std::span<const int>)>;

    /// Sum-rate of the heuristic precoder on the rows of `port_channels`
    /// (L x K, column per user) picked by the port vector. Coupling is ignored.
    /// A rank-deficient partial array under ZF is scored with the MF direction;
    /// a rank-deficient complete array scores 0.
    FitnessFn make_sum_rate_fitness(CMat port_channels, int ports_per_ra, PrecoderKind kind, double p_max,
                                    double sigma2);

    enum class Termination
    {
        Converged,
        MaxIter,
        Stagnation,
    };

    std::string_view to_string(Termination t);

    struct SolverTrace
    {
        std::string solver;
        SelectionMatrix best;
        double best_fitness = 0.0;
        std::vector<double> per_iteration_best; // running best, nondecreasing
        long evaluations = 0;
        int iterations = 0;
        Termination terminated_by = Termination::Converged;
    };

    /// One compact JSON object per trace.
    std::string to_json(const SolverTrace &trace);

    inline constexpr double kMaxExhaustiveConfigs = 1e6;

    /// All N^M configurations in lexicographic order; the first maximizer wins.
    SolverTrace exhaustive_search(const FitnessFn &fitness, int num_ras, int ports_per_ra);

    struct BpsoParams
    {
        int particles = 30;
        int max_iter = 200;
        double c1 = 2.0;
        double c2 = 2.0;
        double tol = 1e-4;
        double w0 = 0.9;
        // Consecutive iterations with |f(G_t) - f(G_t-1)| <= tol before stopping.
        int patience = 1;
    };

    SolverTrace bpso(const FitnessFn &fitness, int num_ras, int ports_per_ra, const BpsoParams &params, Rng &rng);

    // A move (m, n_old, n_new) reassigns RA m from port n_old to n_new.
    using TabuMove = std::tuple<int, int, int>;

    struct TabuParams
    {
        int max_iter = 200;
        // Zero selects the size-dependent defaults: tenure ceil(sqrt(MN)),
        // intensification M, diversification 2M+1, patience ceil(M log2 N).
        int tenure = 0;
        int intensify_period = 0;
        int diversify_period = 0;
        int max_no_improve = 0;
        std::optional<std::vector<int>> start;
        std::vector<TabuMove> initial_tabu;
    };

    SolverTrace tabu_search(const FitnessFn &fitness, int num_ras, int ports_per_ra, const TabuParams &params,
                            Rng &rng);

    inline constexpr double kMaxGreedyInner = 1e5;

    /// Sub-array by sub-array: the active port and all N^Q passive-port
    /// combinations are swept jointly and the best one is fixed.
    SolverTrace greedy_mamp(const FitnessFn &fitness, const ArrayPartition &partition, int ports_per_ra);

    /// RA by RA, the best port given the RAs fixed so far. Exactly M N evaluations.
    SolverTrace greedy_allactive(const FitnessFn &fitness, int num_ras, int ports_per_ra);

    using SolverFn = std::function<SolverTrace(const FitnessFn &, int num_ras, int ports_per_ra)>;

    /// Full port vector where every passive RA copies its active RA's port.
    std::vector<int> expand_sparse(const ArrayPartition &partition, std::span<const int> active_ports);

    /// Runs `solver` over the M_a active RAs only and expands the result.
    SolverTrace sparse_wrap(const SolverFn &solver, const FitnessFn &fitness, const ArrayPartition &partition,
                            int ports_per_ra);

} // namespace rasim

#endif
