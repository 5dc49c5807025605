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

#ifndef RASIM_MONTECARLO_HPP
#define RASIM_MONTECARLO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rasim/error.hpp"
#include "rasim/raps.hpp"
#include "rasim/scenario.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    // One array mode (or a quantized variant of it) evaluated on one trial.
    struct ModeResult
    {
        std::string mode;   // e.g. "all_active_with_loads/robust"
        std::string solver; // "none" when no port selection ran
        double sum_rate = 0.0;
        std::vector<double> rates;
        std::optional<SolverTrace> trace;
        std::vector<double> load_trace; // load-optimizer objective per iterate
    };

    struct TrialResult
    {
        int trial = 0;
        std::uint64_t seed_used = 0;
        std::uint64_t channel_hash = 0;
        std::vector<ModeResult> modes;
        double wall_time = 0.0; // seconds
    };

    // A trial failed; the message carries the trial index.
    class TrialError : public Error
    {
    public:
        TrialError(int trial, const std::string &what)
            : Error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
        int trial() const noexcept { return trial_; }

    private:
        int trial_;
    };

    /// Draws one trial's channel and evaluates every configured mode on it.
    /// Throws TrialError when the trial cannot be completed.
    TrialResult run_trial(const ScenarioConfig &cfg, int trial);

    struct SweepRow
    {
        std::string axis;
        double value = 0.0;
        std::string mode;
        std::string solver;
        double mean_sr = 0.0;
        double stderr_sr = 0.0;
        int trials = 0;
    };

    struct SweepPoint
    {
        double value = 0.0;
        std::vector<TrialResult> trials;
    };

    struct SweepResult
    {
        std::string axis; // "none" without a sweep
        std::vector<SweepPoint> points;
        std::vector<SweepRow> rows;
    };

    /// Runs every sweep point (or the single point) with `threads` workers.
    /// Results are ordered by point and trial regardless of scheduling.
    SweepResult run_sweep(const ScenarioConfig &cfg, int threads = 1);

    /// Same, with the axis and values given explicitly.
    SweepResult run_sweep(const ScenarioConfig &cfg, const std::string &axis, const std::vector<double> &values,
                          int trials, int threads = 1);

    /// Mean and standard error per (point, mode).
    std::vector<SweepRow> aggregate(const std::string &axis, const std::vector<SweepPoint> &points);

    std::string results_csv(const SweepResult &result);
    std::string traces_jsonl(const SweepResult &result);
    std::string manifest_json(const std::string &config_text, const ScenarioConfig &cfg, const std::string &timestamp);

    /// Shortest round-trip decimal form.
    std::string format_double(double v);

    std::string library_version();

} // namespace rasim

#endif
