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

#ifndef RASIM_SCENARIO_HPP
#define RASIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rasim/error.hpp"
#include "rasim/loads.hpp"
#include "rasim/precoding.hpp"
#include "rasim/raps.hpp"

namespace rasim
{
    enum class ArrayMode
    {
        MampWithLoads,
        AllActiveWithLoads,
        AllActiveNoLoads,
        FpaFixed,
    };

    enum class SolverKind
    {
        Exhaustive,
        Bpso,
        Tabu,
        Greedy,
        SparseBpso,
        SparseTabu,
    };

    std::string_view to_string(ArrayMode mode);     // kebab-case config name
    std::string_view csv_name(ArrayMode mode);      // snake_case results name
    std::string_view to_string(SolverKind solver);

    // Invalid scenario; line is 0 when no source position applies.
    class ConfigError : public Error
    {
    public:
        ConfigError(const std::string &what, int line = 0)
            : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
        int line() const noexcept { return line_; }

    private:
        int line_;
    };

    enum class LoadMethod
    {
        LeastSquares, // closed-form global optimum, descent fallback
        Descent,      // gradient descent from z_0
    };

    struct QuantizationConfig
    {
        double beta = 0.1;
        double grid_step = 1.0; // ohms
    };

    struct SweepConfig
    {
        std::string axis; // config key, e.g. "num-ras"
        std::vector<double> values;
    };

    struct ScenarioConfig
    {
        std::string name = "scenario";
        std::vector<ArrayMode> modes{ArrayMode::AllActiveWithLoads};
        bool sv_channel = false; // Saleh-Valenzuela instead of Rayleigh

        int users = 2;
        int num_ras = 4;
        int ports_per_ra = 4;
        int num_active = 4;
        int passive_per_active = 0;
        double port_spacing = 0.25;
        double carrier_hz = 3e9;
        double fpa_spacing = 0.5;

        double p_max = 100.0;
        double noise_power = 1.0;

        PrecoderKind precoder = PrecoderKind::WF;
        SolverKind solver = SolverKind::Tabu;
        BpsoParams bpso;
        TabuParams tabu;
        GradDescentParams loads;
        LoadMethod load_method = LoadMethod::LeastSquares;

        int clusters = 3;
        int paths_per_cluster = 10;
        int directions = 50;
        double angular_spread = 0.39269908169872414; // pi / 8
        bool correlation = true;
        bool coupling = true;

        double dipole_length = 0.5;
        double dipole_radius = 1e-4;

        int symbols = 64;
        bool robust_active_only = false;

        std::optional<QuantizationConfig> quantization;
        std::optional<SweepConfig> sweep;

        int trials = 100;
        std::uint64_t seed = 1;

        /// Throws ConfigError on inconsistent fields.
        void validate() const;

        /// Copy with the sweep axis set to `value`.
        ScenarioConfig at_point(double value) const;
        void validate_point() const;

        bool has_mamp() const;
        double snr_db() const;
    };

    /// Names accepted as sweep axes.
    const std::vector<std::string> &sweep_axes();

    /// Parses TOML text. Syntax and validation errors carry source lines.
    ScenarioConfig parse_scenario(std::string_view toml_text, std::string_view source_name = "<config>");

    /// Reads and parses a file; a missing file is a ConfigError naming the path.
    ScenarioConfig load_scenario(const std::string &path);

} // namespace rasim

#endif
