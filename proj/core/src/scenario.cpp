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

#include "rasim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <toml.hpp>

namespace rasim
{
    namespace
    {
        struct ModeName
        {
            ArrayMode mode;
            std::string_view config;
            std::string_view csv;
        };

        constexpr ModeName kModes[] = {
            {ArrayMode::MampWithLoads, "mamp-with-loads", "mamp_with_loads"},
            {ArrayMode::AllActiveWithLoads, "all-active-with-loads", "all_active_with_loads"},
            {ArrayMode::AllActiveNoLoads, "all-active-no-loads", "all_active_no_loads"},
            {ArrayMode::FpaFixed, "fpa-fixed", "fpa_fixed"},
        };

        struct SolverName
        {
            SolverKind kind;
            std::string_view name;
        };

        constexpr SolverName kSolvers[] = {
            {SolverKind::Exhaustive, "es"},          {SolverKind::Bpso, "bpso"},
            {SolverKind::Tabu, "tabu"},              {SolverKind::Greedy, "greedy"},
            {SolverKind::SparseBpso, "sparse-bpso"}, {SolverKind::SparseTabu, "sparse-tabu"},
        };

        int line_of(const toml::node &n) { return static_cast<int>(n.source().begin.line); }

        [[noreturn]] void fail(const toml::node &n, const std::string &what) { throw ConfigError(what, line_of(n)); }

        double as_real(const toml::node &n, std::string_view key)
        {
            if (auto v = n.value<double>(); v && (n.is_floating_point() || n.is_integer()))
                return *v;
            fail(n, "'" + std::string(key) + "' must be a number");
        }

        int as_int(const toml::node &n, std::string_view key)
        {
            if (auto v = n.as_integer())
            {
                const auto x = v->get();
                if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
                    fail(n, "'" + std::string(key) + "' is out of range");
                return static_cast<int>(x);
            }
            fail(n, "'" + std::string(key) + "' must be an integer");
        }

        bool as_bool(const toml::node &n, std::string_view key)
        {
            if (auto v = n.as_boolean())
                return v->get();
            fail(n, "'" + std::string(key) + "' must be true or false");
        }

        std::string as_string(const toml::node &n, std::string_view key)
        {
            if (auto v = n.as_string())
                return v->get();
            fail(n, "'" + std::string(key) + "' must be a string");
        }

        ArrayMode parse_mode(const toml::node &n)
        {
            const std::string s = as_string(n, "mode");
            for (const auto &m : kModes)
                if (m.config == s)
                    return m.mode;
            fail(n, "unknown mode '" + s +
                        "' (expected mamp-with-loads, all-active-with-loads, all-active-no-loads or fpa-fixed)");
        }

        using Handler = std::function<void(const toml::node &, std::string_view)>;

        void walk(const toml::table &table, const std::map<std::string, Handler, std::less<>> &handlers,
                  std::string_view where)
        {
            for (const auto &[key, node] : table)
            {
                auto it = handlers.find(key.str());
                if (it == handlers.end())
                    fail(node, "unknown key '" + std::string(key.str()) + "'" +
                                   (where.empty() ? std::string{} : " in [" + std::string(where) + "]"));
                it->second(node, key.str());
            }
        }

        const toml::table &as_table(const toml::node &n, std::string_view key)
        {
            if (auto t = n.as_table())
                return *t;
            fail(n, "'" + std::string(key) + "' must be a table");
        }

        bool is_integral(double v) { return std::floor(v) == v && std::abs(v) < 1e9; }
    } // namespace

    std::string_view to_string(ArrayMode mode)
    {
        for (const auto &m : kModes)
            if (m.mode == mode)
                return m.config;
        return "?";
    }

    std::string_view csv_name(ArrayMode mode)
    {
        for (const auto &m : kModes)
            if (m.mode == mode)
                return m.csv;
        return "?";
    }

    std::string_view to_string(SolverKind solver)
    {
        for (const auto &s : kSolvers)
            if (s.kind == solver)
                return s.name;
        return "?";
    }

    const std::vector<std::string> &sweep_axes()
    {
        static const std::vector<std::string> axes{"num-ras", "ports-per-ra", "num-active", "passive-per-active",
                                                   "users",   "snr-db",       "beta",       "port-spacing"};
        return axes;
    }

    bool ScenarioConfig::has_mamp() const
    {
        return std::find(modes.begin(), modes.end(), ArrayMode::MampWithLoads) != modes.end();
    }

    double ScenarioConfig::snr_db() const { return 10.0 * std::log10(p_max / noise_power); }

    void ScenarioConfig::validate() const
    {
        if (modes.empty())
            throw ConfigError("at least one mode is required");
        if (has_mamp() && modes.size() != 1)
            throw ConfigError("mamp-with-loads cannot be combined with all-active modes in one scenario");
        if (users < 1)
            throw ConfigError("users must be positive");
        if (ports_per_ra < 1)
            throw ConfigError("ports-per-ra must be positive");
        if (has_mamp())
        {
            if (num_active < 1 || passive_per_active < 0)
                throw ConfigError("num-active must be positive and passive-per-active nonnegative");
            if (num_ras != num_active * (1 + passive_per_active))
                throw ConfigError("num-ras must equal num-active * (1 + passive-per-active)");
        }
        else if (num_ras < 1)
        {
            throw ConfigError("num-ras must be positive");
        }
        if (!(port_spacing > 0.0) || !(fpa_spacing > 0.0) || !(carrier_hz > 0.0))
            throw ConfigError("port-spacing, fpa-spacing and carrier-hz must be positive");
        if (!(p_max >= 0.0) || !(noise_power > 0.0))
            throw ConfigError("power must be nonnegative and noise-power positive");
        if (clusters < 1 || paths_per_cluster < 1 || directions < 1 || !(angular_spread >= 0.0))
            throw ConfigError("channel parameters must be positive");
        if (!(dipole_length > 0.0) || !(dipole_radius > 0.0) || !(dipole_radius < dipole_length / 10.0))
            throw ConfigError("dipole needs 0 < radius < length / 10");
        if (symbols < 1)
            throw ConfigError("mamp symbols must be positive");
        if (trials < 0)
            throw ConfigError("trials must be nonnegative");
        if (bpso.particles < 1 || bpso.max_iter < 1 || bpso.patience < 1 || !(bpso.tol >= 0.0))
            throw ConfigError("invalid bpso parameters");
        if (tabu.max_iter < 0 || tabu.tenure < 0 || tabu.intensify_period < 0 || tabu.diversify_period < 0 ||
            tabu.max_no_improve < 0)
            throw ConfigError("invalid tabu parameters");
        if (!(loads.tol > 0.0) || loads.max_iter < 0 || loads.step < 0.0)
            throw ConfigError("invalid loads parameters");
        if (quantization && (!(quantization->beta >= 0.0) || !(quantization->grid_step > 0.0)))
            throw ConfigError("quantization needs beta >= 0 and grid-step > 0");
        if ((solver == SolverKind::SparseBpso || solver == SolverKind::SparseTabu) && !has_mamp())
            throw ConfigError("sparse solvers apply to mamp-with-loads only");
        if (sweep)
        {
            const auto &axes = sweep_axes();
            if (std::find(axes.begin(), axes.end(), sweep->axis) == axes.end())
                throw ConfigError("unknown sweep axis '" + sweep->axis + "'");
            if (sweep->axis == "num-ras" && has_mamp())
                throw ConfigError("sweep num-active or passive-per-active for mamp-with-loads");
            if ((sweep->axis == "num-active" || sweep->axis == "passive-per-active") && !has_mamp())
                throw ConfigError("sweep axis '" + sweep->axis + "' needs mamp-with-loads");
            if (sweep->axis == "beta" && !quantization)
                throw ConfigError("sweep axis 'beta' needs a [quantization] table");
            for (double v : sweep->values)
                at_point(v).validate_point();
        }
    }

    ScenarioConfig ScenarioConfig::at_point(double value) const
    {
        ScenarioConfig c = *this;
        if (!sweep)
            return c;
        const std::string &a = sweep->axis;
        auto integral = [&](const char *what) {
            if (!is_integral(value))
                throw ConfigError(std::string("sweep values for ") + what + " must be integers");
            return static_cast<int>(value);
        };
        if (a == "num-ras")
            c.num_ras = c.num_active = integral("num-ras");
        else if (a == "ports-per-ra")
            c.ports_per_ra = integral("ports-per-ra");
        else if (a == "num-active")
            c.num_active = integral("num-active");
        else if (a == "passive-per-active")
            c.passive_per_active = integral("passive-per-active");
        else if (a == "users")
            c.users = integral("users");
        else if (a == "snr-db")
            c.p_max = c.noise_power * std::pow(10.0, value / 10.0);
        else if (a == "beta")
            c.quantization->beta = value;
        else if (a == "port-spacing")
            c.port_spacing = value;
        if (c.has_mamp())
            c.num_ras = c.num_active * (1 + c.passive_per_active);
        return c;
    }

    void ScenarioConfig::validate_point() const
    {
        ScenarioConfig c = *this;
        c.sweep.reset();
        c.validate();
    }

    ScenarioConfig parse_scenario(std::string_view toml_text, std::string_view source_name)
    {
        toml::table root;
        try
        {
            root = toml::parse(toml_text, source_name);
        }
        catch (const toml::parse_error &e)
        {
            throw ConfigError(std::string(e.description()), static_cast<int>(e.source().begin.line));
        }

        ScenarioConfig c;
        // Mode decides the defaults, so read it first.
        if (const auto *m = root.get("mode"))
            c.modes = {parse_mode(*m)};
        if (const auto *ms = root.get("modes"))
        {
            if (root.get("mode"))
                fail(*ms, "give either 'mode' or 'modes', not both");
            const auto *arr = ms->as_array();
            if (!arr || arr->empty())
                fail(*ms, "'modes' must be a non-empty array of strings");
            c.modes.clear();
            for (const auto &e : *arr)
                c.modes.push_back(parse_mode(e));
        }
        if (root.get("snr-db") && root.get("p-max"))
            fail(*root.get("p-max"), "give either 'snr-db' or 'p-max', not both");
        if (c.has_mamp())
        {
            c.sv_channel = true;
            c.carrier_hz = 28e9;
            c.port_spacing = 1.0 / 16.0;
            c.num_active = 4;
            c.passive_per_active = 1;
            c.solver = SolverKind::Greedy;
            c.correlation = true;
        }
        else
        {
            c.correlation = false;
        }
        bool num_ras_given = false;

        auto real = [](double &dst) { return [&dst](const toml::node &n, std::string_view k) { dst = as_real(n, k); }; };
        auto integer = [](int &dst) { return [&dst](const toml::node &n, std::string_view k) { dst = as_int(n, k); }; };
        auto boolean = [](bool &dst) { return [&dst](const toml::node &n, std::string_view k) { dst = as_bool(n, k); }; };
        const Handler ignore = [](const toml::node &, std::string_view) {};

        std::map<std::string, Handler, std::less<>> top{
            {"name", [&](const toml::node &n, std::string_view k) { c.name = as_string(n, k); }},
            {"mode", ignore},
            {"modes", ignore},
            {"channel",
             [&](const toml::node &n, std::string_view k) {
                 const std::string s = as_string(n, k);
                 if (s == "saleh-valenzuela")
                     c.sv_channel = true;
                 else if (s == "rayleigh")
                     c.sv_channel = false;
                 else
                     fail(n, "unknown channel '" + s + "' (expected saleh-valenzuela or rayleigh)");
             }},
            {"users", integer(c.users)},
            {"num-ras",
             [&](const toml::node &n, std::string_view k) {
                 c.num_ras = as_int(n, k);
                 num_ras_given = true;
             }},
            {"ports-per-ra", integer(c.ports_per_ra)},
            {"num-active", integer(c.num_active)},
            {"passive-per-active", integer(c.passive_per_active)},
            {"port-spacing", real(c.port_spacing)},
            {"carrier-hz", real(c.carrier_hz)},
            {"fpa-spacing", real(c.fpa_spacing)},
            {"snr-db", [&](const toml::node &n, std::string_view k) { c.p_max = std::pow(10.0, as_real(n, k) / 10.0); }},
            {"p-max", real(c.p_max)},
            {"noise-power", real(c.noise_power)},
            {"precoder",
             [&](const toml::node &n, std::string_view k) {
                 try
                 {
                     c.precoder = parse_precoder_kind(as_string(n, k));
                 }
                 catch (const std::invalid_argument &e)
                 {
                     fail(n, e.what());
                 }
             }},
            {"solver",
             [&](const toml::node &n, std::string_view k) {
                 const std::string s = as_string(n, k);
                 for (const auto &e : kSolvers)
                     if (e.name == s)
                     {
                         c.solver = e.kind;
                         return;
                     }
                 fail(n, "unknown solver '" + s + "' (expected es, bpso, tabu, greedy, sparse-bpso or sparse-tabu)");
             }},
            {"trials", integer(c.trials)},
            {"seed",
             [&](const toml::node &n, std::string_view) {
                 const auto *v = n.as_integer();
                 if (!v || v->get() < 0)
                     fail(n, "'seed' must be a nonnegative integer");
                 c.seed = static_cast<std::uint64_t>(v->get());
             }},
            {"coupling", boolean(c.coupling)},
            {"correlation", boolean(c.correlation)},
        };

        std::map<std::string, Handler, std::less<>> channel_params{
            {"clusters", integer(c.clusters)},
            {"paths-per-cluster", integer(c.paths_per_cluster)},
            {"directions", integer(c.directions)},
            {"angular-spread", real(c.angular_spread)},
        };
        std::map<std::string, Handler, std::less<>> dipole{
            {"length", real(c.dipole_length)},
            {"radius", real(c.dipole_radius)},
        };
        std::map<std::string, Handler, std::less<>> bpso{
            {"particles", integer(c.bpso.particles)}, {"max-iter", integer(c.bpso.max_iter)},
            {"c1", real(c.bpso.c1)},                  {"c2", real(c.bpso.c2)},
            {"tol", real(c.bpso.tol)},                {"w0", real(c.bpso.w0)},
            {"patience", integer(c.bpso.patience)},
        };
        std::map<std::string, Handler, std::less<>> tabu{
            {"max-iter", integer(c.tabu.max_iter)},
            {"tenure", integer(c.tabu.tenure)},
            {"intensify-period", integer(c.tabu.intensify_period)},
            {"diversify-period", integer(c.tabu.diversify_period)},
            {"max-no-improve", integer(c.tabu.max_no_improve)},
        };
        std::map<std::string, Handler, std::less<>> loads{
            {"step", real(c.loads.step)},
            {"tol", real(c.loads.tol)},
            {"max-iter", integer(c.loads.max_iter)},
            {"method",
             [&](const toml::node &n, std::string_view k) {
                 const std::string s = as_string(n, k);
                 if (s == "least-squares")
                     c.load_method = LoadMethod::LeastSquares;
                 else if (s == "descent")
                     c.load_method = LoadMethod::Descent;
                 else
                     fail(n, "loads method must be 'least-squares' or 'descent'");
             }},
        };
        std::map<std::string, Handler, std::less<>> mamp{
            {"symbols", integer(c.symbols)},
            {"robust-support",
             [&](const toml::node &n, std::string_view k) {
                 const std::string s = as_string(n, k);
                 if (s == "all")
                     c.robust_active_only = false;
                 else if (s == "active")
                     c.robust_active_only = true;
                 else
                     fail(n, "robust-support must be 'all' or 'active'");
             }},
        };
        QuantizationConfig quant;
        std::map<std::string, Handler, std::less<>> quantization{
            {"beta", real(quant.beta)},
            {"grid-step", real(quant.grid_step)},
        };
        SweepConfig sweep;
        int sweep_line = 0;
        std::map<std::string, Handler, std::less<>> sweep_keys{
            {"axis",
             [&](const toml::node &n, std::string_view k) {
                 sweep.axis = as_string(n, k);
                 sweep_line = line_of(n);
             }},
            {"values",
             [&](const toml::node &n, std::string_view k) {
                 const auto *arr = n.as_array();
                 if (!arr)
                     fail(n, "'values' must be an array of numbers");
                 for (const auto &e : *arr)
                     sweep.values.push_back(as_real(e, k));
             }},
        };

        auto sub = [&](std::map<std::string, Handler, std::less<>> &keys, const char *name) {
            return [&keys, name](const toml::node &n, std::string_view k) { walk(as_table(n, k), keys, name); };
        };
        bool have_quant = false, have_sweep = false;
        top.emplace("channel-params", sub(channel_params, "channel-params"));
        top.emplace("dipole", sub(dipole, "dipole"));
        top.emplace("bpso", sub(bpso, "bpso"));
        top.emplace("tabu", sub(tabu, "tabu"));
        top.emplace("loads", sub(loads, "loads"));
        top.emplace("mamp", sub(mamp, "mamp"));
        top.emplace("quantization", [&](const toml::node &n, std::string_view k) {
            walk(as_table(n, k), quantization, "quantization");
            have_quant = true;
        });
        top.emplace("sweep", [&](const toml::node &n, std::string_view k) {
            walk(as_table(n, k), sweep_keys, "sweep");
            if (sweep.axis.empty())
                fail(n, "[sweep] needs an 'axis'");
            have_sweep = true;
        });

        walk(root, top, "");
        if (have_quant)
            c.quantization = quant;
        if (have_sweep)
            c.sweep = sweep;
        if (c.has_mamp() && !num_ras_given)
            c.num_ras = c.num_active * (1 + c.passive_per_active);
        if (!c.has_mamp())
        {
            c.num_active = c.num_ras;
            c.passive_per_active = 0;
        }

        try
        {
            c.validate();
        }
        catch (const ConfigError &e)
        {
            // Point sweep problems at the sweep table.
            if (e.line() == 0 && sweep_line > 0 && std::string(e.what()).find("sweep") != std::string::npos)
                throw ConfigError(e.what(), sweep_line);
            throw;
        }
        return c;
    }

    ScenarioConfig load_scenario(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read config file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str(), path);
    }

} // namespace rasim
