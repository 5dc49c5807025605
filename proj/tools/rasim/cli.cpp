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

#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rasim/montecarlo.hpp"
#include "rasim/scenario.hpp"

namespace rasim::cli
{
    namespace
    {
        namespace fs = std::filesystem;

        std::string utc_now()
        {
            const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&t, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            return buf;
        }

        void write_file(const fs::path &path, const std::string &text)
        {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + path.string());
            f << text;
            if (!f)
                throw std::runtime_error("cannot write " + path.string());
        }

        struct Source
        {
            std::string text;
            std::optional<std::uint64_t> seed;
        };

        Source read_source(const std::string &path)
        {
            std::ifstream f(path, std::ios::binary);
            if (!f)
                throw ConfigError("cannot read config file '" + path + "'");
            std::ostringstream s;
            s << f.rdbuf();
            Source src{s.str(), std::nullopt};
            if (fs::path(path).extension() == ".json")
            {
                nlohmann::json j;
                try
                {
                    j = nlohmann::json::parse(src.text);
                    src.text = j.at("config").get<std::string>();
                    src.seed = j.at("seed").get<std::uint64_t>();
                }
                catch (const nlohmann::json::exception &e)
                {
                    throw ConfigError("'" + path + "' is not a rasim manifest: " + e.what());
                }
            }
            return src;
        }
    } // namespace

    int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err)
    {
        ScenarioConfig cfg;
        std::string text;
        try
        {
            Source src = read_source(options.config_path);
            text = std::move(src.text);
            cfg = parse_scenario(text, options.config_path);
            if (src.seed)
                cfg.seed = *src.seed;
            if (options.seed_override)
                cfg.seed = *options.seed_override;
            if (options.threads < 1)
                throw ConfigError("--threads must be at least 1");
        }
        catch (const ConfigError &e)
        {
            err << options.config_path << ": " << e.what() << "\n";
            return kConfigError;
        }

        SweepResult result;
        try
        {
            result = run_sweep(cfg, options.threads);
        }
        catch (const std::exception &e)
        {
            err << "run failed: " << e.what() << "\n";
            return kTrialFailure;
        }

        try
        {
            const fs::path dir(options.out_dir);
            fs::create_directories(dir);
            write_file(dir / "results.csv", results_csv(result));
            write_file(dir / "traces.jsonl", traces_jsonl(result));
            write_file(dir / "manifest.json",
                       manifest_json(text, cfg, options.timestamp.empty() ? utc_now() : options.timestamp));
        }
        catch (const std::exception &e)
        {
            err << e.what() << "\n";
            return kTrialFailure;
        }
        out << "wrote " << result.rows.size() << " rows to " << (fs::path(options.out_dir) / "results.csv").string()
            << "\n";
        return kOk;
    }

    int cmd_verify(const std::string &suite, std::ostream &out, std::ostream &err, const VerifyOptions &verify_options)
    {
        std::vector<Check> checks;
        try
        {
            checks = run_verify(suite, verify_options);
        }
        catch (const std::invalid_argument &)
        {
            err << "unknown suite '" << suite << "'; did you mean '" << suggest_suite(suite) << "'?\n";
            return kConfigError;
        }
        int failed = 0;
        for (const Check &c : checks)
        {
            out << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " (" << c.detail << ")\n";
            failed += c.passed ? 0 : 1;
        }
        out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
        return failed == 0 ? kOk : kTrialFailure;
    }

    int main(int argc, char **argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Reconfigurable-antenna array simulator", "rasim"};
        app.set_version_flag("--version", library_version());
        app.require_subcommand(1);

        RunOptions run;
        std::uint64_t seed = 0;
        auto *run_cmd = app.add_subcommand("run", "Run the Monte Carlo campaign described by a scenario file");
        run_cmd->add_option("config", run.config_path, "Scenario TOML or manifest.json")->required();
        run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
        run_cmd->add_option("--threads", run.threads, "Worker threads")->check(CLI::PositiveNumber);
        auto *seed_opt = run_cmd->add_option("--seed-override", seed, "Replace the master seed");

        std::string suite = "all";
        auto *verify_cmd = app.add_subcommand("verify", "Run the built-in oracle and invariant checks");
        verify_cmd->add_option("--suite", suite, "special_fns, gradient, oracle, circuit or all");

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return kOk;
        }
        catch (const CLI::CallForVersion &)
        {
            out << library_version() << "\n";
            return kOk;
        }
        catch (const CLI::ParseError &e)
        {
            err << e.what() << "\n";
            return kConfigError;
        }

        if (*run_cmd)
        {
            if (*seed_opt)
                run.seed_override = seed;
            return cmd_run(run, out, err);
        }
        return cmd_verify(suite, out, err);
    }

} // namespace rasim::cli
