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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "rasim/loads.hpp"
#include "rasim/montecarlo.hpp"

namespace fs = std::filesystem;
using namespace rasim;

namespace
{
    const std::string kTiny = std::string(RASIM_CONFIG_DIR) + "/tiny.toml";

    struct TempDir
    {
        fs::path path;
        TempDir()
        {
            std::random_device rd;
            path = fs::temp_directory_path() / ("rasim_cli_test_" + std::to_string(rd()));
            fs::create_directories(path);
        }
        ~TempDir()
        {
            std::error_code ec;
            fs::remove_all(path, ec);
        }
    };

    std::string slurp(const fs::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        return s.str();
    }

    int invoke(std::vector<std::string> args, std::string &out, std::string &err)
    {
        args.insert(args.begin(), "rasim");
        std::vector<char *> argv;
        for (auto &a : args)
            argv.push_back(a.data());
        std::ostringstream o, e;
        const int code = cli::main(static_cast<int>(argv.size()), argv.data(), o, e);
        out = o.str();
        err = e.str();
        return code;
    }
} // namespace

TEST_CASE("missing config file")
{
    TempDir dir;
    std::string out, err;
    CHECK(invoke({"run", "/no/such/file.toml", "--out", dir.path.string()}, out, err) == cli::kConfigError);
    CHECK(err.find("/no/such/file.toml") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.path / "results.csv"));
}

TEST_CASE("invalid config reports its line")
{
    TempDir dir;
    const fs::path cfg = dir.path / "bad.toml";
    std::ofstream(cfg) << "users = 2\nnum-raz = 3\n";
    std::string out, err;
    CHECK(invoke({"run", cfg.string(), "--out", (dir.path / "o").string()}, out, err) == cli::kConfigError);
    CHECK(err.find("line 2") != std::string::npos);
}

TEST_CASE("tiny run writes all outputs")
{
    TempDir dir;
    cli::RunOptions o;
    o.config_path = kTiny;
    o.out_dir = dir.path.string();
    o.timestamp = "2000-01-01T00:00:00Z";
    std::ostringstream out, err;
    REQUIRE(cli::cmd_run(o, out, err) == cli::kOk);

    const std::string csv = slurp(dir.path / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.find("all_active_with_loads,es,") != std::string::npos);
    const std::string jl = slurp(dir.path / "traces.jsonl");
    CHECK(std::count(jl.begin(), jl.end(), '\n') == 3);
    const auto man = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    CHECK(man.at("seed") == 7);
    CHECK(man.at("timestamp") == "2000-01-01T00:00:00Z");
}

TEST_CASE("manifest reruns are identical and seed overrides are deterministic")
{
    TempDir dir;
    cli::RunOptions o;
    o.config_path = kTiny;
    o.out_dir = (dir.path / "a").string();
    o.timestamp = "t";
    std::ostringstream out, err;
    REQUIRE(cli::cmd_run(o, out, err) == cli::kOk);

    cli::RunOptions again = o;
    again.config_path = (dir.path / "a" / "manifest.json").string();
    again.out_dir = (dir.path / "b").string();
    again.threads = 2;
    REQUIRE(cli::cmd_run(again, out, err) == cli::kOk);
    CHECK(slurp(dir.path / "a" / "results.csv") == slurp(dir.path / "b" / "results.csv"));
    CHECK(slurp(dir.path / "a" / "traces.jsonl") == slurp(dir.path / "b" / "traces.jsonl"));

    cli::RunOptions s1 = o, s2 = o;
    s1.seed_override = s2.seed_override = 12345;
    s1.out_dir = (dir.path / "c").string();
    s2.out_dir = (dir.path / "d").string();
    REQUIRE(cli::cmd_run(s1, out, err) == cli::kOk);
    REQUIRE(cli::cmd_run(s2, out, err) == cli::kOk);
    CHECK(slurp(dir.path / "c" / "results.csv") == slurp(dir.path / "d" / "results.csv"));
    CHECK(slurp(dir.path / "c" / "results.csv") != slurp(dir.path / "a" / "results.csv"));
    CHECK(nlohmann::json::parse(slurp(dir.path / "c" / "manifest.json")).at("seed") == 12345);
}

TEST_CASE("verify subcommand")
{
    std::string out, err;
    CHECK(invoke({"verify", "--suite", "special_fns"}, out, err) == cli::kOk);
    CHECK(out.find("PASS special_fns") != std::string::npos);
    CHECK(out.find("FAIL") == std::string::npos);

    CHECK(invoke({"verify", "--suite", "gradiant"}, out, err) == cli::kConfigError);
    CHECK(err.find("did you mean 'gradient'") != std::string::npos);
}

TEST_CASE("verify fails on a broken gradient")
{
    VerifyOptions v;
    v.gradient = [](const CVec &z, const CMat &Z, const CMat &F, cplx zA) {
        return CVec(1.1 * grad_load_gradient(z, Z, F, zA));
    };
    std::ostringstream out, err;
    CHECK(cli::cmd_verify("gradient", out, err, v) == cli::kTrialFailure);
    CHECK(out.str().find("FAIL gradient") != std::string::npos);
}

TEST_CASE("argument errors")
{
    std::string out, err;
    CHECK(invoke({}, out, err) == cli::kConfigError);
    CHECK(invoke({"run", kTiny}, out, err) == cli::kConfigError);
    CHECK(invoke({"run", kTiny, "--out", "x", "--threads", "0"}, out, err) == cli::kConfigError);
    CHECK(invoke({"--version"}, out, err) == cli::kOk);
    CHECK(out == library_version() + "\n");
}
