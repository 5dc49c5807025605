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

#include <cmath>

#include <json.hpp>

#include "rasim/montecarlo.hpp"

using namespace rasim;

namespace
{
    ScenarioConfig small(const std::string &extra = {})
    {
        return parse_scenario("modes = [\"all-active-with-loads\", \"all-active-no-loads\", \"fpa-fixed\"]\n"
                              "num-ras = 3\nports-per-ra = 2\nsolver = \"es\"\nsnr-db = 10\ntrials = 4\nseed = 3\n" +
                              extra);
    }

    const ModeResult &find(const TrialResult &t, const std::string &mode)
    {
        for (const auto &m : t.modes)
            if (m.mode == mode)
                return m;
        FAIL("mode not found: " << mode);
        throw std::logic_error("unreachable");
    }
} // namespace

TEST_CASE("trials are reproducible")
{
    const ScenarioConfig c = small();
    const TrialResult a = run_trial(c, 2);
    const TrialResult b = run_trial(c, 2);
    CHECK(a.channel_hash == b.channel_hash);
    REQUIRE(a.modes.size() == b.modes.size());
    for (std::size_t i = 0; i < a.modes.size(); ++i)
    {
        CHECK(a.modes[i].mode == b.modes[i].mode);
        CHECK(a.modes[i].sum_rate == b.modes[i].sum_rate);
    }
    CHECK(run_trial(c, 3).channel_hash != a.channel_hash);
    CHECK(a.seed_used == 3);
}

TEST_CASE("every mode of a trial sees the same channel")
{
    const SweepResult r = run_sweep(small("[sweep]\naxis = \"num-ras\"\nvalues = [2, 3]\n"));
    REQUIRE(r.points.size() == 2);
    for (std::size_t t = 0; t < 4; ++t)
        CHECK(r.points[0].trials[t].channel_hash == r.points[1].trials[t].channel_hash);
    for (const auto &t : r.points[0].trials)
        CHECK(t.modes.size() == 3);
}

TEST_CASE("without coupling, loads change nothing")
{
    const ScenarioConfig c = small("coupling = false\n");
    for (int trial = 0; trial < 4; ++trial)
    {
        const TrialResult t = run_trial(c, trial);
        CHECK(find(t, "all_active_with_loads").sum_rate ==
              doctest::Approx(find(t, "all_active_no_loads").sum_rate).epsilon(1e-9));
    }
}

TEST_CASE("with coupling, optimized loads do not lose to matched loads")
{
    const ScenarioConfig c = small("port-spacing = 0.125\n");
    for (int trial = 0; trial < 4; ++trial)
    {
        const TrialResult t = run_trial(c, trial);
        const ModeResult &w = find(t, "all_active_with_loads");
        CHECK(w.sum_rate >= find(t, "all_active_no_loads").sum_rate * (1.0 - 1e-9));
        CHECK(w.solver == "es");
        CHECK(find(t, "fpa_fixed").solver == "none");
    }
}

TEST_CASE("zero transmit power gives zero rates")
{
    const ScenarioConfig c = parse_scenario("modes = [\"all-active-with-loads\", \"all-active-no-loads\", \"fpa-fixed\"]\n"
                                            "num-ras = 3\nports-per-ra = 2\nsolver = \"es\"\np-max = 0.0\n"
                                            "[quantization]\nbeta = 0.1\n");
    const TrialResult t = run_trial(c, 0);
    CHECK(t.modes.size() == 5);
    for (const auto &m : t.modes)
        CHECK(m.sum_rate == 0.0);
}

TEST_CASE("quantized variants never beat the ideal rate")
{
    const ScenarioConfig c = small("[quantization]\nbeta = 0.1\n");
    for (int trial = 0; trial < 4; ++trial)
    {
        const TrialResult t = run_trial(c, trial);
        const double ideal = find(t, "all_active_with_loads").sum_rate;
        CHECK(find(t, "all_active_with_loads/quantized").sum_rate <= ideal * (1.0 + 1e-9));
        CHECK(find(t, "all_active_with_loads/robust").sum_rate <= ideal * (1.0 + 1e-9));
    }
}

TEST_CASE("MAMP trial reports ideal, quantized and robust rates")
{
    const ScenarioConfig c = parse_scenario("mode = \"mamp-with-loads\"\nnum-active = 2\npassive-per-active = 1\n"
                                            "ports-per-ra = 2\nusers = 2\ntrials = 2\nseed = 4\nsnr-db = 20\n"
                                            "[mamp]\nsymbols = 8\n[quantization]\nbeta = 0.1\n");
    const TrialResult t = run_trial(c, 0);
    REQUIRE(t.modes.size() == 3);
    const double ideal = find(t, "mamp_with_loads").sum_rate;
    const double quant = find(t, "mamp_with_loads/quantized").sum_rate;
    const double robust = find(t, "mamp_with_loads/robust").sum_rate;
    CHECK(ideal > 0.0);
    CHECK(quant <= ideal);
    CHECK(robust >= quant);
    CHECK(robust <= ideal);
}

TEST_CASE("thread count does not change results")
{
    const ScenarioConfig c = small();
    const SweepResult one = run_sweep(c, 1);
    const SweepResult many = run_sweep(c, 3);
    CHECK(results_csv(one) == results_csv(many));
    CHECK(traces_jsonl(one) == traces_jsonl(many));
}

TEST_CASE("failed trials are reported with their index")
{
    const ScenarioConfig c = parse_scenario("users = 4\nnum-ras = 2\nports-per-ra = 2\nprecoder = \"zf\"\nsolver = \"es\"\ntrials = 3\n");
    try
    {
        run_sweep(c, 2);
        FAIL("expected a TrialError");
    }
    catch (const TrialError &e)
    {
        CHECK(e.trial() == 0);
        CHECK(std::string(e.what()).rfind("trial 0: ", 0) == 0);
    }
}

TEST_CASE("aggregation")
{
    std::vector<SweepPoint> pts(1);
    pts[0].value = 2.0;
    for (double v : {1.0, 2.0, 4.0})
    {
        TrialResult t;
        ModeResult m;
        m.mode = "x";
        m.solver = "es";
        m.sum_rate = v;
        t.modes.push_back(m);
        pts[0].trials.push_back(t);
    }
    const std::vector<SweepRow> rows = aggregate("users", pts);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].mean_sr == doctest::Approx(7.0 / 3.0));
    CHECK(rows[0].stderr_sr == doctest::Approx(std::sqrt(7.0 / 3.0 / 3.0)));
    CHECK(rows[0].trials == 3);
    CHECK(rows[0].axis == "users");
}

TEST_CASE("output formats")
{
    const SweepResult r = run_sweep(small(), 1);
    const std::string csv = results_csv(r);
    CHECK(csv.rfind("sweep_axis,value,mode,solver,mean_sr,stderr,trials\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    const std::string jl = traces_jsonl(r);
    const auto first = nlohmann::json::parse(jl.substr(0, jl.find('\n')));
    CHECK(first.contains("channel_hash"));
    CHECK(first.contains("solver_trace"));

    const auto man = nlohmann::json::parse(manifest_json("seed = 3\n", small(), "t0"));
    CHECK(man.at("seed") == 3);
    CHECK(man.at("config") == "seed = 3\n");
    CHECK(man.at("version") == library_version());

    for (double v : {0.1, 1.0 / 3.0, 27.012345678901234, 1e-300})
        CHECK(std::stod(format_double(v)) == v);
}
