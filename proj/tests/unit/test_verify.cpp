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

#include "rasim/loads.hpp"
#include "rasim/verify.hpp"

using namespace rasim;

namespace
{
    bool all_pass(const std::vector<Check> &checks)
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    }
} // namespace

TEST_CASE("every suite passes on the library")
{
    for (const std::string &s : verify_suites())
    {
        if (s == "all")
            continue;
        const std::vector<Check> checks = run_verify(s);
        CHECK_FALSE(checks.empty());
        for (const Check &c : checks)
        {
            INFO(c.suite << ": " << c.name << " (" << c.detail << ")");
            CHECK(c.suite == s);
            CHECK(c.passed);
        }
    }
}

TEST_CASE("'all' runs every suite")
{
    const std::vector<Check> all = run_verify("all");
    std::size_t sum = 0;
    for (const std::string &s : verify_suites())
        if (s != "all")
            sum += run_verify(s).size();
    CHECK(all.size() == sum);
    CHECK(all_pass(all));
}

TEST_CASE("a scaled gradient is caught")
{
    VerifyOptions o;
    o.gradient = [](const CVec &z, const CMat &Z, const CMat &F, cplx zA) {
        return CVec(1.1 * grad_load_gradient(z, Z, F, zA));
    };
    CHECK_FALSE(all_pass(run_verify("gradient", o)));
}

TEST_CASE("a conjugated gradient is caught")
{
    VerifyOptions o;
    o.gradient = [](const CVec &z, const CMat &Z, const CMat &F, cplx zA) {
        return CVec(grad_load_gradient(z, Z, F, zA).conjugate());
    };
    CHECK_FALSE(all_pass(run_verify("gradient", o)));
}

TEST_CASE("unknown suites")
{
    CHECK_THROWS_AS(run_verify("gradiant"), std::invalid_argument);
    CHECK(suggest_suite("gradiant") == "gradient");
    CHECK(suggest_suite("circut") == "circuit");
    CHECK(suggest_suite("special") == "special_fns");
}

TEST_CASE("relative gradient error")
{
    const CVec fd = (CVec(3) << cplx(1, 0), cplx(0, 2), cplx(1e-15, 0)).finished();
    CHECK(gradient_relative_error(fd, fd) == 0.0);
    CVec g = fd;
    g(0) *= 1.01;
    CHECK(gradient_relative_error(g, fd) == doctest::Approx(0.01));
    g = fd;
    g(2) = 1e-18;
    CHECK(gradient_relative_error(g, fd) < 1e-6);
    g(2) = 1e-6;
    CHECK(gradient_relative_error(g, fd) > 1.0);
}

TEST_CASE("random circuits are reproducible")
{
    Rng a(3), b(3);
    const CircuitInstance x = random_circuit(a, 4);
    const CircuitInstance y = random_circuit(b, 4);
    CHECK(x.Z == y.Z);
    CHECK(x.F == y.F);
    CHECK(x.z_L == y.z_L);
    CHECK(x.F.cols() == 2);
    CHECK((x.Z - x.Z.transpose()).norm() == 0.0);
}
