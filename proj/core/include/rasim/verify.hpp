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

#ifndef RASIM_VERIFY_HPP
#define RASIM_VERIFY_HPP

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rasim/coupling.hpp"
#include "rasim/rng.hpp"
#include "rasim/types.hpp"

namespace rasim
{
    struct Check
    {
        std::string suite;
        std::string name;
        bool passed = false;
        std::string detail;
    };

    using GradientFn = std::function<CVec(const CVec &z_L, const CMat &Z, const CMat &F, cplx z_A)>;

    struct VerifyOptions
    {
        // Gradient under test; empty means grad_load_gradient.
        GradientFn gradient;
    };

    /// "special_fns", "gradient", "oracle", "circuit" and "all".
    const std::vector<std::string> &verify_suites();

    /// Closest suite name by edit distance.
    std::string suggest_suite(std::string_view name);

    /// Throws std::invalid_argument for an unknown suite.
    std::vector<Check> run_verify(std::string_view suite, const VerifyOptions &options = {});

    // Coupled array of M half-wave dipoles on random ports of an N = 4,
    // d = 1/8 grid, a random precoder and loads near z_0.
    struct CircuitInstance
    {
        DipoleSpec dipole;
        CMat Z;
        CMat F;
        CVec z_L;
    };
    CircuitInstance random_circuit(Rng &rng, int num_ras, int users = 2);

    /// max_m |g_m - fd_m| / max(|fd_m|, 1e-9 ||fd||).
    double gradient_relative_error(const CVec &analytic, const CVec &fd);

} // namespace rasim

#endif
