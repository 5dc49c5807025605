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

#ifndef RASIM_CLI_HPP
#define RASIM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rasim/verify.hpp"

namespace rasim::cli
{
    enum ExitCode : int
    {
        kOk = 0,
        kConfigError = 1,
        kTrialFailure = 2,
    };

    struct RunOptions
    {
        std::string config_path; // TOML scenario or a manifest.json from an earlier run
        std::string out_dir;
        int threads = 1;
        std::optional<std::uint64_t> seed_override;
        // Fixed timestamp for the manifest; empty uses the current UTC time.
        std::string timestamp;
    };

    int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err);

    int cmd_verify(const std::string &suite, std::ostream &out, std::ostream &err,
                   const VerifyOptions &verify_options = {});

    int main(int argc, char **argv, std::ostream &out, std::ostream &err);

} // namespace rasim::cli

#endif
