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

#ifndef RASIM_ERROR_HPP
#define RASIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rasim
{
    // Base of every error thrown by the library. Argument validation failures
    // use std::invalid_argument directly.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Two RAs occupy the same physical position.
    class DegenerateGeometry : public Error
    {
    public:
        using Error::Error;
    };

    // A linear system is singular or too badly conditioned to trust.
    class SingularMatrix : public Error
    {
    public:
        SingularMatrix(const std::string &what, double condition)
            : Error(what + " (condition estimate " + std::to_string(condition) + ")"), condition_(condition) {}

        double condition() const noexcept { return condition_; }

    private:
        double condition_;
    };

    // ZF precoding requested on a rank-deficient channel.
    class RankDeficient : public Error
    {
    public:
        using Error::Error;
    };

    // An enumeration guard (exhaustive or greedy inner sweep) was exceeded.
    class SearchSpaceTooLarge : public Error
    {
    public:
        using Error::Error;
    };

    // A passive RA's target current vanished for this symbol vector; the caller
    // should resample the symbols.
    class DegenerateSymbol : public Error
    {
    public:
        using Error::Error;
    };

    // An iterative solver hit its cap without meeting its tolerance.
    class NonConvergence : public Error
    {
    public:
        using Error::Error;
    };

} // namespace rasim

#endif
