// SPDX-License-Identifier: Apache-2.0
//
// tracechan: trace-driven site-specific MIMO channel simulation
// Copyright (C) 2026 The tracechan authors
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
// ------------------------------------------------------------------------

#ifndef TRACECHAN_TOOLS_COMMANDS_HPP
#define TRACECHAN_TOOLS_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace tracechan::cli
{
    // Exit codes
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitFindings = 1;
    inline constexpr int kExitUsage = 2;
    inline constexpr int kExitIo = 3;

    struct Console
    {
        std::ostream &out;
        std::ostream &err;
    };

    int cmd_generate_trace(const std::filesystem::path &config, const std::filesystem::path &out, Console io);

    int cmd_validate(const std::filesystem::path &trace, Console io);

    // `trace` replaces the configured trace source; with a generative config
    // the trajectories still provide node velocities.
    int cmd_simulate(const std::filesystem::path &config, const std::filesystem::path &out,
                     const std::optional<std::filesystem::path> &trace, std::optional<int> workers, Console io);

    // Power table `tx_az,tx_zen,rx_az,rx_zen,power_dbm` for the snapshot
    // nearest to `time` (within half a snapshot interval). The last row
    // repeats the best pair.
    int cmd_sweep(const std::filesystem::path &config, const std::string &time, const std::filesystem::path &out,
                  const std::optional<std::filesystem::path> &trace, Console io);

} // namespace tracechan::cli

#endif
