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

#ifndef TRACECHAN_TOOLS_SCENARIO_CONFIG_HPP
#define TRACECHAN_TOOLS_SCENARIO_CONFIG_HPP

#include "tracechan/beam_management.hpp"
#include "tracechan/link_sim.hpp"
#include "tracechan/rt_oracle.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracechan::cli
{
    struct ArrayConfig
    {
        int rows = 1;
        int cols = 1;
        double spacing = 0.5; // wavelengths
        double bearing_deg = 0.0;
    };

    // Parsed scenario file. Exactly one of `trace_path` and the generative
    // pair (`environment`, tx/rx motion) is set.
    struct ScenarioConfig
    {
        double carrier_hz = 0.0;
        double bandwidth_hz = 0.0;
        int subbands = 0;
        double txpower_dbm = 0.0;
        double noise_figure_db = 0.0;
        double temperature_k = 290.0;
        ArrayConfig tx_array;
        ArrayConfig rx_array;
        CodebookGrid tx_codebook;
        CodebookGrid rx_codebook;
        double training_period_s = 0.0;
        double offered_bps = 0.0;
        double overhead = 0.0;
        double snapshot_dt_s = 0.0;
        double duration_s = 0.0;
        DelayModel delay;
        LinkId link{0, 1};
        int workers = 1;
        std::optional<std::filesystem::path> amc_table;

        std::optional<std::filesystem::path> trace_path;
        std::optional<Environment> environment;
        int reflection_order = 4;
        std::optional<MotionParams> tx_motion;
        std::optional<MotionParams> rx_motion;

        bool generative() const { return environment.has_value(); }

        // k * snapshot_dt_s for k = 0 .. round(duration_s / snapshot_dt_s)
        std::vector<double> snapshot_times() const;
    };

    // Carries every problem found in a config file, one line each
    class ConfigError : public std::runtime_error
    {
    public:
        explicit ConfigError(std::vector<std::string> diagnostics);
        const std::vector<std::string> &diagnostics() const { return diagnostics_; }

    private:
        std::vector<std::string> diagnostics_;
    };

    // YAML text; relative paths inside are resolved against `base_dir`.
    ScenarioConfig parse_scenario_config(const std::string &text, const std::filesystem::path &base_dir = {});

    // Throws ConfigError for content problems and std::ios_base::failure
    // when the file cannot be read.
    ScenarioConfig load_scenario_config(const std::filesystem::path &path);

    // ---- Derived simulation objects -------------------------------------------

    SubbandGrid make_grid(const ScenarioConfig &cfg);
    LinkBudget make_budget(const ScenarioConfig &cfg);
    PlanarArray make_array(const ArrayConfig &a, double carrier_hz);
    AmcTable make_amc(const ScenarioConfig &cfg);

    // Trajectories sampled at the scenario's snapshot times (generative only)
    Trajectory make_tx_trajectory(const ScenarioConfig &cfg);
    Trajectory make_rx_trajectory(const ScenarioConfig &cfg);

    TraceScenario make_trace_scenario(const ScenarioConfig &cfg);

    // Node states follow the trajectories in generative mode and are static
    // at the origin when replaying a trace.
    SimulationConfig make_simulation_config(const ScenarioConfig &cfg);

} // namespace tracechan::cli

#endif
