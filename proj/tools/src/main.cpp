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

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    using namespace tracechan::cli;

    CLI::App app{"tracechan: trace-driven MIMO channel and link simulation"};
    app.require_subcommand(1);

    std::string config, out, time, trace;
    int workers = 0;

    auto *gen = app.add_subcommand("generate-trace", "Ray-trace a scenario into an MPC trace CSV");
    gen->add_option("--config", config, "Scenario file")->required();
    gen->add_option("--out", out, "Output trace CSV")->required();

    auto *val = app.add_subcommand("validate", "Check a trace CSV for structural violations");
    val->add_option("--trace,trace", trace, "Trace CSV")->required();

    auto *sim = app.add_subcommand("simulate", "Run beam training and link adaptation over a trace");
    sim->add_option("--config", config, "Scenario file")->required();
    sim->add_option("--out", out, "Output metrics CSV")->required();
    sim->add_option("--trace", trace, "Trace CSV replacing the configured source");
    sim->add_option("--workers", workers, "Worker threads (overrides the config)");

    auto *swp = app.add_subcommand("sweep", "Write the beam-pair power table of one snapshot");
    swp->add_option("--config", config, "Scenario file")->required();
    swp->add_option("--time", time, "Snapshot time in seconds")->required();
    swp->add_option("--out", out, "Output power table CSV")->required();
    swp->add_option("--trace", trace, "Trace CSV replacing the configured source");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kExitUsage;
    }

    Console io{std::cout, std::cerr};
    std::optional<std::filesystem::path> trace_opt;
    if (!trace.empty())
        trace_opt = trace;

    if (gen->parsed())
        return cmd_generate_trace(config, out, io);
    if (val->parsed())
        return cmd_validate(trace, io);
    if (sim->parsed())
        return cmd_simulate(config, out, trace_opt, workers > 0 ? std::optional<int>(workers) : std::nullopt, io);
    return cmd_sweep(config, time, out, trace_opt, io);
}
