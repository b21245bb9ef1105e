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
#include "scenario_config.hpp"

#include "tracechan/trace_model.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace tracechan;
using namespace tracechan::cli;

namespace
{
    const fs::path kConfigs = fs::path(TRACECHAN_SOURCE_DIR) / "configs";

    fs::path scratch()
    {
        static const fs::path dir = [] {
            fs::path d = fs::temp_directory_path() / ("tracechan_cli_" + std::to_string(::getpid()));
            fs::create_directories(d);
            return d;
        }();
        return dir;
    }

    fs::path write(const std::string &name, const std::string &text)
    {
        const fs::path p = scratch() / name;
        std::ofstream(p) << text;
        return p;
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::string> lines(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);)
            out.push_back(l);
        return out;
    }

    struct Run
    {
        int code;
        std::string out, err;
    };

    template <typename F> Run run(F &&f)
    {
        std::ostringstream out, err;
        const int code = f(Console{out, err});
        return {code, out.str(), err.str()};
    }

    const std::string kRadio = R"(
carrier_hz: 28.0e9
bandwidth_hz: 100.0e6
subbands: 4
txpower_dbm: 20.0
noise_figure_db: 7.0
tx_array: {rows: 4, cols: 4, spacing: 0.5, bearing_deg: 0.0}
rx_array: {rows: 2, cols: 2, spacing: 0.5, bearing_deg: 180.0}
codebook:
  tx: {az_min: -60.0, az_max: 60.0, az_step: 5.0, zen_min: 80.0, zen_max: 100.0, zen_step: 10.0}
  rx: {az_min: -90.0, az_max: 90.0, az_step: 30.0, zen_min: 90.0, zen_max: 90.0, zen_step: 10.0}
training_period_s: 0.1
offered_bps: 122.0e6
overhead: 0.2
snapshot_dt_s: 0.1
duration_s: 0.5
)";

    const std::string kStaticScene = R"(
environment: {rectangles: []}
trajectory:
  tx: {kind: static, position: [0.0, 0.0, 10.0]}
  rx: {kind: static, position: [40.0, 0.0, 10.0]}
)";
} // namespace

TEST_CASE("shipped configs load", "[cli]")
{
    for (const char *name : {"etoile.cfg", "etoile_16x128.cfg", "corner.cfg"})
    {
        const ScenarioConfig cfg = load_scenario_config(kConfigs / name);
        CHECK(cfg.generative());
        CHECK(cfg.carrier_hz == 28e9);
    }
    const ScenarioConfig e = load_scenario_config(kConfigs / "etoile.cfg");
    CHECK(e.snapshot_times().size() == 91);
    CHECK(e.tx_codebook.az_step == 1.0);
    CHECK(e.tx_codebook.zen_step == 10.0);
}

TEST_CASE("generate-trace", "[cli]")
{
    SECTION("etoile gives one LOS row per snapshot")
    {
        const fs::path out = scratch() / "etoile_trace.csv";
        const Run r = run([&](Console io) { return cmd_generate_trace(kConfigs / "etoile.cfg", out, io); });
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("snapshots: 91") != std::string::npos);
        const TraceSet t = parse_trace(slurp(out));
        CHECK(t.size() == 91);
        for (const auto &rec : t.records())
            CHECK(rec.path_type == PathType::Los);
    }
    SECTION("corner mixes LOS, REFL and DIFF")
    {
        const fs::path out = scratch() / "corner_trace.csv";
        REQUIRE(run([&](Console io) { return cmd_generate_trace(kConfigs / "corner.cfg", out, io); }).code == 0);
        const TraceSet t = parse_trace(slurp(out));
        bool saw[3] = {};
        for (const auto &rec : t.records())
            saw[static_cast<int>(rec.path_type)] = true;
        CHECK(saw[0]);
        CHECK(saw[1]);
        CHECK(saw[2]);
        CHECK(validate_trace(t).empty());
    }
    SECTION("missing trajectory section")
    {
        const fs::path cfg = write("no_traj.cfg", kRadio + "environment: {rectangles: []}\n");
        const Run r = run([&](Console io) { return cmd_generate_trace(cfg, scratch() / "x.csv", io); });
        CHECK(r.code == kExitUsage);
        CHECK(r.err.find("trajectory") != std::string::npos);
    }
    SECTION("unwritable output")
    {
        const fs::path cfg = write("static.cfg", kRadio + kStaticScene);
        const Run r = run([&](Console io) { return cmd_generate_trace(cfg, scratch() / "no/such/dir.csv", io); });
        CHECK(r.code == kExitIo);
    }
    SECTION("trace-driven config cannot generate")
    {
        const fs::path cfg = write("trace_only.cfg", kRadio + "trace_path: whatever.csv\n");
        CHECK(run([&](Console io) { return cmd_generate_trace(cfg, scratch() / "x.csv", io); }).code == kExitUsage);
    }
}

TEST_CASE("config rejection lists every missing key", "[cli]")
{
    try
    {
        parse_scenario_config("carrier_hz: 28.0e9\ntx_array: {rows: 4}\n");
        FAIL("expected a config error");
    }
    catch (const ConfigError &e)
    {
        std::string all;
        for (const auto &d : e.diagnostics())
            all += d + "\n";
        for (const char *key :
             {"bandwidth_hz", "subbands", "txpower_dbm", "noise_figure_db", "tx_array.cols", "tx_array.spacing",
              "tx_array.bearing_deg", "rx_array.rows", "rx_array.cols", "rx_array.spacing", "rx_array.bearing_deg",
              "codebook.tx.az_min", "codebook.tx.az_max", "codebook.tx.az_step", "codebook.tx.zen_min",
              "codebook.tx.zen_max", "codebook.tx.zen_step", "codebook.rx.az_min", "codebook.rx.zen_step",
              "training_period_s", "offered_bps", "overhead", "snapshot_dt_s", "duration_s", "trace_path"})
            CHECK(all.find(std::string("missing key: ") + key) != std::string::npos);
        CHECK(all.find("missing key: carrier_hz") == std::string::npos);
        CHECK(all.find("missing key: tx_array.rows") == std::string::npos);
    }
}

TEST_CASE("config value checks", "[cli]")
{
    SECTION("trace path and generative scene are exclusive")
    {
        CHECK_THROWS_AS(parse_scenario_config(kRadio + kStaticScene + "trace_path: t.csv\n"), ConfigError);
    }
    SECTION("non-positive quantities")
    {
        std::string text = kRadio + kStaticScene;
        text.replace(text.find("bandwidth_hz: 100.0e6"), 21, "bandwidth_hz: -1.0");
        CHECK_THROWS_AS(parse_scenario_config(text), ConfigError);
    }
    SECTION("wrong type")
    {
        std::string text = kRadio + kStaticScene;
        text.replace(text.find("subbands: 4"), 11, "subbands: many");
        try
        {
            parse_scenario_config(text);
            FAIL("expected a config error");
        }
        catch (const ConfigError &e)
        {
            REQUIRE(e.diagnostics().size() == 1);
            CHECK(e.diagnostics()[0].find("subbands") != std::string::npos);
        }
    }
    SECTION("elevation is accepted in place of zenith")
    {
        std::string text = kRadio + kStaticScene;
        text.replace(text.find("zen_min: 80.0, zen_max: 100.0, zen_step: 10.0"), 44,
                     "el_min: -10.0, el_max: 30.0, el_step: 10.0");
        const ScenarioConfig cfg = parse_scenario_config(text);
        CHECK(cfg.tx_codebook.zen_min == 60.0);
        CHECK(cfg.tx_codebook.zen_max == 100.0);
        CHECK(cfg.tx_codebook.zen_step == 10.0);
    }
    SECTION("snapshot grid")
    {
        const ScenarioConfig cfg = parse_scenario_config(kRadio + kStaticScene);
        CHECK(cfg.snapshot_times() == std::vector<double>{0.0, 0.1, 0.2, 0.30000000000000004, 0.4, 0.5});
    }
}

TEST_CASE("validate", "[cli]")
{
    const std::string header(kTraceHeader);
    SECTION("valid file")
    {
        const fs::path p = write("ok.csv", header + "\n0,0,1,0,LOS,1e-7,1e-5,0,0,90,-180,90\n");
        CHECK(run([&](Console io) { return cmd_validate(p, io); }).code == kExitOk);
    }
    SECTION("duplicate LOS")
    {
        const fs::path p =
            write("dup.csv", header + "\n0,0,1,0,LOS,1e-7,1e-5,0,0,90,-180,90\n0,0,1,1,LOS,2e-7,1e-5,0,0,90,-180,90\n");
        const Run r = run([&](Console io) { return cmd_validate(p, io); });
        CHECK(r.code == kExitFindings);
        CHECK(r.out.find("DuplicateLos") != std::string::npos);
    }
    SECTION("truncated row")
    {
        const fs::path p = write("trunc.csv", header + "\n0,0,1,0,LOS,1e-7\n");
        CHECK(run([&](Console io) { return cmd_validate(p, io); }).code == kExitUsage);
    }
    SECTION("missing file")
    {
        CHECK(run([&](Console io) { return cmd_validate(scratch() / "absent.csv", io); }).code == kExitIo);
    }
}

TEST_CASE("simulate", "[cli]")
{
    SECTION("static LoS scenario gives constant LoS rows")
    {
        const fs::path cfg = write("static.cfg", kRadio + kStaticScene);
        const fs::path out = scratch() / "static_metrics.csv";
        const Run r = run([&](Console io) { return cmd_simulate(cfg, out, std::nullopt, std::nullopt, io); });
        REQUIRE(r.code == kExitOk);
        CHECK(r.out.find("los_fraction: 1") != std::string::npos);
        const auto rows = lines(slurp(out));
        REQUIRE(rows.size() == 7);
        CHECK(rows[0] == kMetricsHeader);
        const std::string tail = rows[1].substr(rows[1].find(','));
        CHECK(tail.rfind(",1,", 0) == 0);
        for (std::size_t i = 2; i < rows.size(); ++i)
            CHECK(rows[i].substr(rows[i].find(',')) == tail);
    }
    SECTION("replaying the generated trace reproduces the generative run")
    {
        const fs::path trace = scratch() / "corner_replay.csv";
        REQUIRE(run([&](Console io) { return cmd_generate_trace(kConfigs / "corner.cfg", trace, io); }).code == 0);
        const fs::path a = scratch() / "corner_a.csv", b = scratch() / "corner_b.csv";
        REQUIRE(run([&](Console io) { return cmd_simulate(kConfigs / "corner.cfg", a, std::nullopt, std::nullopt, io); })
                    .code == 0);
        REQUIRE(run([&](Console io) { return cmd_simulate(kConfigs / "corner.cfg", b, trace, std::nullopt, io); }).code ==
                0);
        CHECK(slurp(a) == slurp(b));
    }
    SECTION("byte-identical output for 1, 2 and 8 workers")
    {
        std::string ref;
        for (int w : {1, 2, 8})
        {
            const fs::path out = scratch() / ("corner_w" + std::to_string(w) + ".csv");
            REQUIRE(run([&](Console io) { return cmd_simulate(kConfigs / "corner.cfg", out, std::nullopt, w, io); })
                        .code == 0);
            if (ref.empty())
                ref = slurp(out);
            else
                CHECK(slurp(out) == ref);
        }
    }
    SECTION("link missing from the trace")
    {
        const fs::path trace = write("other_link.csv", std::string(kTraceHeader) + "\n0,0,5,0,LOS,1e-7,1e-5,0,0,90,-180,90\n");
        const fs::path cfg = write("static2.cfg", kRadio + kStaticScene);
        const Run r = run([&](Console io) { return cmd_simulate(cfg, scratch() / "m.csv", trace, std::nullopt, io); });
        CHECK(r.code == kExitUsage);
    }
}

TEST_CASE("sweep", "[cli]")
{
    const std::string header(kTraceHeader);
    // path at tx azimuth 20, rx azimuth -160 (nearest rx entry -150); only another link at t = 0.1
    const fs::path trace = write("sweep_trace.csv", header +
                                                        "\n0,0,1,0,LOS,1e-7,1e-5,0,20,90,-160,90"
                                                        "\n0.1,0,2,0,LOS,1e-7,1e-5,0,0,90,-180,90\n");
    const fs::path cfg = write("sweep.cfg", kRadio + "trace_path: sweep_trace.csv\n");

    SECTION("single path peaks at the quantized true angle")
    {
        const fs::path out = scratch() / "sweep0.csv";
        const Run r = run([&](Console io) { return cmd_sweep(cfg, "0.02", out, std::nullopt, io); });
        REQUIRE(r.code == kExitOk);
        const auto rows = lines(slurp(out));
        CHECK(rows[0] == "tx_az,tx_zen,rx_az,rx_zen,power_dbm");
        CHECK(rows.size() == 1 + 25 * 3 * 7 + 1);
        CHECK(rows.back().rfind("20,90,-150,90,", 0) == 0);
        CHECK(r.out.find("best: 20,90,-150,90,") != std::string::npos);
    }
    SECTION("empty snapshot is all floor")
    {
        const fs::path out = scratch() / "sweep1.csv";
        REQUIRE(run([&](Console io) { return cmd_sweep(cfg, "0.1", out, std::nullopt, io); }).code == kExitOk);
        const auto rows = lines(slurp(out));
        for (std::size_t i = 1; i < rows.size(); ++i)
            REQUIRE(rows[i].substr(rows[i].rfind(',') + 1) == "-200");
    }
    SECTION("bad times")
    {
        CHECK(run([&](Console io) { return cmd_sweep(cfg, "0.1s", scratch() / "s.csv", std::nullopt, io); }).code ==
              kExitUsage);
        CHECK(run([&](Console io) { return cmd_sweep(cfg, "", scratch() / "s.csv", std::nullopt, io); }).code ==
              kExitUsage);
        CHECK(run([&](Console io) { return cmd_sweep(cfg, "3.0", scratch() / "s.csv", std::nullopt, io); }).code ==
              kExitUsage);
    }
}

TEST_CASE("command line exit codes", "[cli]")
{
    const std::string exe = TRACECHAN_CLI_EXE;
    auto status = [&](const std::string &args) {
        const int raw = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("--help") == 0);
    CHECK(status("") == kExitUsage);
    CHECK(status("frobnicate") == kExitUsage);
    CHECK(status("simulate --out x.csv") == kExitUsage);
    CHECK(status("sweep --config " + (kConfigs / "corner.cfg").string() + " --time abc --out " +
                 (scratch() / "s.csv").string()) == kExitUsage);
    CHECK(status("validate " + (scratch() / "absent.csv").string()) == kExitIo);
    CHECK(status("generate-trace --config " + (kConfigs / "corner.cfg").string() + " --out " +
                 (scratch() / "cli_corner.csv").string()) == kExitOk);
    CHECK(status("validate --trace " + (scratch() / "cli_corner.csv").string()) == kExitOk);
}
