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

#include "oracles.hpp"

#include "tracechan/trace_model.hpp"

#include <catch_amalgamated.hpp>

#include <cstring>
#include <sstream>

using namespace tracechan;

namespace
{
    const std::string kHeader(kTraceHeader);

    std::string with_header(const std::string &rows) { return kHeader + "\n" + rows; }
}

TEST_CASE("header only gives an empty trace", "[trace_model]")
{
    TraceSet t = parse_trace(with_header(""));
    CHECK(t.empty());
    CHECK(t.snapshot_times().empty());
}

TEST_CASE("single LOS row maps field by field", "[trace_model]")
{
    TraceSet t = parse_trace(with_header("0.0,0,1,0,LOS,3.336e-7,1.0e-5,0.0,90.0,90.0,-90.0,90.0\n"));
    REQUIRE(t.size() == 1);
    const MpcRecord &r = t.records()[0];
    CHECK(r.t == 0.0);
    CHECK(r.tx_id == 0);
    CHECK(r.rx_id == 1);
    CHECK(r.path_id == 0);
    CHECK(r.path_type == PathType::Los);
    CHECK(r.delay_s == 3.336e-7);
    CHECK(r.gain_mag == 1.0e-5);
    CHECK(r.aod_az_deg == 90.0);
    CHECK(r.aoa_az_deg == -90.0);
    CHECK(t.snapshot_times() == std::vector<double>{0.0});
}

TEST_CASE("out of range zenith names the column and the line", "[trace_model]")
{
    const std::string text = with_header("0.0,0,1,0,LOS,1e-7,1e-5,0.0,0.0,90.0,0.0,200.0\n");
    try
    {
        parse_trace(text);
        FAIL("expected a parse error");
    }
    catch (const TraceParseError &e)
    {
        CHECK(e.column() == "aoa_zen_deg");
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("aoa_zen_deg") != std::string::npos);
    }
}

TEST_CASE("malformed inputs are rejected", "[trace_model]")
{
    SECTION("missing column")
    {
        CHECK_THROWS_AS(parse_trace("t,tx_id,rx_id,path_id,path_type,delay_s,gain_mag,phase_rad,aod_az_deg,aod_zen_deg,"
                                    "aoa_az_deg\n"),
                        TraceParseError);
    }
    SECTION("truncated row")
    {
        CHECK_THROWS_AS(parse_trace(with_header("0.0,0,1,0,LOS,1e-7\n")), TraceParseError);
    }
    SECTION("non-numeric field")
    {
        try
        {
            parse_trace(with_header("0.0,0,1,0,LOS,abc,1e-5,0,0,90,0,90\n"));
            FAIL("expected a parse error");
        }
        catch (const TraceParseError &e)
        {
            CHECK(e.column() == "delay_s");
        }
    }
    SECTION("negative delay")
    {
        CHECK_THROWS_AS(parse_trace(with_header("0.0,0,1,0,LOS,-1e-7,1e-5,0,0,90,0,90\n")), TraceParseError);
    }
    SECTION("azimuth at +180 is outside [-180, 180)")
    {
        CHECK_THROWS_AS(parse_trace(with_header("0.0,0,1,0,LOS,1e-7,1e-5,0,180,90,0,90\n")), TraceParseError);
    }
    SECTION("unknown path type")
    {
        CHECK_THROWS_AS(parse_trace(with_header("0.0,0,1,0,BOUNCE,1e-7,1e-5,0,0,90,0,90\n")), TraceParseError);
    }
}

TEST_CASE("columns are matched by name and extra columns warn", "[trace_model]")
{
    const std::string text = "doppler_hz,t,tx_id,rx_id,path_id,path_type,delay_s,gain_mag,phase_rad,aod_az_deg,"
                             "aod_zen_deg,aoa_az_deg,aoa_zen_deg\n"
                             "12.5,0.5,2,3,4,DIFF,1e-7,2e-5,0.25,10,80,-170,100\n";
    std::vector<std::string> warnings;
    TraceSet t = parse_trace(text, &warnings);
    REQUIRE(t.size() == 1);
    CHECK(warnings.size() == 1);
    CHECK(t.records()[0].path_type == PathType::Diffraction);
    CHECK(t.records()[0].t == 0.5);
    CHECK(t.records()[0].aoa_az_deg == -170.0);
}

TEST_CASE("path type names", "[trace_model]")
{
    for (PathType p : {PathType::Los, PathType::Reflection, PathType::Diffraction, PathType::Scattering})
        CHECK(path_type_from_string(to_string(p)) == p);
    CHECK(to_string(PathType::Reflection) == "REFL");
    CHECK_FALSE(path_type_from_string("LOSS").has_value());
}

TEST_CASE("write then parse is the identity", "[trace_model][property]")
{
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<int> n_paths(0, 6);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<MpcRecord> recs;
        for (int s = 0; s < 5; ++s)
        {
            const double t = 0.1 * s + 1e-3 * trial;
            const int n = n_paths(rng);
            for (int p = 0; p < n; ++p)
                recs.push_back(oracle::random_record(rng, t, static_cast<std::uint32_t>(p)));
        }
        const TraceSet original(recs);
        const TraceSet back = parse_trace(write_trace(original));
        REQUIRE(back == original);
    }
}

TEST_CASE("phase of -pi round-trips bit for bit", "[trace_model]")
{
    MpcRecord r;
    r.phase_rad = -3.141592653589793;
    r.gain_mag = 1e-5;
    const TraceSet back = parse_trace(write_trace(TraceSet({r})));
    const double v = back.records()[0].phase_rad;
    CHECK(std::memcmp(&v, &r.phase_rad, sizeof v) == 0);
}

TEST_CASE("empty trace writes only the header", "[trace_model]")
{
    CHECK(write_trace(TraceSet()) == kHeader + "\n");
}

TEST_CASE("grouping keeps file order and lists outage snapshots", "[trace_model]")
{
    MpcRecord a, b, c;
    a.rx_id = b.rx_id = c.rx_id = 1;
    a.path_id = 3;
    b.path_id = 1;
    c.t = 0.2;
    c.path_id = 0;
    const TraceSet t({a, b, c}, {0.1});
    CHECK(t.snapshot_times() == std::vector<double>{0.0, 0.1, 0.2});
    const Snapshot s0 = t.snapshot(0.0, {0, 1});
    REQUIRE(s0.paths.size() == 2);
    CHECK(s0.paths[0].path_id == 3);
    CHECK(s0.paths[1].path_id == 1);
    CHECK(t.snapshot(0.1, {0, 1}).paths.empty());
    CHECK(t.has_link({0, 1}));
    CHECK_FALSE(t.has_link({1, 0}));
}

TEST_CASE("validation findings", "[trace_model]")
{
    MpcRecord los;
    los.gain_mag = 1e-5;

    SECTION("valid single snapshot")
    {
        CHECK(validate_trace(TraceSet({los})).empty());
    }
    SECTION("two LOS records in one group")
    {
        MpcRecord second = los;
        second.path_id = 1;
        const auto report = validate_trace(TraceSet({los, second}));
        CHECK(report.violations.size() == 1);
        CHECK(report.count(ViolationKind::DuplicateLos) == 1);
    }
    SECTION("snapshot times going backwards")
    {
        MpcRecord late = los, early = los;
        late.t = 0.2;
        early.t = 0.1;
        const auto report = validate_trace(TraceSet({late, early}));
        CHECK(report.violations.size() == 1);
        CHECK(report.count(ViolationKind::NonMonotonicTime) == 1);
    }
    SECTION("duplicate path id")
    {
        MpcRecord refl = los;
        refl.path_type = PathType::Reflection;
        const auto report = validate_trace(TraceSet({los, refl}));
        CHECK(report.count(ViolationKind::DuplicatePathId) == 1);
    }
}
