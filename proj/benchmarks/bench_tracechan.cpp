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

// Run with --benchmark_min_time=2 for stable numbers.

#include "tracechan/array_geometry.hpp"
#include "tracechan/beam_management.hpp"
#include "tracechan/channel_engine.hpp"
#include "tracechan/rt_oracle.hpp"
#include "tracechan/trace_model.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace tracechan;

namespace
{
    constexpr double kFc = 28e9;
    const double kLambda = 299792458.0 / kFc;

    Snapshot random_snapshot(int n_paths, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<MpcRecord> paths;
        for (int p = 0; p < n_paths; ++p)
        {
            MpcRecord r;
            r.rx_id = 1;
            r.path_id = static_cast<std::uint32_t>(p);
            r.path_type = p == 0 ? PathType::Los : PathType::Reflection;
            r.delay_s = 1e-6 * u(rng);
            r.gain_mag = 1e-4 * u(rng);
            r.phase_rad = 6.0 * u(rng) - 3.0;
            r.aod_az_deg = 360.0 * u(rng) - 180.0;
            r.aod_zen_deg = 60.0 + 60.0 * u(rng);
            r.aoa_az_deg = 360.0 * u(rng) - 180.0;
            r.aoa_zen_deg = 60.0 + 60.0 * u(rng);
            paths.push_back(r);
        }
        return {0.0, {0, 1}, std::move(paths)};
    }

    SubbandGrid grid(int k)
    {
        SubbandGrid g;
        g.carrier_hz = kFc;
        g.n_subbands = k;
        return g;
    }
} // namespace

static void BM_BuildChannel(benchmark::State &state)
{
    const int cols = static_cast<int>(state.range(0));
    const PlanarArray tx(16, cols, kLambda), rx(4, 4, kLambda);
    const Snapshot snap = random_snapshot(static_cast<int>(state.range(1)), 7);
    NodeState rx_state;
    rx_state.velocity = Vec3(1.5, 0, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_channel_matrices(snap, tx, rx, {}, rx_state, grid(16), 0.0));
}
BENCHMARK(BM_BuildChannel)->Args({16, 1})->Args({16, 10})->Args({128, 10})->Unit(benchmark::kMicrosecond);

static void BM_BeamSweep(benchmark::State &state)
{
    const int cols = static_cast<int>(state.range(0));
    const PlanarArray tx(16, cols, kLambda), rx(4, 4, kLambda, 0.5, -135.0);
    const auto cb_tx = generate_codebook(tx, {-90, 90, 1, 60, 120, 10});
    const auto cb_rx = generate_codebook(rx, {-90, 90, 10, 60, 120, 10});
    const auto h = build_channel_matrices(random_snapshot(5, 11), tx, rx, {}, {}, grid(16), 0.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(ideal_beam_sweep(h, cb_tx, cb_rx, 1.0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cb_tx.size() * cb_rx.size()));
}
BENCHMARK(BM_BeamSweep)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_GenerateCodebook(benchmark::State &state)
{
    const PlanarArray tx(16, static_cast<int>(state.range(0)), kLambda);
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_codebook(tx, {-90, 90, 1, 60, 120, 10}));
}
BENCHMARK(BM_GenerateCodebook)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_ParseTrace(benchmark::State &state)
{
    std::vector<MpcRecord> recs;
    for (int s = 0; s < static_cast<int>(state.range(0)); ++s)
    {
        Snapshot snap = random_snapshot(8, static_cast<std::uint64_t>(s));
        for (auto &r : snap.paths)
        {
            r.t = 0.1 * s;
            recs.push_back(r);
        }
    }
    const std::string text = write_trace(TraceSet(recs));
    for (auto _ : state)
        benchmark::DoNotOptimize(parse_trace(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseTrace)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_TraceLink(benchmark::State &state)
{
    Environment env;
    Rectangle west;
    west.edge_u = Vec3(0, 60, 0);
    west.edge_v = Vec3(0, 0, 30);
    west.diffracting_edges = {false, false, false, true};
    Rectangle south;
    south.edge_u = Vec3(60, 0, 0);
    south.edge_v = Vec3(0, 0, 30);
    env.rectangles = {west, south};
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(trace_link(Vec3(40, -15, 10), Vec3(-8, 20, 1.5), env, order, kFc));
}
BENCHMARK(BM_TraceLink)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
