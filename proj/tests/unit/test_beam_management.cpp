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

#include "tracechan/beam_management.hpp"
#include "tracechan/rt_oracle.hpp"

#include <catch_amalgamated.hpp>

using namespace tracechan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const double kLambda = oracle::lambda(28e9);

    SubbandGrid grid(int k)
    {
        SubbandGrid g;
        g.n_subbands = k;
        return g;
    }

    CodebookGrid cb(double az_min, double az_max, double az_step, double zen_min, double zen_max, double zen_step)
    {
        return {az_min, az_max, az_step, zen_min, zen_max, zen_step};
    }

    Snapshot snapshot_of(std::vector<MpcRecord> paths)
    {
        for (std::size_t i = 0; i < paths.size(); ++i)
        {
            paths[i].tx_id = 0;
            paths[i].rx_id = 1;
            paths[i].t = 0.0;
            paths[i].path_id = static_cast<std::uint32_t>(i);
        }
        return {0.0, {0, 1}, std::move(paths)};
    }

    ChannelMatrixSet random_channel(std::mt19937_64 &rng, const PlanarArray &tx, const PlanarArray &rx, int paths,
                                    int k)
    {
        std::vector<MpcRecord> recs;
        for (int p = 0; p < paths; ++p)
            recs.push_back(oracle::random_record(rng, 0.0, static_cast<std::uint32_t>(p)));
        return build_channel_matrices(snapshot_of(recs), tx, rx, {}, {}, grid(k), 0.0);
    }

    // Selected tx azimuth for a single horizontal LoS path at `az_deg`
    double selected_azimuth(const PlanarArray &tx, const BeamCodebook &cb_tx, double az_deg)
    {
        const PlanarArray one(1, 1, kLambda);
        const BeamCodebook cb_rx = generate_codebook(one, cb(0, 0, 1, 90, 90, 10));
        const Vec3 rx(100.0 * std::cos(deg_to_rad(az_deg)), 100.0 * std::sin(deg_to_rad(az_deg)), 0.0);
        auto los = trace_los(Vec3::Zero(), rx, Environment{}, 28e9);
        const auto h = build_channel_matrices(snapshot_of({*los}), tx, one, {}, {}, grid(1), 0.0);
        return ideal_beam_sweep(h, cb_tx, cb_rx, 1.0).tx_direction.azimuth_deg();
    }
} // namespace

TEST_CASE("codebook sizes and normalization", "[beam_management]")
{
    const PlanarArray a(4, 4, kLambda);
    CHECK(generate_codebook(a, cb(0, 90, 1, 90, 90, 10)).size() == 91);
    CHECK(generate_codebook(a, cb(0, 0, 1, 60, 120, 10)).size() == 7);

    const auto book = generate_codebook(a, cb(-90, 90, 1, 60, 120, 10));
    CHECK(book.size() == 181 * 7);
    for (std::size_t i = 0; i < book.size(); ++i)
        REQUIRE_THAT(book.beam(i).weights.norm(), WithinAbs(1.0, 1e-12));

    // zenith-major ordering
    CHECK_THAT(book.direction(1).azimuth_deg(), WithinAbs(-89.0, 1e-12));
    CHECK_THAT(book.direction(181).zenith_deg(), WithinAbs(70.0, 1e-12));
}

TEST_CASE("codebook weights are normalized steering vectors", "[beam_management]")
{
    const PlanarArray a(2, 4, kLambda, 0.5, 30.0);
    const auto book = generate_codebook(a, cb(-20, 20, 10, 80, 100, 10));
    for (std::size_t i = 0; i < book.size(); ++i)
    {
        const auto sv = steering_vector(a, book.direction(i));
        REQUIRE((book.beam(i).weights - sv.response / std::sqrt(8.0)).norm() < 1e-12);
    }
    // azimuth grid is relative to the array bearing
    CHECK_THAT(book.direction(0).azimuth_deg(), WithinAbs(10.0, 1e-12));
    // nominal angles are exact
    CHECK(book.angles(0).azimuth_deg == 10.0);
    CHECK(book.angles(4).azimuth_deg == 50.0);
    CHECK(book.angles(5).zenith_deg == 90.0);
}

TEST_CASE("bad codebook grids are rejected", "[beam_management]")
{
    const PlanarArray a(2, 2, kLambda);
    CHECK_THROWS_AS(generate_codebook(a, cb(0, 10, 0, 90, 90, 10)), std::invalid_argument);
    CHECK_THROWS_AS(generate_codebook(a, cb(10, 0, 1, 90, 90, 10)), std::invalid_argument);
    CHECK_THROWS_AS(generate_codebook(a, cb(0, 10, 1, 90, 80, 10)), std::invalid_argument);
    CHECK_THROWS_AS(generate_codebook(a, cb(0, 10, 1, 90, 190, 10)), std::invalid_argument);
}

TEST_CASE("sweep finds a LoS source at 37 degrees", "[beam_management]")
{
    const PlanarArray tx(16, 16, kLambda);
    const auto cb_tx = generate_codebook(tx, cb(-90, 90, 1, 60, 120, 10));
    CHECK_THAT(selected_azimuth(tx, cb_tx, 37.0), WithinAbs(37.0, 1e-9));
}

TEST_CASE("zero channel selects the first pair", "[beam_management]")
{
    const PlanarArray a(2, 2, kLambda);
    const auto h = build_channel_matrices(snapshot_of({}), a, a, {}, {}, grid(4), 0.0);
    const auto book = generate_codebook(a, cb(-30, 30, 10, 80, 100, 10));
    const auto sel = ideal_beam_sweep(h, book, book, 1.0);
    CHECK(sel.tx_index == 0);
    CHECK(sel.rx_index == 0);
    CHECK(sel.power_w == 0.0);
}

TEST_CASE("symmetric paths tie and resolve to the lower index", "[beam_management]")
{
    const PlanarArray tx(1, 8, kLambda), one(1, 1, kLambda);
    MpcRecord a, b;
    a.gain_mag = b.gain_mag = 1e-4;
    a.aod_az_deg = 20.0;
    b.aod_az_deg = -20.0;
    b.path_type = PathType::Reflection;
    const auto h = build_channel_matrices(snapshot_of({a, b}), tx, one, {}, {}, grid(1), 0.0);
    const auto cb_tx = generate_codebook(tx, cb(-30, 30, 10, 90, 90, 10));
    const auto cb_rx = generate_codebook(one, cb(0, 0, 1, 90, 90, 10));

    const auto table = sweep_power_table(h, cb_tx, cb_rx, 1.0);
    CHECK_THAT(table(0, 1), WithinRel(table(0, 5), 1e-12));
    const auto sel = ideal_beam_sweep(h, cb_tx, cb_rx, 1.0);
    CHECK(sel.tx_index == 1);
    CHECK_THAT(sel.tx_direction.azimuth_deg(), WithinAbs(-20.0, 1e-12));
}

TEST_CASE("power table equals per-pair beamformed power", "[beam_management][oracle]")
{
    std::mt19937_64 rng(8);
    const PlanarArray tx(4, 4, kLambda, 0.5, 15.0), rx(2, 2, kLambda);
    const auto h = random_channel(rng, tx, rx, 5, 3);
    const auto cb_tx = generate_codebook(tx, cb(-60, 60, 20, 70, 110, 20));
    const auto cb_rx = generate_codebook(rx, cb(-90, 90, 45, 90, 90, 10));
    const auto table = sweep_power_table(h, cb_tx, cb_rx, 2.0);
    for (std::size_t t = 0; t < cb_tx.size(); ++t)
        for (std::size_t r = 0; r < cb_rx.size(); ++r)
            REQUIRE_THAT(table(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)),
                         WithinRel(oracle::quadratic_power(h.H, cb_tx.beam(t).weights, cb_rx.beam(r).weights, 2.0),
                                   1e-12));
}

TEST_CASE("sweep optimality on random channels", "[beam_management][property]")
{
    std::mt19937_64 rng(12);
    const PlanarArray tx(4, 8, kLambda), rx(2, 2, kLambda, 0.5, 180.0);
    const auto cb_tx = generate_codebook(tx, cb(-90, 90, 5, 60, 120, 10));
    const auto cb_rx = generate_codebook(rx, cb(-90, 90, 30, 60, 120, 30));
    std::uniform_int_distribution<std::size_t> pick_tx(0, cb_tx.size() - 1), pick_rx(0, cb_rx.size() - 1);
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto h = random_channel(rng, tx, rx, 1 + trial % 10, 4);
        const auto sel = ideal_beam_sweep(h, cb_tx, cb_rx, 1.0);
        CHECK_THAT(sel.power_w,
                   WithinRel(oracle::quadratic_power(h.H, cb_tx.beam(sel.tx_index).weights,
                                                     cb_rx.beam(sel.rx_index).weights, 1.0),
                             1e-12));
        for (int i = 0; i < 200; ++i)
        {
            const auto t = pick_tx(rng), r = pick_rx(rng);
            REQUIRE(oracle::quadratic_power(h.H, cb_tx.beam(t).weights, cb_rx.beam(r).weights, 1.0) <=
                    sel.power_w * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("sweep is identical for any worker count", "[beam_management][property]")
{
    std::mt19937_64 rng(13);
    const PlanarArray tx(8, 8, kLambda), rx(2, 2, kLambda);
    const auto cb_tx = generate_codebook(tx, cb(-90, 90, 1, 60, 120, 10));
    const auto cb_rx = generate_codebook(rx, cb(-90, 90, 30, 90, 90, 10));
    const auto h = random_channel(rng, tx, rx, 6, 4);
    const auto ref = sweep_power_table(h, cb_tx, cb_rx, 1.0, 1);
    const auto sel = ideal_beam_sweep(h, cb_tx, cb_rx, 1.0, 1);
    for (int w : {2, 3, 8})
    {
        CHECK(sweep_power_table(h, cb_tx, cb_rx, 1.0, w) == ref);
        const auto s = ideal_beam_sweep(h, cb_tx, cb_rx, 1.0, w);
        CHECK(s.tx_index == sel.tx_index);
        CHECK(s.rx_index == sel.rx_index);
        CHECK(s.power_w == sel.power_w);
    }
}

TEST_CASE("halving the azimuth step never lowers the selected power", "[beam_management][property]")
{
    std::mt19937_64 rng(14);
    const PlanarArray tx(4, 8, kLambda), rx(2, 2, kLambda);
    const auto cb_rx = generate_codebook(rx, cb(-90, 90, 30, 90, 90, 10));
    for (double step : {20.0, 10.0, 4.0})
    {
        const auto coarse = generate_codebook(tx, cb(-80, 80, step, 60, 120, 20));
        const auto fine = generate_codebook(tx, cb(-80, 80, step / 2, 60, 120, 20));
        for (int trial = 0; trial < 10; ++trial)
        {
            const auto h = random_channel(rng, tx, rx, 3, 2);
            REQUIRE(ideal_beam_sweep(h, fine, cb_rx, 1.0).power_w >=
                    ideal_beam_sweep(h, coarse, cb_rx, 1.0).power_w * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("steering accuracy of a 16x16 array and end-fire degradation", "[beam_management][property]")
{
    const PlanarArray tx(16, 16, kLambda);
    const auto cb_tx = generate_codebook(tx, cb(-90, 90, 1, 60, 120, 10));
    double max_core = 0.0, max_endfire = 0.0;
    for (double phi = 0.0; phi <= 89.0; phi += 0.5)
    {
        const double err = std::abs(selected_azimuth(tx, cb_tx, phi + 0.3) - (phi + 0.3));
        if (phi + 0.3 <= 70.0)
        {
            REQUIRE(err <= 1.0);
            max_core = std::max(max_core, err);
        }
        else if (phi + 0.3 >= 75.0)
            max_endfire = std::max(max_endfire, err);
    }
    CHECK(max_endfire >= max_core);
}
