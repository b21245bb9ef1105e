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

#ifndef TRACECHAN_RT_ORACLE_HPP
#define TRACECHAN_RT_ORACLE_HPP

#include "tracechan/channel_engine.hpp"
#include "tracechan/common.hpp"
#include "tracechan/trace_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace tracechan
{
    // Planar parallelogram spanned by `edge_u` and `edge_v` from `corner`.
    // Edge numbering for diffraction flags:
    //   0: corner -> corner + u
    //   1: corner + u -> corner + u + v
    //   2: corner + v -> corner + u + v
    //   3: corner -> corner + v
    struct Rectangle
    {
        Vec3 corner = Vec3::Zero();
        Vec3 edge_u = Vec3::UnitX();
        Vec3 edge_v = Vec3::UnitY();
        double reflection_coeff = 0.7; // amplitude, in [0, 1]
        std::array<bool, 4> diffracting_edges{};

        void validate() const;
        Vec3 normal() const; // unit, u x v
        std::pair<Vec3, Vec3> edge(int i) const;
    };

    struct Environment
    {
        std::vector<Rectangle> rectangles;

        void validate() const;
    };

    // True iff the open segment (a, b) crosses the interior or boundary of
    // `rect`; touching at an endpoint does not count.
    bool segment_hits_rectangle(const Vec3 &a, const Vec3 &b, const Rectangle &rect);

    bool los_blocked(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env);

    // Free-space path: delay d/c, gain lambda/(4 pi d), phase -2 pi d/lambda
    // wrapped to [-pi, pi). Returns nullopt when blocked.
    std::optional<MpcRecord> trace_los(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, double carrier_hz);

    // Image-method specular paths over ordered rectangle sequences of length
    // 1..max_order (no rectangle twice in a row). max_order must be <= 4.
    std::vector<MpcRecord> trace_reflections(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, int max_order,
                                             double carrier_hz);

    // Knife-edge loss in dB for Fresnel parameter nu (0 for nu <= -0.78)
    double knife_edge_loss_db(double nu);

    // One path per flagged edge, only when the direct path is blocked
    std::vector<MpcRecord> trace_diffraction(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env,
                                             double carrier_hz);

    // ---- Trajectories ---------------------------------------------------------

    struct TrajectorySample
    {
        double t = 0.0;
        Vec3 position = Vec3::Zero();
        Vec3 velocity = Vec3::Zero();
    };

    // Time-ordered samples of one node. state_at() interpolates linearly
    // between samples and throws std::out_of_range outside the covered span.
    class Trajectory
    {
    public:
        explicit Trajectory(std::vector<TrajectorySample> samples);

        const std::vector<TrajectorySample> &samples() const { return samples_; }
        NodeState state_at(double t) const;

    private:
        std::vector<TrajectorySample> samples_;
    };

    struct StaticMotion
    {
        Vec3 position = Vec3::Zero();
    };

    struct LinearMotion
    {
        Vec3 start = Vec3::Zero();
        Vec3 velocity = Vec3::Zero();
    };

    // Horizontal circle about `center` (z fixed at center.z)
    struct CircularMotion
    {
        Vec3 center = Vec3::Zero();
        double radius = 1.0;
        double initial_angle_deg = 0.0;
        double angular_rate_deg_s = 0.0;
    };

    using MotionParams = std::variant<StaticMotion, LinearMotion, CircularMotion>;

    // n samples at t0 + i*dt with analytic velocities
    Trajectory make_trajectory(const MotionParams &params, double t0, double dt, int n);

    // ---- Trace generation -----------------------------------------------------

    struct NodeTrack
    {
        std::uint32_t id = 0;
        Trajectory trajectory;
    };

    struct TraceScenario
    {
        Environment environment;
        std::vector<NodeTrack> transmitters;
        std::vector<NodeTrack> receivers;
        double carrier_hz = 28.0e9;
        std::vector<double> snapshot_times;
        int max_reflection_order = 4;
    };

    // Paths of one link at one set of positions, path_ids 0..n-1
    std::vector<MpcRecord> trace_link(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, int max_order,
                                      double carrier_hz);

    // Every (snapshot, tx, rx) combination; snapshots without any path are
    // kept in the snapshot-time index
    TraceSet generate_trace(const TraceScenario &scenario);

} // namespace tracechan

#endif
