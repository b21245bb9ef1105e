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

#include "tracechan/rt_oracle.hpp"

#include "tracechan/array_geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace tracechan
{
    namespace
    {
        constexpr double kSegmentEps = 1e-9;  // fraction of a segment treated as its endpoint
        constexpr double kInsideTol = 1e-12;  // rectangle boundary tolerance (edge fractions)
        constexpr double kEdgeSearchTol = 1e-12; // metres

        // Edge coordinates of `p` (assumed on the plane): p - corner = a*u + b*v
        std::pair<double, double> plane_coords(const Rectangle &rect, const Vec3 &p)
        {
            const Vec3 w = p - rect.corner;
            const double uu = rect.edge_u.squaredNorm();
            const double vv = rect.edge_v.squaredNorm();
            const double uv = rect.edge_u.dot(rect.edge_v);
            const double wu = w.dot(rect.edge_u);
            const double wv = w.dot(rect.edge_v);
            const double det = uu * vv - uv * uv;
            return {(wu * vv - wv * uv) / det, (wv * uu - wu * uv) / det};
        }

        bool inside(const Rectangle &rect, const Vec3 &p)
        {
            auto [a, b] = plane_coords(rect, p);
            return a >= -kInsideTol && a <= 1.0 + kInsideTol && b >= -kInsideTol && b <= 1.0 + kInsideTol;
        }

        Vec3 mirror(const Vec3 &p, const Rectangle &rect)
        {
            const Vec3 n = rect.normal();
            return p - 2.0 * (p - rect.corner).dot(n) * n;
        }

        bool segment_blocked(const Vec3 &a, const Vec3 &b, const Environment &env)
        {
            return std::any_of(env.rectangles.begin(), env.rectangles.end(),
                               [&](const Rectangle &r) { return segment_hits_rectangle(a, b, r); });
        }

        MpcRecord make_record(PathType type, double length, double gain, const Vec3 &departure, const Vec3 &arrival,
                              double wavelength)
        {
            MpcRecord r;
            r.path_type = type;
            r.delay_s = length / kSpeedOfLight;
            r.gain_mag = gain;
            r.phase_rad = wrap_phase_rad(-2.0 * kPi * length / wavelength);

            Direction aod = direction_of(departure);
            Direction aoa = direction_of(arrival);
            r.aod_az_deg = wrap_azimuth_deg(rad_to_deg(aod.azimuth_rad));
            r.aod_zen_deg = std::clamp(rad_to_deg(aod.zenith_rad), 0.0, 180.0);
            r.aoa_az_deg = wrap_azimuth_deg(rad_to_deg(aoa.azimuth_rad));
            r.aoa_zen_deg = std::clamp(rad_to_deg(aoa.zenith_rad), 0.0, 180.0);
            return r;
        }

        double friis_amplitude(double length, double wavelength) { return wavelength / (4.0 * kPi * length); }

        void check_frequency(double carrier_hz)
        {
            if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
                throw std::invalid_argument("carrier frequency must be positive");
        }
    } // namespace

    // ---- Geometry -------------------------------------------------------------

    void Rectangle::validate() const
    {
        if (!corner.allFinite() || !edge_u.allFinite() || !edge_v.allFinite())
            throw std::invalid_argument("Rectangle: non-finite geometry");
        if (!(edge_u.cross(edge_v).norm() > 1e-12 * edge_u.norm() * edge_v.norm()) || edge_u.norm() == 0.0 ||
            edge_v.norm() == 0.0)
            throw std::invalid_argument("Rectangle: edge vectors must be non-zero and non-parallel");
        if (!(reflection_coeff >= 0.0 && reflection_coeff <= 1.0))
            throw std::invalid_argument("Rectangle: reflection coefficient must lie in [0, 1]");
    }

    Vec3 Rectangle::normal() const { return edge_u.cross(edge_v).normalized(); }

    std::pair<Vec3, Vec3> Rectangle::edge(int i) const
    {
        switch (i)
        {
        case 0:
            return {corner, corner + edge_u};
        case 1:
            return {corner + edge_u, corner + edge_u + edge_v};
        case 2:
            return {corner + edge_v, corner + edge_u + edge_v};
        case 3:
            return {corner, corner + edge_v};
        default:
            throw std::out_of_range("Rectangle::edge: index must be 0..3");
        }
    }

    void Environment::validate() const
    {
        for (std::size_t i = 0; i < rectangles.size(); ++i)
        {
            try
            {
                rectangles[i].validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw std::invalid_argument("rectangle " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    bool segment_hits_rectangle(const Vec3 &a, const Vec3 &b, const Rectangle &rect)
    {
        const Vec3 n = rect.edge_u.cross(rect.edge_v);
        const double da = (a - rect.corner).dot(n);
        const double db = (b - rect.corner).dot(n);
        if (!(da * db < 0.0))
            return false; // same side, touching, or in-plane
        const double s = da / (da - db);
        if (s <= kSegmentEps || s >= 1.0 - kSegmentEps)
            return false;
        return inside(rect, a + s * (b - a));
    }

    bool los_blocked(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env)
    {
        return segment_blocked(p_tx, p_rx, env);
    }

    // ---- Paths ----------------------------------------------------------------

    std::optional<MpcRecord> trace_los(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, double carrier_hz)
    {
        check_frequency(carrier_hz);
        const double d = (p_rx - p_tx).norm();
        if (!(d > 0.0))
            throw std::invalid_argument("trace_los: transmitter and receiver coincide");
        if (los_blocked(p_tx, p_rx, env))
            return std::nullopt;
        const double lambda = wavelength_from_frequency(carrier_hz);
        return make_record(PathType::Los, d, friis_amplitude(d, lambda), p_rx - p_tx, p_tx - p_rx, lambda);
    }

    std::vector<MpcRecord> trace_reflections(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, int max_order,
                                             double carrier_hz)
    {
        check_frequency(carrier_hz);
        if (max_order < 0 || max_order > 4)
            throw std::invalid_argument("trace_reflections: reflection order must lie in [0, 4]");

        const double lambda = wavelength_from_frequency(carrier_hz);
        const int n_rect = static_cast<int>(env.rectangles.size());
        std::vector<MpcRecord> out;
        if (n_rect == 0)
            return out;

        std::vector<int> seq;
        std::vector<Vec3> images, points;

        for (int order = 1; order <= max_order; ++order)
        {
            // Odometer over sequences of length `order`
            seq.assign(static_cast<std::size_t>(order), 0);
            while (true)
            {
                bool valid_seq = true;
                for (int i = 1; i < order; ++i)
                    if (seq[static_cast<std::size_t>(i)] == seq[static_cast<std::size_t>(i - 1)])
                        valid_seq = false;

                if (valid_seq)
                {
                    images.assign(1, p_tx);
                    for (int i = 0; i < order; ++i)
                        images.push_back(mirror(images.back(), env.rectangles[static_cast<std::size_t>(seq[static_cast<std::size_t>(i)])]));

                    // Walk back from the receiver towards successive images
                    points.assign(static_cast<std::size_t>(order) + 2, Vec3::Zero());
                    points.front() = p_tx;
                    points.back() = p_rx;
                    Vec3 cur = p_rx;
                    bool ok = true;
                    for (int i = order; i >= 1 && ok; --i)
                    {
                        const Rectangle &rect = env.rectangles[static_cast<std::size_t>(seq[static_cast<std::size_t>(i - 1)])];
                        const Vec3 &img = images[static_cast<std::size_t>(i)];
                        const Vec3 n = rect.normal();
                        const double dc = (cur - rect.corner).dot(n);
                        const double di = (img - rect.corner).dot(n);
                        if (!(dc * di < 0.0))
                        {
                            ok = false;
                            break;
                        }
                        const Vec3 hit = cur + dc / (dc - di) * (img - cur);
                        if (!inside(rect, hit))
                        {
                            ok = false;
                            break;
                        }
                        points[static_cast<std::size_t>(i)] = hit;
                        cur = hit;
                    }

                    for (std::size_t i = 0; ok && i + 1 < points.size(); ++i)
                        if ((points[i + 1] - points[i]).norm() <= 0.0 || segment_blocked(points[i], points[i + 1], env))
                            ok = false;

                    if (ok)
                    {
                        double gamma = 1.0;
                        for (int r : seq)
                            gamma *= env.rectangles[static_cast<std::size_t>(r)].reflection_coeff;
                        const double length = (images.back() - p_rx).norm();
                        out.push_back(make_record(PathType::Reflection, length, friis_amplitude(length, lambda) * gamma,
                                                  points[1] - p_tx, points[points.size() - 2] - p_rx, lambda));
                    }
                }

                int pos = order - 1;
                while (pos >= 0 && ++seq[static_cast<std::size_t>(pos)] == n_rect)
                    seq[static_cast<std::size_t>(pos--)] = 0;
                if (pos < 0)
                    break;
            }
        }
        return out;
    }

    double knife_edge_loss_db(double nu)
    {
        if (nu <= -0.78)
            return 0.0;
        const double x = nu - 0.1;
        return 6.9 + 20.0 * std::log10(std::sqrt(x * x + 1.0) + x);
    }

    std::vector<MpcRecord> trace_diffraction(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env,
                                             double carrier_hz)
    {
        check_frequency(carrier_hz);
        std::vector<MpcRecord> out;
        if (!los_blocked(p_tx, p_rx, env))
            return out;

        const double lambda = wavelength_from_frequency(carrier_hz);
        const Vec3 direct = p_rx - p_tx;

        for (const Rectangle &rect : env.rectangles)
            for (int e = 0; e < 4; ++e)
            {
                if (!rect.diffracting_edges[static_cast<std::size_t>(e)])
                    continue;

                const auto [e0, e1] = rect.edge(e);
                const Vec3 span = e1 - e0;
                const double edge_len = span.norm();
                // Path length is convex along the edge; bracket the root of
                // its slope
                auto slope = [&](double s) {
                    const Vec3 p = e0 + s * span;
                    const Vec3 to_tx = p - p_tx, to_rx = p - p_rx;
                    const double a = to_tx.norm(), b = to_rx.norm();
                    return (a > 0.0 ? span.dot(to_tx) / a : 0.0) + (b > 0.0 ? span.dot(to_rx) / b : 0.0);
                };
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 200 && (hi - lo) * edge_len > kEdgeSearchTol; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (slope(mid) > 0.0)
                        hi = mid;
                    else
                        lo = mid;
                }
                const Vec3 point = e0 + 0.5 * (lo + hi) * span;
                const double d1 = (point - p_tx).norm();
                const double d2 = (p_rx - point).norm();
                if (!(d1 > 0.0) || !(d2 > 0.0))
                    continue;
                if (segment_blocked(p_tx, point, env) || segment_blocked(point, p_rx, env))
                    continue;

                // Clearance of the direct line from the edge; positive when
                // this obstacle itself obstructs the direct path
                double h = (point - p_tx).cross(direct).norm() / direct.norm();
                if (!segment_hits_rectangle(p_tx, p_rx, rect))
                    h = -h;
                const double nu = h * std::sqrt(2.0 * (d1 + d2) / (lambda * d1 * d2));
                const double loss_db = knife_edge_loss_db(nu);

                const double length = d1 + d2;
                out.push_back(make_record(PathType::Diffraction, length,
                                          friis_amplitude(length, lambda) * std::pow(10.0, -loss_db / 20.0),
                                          point - p_tx, point - p_rx, lambda));
            }
        return out;
    }

    // ---- Trajectories ---------------------------------------------------------

    Trajectory::Trajectory(std::vector<TrajectorySample> samples) : samples_(std::move(samples))
    {
        if (samples_.empty())
            throw std::invalid_argument("Trajectory: at least one sample required");
        for (std::size_t i = 0; i < samples_.size(); ++i)
        {
            const auto &s = samples_[i];
            if (!std::isfinite(s.t) || !s.position.allFinite() || !s.velocity.allFinite())
                throw std::invalid_argument("Trajectory: non-finite sample " + std::to_string(i));
            if (i > 0 && !(s.t > samples_[i - 1].t))
                throw std::invalid_argument("Trajectory: sample times must be strictly increasing");
        }
    }

    NodeState Trajectory::state_at(double t) const
    {
        constexpr double eps = 1e-9;
        const auto &first = samples_.front();
        const auto &last = samples_.back();
        if (t < first.t - eps || t > last.t + eps)
            throw std::out_of_range("Trajectory: time " + std::to_string(t) + " outside [" + std::to_string(first.t) +
                                    ", " + std::to_string(last.t) + "]");
        if (t <= first.t)
            return {first.position, first.velocity};
        if (t >= last.t)
            return {last.position, last.velocity};

        auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const TrajectorySample &s, double v) { return s.t < v; });
        if (std::abs(it->t - t) <= eps)
            return {it->position, it->velocity};
        const auto &b = *it;
        const auto &a = *(it - 1);
        const double f = (t - a.t) / (b.t - a.t);
        return {a.position + f * (b.position - a.position), a.velocity + f * (b.velocity - a.velocity)};
    }

    Trajectory make_trajectory(const MotionParams &params, double t0, double dt, int n)
    {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw std::invalid_argument("make_trajectory: dt must be positive");
        if (n < 1)
            throw std::invalid_argument("make_trajectory: at least one sample required");
        if (const auto *c = std::get_if<CircularMotion>(&params); c && !(c->radius > 0.0))
            throw std::invalid_argument("make_trajectory: circular radius must be positive");

        std::vector<TrajectorySample> samples(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
        {
            const double elapsed = i * dt;
            auto &s = samples[static_cast<std::size_t>(i)];
            s.t = t0 + elapsed;
            std::visit(
                [&](const auto &m) {
                    using T = std::decay_t<decltype(m)>;
                    if constexpr (std::is_same_v<T, StaticMotion>)
                    {
                        s.position = m.position;
                        s.velocity = Vec3::Zero();
                    }
                    else if constexpr (std::is_same_v<T, LinearMotion>)
                    {
                        s.position = m.start + elapsed * m.velocity;
                        s.velocity = m.velocity;
                    }
                    else
                    {
                        const double a = deg_to_rad(m.initial_angle_deg + m.angular_rate_deg_s * elapsed);
                        const double w = deg_to_rad(m.angular_rate_deg_s);
                        s.position = m.center + m.radius * Vec3(std::cos(a), std::sin(a), 0.0);
                        s.velocity = m.radius * w * Vec3(-std::sin(a), std::cos(a), 0.0);
                    }
                },
                params);
        }
        return Trajectory(std::move(samples));
    }

    // ---- Trace generation -----------------------------------------------------

    std::vector<MpcRecord> trace_link(const Vec3 &p_tx, const Vec3 &p_rx, const Environment &env, int max_order,
                                      double carrier_hz)
    {
        std::vector<MpcRecord> paths;
        if (auto los = trace_los(p_tx, p_rx, env, carrier_hz))
            paths.push_back(*los);
        for (auto &r : trace_reflections(p_tx, p_rx, env, max_order, carrier_hz))
            paths.push_back(r);
        for (auto &r : trace_diffraction(p_tx, p_rx, env, carrier_hz))
            paths.push_back(r);
        for (std::size_t i = 0; i < paths.size(); ++i)
            paths[i].path_id = static_cast<std::uint32_t>(i);
        return paths;
    }

    TraceSet generate_trace(const TraceScenario &scenario)
    {
        scenario.environment.validate();
        std::vector<double> times = scenario.snapshot_times;
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());

        std::vector<MpcRecord> records;
        for (double t : times)
            for (const auto &tx : scenario.transmitters)
            {
                const Vec3 p_tx = tx.trajectory.state_at(t).position;
                for (const auto &rx : scenario.receivers)
                {
                    const Vec3 p_rx = rx.trajectory.state_at(t).position;
                    for (auto &r : trace_link(p_tx, p_rx, scenario.environment, scenario.max_reflection_order,
                                              scenario.carrier_hz))
                    {
                        r.t = t;
                        r.tx_id = tx.id;
                        r.rx_id = rx.id;
                        records.push_back(r);
                    }
                }
            }
        return TraceSet(std::move(records), std::move(times));
    }

} // namespace tracechan
