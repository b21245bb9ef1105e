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

#include "tracechan/array_geometry.hpp"

#include <stdexcept>

namespace tracechan
{
    Direction Direction::from_degrees(double azimuth_deg, double zenith_deg)
    {
        return {deg_to_rad(wrap_azimuth_deg(azimuth_deg)), deg_to_rad(zenith_deg)};
    }

    namespace
    {
        // cos/sin of the zenith evaluated through the elevation so that the
        // horizon (zenith = pi/2) yields exactly (1, 0)
        double zenith_sin(double zen) { return std::cos(kPi / 2.0 - zen); }
        double zenith_cos(double zen) { return std::sin(kPi / 2.0 - zen); }
    } // namespace

    Vec3 direction_unit_vector(const Direction &d)
    {
        double st = zenith_sin(d.zenith_rad);
        return {st * std::cos(d.azimuth_rad), st * std::sin(d.azimuth_rad), zenith_cos(d.zenith_rad)};
    }

    Direction direction_of(const Vec3 &v)
    {
        double n = v.norm();
        if (!(n > 0.0))
            throw std::invalid_argument("direction_of: zero-length vector");
        double az = std::atan2(v.y(), v.x());
        if (az >= kPi)
            az = -kPi;
        double zen = std::acos(std::clamp(v.z() / n, -1.0, 1.0));
        return {az, zen};
    }

    double element_field_gain(ElementPattern pattern, const Direction &)
    {
        switch (pattern)
        {
        case ElementPattern::Isotropic:
            return 1.0;
        }
        return 1.0;
    }

    PlanarArray::PlanarArray(int n_rows, int n_cols, double wavelength_m, double spacing_wavelengths,
                             double bearing_deg, ElementPattern pattern)
        : n_rows_(n_rows), n_cols_(n_cols), wavelength_(wavelength_m), spacing_(spacing_wavelengths),
          bearing_deg_(bearing_deg), pattern_(pattern)
    {
        if (n_rows < 1 || n_cols < 1)
            throw std::invalid_argument("PlanarArray: rows and cols must be >= 1");
        if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths))
            throw std::invalid_argument("PlanarArray: element spacing must be positive");
        if (!(wavelength_m > 0.0) || !std::isfinite(wavelength_m))
            throw std::invalid_argument("PlanarArray: wavelength must be positive");
        if (!std::isfinite(bearing_deg))
            throw std::invalid_argument("PlanarArray: bearing must be finite");
    }

    Eigen::Matrix3Xd element_position_matrix(const PlanarArray &array)
    {
        const double pitch = array.spacing() * array.wavelength();
        const double b = deg_to_rad(array.bearing_deg());
        const double cb = std::cos(b), sb = std::sin(b);

        Eigen::Matrix3Xd pos(3, array.n_elements());
        int n = 0;
        for (int r = 0; r < array.n_rows(); ++r)
            for (int c = 0; c < array.n_cols(); ++c, ++n)
            {
                double y = c * pitch;
                // Rotation about z applied to (0, y, z)
                pos(0, n) = -sb * y;
                pos(1, n) = cb * y;
                pos(2, n) = r * pitch;
            }
        return pos;
    }

    std::vector<Vec3> element_positions(const PlanarArray &array)
    {
        Eigen::Matrix3Xd m = element_position_matrix(array);
        std::vector<Vec3> out(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index i = 0; i < m.cols(); ++i)
            out[static_cast<std::size_t>(i)] = m.col(i);
        return out;
    }

    Eigen::MatrixXcd steering_matrix(const PlanarArray &array, const std::vector<Direction> &directions)
    {
        // Evaluated in the array's local frame: element (r, c) sits at
        // (0, c*pitch, r*pitch) and the direction is rotated by -bearing, so
        // p . r(d) = c*pitch*sin(zen)*sin(az - bearing) + r*pitch*cos(zen).
        const double k_pitch = 2.0 * kPi * array.spacing();
        const double bearing = deg_to_rad(array.bearing_deg());
        const int n_rows = array.n_rows(), n_cols = array.n_cols();

        Eigen::MatrixXcd out(array.n_elements(), static_cast<Eigen::Index>(directions.size()));
        for (std::size_t j = 0; j < directions.size(); ++j)
        {
            const Direction &d = directions[j];
            const double u = k_pitch * zenith_sin(d.zenith_rad) * std::sin(d.azimuth_rad - bearing);
            const double v = k_pitch * zenith_cos(d.zenith_rad);
            const double g = element_field_gain(array.pattern(), d);
            auto col = out.col(static_cast<Eigen::Index>(j));
            Eigen::Index n = 0;
            for (int r = 0; r < n_rows; ++r)
                for (int c = 0; c < n_cols; ++c, ++n)
                    col(n) = std::polar(g, c * u + r * v);
        }
        return out;
    }

    SteeringVector steering_vector(const PlanarArray &array, const Direction &d)
    {
        return {d, steering_matrix(array, {d}).col(0)};
    }

    BeamWeights matched_weights(const SteeringVector &sv)
    {
        double n = sv.response.norm();
        if (!(n > 0.0))
            throw std::invalid_argument("matched_weights: zero steering vector");
        return {sv.direction, sv.response / n};
    }

} // namespace tracechan
