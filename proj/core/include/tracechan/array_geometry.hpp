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

#ifndef TRACECHAN_ARRAY_GEOMETRY_HPP
#define TRACECHAN_ARRAY_GEOMETRY_HPP

#include "tracechan/common.hpp"

#include <vector>

#include <Eigen/Core>

namespace tracechan
{
    // Global spherical direction: azimuth in [-pi, pi) from +x towards +y,
    // zenith in [0, pi] from +z.
    struct Direction
    {
        double azimuth_rad = 0.0;
        double zenith_rad = kPi / 2.0;

        static Direction from_degrees(double azimuth_deg, double zenith_deg);
        double azimuth_deg() const { return rad_to_deg(azimuth_rad); }
        double zenith_deg() const { return rad_to_deg(zenith_rad); }
    };

    // (sin(zen) cos(az), sin(zen) sin(az), cos(zen))
    Vec3 direction_unit_vector(const Direction &d);

    // Inverse of direction_unit_vector for any non-zero vector
    Direction direction_of(const Vec3 &v);

    enum class ElementPattern
    {
        Isotropic
    };

    // Field gain of a single element towards `d` in the array's local frame
    double element_field_gain(ElementPattern pattern, const Direction &d);

    // Uniform planar array in the local y-z plane, boresight +x. Rows extend
    // along z, columns along y. The whole array may be rotated in azimuth by
    // `bearing_deg` about the global z axis.
    class PlanarArray
    {
    public:
        PlanarArray(int n_rows, int n_cols, double wavelength_m, double spacing_wavelengths = 0.5,
                    double bearing_deg = 0.0, ElementPattern pattern = ElementPattern::Isotropic);

        int n_rows() const { return n_rows_; }
        int n_cols() const { return n_cols_; }
        int n_elements() const { return n_rows_ * n_cols_; }
        double spacing() const { return spacing_; }
        double bearing_deg() const { return bearing_deg_; }
        double wavelength() const { return wavelength_; }
        ElementPattern pattern() const { return pattern_; }

    private:
        int n_rows_;
        int n_cols_;
        double wavelength_;
        double spacing_;
        double bearing_deg_;
        ElementPattern pattern_;
    };

    // Element (r, c) sits at R(bearing) * (0, c*d, r*d) with d = spacing * wavelength;
    // row-major ordering, r outer
    std::vector<Vec3> element_positions(const PlanarArray &array);

    // Same positions as a 3 x N matrix
    Eigen::Matrix3Xd element_position_matrix(const PlanarArray &array);

    // Un-normalized array response: entry n = exp(j * 2pi/lambda * p_n . r(d))
    struct SteeringVector
    {
        Direction direction;
        Eigen::VectorXcd response;
    };

    SteeringVector steering_vector(const PlanarArray &array, const Direction &d);

    // Response vectors for many directions at once, one column per direction
    Eigen::MatrixXcd steering_matrix(const PlanarArray &array, const std::vector<Direction> &directions);

    // Unit-norm beamforming weights pointed at `direction`
    struct BeamWeights
    {
        Direction direction;
        Eigen::VectorXcd weights;
    };

    // Matched weights a(d) / sqrt(N); applied through w^H they combine the
    // array response coherently: |w^H a(d)| = sqrt(N).
    BeamWeights matched_weights(const SteeringVector &sv);

} // namespace tracechan

#endif
