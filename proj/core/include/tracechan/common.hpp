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

#ifndef TRACECHAN_COMMON_HPP
#define TRACECHAN_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>

namespace tracechan
{
    using cplx = std::complex<double>;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double kPi = std::numbers::pi;
    inline constexpr double kSpeedOfLight = 299792458.0; // m/s
    inline constexpr double kBoltzmann = 1.380649e-23;   // J/K

    // Floor used for "no signal" quantities expressed in dB / dBm
    inline constexpr double kDbFloor = -200.0;

    inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
    inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

    inline double wavelength_from_frequency(double frequency_hz) { return kSpeedOfLight / frequency_hz; }

    // Maps an angle in degrees onto [-180, 180)
    inline double wrap_azimuth_deg(double deg)
    {
        if (deg >= -180.0 && deg < 180.0)
            return deg;
        double w = std::fmod(deg + 180.0, 360.0);
        if (w < 0.0)
            w += 360.0;
        w -= 180.0;
        return w >= 180.0 ? -180.0 : w;
    }

    // Maps an angle in radians onto [-pi, pi)
    inline double wrap_phase_rad(double rad)
    {
        if (rad >= -kPi && rad < kPi)
            return rad;
        double w = std::fmod(rad + kPi, 2.0 * kPi);
        if (w < 0.0)
            w += 2.0 * kPi;
        w -= kPi;
        return w >= kPi ? -kPi : w;
    }

    inline double watts_to_dbm(double watts)
    {
        if (!(watts > 0.0))
            return kDbFloor;
        return std::max(10.0 * std::log10(watts) + 30.0, kDbFloor);
    }

    inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

} // namespace tracechan

#endif
