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

#ifndef TRACECHAN_BEAM_MANAGEMENT_HPP
#define TRACECHAN_BEAM_MANAGEMENT_HPP

#include "tracechan/array_geometry.hpp"
#include "tracechan/channel_engine.hpp"

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace tracechan
{
    // Scan grid in degrees. Azimuths are relative to the array bearing;
    // zeniths are global.
    struct CodebookGrid
    {
        double az_min = -90.0;
        double az_max = 90.0;
        double az_step = 1.0;
        double zen_min = 60.0;
        double zen_max = 120.0;
        double zen_step = 10.0;

        void validate() const;
        int n_az() const;
        int n_zen() const;
    };

    // Nominal grid angles in degrees, azimuth wrapped to [-180, 180)
    struct BeamAngles
    {
        double azimuth_deg = 0.0;
        double zenith_deg = 90.0;
    };

    // Entries are ordered zenith-major: index = i_zen * n_az + i_az.
    class BeamCodebook
    {
    public:
        BeamCodebook(CodebookGrid grid, std::vector<BeamAngles> angles, std::vector<Direction> directions,
                     Eigen::MatrixXcd weights);

        const CodebookGrid &grid() const { return grid_; }
        std::size_t size() const { return directions_.size(); }
        Eigen::Index n_elements() const { return weights_.rows(); }

        const Direction &direction(std::size_t i) const { return directions_[i]; }
        const BeamAngles &angles(std::size_t i) const { return angles_[i]; }
        BeamWeights beam(std::size_t i) const;

        // N x size() matrix, one unit-norm weight vector per column
        const Eigen::MatrixXcd &weight_matrix() const { return weights_; }

    private:
        CodebookGrid grid_;
        std::vector<BeamAngles> angles_;
        std::vector<Direction> directions_;
        Eigen::MatrixXcd weights_;
    };

    // Throws std::invalid_argument on non-positive steps or an empty range
    BeamCodebook generate_codebook(const PlanarArray &array, const CodebookGrid &grid);

    struct BeamSelection
    {
        std::size_t tx_index = 0;
        std::size_t rx_index = 0;
        Direction tx_direction;
        Direction rx_direction;
        BeamAngles tx_angles;
        BeamAngles rx_angles;
        double power_w = 0.0;
    };

    // Total received power for every (rx, tx) pair, shape |cb_rx| x |cb_tx|.
    // Pair values equal beamformed_power(...).total_w.
    Eigen::MatrixXd sweep_power_table(const ChannelMatrixSet &channel, const BeamCodebook &cb_tx,
                                      const BeamCodebook &cb_rx, double p_tx_w, int workers = 1);

    // Exhaustive search over all beam pairs. Ties resolve to the lowest
    // (tx index, rx index); the result does not depend on `workers`.
    BeamSelection ideal_beam_sweep(const ChannelMatrixSet &channel, const BeamCodebook &cb_tx,
                                   const BeamCodebook &cb_rx, double p_tx_w, int workers = 1);

} // namespace tracechan

#endif
