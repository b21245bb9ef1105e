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

#include "tracechan/beam_management.hpp"

#include "parallel.hpp"

#include <stdexcept>

namespace tracechan
{
    namespace
    {
        // Columns per work item in sweep_power_table. Fixed so the floating
        // point evaluation order is the same for any worker count.
        constexpr Eigen::Index kSweepChunk = 64;

        // Relative margin under which two pair powers count as a tie
        constexpr double kTieTolerance = 1e-12;

        int grid_count(double lo, double hi, double step)
        {
            return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        }
    } // namespace

    void CodebookGrid::validate() const
    {
        for (double v : {az_min, az_max, az_step, zen_min, zen_max, zen_step})
            if (!std::isfinite(v))
                throw std::invalid_argument("CodebookGrid: non-finite grid parameter");
        if (!(az_step > 0.0) || !(zen_step > 0.0))
            throw std::invalid_argument("CodebookGrid: steps must be positive");
        if (az_max < az_min || zen_max < zen_min)
            throw std::invalid_argument("CodebookGrid: empty angle range");
        if (zen_min < 0.0 || zen_max > 180.0)
            throw std::invalid_argument("CodebookGrid: zenith range must lie within [0, 180]");
    }

    int CodebookGrid::n_az() const { return grid_count(az_min, az_max, az_step); }
    int CodebookGrid::n_zen() const { return grid_count(zen_min, zen_max, zen_step); }

    BeamCodebook::BeamCodebook(CodebookGrid grid, std::vector<BeamAngles> angles, std::vector<Direction> directions,
                               Eigen::MatrixXcd weights)
        : grid_(grid), angles_(std::move(angles)), directions_(std::move(directions)), weights_(std::move(weights))
    {
        if (angles_.size() != directions_.size() || static_cast<Eigen::Index>(directions_.size()) != weights_.cols())
            throw std::invalid_argument("BeamCodebook: direction count does not match weight columns");
    }

    BeamWeights BeamCodebook::beam(std::size_t i) const
    {
        return {directions_.at(i), weights_.col(static_cast<Eigen::Index>(i))};
    }

    BeamCodebook generate_codebook(const PlanarArray &array, const CodebookGrid &grid)
    {
        grid.validate();
        const int n_az = grid.n_az();
        const int n_zen = grid.n_zen();

        std::vector<BeamAngles> angles;
        std::vector<Direction> dirs;
        angles.reserve(static_cast<std::size_t>(n_az * n_zen));
        dirs.reserve(static_cast<std::size_t>(n_az * n_zen));
        for (int iz = 0; iz < n_zen; ++iz)
        {
            double zen = std::min(grid.zen_min + iz * grid.zen_step, 180.0);
            for (int ia = 0; ia < n_az; ++ia)
            {
                double az = wrap_azimuth_deg(grid.az_min + ia * grid.az_step + array.bearing_deg());
                angles.push_back({az, zen});
                dirs.push_back(Direction::from_degrees(az, zen));
            }
        }

        Eigen::MatrixXcd w = steering_matrix(array, dirs);
        w.colwise().normalize();
        return BeamCodebook(grid, std::move(angles), std::move(dirs), std::move(w));
    }

    Eigen::MatrixXd sweep_power_table(const ChannelMatrixSet &channel, const BeamCodebook &cb_tx,
                                      const BeamCodebook &cb_rx, double p_tx_w, int workers)
    {
        if (!(p_tx_w > 0.0))
            throw std::invalid_argument("sweep_power_table: transmit power must be positive");
        if (cb_tx.n_elements() != channel.n_tx() || cb_rx.n_elements() != channel.n_rx())
            throw std::invalid_argument("sweep_power_table: codebook does not match the channel dimensions");

        const Eigen::Index n_tx_beams = static_cast<Eigen::Index>(cb_tx.size());
        const Eigen::Index n_rx_beams = static_cast<Eigen::Index>(cb_rx.size());
        const int K = channel.n_subbands();
        const double scale = p_tx_w / K;

        Eigen::MatrixXd table = Eigen::MatrixXd::Zero(n_rx_beams, n_tx_beams);
        const Eigen::MatrixXcd w_rx_h = cb_rx.weight_matrix().adjoint();
        const auto n_chunks = static_cast<std::size_t>((n_tx_beams + kSweepChunk - 1) / kSweepChunk);

        detail::parallel_for(n_chunks, workers, [&](std::size_t c) {
            const Eigen::Index first = static_cast<Eigen::Index>(c) * kSweepChunk;
            const Eigen::Index count = std::min(kSweepChunk, n_tx_beams - first);
            const auto w_tx = cb_tx.weight_matrix().middleCols(first, count);

            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n_rx_beams, count);
            Eigen::MatrixXcd y, z;
            for (int k = 0; k < K; ++k)
            {
                y.noalias() = channel.H[static_cast<std::size_t>(k)] * w_tx;
                z.noalias() = w_rx_h * y;
                acc += z.cwiseAbs2();
            }
            table.middleCols(first, count) = scale * acc;
        });
        return table;
    }

    BeamSelection ideal_beam_sweep(const ChannelMatrixSet &channel, const BeamCodebook &cb_tx,
                                   const BeamCodebook &cb_rx, double p_tx_w, int workers)
    {
        const Eigen::MatrixXd table = sweep_power_table(channel, cb_tx, cb_rx, p_tx_w, workers);

        // Lexicographic scan in (tx, rx) order; a later pair must beat the
        // incumbent by more than the tie tolerance.
        Eigen::Index best_tx = 0, best_rx = 0;
        double best = table.size() > 0 ? table(0, 0) : 0.0;
        for (Eigen::Index t = 0; t < table.cols(); ++t)
            for (Eigen::Index r = 0; r < table.rows(); ++r)
            {
                double p = table(r, t);
                if (p > best * (1.0 + kTieTolerance) && p > best)
                {
                    best = p;
                    best_tx = t;
                    best_rx = r;
                }
            }

        BeamSelection sel;
        sel.tx_index = static_cast<std::size_t>(best_tx);
        sel.rx_index = static_cast<std::size_t>(best_rx);
        sel.tx_direction = cb_tx.direction(sel.tx_index);
        sel.rx_direction = cb_rx.direction(sel.rx_index);
        sel.tx_angles = cb_tx.angles(sel.tx_index);
        sel.rx_angles = cb_rx.angles(sel.rx_index);
        sel.power_w = best;
        return sel;
    }

} // namespace tracechan
