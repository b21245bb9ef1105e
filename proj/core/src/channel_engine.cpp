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

#include "tracechan/channel_engine.hpp"

#include <stdexcept>
#include <string>

namespace tracechan
{
    void SubbandGrid::validate() const
    {
        if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
            throw std::invalid_argument("SubbandGrid: carrier frequency must be positive");
        if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
            throw std::invalid_argument("SubbandGrid: bandwidth must be positive");
        if (n_subbands < 1)
            throw std::invalid_argument("SubbandGrid: subband count must be >= 1");
    }

    double SubbandGrid::offset_hz(int k) const
    {
        return (k + 0.5) * bandwidth_hz / n_subbands - bandwidth_hz / 2.0;
    }

    std::vector<double> SubbandGrid::offsets_hz() const
    {
        std::vector<double> out(static_cast<std::size_t>(n_subbands));
        for (int k = 0; k < n_subbands; ++k)
            out[static_cast<std::size_t>(k)] = offset_hz(k);
        return out;
    }

    double doppler_shift_hz(const MpcRecord &path, const NodeState &tx, const NodeState &rx, double wavelength_m)
    {
        Vec3 departure = direction_unit_vector(Direction::from_degrees(path.aod_az_deg, path.aod_zen_deg));
        Vec3 arrival = -direction_unit_vector(Direction::from_degrees(path.aoa_az_deg, path.aoa_zen_deg));
        return (tx.velocity.dot(departure) - rx.velocity.dot(arrival)) / wavelength_m;
    }

    namespace
    {
        bool finite_record(const MpcRecord &r)
        {
            for (double v : {r.t, r.delay_s, r.gain_mag, r.phase_rad, r.aod_az_deg, r.aod_zen_deg, r.aoa_az_deg,
                             r.aoa_zen_deg})
                if (!std::isfinite(v))
                    return false;
            return true;
        }
    } // namespace

    ChannelMatrixSet build_channel_matrices(const Snapshot &snapshot, const PlanarArray &tx_array,
                                            const PlanarArray &rx_array, const NodeState &tx, const NodeState &rx,
                                            const SubbandGrid &grid, double t_eval)
    {
        grid.validate();
        if (!std::isfinite(t_eval) || t_eval < snapshot.t)
            throw std::invalid_argument("build_channel_matrices: t_eval must not precede the snapshot time");

        const auto n_paths = static_cast<Eigen::Index>(snapshot.paths.size());
        const int K = grid.n_subbands;
        const double dt = t_eval - snapshot.t;
        const double lambda = grid.wavelength();

        ChannelMatrixSet out;
        out.snapshot_t = snapshot.t;
        out.eval_t = t_eval;
        out.grid = grid;
        out.H.assign(static_cast<std::size_t>(K),
                     Eigen::MatrixXcd::Zero(rx_array.n_elements(), tx_array.n_elements()));
        if (n_paths == 0)
            return out;

        std::vector<Direction> aod, aoa;
        aod.reserve(snapshot.paths.size());
        aoa.reserve(snapshot.paths.size());
        Eigen::VectorXcd base(n_paths);
        Eigen::VectorXd delay(n_paths);

        for (Eigen::Index p = 0; p < n_paths; ++p)
        {
            const auto &r = snapshot.paths[static_cast<std::size_t>(p)];
            if (!finite_record(r))
                throw std::invalid_argument("build_channel_matrices: non-finite value in path " +
                                            std::to_string(r.path_id));
            if (r.t != snapshot.t || r.tx_id != snapshot.link.tx_id || r.rx_id != snapshot.link.rx_id)
                throw std::invalid_argument("build_channel_matrices: path " + std::to_string(r.path_id) +
                                            " does not belong to the snapshot");

            aod.push_back(Direction::from_degrees(r.aod_az_deg, r.aod_zen_deg));
            aoa.push_back(Direction::from_degrees(r.aoa_az_deg, r.aoa_zen_deg));

            double nu = doppler_shift_hz(r, tx, rx, lambda);
            base(p) = r.gain_mag * std::polar(1.0, r.phase_rad) * std::polar(1.0, 2.0 * kPi * nu * dt);
            delay(p) = r.delay_s;
        }

        const Eigen::MatrixXcd a_tx = steering_matrix(tx_array, aod); // N_tx x P
        const Eigen::MatrixXcd a_rx = steering_matrix(rx_array, aoa); // N_rx x P
        const Eigen::MatrixXcd a_tx_h = a_tx.adjoint();              // P x N_tx

        Eigen::VectorXcd coeff(n_paths);
        for (int k = 0; k < K; ++k)
        {
            const double df = grid.offset_hz(k);
            for (Eigen::Index p = 0; p < n_paths; ++p)
                coeff(p) = base(p) * std::polar(1.0, -2.0 * kPi * df * delay(p));
            out.H[static_cast<std::size_t>(k)].noalias() = (a_rx * coeff.asDiagonal()) * a_tx_h;
        }
        return out;
    }

    BeamformedPower beamformed_power(const ChannelMatrixSet &channel, const BeamWeights &w_tx, const BeamWeights &w_rx,
                                     double p_tx_w)
    {
        if (!(p_tx_w > 0.0))
            throw std::invalid_argument("beamformed_power: transmit power must be positive");
        if (std::abs(w_tx.weights.norm() - 1.0) > 1e-9 || std::abs(w_rx.weights.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("beamformed_power: beam weights must have unit norm");
        if (w_tx.weights.size() != channel.n_tx() || w_rx.weights.size() != channel.n_rx())
            throw std::invalid_argument("beamformed_power: weight length does not match the channel");

        BeamformedPower out;
        const int K = channel.n_subbands();
        out.per_subband_w.resize(static_cast<std::size_t>(K));
        for (int k = 0; k < K; ++k)
        {
            cplx y = w_rx.weights.dot(channel.H[static_cast<std::size_t>(k)] * w_tx.weights); // dot() conjugates lhs
            double p = p_tx_w / K * std::norm(y);
            out.per_subband_w[static_cast<std::size_t>(k)] = p;
            out.total_w += p;
        }
        return out;
    }

} // namespace tracechan
