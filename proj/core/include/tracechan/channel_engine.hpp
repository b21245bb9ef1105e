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

#ifndef TRACECHAN_CHANNEL_ENGINE_HPP
#define TRACECHAN_CHANNEL_ENGINE_HPP

#include "tracechan/array_geometry.hpp"
#include "tracechan/trace_model.hpp"

#include <vector>

#include <Eigen/Core>

namespace tracechan
{
    // K equal subbands across the channel bandwidth; subband k sits at
    // baseband offset (k + 0.5) * B / K - B / 2.
    struct SubbandGrid
    {
        double carrier_hz = 28.0e9;
        double bandwidth_hz = 100.0e6;
        int n_subbands = 64;

        void validate() const;
        double wavelength() const { return wavelength_from_frequency(carrier_hz); }
        double offset_hz(int k) const;
        std::vector<double> offsets_hz() const;
    };

    struct NodeState
    {
        Vec3 position = Vec3::Zero();
        Vec3 velocity = Vec3::Zero();
    };

    // Per-subband N_rx x N_tx channel matrices of one link snapshot
    struct ChannelMatrixSet
    {
        double snapshot_t = 0.0;
        double eval_t = 0.0;
        SubbandGrid grid;
        std::vector<Eigen::MatrixXcd> H;

        int n_subbands() const { return static_cast<int>(H.size()); }
        Eigen::Index n_rx() const { return H.empty() ? 0 : H.front().rows(); }
        Eigen::Index n_tx() const { return H.empty() ? 0 : H.front().cols(); }
    };

    // Doppler frequency of one path in Hz:
    //   (v_tx . d - v_rx . a) / lambda
    // with d the departure direction and a = -r(aoa) the propagation direction
    // into the receiver.
    double doppler_shift_hz(const MpcRecord &path, const NodeState &tx, const NodeState &rx, double wavelength_m);

    // H_k[u, s] = sum_p g_p e^{j phi_p} e^{-j 2pi df_k tau_p} e^{j 2pi nu_p (t_eval - t)} a_rx,u(aoa_p) conj(a_tx,s(aod_p))
    //
    // The record phase is the full carrier phase of the path, so only the
    // baseband offset term of the delay is applied here. Throws
    // std::invalid_argument if a record is non-finite, does not belong to the
    // snapshot's (t, link), or t_eval precedes the snapshot.
    ChannelMatrixSet build_channel_matrices(const Snapshot &snapshot, const PlanarArray &tx_array,
                                            const PlanarArray &rx_array, const NodeState &tx, const NodeState &rx,
                                            const SubbandGrid &grid, double t_eval);

    struct BeamformedPower
    {
        std::vector<double> per_subband_w;
        double total_w = 0.0;
    };

    // P_k = (p_tx / K) |w_rx^H H_k w_tx|^2. Both weight vectors must have unit
    // norm (1e-9).
    BeamformedPower beamformed_power(const ChannelMatrixSet &channel, const BeamWeights &w_tx, const BeamWeights &w_rx,
                                     double p_tx_w);

} // namespace tracechan

#endif
