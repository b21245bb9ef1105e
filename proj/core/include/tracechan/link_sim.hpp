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

#ifndef TRACECHAN_LINK_SIM_HPP
#define TRACECHAN_LINK_SIM_HPP

#include "tracechan/beam_management.hpp"
#include "tracechan/channel_engine.hpp"
#include "tracechan/trace_model.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace tracechan
{
    struct LinkBudget
    {
        double p_tx_w = 1.0;
        double noise_figure_db = 7.0;
        double bandwidth_hz = 100.0e6;
        double temperature_k = 290.0;
        double interference_w = 0.0; // single-cell: always zero

        void validate() const;
    };

    // k_B * T * B * 10^(NF/10)
    double noise_power_w(const LinkBudget &budget);

    // 10 log10(P / (N + I)), kDbFloor when P == 0
    double compute_sinr_db(double rx_power_w, const LinkBudget &budget);

    bool classify_los(std::span<const MpcRecord> paths);

    // SINR thresholds (dB) and spectral efficiencies (bit/s/Hz) per MCS,
    // both strictly increasing.
    class AmcTable
    {
    public:
        AmcTable(std::vector<double> thresholds_db, std::vector<double> spectral_efficiency);

        // 29-level ladder with thresholds 10 log10(2^SE - 1) + gap_db
        static AmcTable nr_default(double gap_db = 3.0);

        // CSV with header `mcs,sinr_threshold_db,spectral_efficiency`
        static AmcTable from_csv(std::istream &in);

        int size() const { return static_cast<int>(thresholds_.size()); }
        double threshold_db(int mcs) const { return thresholds_.at(static_cast<std::size_t>(mcs)); }
        double spectral_efficiency(int mcs) const { return se_.at(static_cast<std::size_t>(mcs)); }

    private:
        std::vector<double> thresholds_;
        std::vector<double> se_;
    };

    // Highest MCS whose threshold is <= sinr; nullopt below the first threshold
    std::optional<int> select_mcs(double sinr_db, const AmcTable &table);

    // Two-plateau delay model: base_delay + saturation_delay * max(0, 1 - C / offered)
    struct DelayModel
    {
        double base_delay_s = 0.5e-3;
        double saturation_delay_s = 7.5e-3;
    };

    struct ThroughputDelay
    {
        double capacity_bps = 0.0;
        double delivered_bps = 0.0;
        double delay_s = 0.0;
    };

    // Capacity SE[mcs] * B * (1 - overhead). With no usable MCS the link
    // delivers nothing and the delay sits on the saturated plateau.
    ThroughputDelay throughput_delay(std::optional<int> mcs, const AmcTable &table, const LinkBudget &budget,
                                     double offered_bps, double overhead, const DelayModel &delay = {});

    struct LinkMetrics
    {
        double t = 0.0;
        bool los = false;
        BeamSelection beams;
        double sinr_db = kDbFloor;
        std::optional<int> mcs;
        double offered_bps = 0.0;
        double delivered_bps = 0.0;
        double delay_s = 0.0;
    };

    using NodeStateFn = std::function<NodeState(double t)>;

    struct SimulationConfig
    {
        LinkId link{0, 1};
        PlanarArray tx_array;
        PlanarArray rx_array;
        CodebookGrid tx_codebook;
        CodebookGrid rx_codebook;
        SubbandGrid grid;
        LinkBudget budget;
        AmcTable amc = AmcTable::nr_default();
        DelayModel delay;
        double training_period_s = 0.1;
        double offered_bps = 122.0e6;
        double overhead = 0.2;
        NodeStateFn tx_state; // static at the origin when empty
        NodeStateFn rx_state;
        int workers = 1;
    };

    // Indices into `times` at which beams are (re)trained: the first
    // snapshot, then the first snapshot at or after each period boundary.
    std::vector<std::size_t> training_schedule(std::span<const double> times, double period_s);

    // One LinkMetrics row per snapshot time of the trace. Throws
    // std::invalid_argument if the configured link is absent from the trace.
    std::vector<LinkMetrics> run_simulation(const TraceSet &trace, const SimulationConfig &config);

    inline constexpr std::string_view kMetricsHeader =
        "t,los,tx_beam_az_deg,tx_beam_zen_deg,rx_beam_az_deg,rx_beam_zen_deg,sinr_db,mcs,offered_bps,delivered_bps,"
        "delay_s";

    // `mcs` is written as -1 when no MCS is usable
    void write_metrics_csv(std::ostream &out, std::span<const LinkMetrics> rows);

} // namespace tracechan

#endif
