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

#include "tracechan/link_sim.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tracechan
{
    void LinkBudget::validate() const
    {
        if (!(p_tx_w > 0.0) || !std::isfinite(p_tx_w))
            throw std::invalid_argument("LinkBudget: transmit power must be positive");
        if (!std::isfinite(noise_figure_db))
            throw std::invalid_argument("LinkBudget: noise figure must be finite");
        if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz))
            throw std::invalid_argument("LinkBudget: bandwidth must be positive");
        if (!(temperature_k > 0.0) || !std::isfinite(temperature_k))
            throw std::invalid_argument("LinkBudget: temperature must be positive");
        if (!(interference_w >= 0.0) || !std::isfinite(interference_w))
            throw std::invalid_argument("LinkBudget: interference must be non-negative");
    }

    double noise_power_w(const LinkBudget &budget)
    {
        return kBoltzmann * budget.temperature_k * budget.bandwidth_hz * std::pow(10.0, budget.noise_figure_db / 10.0);
    }

    double compute_sinr_db(double rx_power_w, const LinkBudget &budget)
    {
        if (!(rx_power_w > 0.0))
            return kDbFloor;
        double sinr = 10.0 * std::log10(rx_power_w / (noise_power_w(budget) + budget.interference_w));
        return std::max(sinr, kDbFloor);
    }

    bool classify_los(std::span<const MpcRecord> paths)
    {
        return std::any_of(paths.begin(), paths.end(), [](const MpcRecord &r) { return r.path_type == PathType::Los; });
    }

    // ---- AMC ------------------------------------------------------------------

    AmcTable::AmcTable(std::vector<double> thresholds_db, std::vector<double> spectral_efficiency)
        : thresholds_(std::move(thresholds_db)), se_(std::move(spectral_efficiency))
    {
        if (thresholds_.empty() || thresholds_.size() != se_.size())
            throw std::invalid_argument("AmcTable: thresholds and efficiencies must be non-empty and of equal length");
        if (!(se_.front() > 0.0))
            throw std::invalid_argument("AmcTable: spectral efficiency of MCS 0 must be positive");
        for (std::size_t i = 0; i < thresholds_.size(); ++i)
        {
            if (!std::isfinite(thresholds_[i]) || !std::isfinite(se_[i]))
                throw std::invalid_argument("AmcTable: non-finite entry at MCS " + std::to_string(i));
            if (i > 0 && !(thresholds_[i] > thresholds_[i - 1]))
                throw std::invalid_argument("AmcTable: thresholds must be strictly increasing (MCS " +
                                            std::to_string(i) + ")");
            if (i > 0 && !(se_[i] > se_[i - 1]))
                throw std::invalid_argument("AmcTable: spectral efficiency must be strictly increasing (MCS " +
                                            std::to_string(i) + ")");
        }
    }

    AmcTable AmcTable::nr_default(double gap_db)
    {
        // 256QAM NR ladder (code rate x 1024 / modulation order) with the
        // first 64QAM-table QPSK step inserted to give 29 levels
        static constexpr std::array<double, 29> kSe = {
            0.2344, 0.3066, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.6953, 1.9141, 2.1602,
            2.4063, 2.5703, 2.7305, 3.0293, 3.3223, 3.6094, 3.9023, 4.2129, 4.5234, 4.8164,
            5.1152, 5.3320, 5.5547, 5.8906, 6.2266, 6.5703, 6.9141, 7.1602, 7.4063};

        std::vector<double> thr, se(kSe.begin(), kSe.end());
        thr.reserve(se.size());
        for (double s : se)
            thr.push_back(10.0 * std::log10(std::pow(2.0, s) - 1.0) + gap_db);
        return AmcTable(std::move(thr), std::move(se));
    }

    AmcTable AmcTable::from_csv(std::istream &in)
    {
        std::string line;
        if (!std::getline(in, line))
            throw std::invalid_argument("AMC table: empty file");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line != "mcs,sinr_threshold_db,spectral_efficiency")
            throw std::invalid_argument("AMC table: expected header 'mcs,sinr_threshold_db,spectral_efficiency'");

        std::vector<double> thr, se;
        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos)
                continue;
            std::istringstream row(line);
            std::string f_mcs, f_thr, f_se;
            std::getline(row, f_mcs, ',');
            std::getline(row, f_thr, ',');
            std::getline(row, f_se, ',');
            try
            {
                std::size_t used = 0;
                int mcs = std::stoi(f_mcs, &used);
                if (mcs != static_cast<int>(thr.size()))
                    throw std::invalid_argument("MCS indices must start at 0 and be consecutive");
                thr.push_back(std::stod(f_thr));
                se.push_back(std::stod(f_se));
            }
            catch (const std::exception &e)
            {
                throw std::invalid_argument("AMC table line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return AmcTable(std::move(thr), std::move(se));
    }

    std::optional<int> select_mcs(double sinr_db, const AmcTable &table)
    {
        int lo = 0, hi = table.size(); // first index with threshold > sinr
        while (lo < hi)
        {
            int mid = (lo + hi) / 2;
            if (table.threshold_db(mid) <= sinr_db)
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo == 0)
            return std::nullopt;
        return lo - 1;
    }

    ThroughputDelay throughput_delay(std::optional<int> mcs, const AmcTable &table, const LinkBudget &budget,
                                     double offered_bps, double overhead, const DelayModel &delay)
    {
        if (!(overhead >= 0.0 && overhead < 1.0))
            throw std::invalid_argument("throughput_delay: overhead must lie in [0, 1)");
        if (!(offered_bps >= 0.0))
            throw std::invalid_argument("throughput_delay: offered load must be non-negative");

        ThroughputDelay out;
        out.capacity_bps = mcs ? table.spectral_efficiency(*mcs) * budget.bandwidth_hz * (1.0 - overhead) : 0.0;
        out.delivered_bps = std::min(offered_bps, out.capacity_bps);

        double shortfall = offered_bps > 0.0 ? std::max(0.0, 1.0 - out.capacity_bps / offered_bps) : 0.0;
        out.delay_s = delay.base_delay_s + delay.saturation_delay_s * shortfall;
        return out;
    }

    // ---- Simulation loop --------------------------------------------------------

    std::vector<std::size_t> training_schedule(std::span<const double> times, double period_s)
    {
        if (!(period_s > 0.0))
            throw std::invalid_argument("training_schedule: period must be positive");

        constexpr double eps = 1e-9;
        std::vector<std::size_t> out;
        if (times.empty())
            return out;

        const double t0 = times.front();
        double next = t0;
        for (std::size_t i = 0; i < times.size(); ++i)
        {
            if (times[i] + eps < next)
                continue;
            out.push_back(i);
            double periods = std::floor((times[i] - t0) / period_s + eps) + 1.0;
            next = t0 + periods * period_s;
        }
        return out;
    }

    std::vector<LinkMetrics> run_simulation(const TraceSet &trace, const SimulationConfig &config)
    {
        config.grid.validate();
        config.budget.validate();
        if (!trace.has_link(config.link))
            throw std::invalid_argument("run_simulation: trace has no records for link " +
                                        std::to_string(config.link.tx_id) + "->" + std::to_string(config.link.rx_id));

        const BeamCodebook cb_tx = generate_codebook(config.tx_array, config.tx_codebook);
        const BeamCodebook cb_rx = generate_codebook(config.rx_array, config.rx_codebook);

        const std::vector<double> &times = trace.snapshot_times();
        const std::vector<std::size_t> schedule = training_schedule(times, config.training_period_s);

        auto state = [](const NodeStateFn &fn, double t) { return fn ? fn(t) : NodeState{}; };
        auto channel_at = [&](std::size_t i) {
            const double t = times[i];
            Snapshot snap = trace.snapshot(t, config.link);
            return std::pair{build_channel_matrices(snap, config.tx_array, config.rx_array, state(config.tx_state, t),
                                                    state(config.rx_state, t), config.grid, t),
                             classify_los(snap.paths)};
        };

        // Beam training at the scheduled snapshots
        std::vector<BeamSelection> trained(schedule.size());
        detail::parallel_for(schedule.size(), config.workers, [&](std::size_t j) {
            auto [channel, los] = channel_at(schedule[j]);
            trained[j] = ideal_beam_sweep(channel, cb_tx, cb_rx, config.budget.p_tx_w);
        });

        // Per-snapshot evaluation with the most recent trained beams
        std::vector<LinkMetrics> rows(times.size());
        detail::parallel_for(times.size(), config.workers, [&](std::size_t i) {
            auto it = std::upper_bound(schedule.begin(), schedule.end(), i);
            const BeamSelection &sel = trained[static_cast<std::size_t>(it - schedule.begin()) - 1];

            auto [channel, los] = channel_at(i);
            double rx_power = beamformed_power(channel, cb_tx.beam(sel.tx_index), cb_rx.beam(sel.rx_index),
                                               config.budget.p_tx_w)
                                  .total_w;

            LinkMetrics &m = rows[i];
            m.t = times[i];
            m.los = los;
            m.beams = sel;
            m.beams.power_w = rx_power;
            m.sinr_db = compute_sinr_db(rx_power, config.budget);
            m.mcs = select_mcs(m.sinr_db, config.amc);
            m.offered_bps = config.offered_bps;
            auto td = throughput_delay(m.mcs, config.amc, config.budget, config.offered_bps, config.overhead,
                                       config.delay);
            m.delivered_bps = td.delivered_bps;
            m.delay_s = td.delay_s;
        });
        return rows;
    }

    void write_metrics_csv(std::ostream &out, std::span<const LinkMetrics> rows)
    {
        out << kMetricsHeader << '\n';
        std::string line;
        auto num = [&](double v) {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            line.append(buf.data(), ptr);
        };
        for (const auto &m : rows)
        {
            line.clear();
            num(m.t);
            line += m.los ? ",1," : ",0,";
            num(m.beams.tx_angles.azimuth_deg);
            line += ',';
            num(m.beams.tx_angles.zenith_deg);
            line += ',';
            num(m.beams.rx_angles.azimuth_deg);
            line += ',';
            num(m.beams.rx_angles.zenith_deg);
            line += ',';
            num(m.sinr_db);
            line += ',';
            line += std::to_string(m.mcs ? *m.mcs : -1);
            line += ',';
            num(m.offered_bps);
            line += ',';
            num(m.delivered_bps);
            line += ',';
            num(m.delay_s);
            line += '\n';
            out << line;
        }
    }

} // namespace tracechan
