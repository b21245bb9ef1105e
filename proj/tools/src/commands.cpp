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

#include "commands.hpp"

#include "scenario_config.hpp"

#include "tracechan/beam_management.hpp"
#include "tracechan/link_sim.hpp"
#include "tracechan/rt_oracle.hpp"
#include "tracechan/trace_model.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace tracechan::cli
{
    namespace
    {
        // Maps the exception families of the toolkit onto exit codes
        int guarded(Console io, const std::function<int()> &body)
        {
            try
            {
                return body();
            }
            catch (const ConfigError &e)
            {
                io.err << "error: invalid configuration\n";
                for (const auto &d : e.diagnostics())
                    io.err << "  " << d << '\n';
                return kExitUsage;
            }
            catch (const TraceParseError &e)
            {
                io.err << "error: " << e.what() << '\n';
                return kExitUsage;
            }
            catch (const std::ios_base::failure &e)
            {
                io.err << "error: " << e.what() << '\n';
                return kExitIo;
            }
            catch (const std::invalid_argument &e)
            {
                io.err << "error: " << e.what() << '\n';
                return kExitUsage;
            }
            catch (const std::out_of_range &e)
            {
                io.err << "error: " << e.what() << '\n';
                return kExitUsage;
            }
        }

        TraceSet read_trace_file(const std::filesystem::path &path, Console io)
        {
            std::ifstream in(path);
            if (!in)
                throw std::ios_base::failure("cannot open trace file " + path.string());
            std::vector<std::string> warnings;
            TraceSet trace = parse_trace(in, &warnings);
            for (const auto &w : warnings)
                io.err << "warning: " << w << '\n';
            return trace;
        }

        void write_file(const std::filesystem::path &path, const std::string &content)
        {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw std::ios_base::failure("cannot open output file " + path.string());
            out << content;
            out.flush();
            if (!out)
                throw std::ios_base::failure("write failed for " + path.string());
        }

        void append_number(std::string &line, double v)
        {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            line.append(buf.data(), ptr);
        }

        // Trace named on the command line, else the configured file, else a
        // freshly generated one
        TraceSet scenario_trace(const ScenarioConfig &cfg, const std::optional<std::filesystem::path> &trace,
                                Console io)
        {
            if (trace)
                return read_trace_file(*trace, io);
            if (cfg.trace_path)
                return read_trace_file(*cfg.trace_path, io);
            return generate_trace(make_trace_scenario(cfg));
        }
    } // namespace

    int cmd_generate_trace(const std::filesystem::path &config, const std::filesystem::path &out, Console io)
    {
        return guarded(io, [&] {
            const ScenarioConfig cfg = load_scenario_config(config);
            if (!cfg.generative())
                throw std::invalid_argument("generate-trace needs a config with environment and trajectory sections");

            const TraceSet trace = generate_trace(make_trace_scenario(cfg));
            write_file(out, write_trace(trace));

            std::size_t counts[4] = {};
            for (const auto &r : trace.records())
                ++counts[static_cast<int>(r.path_type)];
            io.out << "snapshots: " << trace.snapshot_times().size() << "\npaths: " << trace.size() << " (LOS "
                   << counts[0] << ", REFL " << counts[1] << ", DIFF " << counts[2] << ")\n";
            return kExitOk;
        });
    }

    int cmd_validate(const std::filesystem::path &trace_path, Console io)
    {
        return guarded(io, [&] {
            const TraceSet trace = read_trace_file(trace_path, io);
            const ValidationReport report = validate_trace(trace);
            io.out << "records: " << trace.size() << "\nviolations: " << report.violations.size() << '\n';
            for (const auto &v : report.violations)
                io.out << "  record " << v.record_index << " [" << to_string(v.kind) << "] " << v.message << '\n';
            return report.empty() ? kExitOk : kExitFindings;
        });
    }

    int cmd_simulate(const std::filesystem::path &config, const std::filesystem::path &out,
                     const std::optional<std::filesystem::path> &trace_override, std::optional<int> workers,
                     Console io)
    {
        return guarded(io, [&] {
            const ScenarioConfig cfg = load_scenario_config(config);
            SimulationConfig sim = make_simulation_config(cfg);
            if (workers)
            {
                if (*workers < 1)
                    throw std::invalid_argument("--workers must be positive");
                sim.workers = *workers;
            }
            const TraceSet trace = scenario_trace(cfg, trace_override, io);
            const std::vector<LinkMetrics> rows = run_simulation(trace, sim);

            std::ostringstream csv;
            write_metrics_csv(csv, rows);
            write_file(out, csv.str());

            double sinr = 0.0, tput = 0.0, los = 0.0;
            for (const auto &m : rows)
            {
                sinr += m.sinr_db;
                tput += m.delivered_bps;
                los += m.los ? 1.0 : 0.0;
            }
            const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
            io.out << "snapshots: " << rows.size() << "\nmean_sinr_db: " << sinr / n
                   << "\nmean_throughput_bps: " << tput / n << "\nlos_fraction: " << los / n << '\n';
            return kExitOk;
        });
    }

    int cmd_sweep(const std::filesystem::path &config, const std::string &time, const std::filesystem::path &out,
                  const std::optional<std::filesystem::path> &trace_override, Console io)
    {
        return guarded(io, [&] {
            double t_req = 0.0;
            {
                const char *first = time.data();
                const char *last = first + time.size();
                auto [ptr, ec] = std::from_chars(first, last, t_req);
                if (time.empty() || ec != std::errc() || ptr != last || !std::isfinite(t_req))
                    throw std::invalid_argument("malformed --time value '" + time + "'");
            }

            const ScenarioConfig cfg = load_scenario_config(config);
            const SimulationConfig sim = make_simulation_config(cfg);
            const TraceSet trace = scenario_trace(cfg, trace_override, io);

            const auto &times = trace.snapshot_times();
            auto nearest = times.end();
            for (auto it = times.begin(); it != times.end(); ++it)
                if (nearest == times.end() || std::abs(*it - t_req) < std::abs(*nearest - t_req))
                    nearest = it;
            if (nearest == times.end() || std::abs(*nearest - t_req) > 0.5 * cfg.snapshot_dt_s)
                throw std::invalid_argument("no snapshot within half a snapshot interval of t = " + time);
            const double t = *nearest;

            const Snapshot snap = trace.snapshot(t, sim.link);
            const NodeState tx = sim.tx_state ? sim.tx_state(t) : NodeState{};
            const NodeState rx = sim.rx_state ? sim.rx_state(t) : NodeState{};
            const ChannelMatrixSet channel =
                build_channel_matrices(snap, sim.tx_array, sim.rx_array, tx, rx, sim.grid, t);
            const BeamCodebook cb_tx = generate_codebook(sim.tx_array, sim.tx_codebook);
            const BeamCodebook cb_rx = generate_codebook(sim.rx_array, sim.rx_codebook);
            const Eigen::MatrixXd table = sweep_power_table(channel, cb_tx, cb_rx, sim.budget.p_tx_w, sim.workers);
            const BeamSelection best = ideal_beam_sweep(channel, cb_tx, cb_rx, sim.budget.p_tx_w, sim.workers);

            std::string csv = "tx_az,tx_zen,rx_az,rx_zen,power_dbm\n";
            std::string best_row;
            auto row = [&](std::size_t i_tx, std::size_t i_rx, double p) {
                std::string line;
                const BeamAngles &at = cb_tx.angles(i_tx);
                const BeamAngles &ar = cb_rx.angles(i_rx);
                append_number(line, at.azimuth_deg);
                line += ',';
                append_number(line, at.zenith_deg);
                line += ',';
                append_number(line, ar.azimuth_deg);
                line += ',';
                append_number(line, ar.zenith_deg);
                line += ',';
                append_number(line, watts_to_dbm(p));
                line += '\n';
                return line;
            };
            for (std::size_t i_tx = 0; i_tx < cb_tx.size(); ++i_tx)
                for (std::size_t i_rx = 0; i_rx < cb_rx.size(); ++i_rx)
                    csv += row(i_tx, i_rx,
                               table(static_cast<Eigen::Index>(i_rx), static_cast<Eigen::Index>(i_tx)));
            best_row = row(best.tx_index, best.rx_index, best.power_w);
            csv += best_row;
            write_file(out, csv);

            io.out << "snapshot_t: " << t << "\npaths: " << snap.paths.size() << "\nbest: " << best_row;
            return kExitOk;
        });
    }

} // namespace tracechan::cli
