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

#include "scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace tracechan::cli
{
    namespace
    {
        std::string join(const std::string &prefix, const std::string &key)
        {
            return prefix.empty() ? key : prefix + "." + key;
        }

        // Collects diagnostics instead of stopping at the first problem
        class Reader
        {
        public:
            std::vector<std::string> diag;

            template <typename T>
            std::optional<T> get(const YAML::Node &parent, const std::string &prefix, const std::string &key,
                                 bool required = true)
            {
                const std::string path = join(prefix, key);
                const YAML::Node node = parent[key];
                if (!node.IsDefined() || node.IsNull())
                {
                    if (required)
                        diag.push_back("missing key: " + path);
                    return std::nullopt;
                }
                try
                {
                    return node.as<T>();
                }
                catch (const YAML::Exception &)
                {
                    diag.push_back(path + ": expected " + type_name<T>());
                    return std::nullopt;
                }
            }

            std::optional<Vec3> vec3(const YAML::Node &parent, const std::string &prefix, const std::string &key,
                                     bool required = true)
            {
                auto v = get<std::vector<double>>(parent, prefix, key, required);
                if (!v)
                    return std::nullopt;
                if (v->size() != 3)
                {
                    diag.push_back(join(prefix, key) + ": expected a list of 3 numbers");
                    return std::nullopt;
                }
                return Vec3((*v)[0], (*v)[1], (*v)[2]);
            }

            void check(bool ok, const std::string &message)
            {
                if (!ok)
                    diag.push_back(message);
            }

        private:
            template <typename T> static std::string type_name()
            {
                if constexpr (std::is_same_v<T, double>)
                    return "a number";
                else if constexpr (std::is_same_v<T, int>)
                    return "an integer";
                else if constexpr (std::is_same_v<T, std::string>)
                    return "a string";
                else
                    return "a list of numbers";
            }
        };

        template <typename T> void assign(T &dst, const std::optional<T> &src)
        {
            if (src)
                dst = *src;
        }

        bool is_section(const YAML::Node &n) { return n.IsDefined() && !n.IsNull(); }

        void read_array(Reader &rd, const YAML::Node &root, const std::string &key, ArrayConfig &out)
        {
            const YAML::Node node = root[key];
            if (!is_section(node))
            {
                for (const char *k : {"rows", "cols", "spacing", "bearing_deg"})
                    rd.diag.push_back("missing key: " + key + "." + k);
                return;
            }
            auto rows = rd.get<int>(node, key, "rows");
            auto cols = rd.get<int>(node, key, "cols");
            auto spacing = rd.get<double>(node, key, "spacing");
            auto bearing = rd.get<double>(node, key, "bearing_deg");
            if (rows)
                rd.check(*rows > 0, key + ".rows: must be positive");
            if (cols)
                rd.check(*cols > 0, key + ".cols: must be positive");
            if (spacing)
                rd.check(*spacing > 0.0, key + ".spacing: must be positive");
            assign(out.rows, rows);
            assign(out.cols, cols);
            assign(out.spacing, spacing);
            assign(out.bearing_deg, bearing);
        }

        void read_codebook(Reader &rd, const YAML::Node &codebook, const std::string &side, CodebookGrid &out)
        {
            const std::string prefix = "codebook." + side;
            const YAML::Node node = codebook[side];
            if (!is_section(node))
            {
                for (const char *k : {"az_min", "az_max", "az_step", "zen_min", "zen_max", "zen_step"})
                    rd.diag.push_back("missing key: " + prefix + "." + k);
                return;
            }
            assign(out.az_min, rd.get<double>(node, prefix, "az_min"));
            assign(out.az_max, rd.get<double>(node, prefix, "az_max"));
            assign(out.az_step, rd.get<double>(node, prefix, "az_step"));

            // Elevation is accepted in place of zenith (zen = 90 - el)
            if (!is_section(node["zen_min"]) && is_section(node["el_min"]))
            {
                auto el_min = rd.get<double>(node, prefix, "el_min");
                auto el_max = rd.get<double>(node, prefix, "el_max");
                auto el_step = rd.get<double>(node, prefix, "el_step");
                if (el_max)
                    out.zen_min = 90.0 - *el_max;
                if (el_min)
                    out.zen_max = 90.0 - *el_min;
                assign(out.zen_step, el_step);
            }
            else
            {
                assign(out.zen_min, rd.get<double>(node, prefix, "zen_min"));
                assign(out.zen_max, rd.get<double>(node, prefix, "zen_max"));
                assign(out.zen_step, rd.get<double>(node, prefix, "zen_step"));
            }

            try
            {
                out.validate();
            }
            catch (const std::invalid_argument &e)
            {
                rd.diag.push_back(prefix + ": " + e.what());
            }
        }

        std::optional<MotionParams> read_motion(Reader &rd, const YAML::Node &node, const std::string &prefix)
        {
            auto kind = rd.get<std::string>(node, prefix, "kind");
            if (!kind)
                return std::nullopt;
            if (*kind == "static")
            {
                auto p = rd.vec3(node, prefix, "position");
                return p ? std::optional<MotionParams>(StaticMotion{*p}) : std::nullopt;
            }
            if (*kind == "linear")
            {
                auto p = rd.vec3(node, prefix, "start");
                auto v = rd.vec3(node, prefix, "velocity");
                return p && v ? std::optional<MotionParams>(LinearMotion{*p, *v}) : std::nullopt;
            }
            if (*kind == "circular")
            {
                CircularMotion m;
                auto c = rd.vec3(node, prefix, "center");
                auto r = rd.get<double>(node, prefix, "radius");
                auto rate = rd.get<double>(node, prefix, "angular_rate_deg_s");
                assign(m.initial_angle_deg, rd.get<double>(node, prefix, "initial_angle_deg", false));
                if (r)
                    rd.check(*r > 0.0, prefix + ".radius: must be positive");
                if (!c || !r || !rate)
                    return std::nullopt;
                m.center = *c;
                m.radius = *r;
                m.angular_rate_deg_s = *rate;
                return m;
            }
            rd.diag.push_back(prefix + ".kind: expected static, linear or circular (got '" + *kind + "')");
            return std::nullopt;
        }

        std::optional<Environment> read_environment(Reader &rd, const YAML::Node &node)
        {
            Environment env;
            const YAML::Node rects = node["rectangles"];
            if (!is_section(rects))
                return env; // free space
            if (!rects.IsSequence())
            {
                rd.diag.push_back("environment.rectangles: expected a list");
                return std::nullopt;
            }
            for (std::size_t i = 0; i < rects.size(); ++i)
            {
                const std::string prefix = "environment.rectangles[" + std::to_string(i) + "]";
                const YAML::Node r = rects[i];
                Rectangle rect;
                auto corner = rd.vec3(r, prefix, "corner");
                auto u = rd.vec3(r, prefix, "edge_u");
                auto v = rd.vec3(r, prefix, "edge_v");
                assign(rect.reflection_coeff, rd.get<double>(r, prefix, "gamma", false));
                if (auto edges = rd.get<std::vector<int>>(r, prefix, "diffracting_edges", false))
                    for (int e : *edges)
                    {
                        if (e < 0 || e > 3)
                            rd.diag.push_back(prefix + ".diffracting_edges: edge index must be 0..3");
                        else
                            rect.diffracting_edges[static_cast<std::size_t>(e)] = true;
                    }
                if (!corner || !u || !v)
                    continue;
                rect.corner = *corner;
                rect.edge_u = *u;
                rect.edge_v = *v;
                try
                {
                    rect.validate();
                }
                catch (const std::invalid_argument &e)
                {
                    rd.diag.push_back(prefix + ": " + e.what());
                }
                env.rectangles.push_back(rect);
            }
            return env;
        }
    } // namespace

    ConfigError::ConfigError(std::vector<std::string> diagnostics)
        : std::runtime_error(diagnostics.empty() ? "invalid configuration" : diagnostics.front()),
          diagnostics_(std::move(diagnostics))
    {
    }

    std::vector<double> ScenarioConfig::snapshot_times() const
    {
        const auto n = static_cast<std::size_t>(std::llround(duration_s / snapshot_dt_s)) + 1;
        std::vector<double> t(n);
        for (std::size_t k = 0; k < n; ++k)
            t[k] = static_cast<double>(k) * snapshot_dt_s;
        return t;
    }

    ScenarioConfig parse_scenario_config(const std::string &text, const std::filesystem::path &base_dir)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(text);
        }
        catch (const YAML::ParserException &e)
        {
            throw ConfigError({std::string("syntax error: ") + e.what()});
        }
        if (!root.IsMap())
            throw ConfigError({"configuration must be a key/value mapping"});

        Reader rd;
        ScenarioConfig cfg;

        auto positive = [&](const char *key, double &dst) {
            if (auto v = rd.get<double>(root, "", key))
            {
                rd.check(*v > 0.0 && std::isfinite(*v), std::string(key) + ": must be positive");
                dst = *v;
            }
        };

        positive("carrier_hz", cfg.carrier_hz);
        positive("bandwidth_hz", cfg.bandwidth_hz);
        if (auto v = rd.get<int>(root, "", "subbands"))
        {
            rd.check(*v > 0, "subbands: must be positive");
            cfg.subbands = *v;
        }
        assign(cfg.txpower_dbm, rd.get<double>(root, "", "txpower_dbm"));
        assign(cfg.noise_figure_db, rd.get<double>(root, "", "noise_figure_db"));
        read_array(rd, root, "tx_array", cfg.tx_array);
        read_array(rd, root, "rx_array", cfg.rx_array);

        const YAML::Node codebook = root["codebook"];
        read_codebook(rd, is_section(codebook) ? codebook : YAML::Node(YAML::NodeType::Map), "tx", cfg.tx_codebook);
        read_codebook(rd, is_section(codebook) ? codebook : YAML::Node(YAML::NodeType::Map), "rx", cfg.rx_codebook);

        positive("training_period_s", cfg.training_period_s);
        positive("offered_bps", cfg.offered_bps);
        if (auto v = rd.get<double>(root, "", "overhead"))
        {
            rd.check(*v >= 0.0 && *v < 1.0, "overhead: must lie in [0, 1)");
            cfg.overhead = *v;
        }
        positive("snapshot_dt_s", cfg.snapshot_dt_s);
        if (auto v = rd.get<double>(root, "", "duration_s"))
        {
            rd.check(*v >= 0.0 && std::isfinite(*v), "duration_s: must be non-negative");
            cfg.duration_s = *v;
        }

        // Optional settings
        if (auto v = rd.get<double>(root, "", "temperature_k", false))
        {
            rd.check(*v > 0.0, "temperature_k: must be positive");
            cfg.temperature_k = *v;
        }
        assign(cfg.delay.base_delay_s, rd.get<double>(root, "", "base_delay_s", false));
        assign(cfg.delay.saturation_delay_s, rd.get<double>(root, "", "saturation_delay_s", false));
        if (auto v = rd.get<int>(root, "", "workers", false))
        {
            rd.check(*v > 0, "workers: must be positive");
            cfg.workers = *v;
        }
        if (auto v = rd.get<std::string>(root, "", "amc_table", false))
            cfg.amc_table = base_dir / *v;
        if (const YAML::Node link = root["link"]; is_section(link))
        {
            assign(cfg.link.tx_id, rd.get<std::uint32_t>(link, "link", "tx_id"));
            assign(cfg.link.rx_id, rd.get<std::uint32_t>(link, "link", "rx_id"));
        }

        // Scenario source
        const YAML::Node env = root["environment"];
        const YAML::Node traj = root["trajectory"];
        auto trace = rd.get<std::string>(root, "", "trace_path", false);
        if (trace)
        {
            cfg.trace_path = base_dir / *trace;
            if (is_section(env) || is_section(traj))
                rd.diag.push_back("trace_path cannot be combined with environment/trajectory");
        }
        else if (!is_section(env) && !is_section(traj))
        {
            rd.diag.push_back("missing key: trace_path (or environment and trajectory)");
        }
        else
        {
            if (!is_section(env))
                rd.diag.push_back("missing key: environment");
            else
            {
                cfg.environment = read_environment(rd, env);
                if (auto order = rd.get<int>(env, "environment", "reflection_order", false))
                {
                    rd.check(*order >= 0 && *order <= 4, "environment.reflection_order: must lie in [0, 4]");
                    cfg.reflection_order = *order;
                }
            }
            if (!is_section(traj))
                rd.diag.push_back("missing key: trajectory");
            else
                for (const char *side : {"tx", "rx"})
                {
                    const std::string prefix = std::string("trajectory.") + side;
                    if (!is_section(traj[side]))
                    {
                        rd.diag.push_back("missing key: " + prefix);
                        continue;
                    }
                    (std::string(side) == "tx" ? cfg.tx_motion : cfg.rx_motion) = read_motion(rd, traj[side], prefix);
                }
        }

        if (!rd.diag.empty())
            throw ConfigError(std::move(rd.diag));
        return cfg;
    }

    ScenarioConfig load_scenario_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::ios_base::failure("cannot open config file " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario_config(ss.str(), path.parent_path());
    }

    // ---- Derived objects --------------------------------------------------------

    SubbandGrid make_grid(const ScenarioConfig &cfg)
    {
        SubbandGrid g;
        g.carrier_hz = cfg.carrier_hz;
        g.bandwidth_hz = cfg.bandwidth_hz;
        g.n_subbands = cfg.subbands;
        return g;
    }

    LinkBudget make_budget(const ScenarioConfig &cfg)
    {
        LinkBudget b;
        b.p_tx_w = dbm_to_watts(cfg.txpower_dbm);
        b.noise_figure_db = cfg.noise_figure_db;
        b.bandwidth_hz = cfg.bandwidth_hz;
        b.temperature_k = cfg.temperature_k;
        return b;
    }

    PlanarArray make_array(const ArrayConfig &a, double carrier_hz)
    {
        return PlanarArray(a.rows, a.cols, wavelength_from_frequency(carrier_hz), a.spacing, a.bearing_deg);
    }

    AmcTable make_amc(const ScenarioConfig &cfg)
    {
        if (!cfg.amc_table)
            return AmcTable::nr_default();
        std::ifstream in(*cfg.amc_table);
        if (!in)
            throw std::ios_base::failure("cannot open AMC table " + cfg.amc_table->string());
        return AmcTable::from_csv(in);
    }

    namespace
    {
        Trajectory sample(const ScenarioConfig &cfg, const std::optional<MotionParams> &motion)
        {
            if (!motion)
                throw std::invalid_argument("scenario has no trajectory");
            const auto n = static_cast<int>(cfg.snapshot_times().size());
            return make_trajectory(*motion, 0.0, cfg.snapshot_dt_s, n);
        }
    } // namespace

    Trajectory make_tx_trajectory(const ScenarioConfig &cfg) { return sample(cfg, cfg.tx_motion); }
    Trajectory make_rx_trajectory(const ScenarioConfig &cfg) { return sample(cfg, cfg.rx_motion); }

    TraceScenario make_trace_scenario(const ScenarioConfig &cfg)
    {
        if (!cfg.generative())
            throw std::invalid_argument("scenario has no environment");
        TraceScenario sc;
        sc.environment = *cfg.environment;
        sc.transmitters.push_back({cfg.link.tx_id, make_tx_trajectory(cfg)});
        sc.receivers.push_back({cfg.link.rx_id, make_rx_trajectory(cfg)});
        sc.carrier_hz = cfg.carrier_hz;
        sc.snapshot_times = cfg.snapshot_times();
        sc.max_reflection_order = cfg.reflection_order;
        return sc;
    }

    SimulationConfig make_simulation_config(const ScenarioConfig &cfg)
    {
        SimulationConfig sim{
            .link = cfg.link,
            .tx_array = make_array(cfg.tx_array, cfg.carrier_hz),
            .rx_array = make_array(cfg.rx_array, cfg.carrier_hz),
            .tx_codebook = cfg.tx_codebook,
            .rx_codebook = cfg.rx_codebook,
            .grid = make_grid(cfg),
            .budget = make_budget(cfg),
            .amc = make_amc(cfg),
            .delay = cfg.delay,
            .training_period_s = cfg.training_period_s,
            .offered_bps = cfg.offered_bps,
            .overhead = cfg.overhead,
            .tx_state = {},
            .rx_state = {},
            .workers = cfg.workers,
        };
        if (cfg.generative())
        {
            auto tx = std::make_shared<const Trajectory>(make_tx_trajectory(cfg));
            auto rx = std::make_shared<const Trajectory>(make_rx_trajectory(cfg));
            sim.tx_state = [tx](double t) { return tx->state_at(t); };
            sim.rx_state = [rx](double t) { return rx->state_at(t); };
        }
        return sim;
    }

} // namespace tracechan::cli
