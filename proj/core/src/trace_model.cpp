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

#include "tracechan/trace_model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace tracechan
{
    namespace
    {
        enum Column : std::size_t
        {
            kT,
            kTxId,
            kRxId,
            kPathId,
            kPathType,
            kDelay,
            kGain,
            kPhase,
            kAodAz,
            kAodZen,
            kAoaAz,
            kAoaZen,
            kColumnCount
        };

        constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
            "t", "tx_id", "rx_id", "path_id", "path_type", "delay_s", "gain_mag",
            "phase_rad", "aod_az_deg", "aod_zen_deg", "aoa_az_deg", "aoa_zen_deg"};

        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        }

        std::vector<std::string_view> split_fields(std::string_view line)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true)
            {
                std::size_t comma = line.find(',', start);
                if (comma == std::string_view::npos)
                {
                    out.push_back(trim(line.substr(start)));
                    break;
                }
                out.push_back(trim(line.substr(start, comma - start)));
                start = comma + 1;
            }
            return out;
        }

        std::string format_value(double v)
        {
            std::ostringstream os;
            os.precision(17);
            os << v;
            return os.str();
        }

        double parse_double(std::string_view field, std::size_t line, std::string_view column)
        {
            double value = 0.0;
            const char *first = field.data();
            const char *last = field.data() + field.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
                throw TraceParseError(line, std::string(column),
                                      "line " + std::to_string(line) + ", column " + std::string(column) +
                                          ": non-numeric value '" + std::string(field) + "'");
            return value;
        }

        std::uint32_t parse_id(std::string_view field, std::size_t line, std::string_view column)
        {
            std::uint32_t value = 0;
            const char *first = field.data();
            const char *last = field.data() + field.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (field.empty() || ec != std::errc() || ptr != last)
                throw TraceParseError(line, std::string(column),
                                      "line " + std::to_string(line) + ", column " + std::string(column) +
                                          ": expected a non-negative integer, got '" + std::string(field) + "'");
            return value;
        }

        void check_range(double value, double lo, double hi, bool hi_inclusive, std::size_t line, std::string_view column)
        {
            bool ok = value >= lo && (hi_inclusive ? value <= hi : value < hi);
            if (!ok)
                throw TraceParseError(line, std::string(column),
                                      "line " + std::to_string(line) + ", column " + std::string(column) + ": value " +
                                          format_value(value) + " outside [" + format_value(lo) + ", " +
                                          format_value(hi) + (hi_inclusive ? "]" : ")"));
        }

        void append_number(std::string &out, double v)
        {
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            out.append(buf.data(), ptr);
        }

        void append_number(std::string &out, std::uint32_t v)
        {
            std::array<char, 16> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            out.append(buf.data(), ptr);
        }
    } // namespace

    std::string_view to_string(PathType type)
    {
        switch (type)
        {
        case PathType::Los:
            return "LOS";
        case PathType::Reflection:
            return "REFL";
        case PathType::Diffraction:
            return "DIFF";
        case PathType::Scattering:
            return "SCAT";
        }
        return "?";
    }

    std::optional<PathType> path_type_from_string(std::string_view name)
    {
        if (name == "LOS")
            return PathType::Los;
        if (name == "REFL")
            return PathType::Reflection;
        if (name == "DIFF")
            return PathType::Diffraction;
        if (name == "SCAT")
            return PathType::Scattering;
        return std::nullopt;
    }

    // ---- TraceSet -----------------------------------------------------------

    TraceSet::TraceSet(std::vector<MpcRecord> records) : records_(std::move(records))
    {
        build_index({});
    }

    TraceSet::TraceSet(std::vector<MpcRecord> records, std::vector<double> snapshot_times) : records_(std::move(records))
    {
        build_index(std::move(snapshot_times));
    }

    void TraceSet::build_index(std::vector<double> extra_times)
    {
        std::set<double> times(extra_times.begin(), extra_times.end());
        for (std::size_t i = 0; i < records_.size(); ++i)
        {
            const auto &r = records_[i];
            times.insert(r.t);
            groups_[{r.t, LinkId{r.tx_id, r.rx_id}}].push_back(i);
        }
        times_.assign(times.begin(), times.end());
    }

    std::vector<LinkId> TraceSet::links() const
    {
        std::set<LinkId> links;
        for (const auto &r : records_)
            links.insert({r.tx_id, r.rx_id});
        return {links.begin(), links.end()};
    }

    bool TraceSet::has_link(LinkId link) const
    {
        return std::any_of(records_.begin(), records_.end(),
                           [&](const MpcRecord &r) { return r.tx_id == link.tx_id && r.rx_id == link.rx_id; });
    }

    Snapshot TraceSet::snapshot(double t, LinkId link) const
    {
        Snapshot snap{t, link, {}};
        auto it = groups_.find({t, link});
        if (it != groups_.end())
        {
            snap.paths.reserve(it->second.size());
            for (std::size_t i : it->second)
                snap.paths.push_back(records_[i]);
        }
        return snap;
    }

    // ---- Parsing --------------------------------------------------------------

    TraceParseError::TraceParseError(std::size_t line, std::string column, const std::string &what)
        : std::runtime_error(what), line_(line), column_(std::move(column))
    {
    }

    TraceSet parse_trace(std::istream &in, std::vector<std::string> *warnings)
    {
        std::string line;
        std::size_t line_no = 0;

        // Header
        if (!std::getline(in, line))
            throw TraceParseError(1, "", "line 1: missing header row");
        ++line_no;
        if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
            line.erase(0, 3);

        auto header = split_fields(line);
        std::array<std::size_t, kColumnCount> position{};
        position.fill(std::string_view::npos);
        for (std::size_t i = 0; i < header.size(); ++i)
        {
            auto it = std::find(kColumnNames.begin(), kColumnNames.end(), header[i]);
            if (it == kColumnNames.end())
            {
                if (warnings)
                    warnings->push_back("ignoring unknown column '" + std::string(header[i]) + "'");
                continue;
            }
            auto c = static_cast<std::size_t>(it - kColumnNames.begin());
            if (position[c] != std::string_view::npos)
                throw TraceParseError(1, std::string(header[i]), "line 1: duplicate column '" + std::string(header[i]) + "'");
            position[c] = i;
        }
        for (std::size_t c = 0; c < kColumnCount; ++c)
            if (position[c] == std::string_view::npos)
                throw TraceParseError(1, std::string(kColumnNames[c]),
                                      "line 1: missing header column '" + std::string(kColumnNames[c]) + "'");

        std::vector<MpcRecord> records;
        while (std::getline(in, line))
        {
            ++line_no;
            if (trim(line).empty())
                continue;

            auto fields = split_fields(line);
            if (fields.size() != header.size())
                throw TraceParseError(line_no, "",
                                      "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                                          " fields, found " + std::to_string(fields.size()));

            auto field = [&](Column c) { return fields[position[c]]; };
            auto number = [&](Column c) { return parse_double(field(c), line_no, kColumnNames[c]); };

            MpcRecord r;
            r.t = number(kT);
            r.tx_id = parse_id(field(kTxId), line_no, kColumnNames[kTxId]);
            r.rx_id = parse_id(field(kRxId), line_no, kColumnNames[kRxId]);
            r.path_id = parse_id(field(kPathId), line_no, kColumnNames[kPathId]);

            auto type = path_type_from_string(field(kPathType));
            if (!type)
                throw TraceParseError(line_no, "path_type",
                                      "line " + std::to_string(line_no) + ", column path_type: unknown path type '" +
                                          std::string(field(kPathType)) + "'");
            r.path_type = *type;

            r.delay_s = number(kDelay);
            r.gain_mag = number(kGain);
            r.phase_rad = number(kPhase);
            r.aod_az_deg = number(kAodAz);
            r.aod_zen_deg = number(kAodZen);
            r.aoa_az_deg = number(kAoaAz);
            r.aoa_zen_deg = number(kAoaZen);

            constexpr double inf = std::numeric_limits<double>::infinity();
            check_range(r.delay_s, 0.0, inf, true, line_no, kColumnNames[kDelay]);
            check_range(r.gain_mag, 0.0, inf, true, line_no, kColumnNames[kGain]);
            check_range(r.aod_az_deg, -180.0, 180.0, false, line_no, kColumnNames[kAodAz]);
            check_range(r.aod_zen_deg, 0.0, 180.0, true, line_no, kColumnNames[kAodZen]);
            check_range(r.aoa_az_deg, -180.0, 180.0, false, line_no, kColumnNames[kAoaAz]);
            check_range(r.aoa_zen_deg, 0.0, 180.0, true, line_no, kColumnNames[kAoaZen]);

            records.push_back(r);
        }
        return TraceSet(std::move(records));
    }

    TraceSet parse_trace(std::string_view text, std::vector<std::string> *warnings)
    {
        std::istringstream in{std::string(text)};
        return parse_trace(in, warnings);
    }

    // ---- Writing --------------------------------------------------------------

    void write_trace(std::ostream &out, const TraceSet &trace)
    {
        out << kTraceHeader << '\n';
        std::string row;
        for (const auto &r : trace.records())
        {
            row.clear();
            append_number(row, r.t);
            row += ',';
            append_number(row, r.tx_id);
            row += ',';
            append_number(row, r.rx_id);
            row += ',';
            append_number(row, r.path_id);
            row += ',';
            row += to_string(r.path_type);
            for (double v : {r.delay_s, r.gain_mag, r.phase_rad, r.aod_az_deg, r.aod_zen_deg, r.aoa_az_deg, r.aoa_zen_deg})
            {
                row += ',';
                append_number(row, v);
            }
            row += '\n';
            out << row;
        }
    }

    std::string write_trace(const TraceSet &trace)
    {
        std::ostringstream os;
        write_trace(os, trace);
        return os.str();
    }

    // ---- Validation -----------------------------------------------------------

    std::string_view to_string(ViolationKind kind)
    {
        switch (kind)
        {
        case ViolationKind::DuplicateLos:
            return "DuplicateLos";
        case ViolationKind::NonMonotonicTime:
            return "NonMonotonicTime";
        case ViolationKind::DuplicatePathId:
            return "DuplicatePathId";
        }
        return "?";
    }

    std::size_t ValidationReport::count(ViolationKind kind) const
    {
        return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                      [&](const Violation &v) { return v.kind == kind; }));
    }

    ValidationReport validate_trace(const TraceSet &trace)
    {
        ValidationReport report;
        const auto &records = trace.records();

        auto describe = [](double t, LinkId link) {
            std::ostringstream os;
            os.precision(17);
            os << "t=" << t << " link " << link.tx_id << "->" << link.rx_id;
            return os.str();
        };

        // Snapshot order per link, in input order
        std::map<LinkId, double> current_time;
        for (std::size_t i = 0; i < records.size(); ++i)
        {
            const auto &r = records[i];
            LinkId link{r.tx_id, r.rx_id};
            auto it = current_time.find(link);
            if (it == current_time.end())
            {
                current_time.emplace(link, r.t);
                continue;
            }
            if (r.t != it->second)
            {
                if (r.t < it->second)
                    report.violations.push_back({ViolationKind::NonMonotonicTime, i, r.t, link,
                                                 "record " + std::to_string(i) + ": " + describe(r.t, link) +
                                                     " follows a later snapshot of the same link"});
                it->second = r.t;
            }
        }

        // Per-group checks
        for (const auto &[key, indices] : trace.groups())
        {
            const auto &[t, link] = key;
            std::size_t los_count = 0;
            std::set<std::uint32_t> seen_ids;
            for (std::size_t i : indices)
            {
                const auto &r = records[i];
                if (r.path_type == PathType::Los && ++los_count == 2)
                    report.violations.push_back({ViolationKind::DuplicateLos, i, t, link,
                                                 "record " + std::to_string(i) + ": second LOS path in " +
                                                     describe(t, link)});
                if (!seen_ids.insert(r.path_id).second)
                    report.violations.push_back({ViolationKind::DuplicatePathId, i, t, link,
                                                 "record " + std::to_string(i) + ": duplicate path_id " +
                                                     std::to_string(r.path_id) + " in " + describe(t, link)});
            }
        }

        std::stable_sort(report.violations.begin(), report.violations.end(),
                         [](const Violation &a, const Violation &b) { return a.record_index < b.record_index; });
        return report;
    }

} // namespace tracechan
