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

#ifndef TRACECHAN_TRACE_MODEL_HPP
#define TRACECHAN_TRACE_MODEL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tracechan
{
    enum class PathType : std::uint8_t
    {
        Los,
        Reflection,
        Diffraction,
        Scattering
    };

    // Wire names: LOS, REFL, DIFF, SCAT
    std::string_view to_string(PathType type);
    std::optional<PathType> path_type_from_string(std::string_view name);

    // One multipath component. Angles in degrees (zenith measured from +z),
    // delay in seconds, gain as linear field amplitude, phase as the total
    // path phase at the carrier in radians.
    struct MpcRecord
    {
        double t = 0.0;
        std::uint32_t tx_id = 0;
        std::uint32_t rx_id = 0;
        std::uint32_t path_id = 0;
        PathType path_type = PathType::Los;
        double delay_s = 0.0;
        double gain_mag = 0.0;
        double phase_rad = 0.0;
        double aod_az_deg = 0.0;
        double aod_zen_deg = 90.0;
        double aoa_az_deg = 0.0;
        double aoa_zen_deg = 90.0;

        bool operator==(const MpcRecord &) const = default;
    };

    struct LinkId
    {
        std::uint32_t tx_id = 0;
        std::uint32_t rx_id = 0;

        auto operator<=>(const LinkId &) const = default;
    };

    // All paths of one link at one snapshot time
    struct Snapshot
    {
        double t = 0.0;
        LinkId link;
        std::vector<MpcRecord> paths;
    };

    // Immutable collection of MPC records. Records are kept in input order;
    // a (t, link) group index and a sorted snapshot-time index are derived
    // on construction.
    class TraceSet
    {
    public:
        TraceSet() = default;
        explicit TraceSet(std::vector<MpcRecord> records);

        // `snapshot_times` lists additional snapshot instants (e.g. outages
        // with no paths). The stored index is the sorted union with the
        // record times.
        TraceSet(std::vector<MpcRecord> records, std::vector<double> snapshot_times);

        const std::vector<MpcRecord> &records() const { return records_; }
        const std::vector<double> &snapshot_times() const { return times_; }
        std::vector<LinkId> links() const;

        bool empty() const { return records_.empty(); }
        std::size_t size() const { return records_.size(); }
        bool has_link(LinkId link) const;

        // Paths of the (t, link) group in input order; empty if absent
        Snapshot snapshot(double t, LinkId link) const;

        // Record indices per (t, link) group, sorted by time then link
        const std::map<std::pair<double, LinkId>, std::vector<std::size_t>> &groups() const { return groups_; }

        friend bool operator==(const TraceSet &a, const TraceSet &b)
        {
            return a.records_ == b.records_ && a.times_ == b.times_;
        }

    private:
        void build_index(std::vector<double> extra_times);

        std::vector<MpcRecord> records_;
        std::vector<double> times_;
        std::map<std::pair<double, LinkId>, std::vector<std::size_t>> groups_;
    };

    // Raised by parse_trace. `line` is the 1-based line in the input (the
    // header is line 1); `column` is empty for row-level errors.
    class TraceParseError : public std::runtime_error
    {
    public:
        TraceParseError(std::size_t line, std::string column, const std::string &what);

        std::size_t line() const { return line_; }
        const std::string &column() const { return column_; }

    private:
        std::size_t line_;
        std::string column_;
    };

    inline constexpr std::string_view kTraceHeader =
        "t,tx_id,rx_id,path_id,path_type,delay_s,gain_mag,phase_rad,aod_az_deg,aod_zen_deg,aoa_az_deg,aoa_zen_deg";

    // Columns are located by header name. Unknown columns are ignored and a
    // note is appended to `warnings` (if given).
    TraceSet parse_trace(std::istream &in, std::vector<std::string> *warnings = nullptr);
    TraceSet parse_trace(std::string_view text, std::vector<std::string> *warnings = nullptr);

    // Shortest round-trip formatting; parse_trace(write_trace(x)) == x
    void write_trace(std::ostream &out, const TraceSet &trace);
    std::string write_trace(const TraceSet &trace);

    enum class ViolationKind
    {
        DuplicateLos,
        NonMonotonicTime,
        DuplicatePathId
    };

    std::string_view to_string(ViolationKind kind);

    struct Violation
    {
        ViolationKind kind;
        std::size_t record_index; // 0-based index into TraceSet::records()
        double t;
        LinkId link;
        std::string message;
    };

    struct ValidationReport
    {
        std::vector<Violation> violations;

        bool empty() const { return violations.empty(); }
        std::size_t count(ViolationKind kind) const;
    };

    ValidationReport validate_trace(const TraceSet &trace);

} // namespace tracechan

#endif
