#pragma once

#include "insights/clock.hpp"
#include "insights/http.hpp"

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace insights::ingest {

/// Where meeting records come from. When both sources are configured the
/// mirror wins.
struct SourceConfig {
    std::optional<std::string> api_base_url;
    std::optional<std::filesystem::path> mirror_root;
    int meeting_number = 0;
    int timeout_ms = 30000;

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;
};

struct RawSession {
    std::string wg_acronym;
    std::string wg_name;
    int meeting_number = 0;
    /// Position of this session among sessions of the same WG.
    int session_index = 0;
    std::string agenda_text;
    std::string minutes_text;
    std::vector<std::string> draft_names;

    bool operator==(const RawSession&) const = default;
};

/// Meeting-wide registration rows carry no WG; session rows carry theirs.
struct AttendanceScope {
    std::optional<std::string> wg_acronym;

    static AttendanceScope meeting_wide() { return {}; }
    static AttendanceScope session(std::string wg) { return {std::move(wg)}; }
    [[nodiscard]] bool is_meeting_wide() const noexcept { return !wg_acronym; }

    bool operator==(const AttendanceScope&) const = default;
};

struct RawAttendanceRow {
    std::string raw_name;
    std::string raw_affiliation;
    AttendanceScope scope;

    bool operator==(const RawAttendanceRow&) const = default;
};

struct AttendanceLoad {
    std::vector<RawAttendanceRow> rows;
    /// Rows dropped because the name was empty after trimming.
    std::size_t skipped = 0;
};

struct FetchOptions {
    /// Concurrent document fetches in API mode.
    std::size_t parallelism = 4;
    /// Total attempts per HTTP request.
    int max_attempts = 3;
    std::chrono::milliseconds base_backoff{500};
};

/// True for `[a-z0-9-]+`.
bool is_valid_acronym(std::string_view s) noexcept;
/// True for `draft-[a-z0-9.-]+` with no version suffix.
bool is_valid_draft_name(std::string_view s) noexcept;

/// Every draft identifier mentioned in `text`, version suffix (`-NN`) and
/// file extension stripped, deduplicated, in order of first occurrence.
std::vector<std::string> extract_draft_names(std::string_view text);

/// Strips `-NN` from a draft name if present.
std::string strip_draft_version(std::string_view name);

/// One session per WG session of the meeting, sorted by (acronym, session_index).
/// `transport` and `clock` are only used for the API source; pass nullptr to
/// use the real network and wall clock.
std::vector<RawSession> fetch_sessions(const SourceConfig& cfg,
                                       http::Transport* transport = nullptr,
                                       Clock* clock = nullptr,
                                       const FetchOptions& options = {});

/// Attendance rows from the mirror, in file order: registrants.csv first,
/// then each WG directory's attendees.csv in acronym order.
AttendanceLoad load_attendance(const SourceConfig& cfg);

/// Parses one attendance CSV (header `name,affiliation`). `file` is used in
/// error messages only.
AttendanceLoad parse_attendance_csv(std::string_view content, const AttendanceScope& scope,
                                    const std::string& file);

/// Minimal RFC 4180 reader: returns records with the 1-based line number on
/// which each record starts. Throws ParseError on unbalanced quotes.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRecord> parse_csv(std::string_view content, const std::string& file);

} // namespace insights::ingest
