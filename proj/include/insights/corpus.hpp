#pragma once

#include "insights/ingest.hpp"
#include "insights/resolve.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace insights::corpus {

using Timestamp = std::chrono::sys_seconds;

inline constexpr int kSchemaVersion = 1;

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp t);
/// Inverse of format_timestamp. Throws ParseError.
Timestamp parse_timestamp(std::string_view s);

struct SessionRecord {
    std::string wg_acronym;
    std::string wg_name;
    std::string minutes_text;
    std::string agenda_text;
    std::vector<std::string> draft_names;
    std::uint64_t attendee_count = 0;
    std::vector<resolve::AffiliationCount> top_affiliations;

    bool operator==(const SessionRecord&) const = default;
};

/// The consolidated, resolved record of one meeting. Immutable once built.
struct Corpus {
    int meeting_number = 0;
    std::map<std::string, SessionRecord> sessions;
    std::vector<resolve::CanonicalEntity> entities;
    resolve::AttendanceLedger ledger;
    Timestamp created_at{};

    [[nodiscard]] const SessionRecord* find(const std::string& wg) const;
    bool operator==(const Corpus&) const = default;
};

/// Merges sessions of the same WG (documents joined with a blank line, drafts
/// unioned) and attaches attendance. Throws ConsistencyError when the ledger
/// names a session that does not exist or sessions span several meetings.
Corpus build_corpus(int meeting_number, const std::vector<ingest::RawSession>& sessions,
                    const resolve::AttendanceLedger& ledger,
                    const std::vector<resolve::CanonicalEntity>& entities, Timestamp created_at);

nlohmann::json to_json(const Corpus& corpus);
/// Throws SchemaError on version mismatch, missing keys or wrong types.
Corpus corpus_from_json(const nlohmann::json& doc);

/// Deterministic serialization: sorted keys, two-space indent, trailing newline.
std::string serialize(const Corpus& corpus);

inline constexpr const char* kCorpusFile = "corpus.json";

/// Writes `<dir>/corpus.json`. Throws IoError.
void save(const Corpus& corpus, const std::filesystem::path& dir);
/// Reads `<dir>/corpus.json`. Throws IoError or SchemaError.
Corpus load(const std::filesystem::path& dir);

/// Raw ingest output as written by `sync`.
struct Snapshot {
    int meeting_number = 0;
    std::vector<ingest::RawSession> sessions;
    std::vector<ingest::RawAttendanceRow> attendance;
    std::size_t skipped_rows = 0;

    bool operator==(const Snapshot&) const = default;
};

inline constexpr const char* kSnapshotFile = "snapshot.json";

std::string serialize(const Snapshot& snapshot);
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir);
/// Throws IoError, or ParseError when the file is not a valid snapshot.
Snapshot load_snapshot(const std::filesystem::path& dir);

/// Shared helper: parses JSON text or throws SchemaError naming `what`.
nlohmann::json parse_json_document(const std::string& content, const std::string& what);

} // namespace insights::corpus
