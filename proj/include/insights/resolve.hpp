#pragma once

#include "insights/ingest.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace insights::resolve {

struct NormalizedString {
    std::string original;
    std::string normalized;

    bool operator==(const NormalizedString&) const = default;
};

/// NFKC case fold, Unicode punctuation to spaces, whitespace collapsed and
/// trimmed. Idempotent.
NormalizedString normalize(std::string_view s);

enum class MatchMethod { lev_ratio, token_sort, token_set };

/// Similarity in [0, 100], held exactly as hundredths (the value is rounded
/// half-up to two decimals at construction).
class Score {
public:
    constexpr Score() = default;
    static constexpr Score from_hundredths(std::int32_t h) { return Score(h); }
    /// Rounds half-up to two decimals.
    static Score from_value(double v);

    [[nodiscard]] constexpr std::int32_t hundredths() const noexcept { return hundredths_; }
    [[nodiscard]] constexpr double value() const noexcept { return hundredths_ / 100.0; }

    constexpr auto operator<=>(const Score&) const = default;

private:
    constexpr explicit Score(std::int32_t h) : hundredths_(h) {}
    std::int32_t hundredths_ = 0;
};

struct MatchScore {
    Score score;
    MatchMethod method = MatchMethod::lev_ratio;

    [[nodiscard]] double value() const noexcept { return score.value(); }
    bool operator==(const MatchScore&) const = default;
};

/// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// 100 * (1 - distance / max length); 100 when both are empty. Inputs are
/// expected to be normalized already.
MatchScore lev_ratio(std::string_view a, std::string_view b);
/// lev_ratio over the space-joined sorted tokens of each side.
MatchScore token_sort_ratio(std::string_view a, std::string_view b);
/// Best lev_ratio among the sorted intersection and the intersection extended
/// with each side's remainder.
MatchScore token_set_ratio(std::string_view a, std::string_view b);

enum class EntityKind { person, affiliation };

std::string_view to_string(EntityKind kind) noexcept;

inline constexpr std::string_view kUnaffiliatedLabel = "unaffiliated";

struct CanonicalEntity {
    std::string id;
    EntityKind kind = EntityKind::person;
    std::string label;
    /// Original spellings seen in the input.
    std::set<std::string> surface_forms;
    /// Normalized forms merged into this entity.
    std::set<std::string> normalized_forms;
    std::uint64_t frequency = 0;

    bool operator==(const CanonicalEntity&) const = default;
};

/// Id of the reserved entity that absorbs empty affiliations.
std::string unaffiliated_id();

/// Greedy frequency-ordered clustering of normalized rows. Persons are
/// compared with token_sort_ratio, affiliations with token_set_ratio, always
/// against the cluster label. Throws InvalidThreshold outside (0, 100].
std::vector<CanonicalEntity> cluster(const std::vector<NormalizedString>& rows, EntityKind kind,
                                     double threshold);

struct Thresholds {
    double affiliation = 85.0;
    double person = 92.0;
};

struct AffiliationCount {
    std::string label;
    std::uint64_t count = 0;

    bool operator==(const AffiliationCount&) const = default;
};

/// Attendance for one scope (a session or the whole meeting).
struct ScopeAttendance {
    /// Sorted, unique person entity ids.
    std::vector<std::string> person_ids;
    /// Unique persons per affiliation, descending count, ties by label.
    std::vector<AffiliationCount> affiliations;

    [[nodiscard]] std::size_t count() const noexcept { return person_ids.size(); }
    bool operator==(const ScopeAttendance&) const = default;
};

struct AttendanceLedger {
    /// Every person seen anywhere in the meeting.
    ScopeAttendance meeting_wide;
    std::map<std::string, ScopeAttendance> sessions;

    bool operator==(const AttendanceLedger&) const = default;
};

struct Resolution {
    std::vector<CanonicalEntity> entities;
    AttendanceLedger ledger;
};

Resolution resolve_attendance(const std::vector<ingest::RawAttendanceRow>& rows,
                              const Thresholds& thresholds = {});

} // namespace insights::resolve
