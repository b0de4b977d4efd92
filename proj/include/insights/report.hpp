#pragma once

#include "insights/corpus.hpp"
#include "insights/summarize.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace insights::report {

struct AttendeesOverview {
    std::uint64_t count = 0;
    std::vector<std::string> prominent_affiliations;
    std::string narrative;

    bool operator==(const AttendeesOverview&) const = default;
};

struct Discussion {
    std::string title;
    std::string body;
    std::vector<std::string> presenters;
    std::vector<std::string> draft_links;

    bool operator==(const Discussion&) const = default;
};

/// One chapter of the meeting report: Attendees Overview, then Meeting
/// Discussions.
struct WgReport {
    std::string wg_name;
    std::string wg_acronym;
    AttendeesOverview attendees_overview;
    std::vector<Discussion> discussions;

    bool operator==(const WgReport&) const = default;
};

struct ComposeOptions {
    std::size_t max_affiliations = 5;
};

/// Throws ConsistencyError when the summary belongs to another WG or links a
/// draft the session does not know.
WgReport compose(const llm::WgSummary& summary, const corpus::SessionRecord& session,
                 const ComposeOptions& options = {});

enum class Format { markdown, latex };

/// Accepts `md`/`markdown` and `tex`/`latex`. Throws InvalidArgument.
Format parse_format(std::string_view s);
std::string_view file_extension(Format f) noexcept;

struct RenderedDocument {
    Format format = Format::markdown;
    std::string body;
    std::size_t wg_count = 0;

    bool operator==(const RenderedDocument&) const = default;
};

RenderedDocument render(const WgReport& report, Format format);

inline constexpr std::string_view kDefaultAttribution = "Generated by IETF Reporter";

struct MasterOptions {
    std::string attribution = std::string(kDefaultAttribution);
    /// Printed under the attribution when set, e.g. "26th of March 2024".
    std::optional<std::string> date;
};

/// Title block, table of contents and every chapter in ascending acronym
/// order. Throws DuplicateWg.
RenderedDocument assemble_master(const std::vector<WgReport>& reports, int meeting_number, Format format,
                                 const MasterOptions& options = {});

/// `https://datatracker.ietf.org/doc/<name>`
std::string datatracker_url(std::string_view draft_name);
/// "26th of March 2024"
std::string long_date(corpus::Timestamp t);

/// Escapes `# $ % & _ { } ~ ^ \` and drops control characters.
std::string latex_escape(std::string_view s);

struct CheckResult {
    bool ok = true;
    std::string message;

    explicit operator bool() const noexcept { return ok; }
};

/// Unescaped braces balance and every \begin{x} closes with \end{x}.
CheckResult check_latex_balance(std::string_view latex);
/// ATX headings start at level 1 and never skip a level going down
/// (fenced code is ignored).
CheckResult check_markdown_headings(std::string_view markdown);

} // namespace insights::report
