#include "insights/report.hpp"

#include "insights/error.hpp"

#include <algorithm>

namespace insights::report {

WgReport compose(const llm::WgSummary& summary, const corpus::SessionRecord& session,
                 const ComposeOptions& options)
{
    if (summary.wg_acronym != session.wg_acronym) {
        throw ConsistencyError("summary for `" + summary.wg_acronym + "` paired with session `" +
                               session.wg_acronym + "`");
    }

    WgReport r;
    r.wg_name = session.wg_name;
    r.wg_acronym = session.wg_acronym;
    r.attendees_overview.count = session.attendee_count;
    r.attendees_overview.narrative = summary.overview;
    for (const auto& a : session.top_affiliations) {
        if (r.attendees_overview.prominent_affiliations.size() >= options.max_affiliations) break;
        if (a.label == resolve::kUnaffiliatedLabel) continue;
        r.attendees_overview.prominent_affiliations.push_back(a.label);
    }

    for (const auto& t : summary.topics) {
        for (const auto& d : t.draft_links) {
            if (std::find(session.draft_names.begin(), session.draft_names.end(), d) == session.draft_names.end()) {
                throw ConsistencyError("topic `" + t.title + "` links `" + d + "`, unknown to session `" +
                                       session.wg_acronym + "`");
            }
        }
        r.discussions.push_back(Discussion{t.title, t.body, t.presenters, t.draft_links});
    }
    return r;
}

Format parse_format(std::string_view s)
{
    if (s == "md" || s == "markdown") return Format::markdown;
    if (s == "tex" || s == "latex") return Format::latex;
    throw InvalidArgument("unknown format `" + std::string(s) + "` (expected md or tex)");
}

std::string_view file_extension(Format f) noexcept
{
    return f == Format::markdown ? "md" : "tex";
}

std::string datatracker_url(std::string_view draft_name)
{
    return "https://datatracker.ietf.org/doc/" + std::string(draft_name);
}

std::string long_date(corpus::Timestamp t)
{
    using namespace std::chrono;
    static constexpr const char* months[] = {"January", "February", "March",     "April",   "May",      "June",
                                             "July",    "August",   "September", "October", "November", "December"};
    const year_month_day ymd{floor<days>(t)};
    const unsigned d = static_cast<unsigned>(ymd.day());
    const char* suffix = "th";
    if (d % 100 < 11 || d % 100 > 13) {
        if (d % 10 == 1) suffix = "st";
        else if (d % 10 == 2) suffix = "nd";
        else if (d % 10 == 3) suffix = "rd";
    }
    return std::to_string(d) + suffix + " of " + months[static_cast<unsigned>(ymd.month()) - 1] + " " +
           std::to_string(static_cast<int>(ymd.year()));
}

} // namespace insights::report
