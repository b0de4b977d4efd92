#include "insights/corpus.hpp"

#include "insights/error.hpp"

#include <algorithm>
#include <cstdio>

namespace insights::corpus {

std::string format_timestamp(Timestamp t)
{
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_timestamp(std::string_view s)
{
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0, d = 0;
    int h = 0, mi = 0, sec = 0;
    char tail = 0;
    const std::string str(s);
    if (std::sscanf(str.c_str(), "%4d-%2u-%2uT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &sec, &tail) != 7 ||
        tail != 'Z' || str.size() != 20) {
        throw ParseError("invalid UTC timestamp `" + str + "` (expected YYYY-MM-DDTHH:MM:SSZ)");
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 59 || h < 0 || mi < 0 || sec < 0) {
        throw ParseError("invalid UTC timestamp `" + str + "`");
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

const SessionRecord* Corpus::find(const std::string& wg) const
{
    const auto it = sessions.find(wg);
    return it == sessions.end() ? nullptr : &it->second;
}

namespace {

void add_unique(std::vector<std::string>& out, const std::vector<std::string>& names)
{
    for (const auto& n : names) {
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
}

void append_document(std::string& into, const std::string& doc)
{
    if (doc.empty()) return;
    if (!into.empty()) into += "\n\n";
    into += doc;
}

} // namespace

Corpus build_corpus(int meeting_number, const std::vector<ingest::RawSession>& sessions,
                    const resolve::AttendanceLedger& ledger,
                    const std::vector<resolve::CanonicalEntity>& entities, Timestamp created_at)
{
    Corpus c;
    c.meeting_number = meeting_number;
    c.created_at = created_at;
    c.entities = entities;
    c.ledger = ledger;

    std::vector<const ingest::RawSession*> ordered;
    for (const auto& s : sessions) ordered.push_back(&s);
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return std::tie(a->wg_acronym, a->session_index) < std::tie(b->wg_acronym, b->session_index);
    });

    for (const auto* s : ordered) {
        if (s->meeting_number != meeting_number) {
            throw ConsistencyError("session " + s->wg_acronym + " belongs to meeting " +
                                   std::to_string(s->meeting_number) + ", expected " +
                                   std::to_string(meeting_number));
        }
        auto [it, inserted] = c.sessions.try_emplace(s->wg_acronym);
        SessionRecord& rec = it->second;
        if (inserted) {
            rec.wg_acronym = s->wg_acronym;
            rec.wg_name = s->wg_name;
        }
        append_document(rec.minutes_text, s->minutes_text);
        append_document(rec.agenda_text, s->agenda_text);
        add_unique(rec.draft_names, s->draft_names);
    }

    for (auto& [wg, rec] : c.sessions) {
        add_unique(rec.draft_names, ingest::extract_draft_names(rec.agenda_text));
        add_unique(rec.draft_names, ingest::extract_draft_names(rec.minutes_text));
    }

    for (const auto& [wg, attendance] : ledger.sessions) {
        auto it = c.sessions.find(wg);
        if (it == c.sessions.end()) {
            throw ConsistencyError("attendance recorded for unknown session `" + wg + "`");
        }
        it->second.attendee_count = attendance.count();
        it->second.top_affiliations = attendance.affiliations;
    }
    return c;
}

} // namespace insights::corpus
