#include "insights/resolve.hpp"

#include "insights/text.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace insights::resolve {

namespace {

/// Names that normalize to nothing (all punctuation) keep their trimmed
/// spelling so they still count as a person.
NormalizedString normalize_person(const std::string& raw)
{
    auto n = normalize(raw);
    if (n.normalized.empty()) n.normalized = std::string(text::trim(n.original));
    return n;
}

struct ScopeAccumulator {
    std::set<std::string> persons;
    std::set<std::pair<std::string, std::string>> person_affiliation;

    void add(const std::string& person_id, const std::string& affiliation_id)
    {
        persons.insert(person_id);
        person_affiliation.emplace(person_id, affiliation_id);
    }

    ScopeAttendance finish(const std::unordered_map<std::string, std::string>& labels) const
    {
        ScopeAttendance out;
        out.person_ids.assign(persons.begin(), persons.end());
        std::map<std::string, std::uint64_t> per_affiliation;
        for (const auto& [person, affiliation] : person_affiliation) ++per_affiliation[affiliation];
        for (const auto& [id, count] : per_affiliation) out.affiliations.push_back({labels.at(id), count});
        std::sort(out.affiliations.begin(), out.affiliations.end(), [](const auto& a, const auto& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.label < b.label;
        });
        return out;
    }
};

} // namespace

Resolution resolve_attendance(const std::vector<ingest::RawAttendanceRow>& rows,
                              const Thresholds& thresholds)
{
    std::vector<NormalizedString> names;
    std::vector<NormalizedString> affiliations;
    names.reserve(rows.size());
    affiliations.reserve(rows.size());
    for (const auto& row : rows) {
        names.push_back(normalize_person(row.raw_name));
        affiliations.push_back(normalize(row.raw_affiliation));
    }

    Resolution out;
    auto persons = cluster(names, EntityKind::person, thresholds.person);
    auto orgs = cluster(affiliations, EntityKind::affiliation, thresholds.affiliation);

    std::unordered_map<std::string, std::string> person_of_form;
    std::unordered_map<std::string, std::string> org_of_form;
    std::unordered_map<std::string, std::string> labels;
    for (const auto& e : persons) {
        for (const auto& f : e.normalized_forms) person_of_form[f] = e.id;
    }
    for (const auto& e : orgs) {
        for (const auto& f : e.normalized_forms) org_of_form[f] = e.id;
        labels[e.id] = e.label;
    }

    ScopeAccumulator meeting;
    std::map<std::string, ScopeAccumulator> sessions;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string& pid = person_of_form.at(names[i].normalized);
        const std::string& aid = org_of_form.at(affiliations[i].normalized);
        meeting.add(pid, aid);
        if (rows[i].scope.wg_acronym) sessions[*rows[i].scope.wg_acronym].add(pid, aid);
    }

    out.ledger.meeting_wide = meeting.finish(labels);
    for (const auto& [wg, acc] : sessions) out.ledger.sessions.emplace(wg, acc.finish(labels));

    out.entities = std::move(persons);
    for (auto& e : orgs) out.entities.push_back(std::move(e));
    return out;
}

} // namespace insights::resolve
