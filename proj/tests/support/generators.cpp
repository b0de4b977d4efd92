#include "generators.hpp"

namespace insights::test {

std::string hostile_text(Gen& gen, std::size_t max_len)
{
    static const std::vector<std::string> pieces{
        "a", "Z", "7", " ", "  ", "\n", "\n\n", "\t", "{", "}", "\\", "%", "$", "&", "#", "_", "^", "~",
        "\\begin{itemize}", "\\end{document}", "\\section{", "}}", "{{", "*", "`", "```", "~~~", "[", "]",
        "(", ")", "<", ">", "|", "# ", "## ", "===", "---", "\"", "'", "é", "ß", "中文", "😀", "\\\\", "%%",
        "draft-ietf-x-01", "\r", "\x01", "\x7f", "<<FACTS>>", "\\n"};
    return gen.string_from(pieces, gen.range(0, max_len));
}

namespace {

std::string acronym(Gen& gen)
{
    static const std::vector<std::string> chars{"a", "b", "c", "6", "l", "o", "-", "m", "n", "x"};
    std::string s = gen.pick(std::vector<std::string>{"a", "b", "6", "x"});
    s += gen.string_from(chars, gen.range(0, 6));
    return s;
}

std::string draft(Gen& gen)
{
    static const std::vector<std::string> chars{"a", "b", "c", "6", "l", "o", "-", "m", ".", "1"};
    return "draft-" + gen.pick(std::vector<std::string>{"ietf-", "x-", "li-"}) + gen.string_from(chars, gen.range(1, 10)) +
           "z";
}

} // namespace

corpus::Corpus random_corpus(Gen& gen)
{
    corpus::Corpus c;
    c.meeting_number = static_cast<int>(gen.range(1, 200));
    c.created_at = corpus::Timestamp(std::chrono::seconds(gen.range(0, 4'000'000'000ULL)));

    const std::size_t persons = gen.range(0, 6);
    for (std::size_t i = 0; i < persons; ++i) {
        resolve::CanonicalEntity e;
        e.kind = resolve::EntityKind::person;
        e.label = hostile_text(gen, 6) + "p" + std::to_string(i);
        e.id = "person:" + std::to_string(i);
        e.surface_forms = {e.label, hostile_text(gen, 4)};
        e.normalized_forms = {"p" + std::to_string(i)};
        e.frequency = gen.range(1, 9);
        c.entities.push_back(std::move(e));
    }
    if (gen.chance(0.5)) {
        resolve::CanonicalEntity u;
        u.kind = resolve::EntityKind::affiliation;
        u.id = resolve::unaffiliated_id();
        u.label = std::string(resolve::kUnaffiliatedLabel);
        u.normalized_forms = {"unaffiliated"};
        u.frequency = gen.range(0, 3);
        c.entities.push_back(std::move(u));
    }

    const std::size_t sessions = gen.range(0, 4);
    for (std::size_t i = 0; i < sessions; ++i) {
        corpus::SessionRecord s;
        s.wg_acronym = acronym(gen) + std::to_string(i);
        s.wg_name = hostile_text(gen, 8);
        s.minutes_text = hostile_text(gen, 60);
        s.agenda_text = hostile_text(gen, 30);
        for (std::size_t d = gen.range(0, 3); d > 0; --d) s.draft_names.push_back(draft(gen));

        resolve::ScopeAttendance scope;
        for (std::size_t p = 0; p < persons; ++p) {
            if (gen.chance(0.5)) scope.person_ids.push_back("person:" + std::to_string(p));
        }
        for (std::size_t a = gen.range(0, 3); a > 0; --a) {
            scope.affiliations.push_back({hostile_text(gen, 5), gen.range(1, 5)});
        }
        s.attendee_count = scope.count();
        s.top_affiliations = scope.affiliations;
        if (gen.chance(0.8)) c.ledger.sessions.emplace(s.wg_acronym, scope);
        c.sessions.emplace(s.wg_acronym, std::move(s));
    }
    for (std::size_t p = 0; p < persons; ++p) c.ledger.meeting_wide.person_ids.push_back("person:" + std::to_string(p));
    return c;
}

report::WgReport random_report(Gen& gen, const std::string& acronym)
{
    report::WgReport r;
    r.wg_acronym = acronym;
    r.wg_name = hostile_text(gen, 8);
    r.attendees_overview.count = gen.range(0, 3) == 0 ? 0 : gen.range(1, 500);
    for (std::size_t i = gen.range(0, 6); i > 0; --i) r.attendees_overview.prominent_affiliations.push_back(hostile_text(gen, 5));
    r.attendees_overview.narrative = hostile_text(gen, 40);
    for (std::size_t i = gen.range(0, 6); i > 0; --i) {
        report::Discussion d;
        d.title = hostile_text(gen, 8);
        d.body = hostile_text(gen, 50);
        for (std::size_t p = gen.range(0, 3); p > 0; --p) d.presenters.push_back(hostile_text(gen, 4));
        for (std::size_t k = gen.range(0, 3); k > 0; --k) d.draft_links.push_back("draft-ietf-x-" + std::to_string(k));
        r.discussions.push_back(std::move(d));
    }
    return r;
}

} // namespace insights::test
