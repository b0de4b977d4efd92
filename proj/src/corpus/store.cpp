#include "insights/corpus.hpp"

#include "insights/error.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

namespace insights::corpus {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key)
{
    if (!obj.is_object()) throw SchemaError(std::string("expected an object holding `") + key + "`");
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string("missing key `") + key + "`");
    return *it;
}

template <typename T>
T field(const json& obj, const char* key)
{
    const json& v = require(obj, key);
    try {
        return v.get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bad value for `") + key + "`: " + e.what());
    }
}

const json& array_field(const json& obj, const char* key)
{
    const json& v = require(obj, key);
    if (!v.is_array()) throw SchemaError(std::string("`") + key + "` must be an array");
    return v;
}

json affiliations_to_json(const std::vector<resolve::AffiliationCount>& list)
{
    json out = json::array();
    for (const auto& a : list) out.push_back({{"label", a.label}, {"count", a.count}});
    return out;
}

std::vector<resolve::AffiliationCount> affiliations_from_json(const json& arr)
{
    std::vector<resolve::AffiliationCount> out;
    for (const auto& a : arr) out.push_back({field<std::string>(a, "label"), field<std::uint64_t>(a, "count")});
    return out;
}

json scope_to_json(const resolve::ScopeAttendance& s)
{
    return {{"person_ids", s.person_ids}, {"affiliations", affiliations_to_json(s.affiliations)}};
}

resolve::ScopeAttendance scope_from_json(const json& j)
{
    resolve::ScopeAttendance s;
    s.person_ids = field<std::vector<std::string>>(j, "person_ids");
    s.affiliations = affiliations_from_json(array_field(j, "affiliations"));
    return s;
}

resolve::EntityKind kind_from_string(const std::string& s)
{
    if (s == "person") return resolve::EntityKind::person;
    if (s == "affiliation") return resolve::EntityKind::affiliation;
    throw SchemaError("unknown entity kind `" + s + "`");
}

std::string dump(const json& doc)
{
    return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

json session_to_json(const ingest::RawSession& s)
{
    return {{"wg_acronym", s.wg_acronym},       {"wg_name", s.wg_name},
            {"meeting_number", s.meeting_number}, {"session_index", s.session_index},
            {"agenda_text", s.agenda_text},     {"minutes_text", s.minutes_text},
            {"draft_names", s.draft_names}};
}

} // namespace

json parse_json_document(const std::string& content, const std::string& what)
{
    try {
        return json::parse(content);
    } catch (const json::parse_error& e) {
        throw SchemaError(what + " is not valid JSON: " + e.what());
    }
}

json to_json(const Corpus& c)
{
    json sessions = json::object();
    for (const auto& [wg, s] : c.sessions) {
        sessions[wg] = {{"wg_acronym", s.wg_acronym},
                        {"wg_name", s.wg_name},
                        {"minutes_text", s.minutes_text},
                        {"agenda_text", s.agenda_text},
                        {"draft_names", s.draft_names},
                        {"attendee_count", s.attendee_count},
                        {"top_affiliations", affiliations_to_json(s.top_affiliations)}};
    }
    json entities = json::array();
    for (const auto& e : c.entities) {
        entities.push_back({{"id", e.id},
                            {"kind", std::string(resolve::to_string(e.kind))},
                            {"label", e.label},
                            {"surface_forms", e.surface_forms},
                            {"normalized_forms", e.normalized_forms},
                            {"frequency", e.frequency}});
    }
    json ledger_sessions = json::object();
    for (const auto& [wg, s] : c.ledger.sessions) ledger_sessions[wg] = scope_to_json(s);

    return {{"schema", kSchemaVersion},
            {"meeting_number", c.meeting_number},
            {"created_at", format_timestamp(c.created_at)},
            {"sessions", sessions},
            {"entities", entities},
            {"ledger", {{"meeting_wide", scope_to_json(c.ledger.meeting_wide)}, {"sessions", ledger_sessions}}}};
}

Corpus corpus_from_json(const json& doc)
{
    if (!doc.is_object()) throw SchemaError("corpus document must be a JSON object");
    const int schema = field<int>(doc, "schema");
    if (schema != kSchemaVersion) {
        throw SchemaError("unsupported corpus schema " + std::to_string(schema) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    }

    Corpus c;
    c.meeting_number = field<int>(doc, "meeting_number");
    try {
        c.created_at = parse_timestamp(field<std::string>(doc, "created_at"));
    } catch (const ParseError& e) {
        throw SchemaError(e.what());
    }

    const json& sessions = require(doc, "sessions");
    if (!sessions.is_object()) throw SchemaError("`sessions` must be an object");
    for (const auto& [wg, s] : sessions.items()) {
        SessionRecord rec;
        rec.wg_acronym = field<std::string>(s, "wg_acronym");
        rec.wg_name = field<std::string>(s, "wg_name");
        rec.minutes_text = field<std::string>(s, "minutes_text");
        rec.agenda_text = field<std::string>(s, "agenda_text");
        rec.draft_names = field<std::vector<std::string>>(s, "draft_names");
        rec.attendee_count = field<std::uint64_t>(s, "attendee_count");
        rec.top_affiliations = affiliations_from_json(array_field(s, "top_affiliations"));
        if (rec.wg_acronym != wg) throw SchemaError("session key `" + wg + "` does not match its acronym");
        c.sessions.emplace(wg, std::move(rec));
    }

    for (const auto& e : array_field(doc, "entities")) {
        resolve::CanonicalEntity ent;
        ent.id = field<std::string>(e, "id");
        ent.kind = kind_from_string(field<std::string>(e, "kind"));
        ent.label = field<std::string>(e, "label");
        ent.surface_forms = field<std::set<std::string>>(e, "surface_forms");
        ent.normalized_forms = field<std::set<std::string>>(e, "normalized_forms");
        ent.frequency = field<std::uint64_t>(e, "frequency");
        c.entities.push_back(std::move(ent));
    }

    const json& ledger = require(doc, "ledger");
    c.ledger.meeting_wide = scope_from_json(require(ledger, "meeting_wide"));
    const json& ledger_sessions = require(ledger, "sessions");
    if (!ledger_sessions.is_object()) throw SchemaError("`ledger.sessions` must be an object");
    for (const auto& [wg, s] : ledger_sessions.items()) {
        if (!c.sessions.contains(wg)) throw SchemaError("ledger references unknown session `" + wg + "`");
        c.ledger.sessions.emplace(wg, scope_from_json(s));
    }
    return c;
}

std::string serialize(const Corpus& corpus) { return dump(to_json(corpus)); }

void save(const Corpus& corpus, const std::filesystem::path& dir)
{
    text::write_file((dir / kCorpusFile).string(), serialize(corpus));
}

Corpus load(const std::filesystem::path& dir)
{
    const auto path = dir / kCorpusFile;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("missing " + path.string());
    return corpus_from_json(parse_json_document(text::read_file(path.string()), path.string()));
}

std::string serialize(const Snapshot& snapshot)
{
    json sessions = json::array();
    for (const auto& s : snapshot.sessions) sessions.push_back(session_to_json(s));
    json rows = json::array();
    for (const auto& r : snapshot.attendance) {
        rows.push_back({{"name", r.raw_name},
                        {"affiliation", r.raw_affiliation},
                        {"scope", r.scope.wg_acronym ? json(*r.scope.wg_acronym) : json(nullptr)}});
    }
    return dump({{"schema", kSchemaVersion},
                 {"meeting_number", snapshot.meeting_number},
                 {"sessions", sessions},
                 {"attendance", rows},
                 {"skipped_rows", snapshot.skipped_rows}});
}

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& dir)
{
    text::write_file((dir / kSnapshotFile).string(), serialize(snapshot));
}

Snapshot load_snapshot(const std::filesystem::path& dir)
{
    const auto path = dir / kSnapshotFile;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("missing " + path.string());
    try {
        const json doc = parse_json_document(text::read_file(path.string()), path.string());
        if (field<int>(doc, "schema") != kSchemaVersion) throw SchemaError("unsupported snapshot schema");
        Snapshot snap;
        snap.meeting_number = field<int>(doc, "meeting_number");
        snap.skipped_rows = field<std::size_t>(doc, "skipped_rows");
        for (const auto& s : array_field(doc, "sessions")) {
            ingest::RawSession rs;
            rs.wg_acronym = field<std::string>(s, "wg_acronym");
            rs.wg_name = field<std::string>(s, "wg_name");
            rs.meeting_number = field<int>(s, "meeting_number");
            rs.session_index = field<int>(s, "session_index");
            rs.agenda_text = field<std::string>(s, "agenda_text");
            rs.minutes_text = field<std::string>(s, "minutes_text");
            rs.draft_names = field<std::vector<std::string>>(s, "draft_names");
            if (!ingest::is_valid_acronym(rs.wg_acronym)) throw SchemaError("invalid acronym `" + rs.wg_acronym + "`");
            snap.sessions.push_back(std::move(rs));
        }
        for (const auto& r : array_field(doc, "attendance")) {
            ingest::RawAttendanceRow row;
            row.raw_name = field<std::string>(r, "name");
            row.raw_affiliation = field<std::string>(r, "affiliation");
            const json& scope = require(r, "scope");
            if (scope.is_string()) {
                row.scope = ingest::AttendanceScope::session(scope.get<std::string>());
            } else if (!scope.is_null()) {
                throw SchemaError("`scope` must be a string or null");
            }
            snap.attendance.push_back(std::move(row));
        }
        return snap;
    } catch (const SchemaError& e) {
        throw ParseError(path.string(), 1, e.what());
    }
}

} // namespace insights::corpus
