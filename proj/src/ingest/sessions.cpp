#include "insights/error.hpp"
#include "insights/ingest.hpp"
#include "insights/parallel.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>

namespace insights::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

void SourceConfig::validate() const
{
    if (meeting_number <= 0) throw InvalidArgument("meeting number must be positive");
    if (timeout_ms <= 0) throw InvalidArgument("timeout must be positive");
    if (!api_base_url && !mirror_root) {
        throw InvalidArgument("configure at least one source: API base URL or mirror root");
    }
}

namespace {

std::string read_optional(const fs::path& p)
{
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return {};
    return text::read_file(p.string());
}

/// First markdown `# ` heading, if any.
std::optional<std::string> first_heading(std::string_view doc)
{
    for (const auto& line : text::split(doc, '\n')) {
        const auto t = text::trim(line);
        if (t.starts_with("# ")) {
            const auto title = text::trim(t.substr(2));
            if (!title.empty()) return std::string(title);
        }
    }
    return std::nullopt;
}

std::string default_wg_name(const std::string& acronym)
{
    std::string out = acronym;
    for (char& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
}

/// Drafts named explicitly plus every draft mentioned in the documents.
std::vector<std::string> collect_drafts(const std::vector<std::string>& listed,
                                        const std::string& agenda, const std::string& minutes)
{
    std::vector<std::string> out;
    auto add = [&out](const std::string& d) {
        if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
    };
    for (const auto& d : listed) add(d);
    for (const auto& d : extract_draft_names(agenda)) add(d);
    for (const auto& d : extract_draft_names(minutes)) add(d);
    return out;
}

void sort_sessions(std::vector<RawSession>& sessions)
{
    std::stable_sort(sessions.begin(), sessions.end(), [](const auto& a, const auto& b) {
        return std::tie(a.wg_acronym, a.session_index) < std::tie(b.wg_acronym, b.session_index);
    });
}

std::vector<RawSession> fetch_from_mirror(const SourceConfig& cfg)
{
    const fs::path meeting_dir = *cfg.mirror_root / std::to_string(cfg.meeting_number);
    std::error_code ec;
    if (!fs::is_directory(*cfg.mirror_root, ec)) {
        throw NotFound("mirror root does not exist: " + cfg.mirror_root->string());
    }
    if (!fs::is_directory(meeting_dir, ec)) {
        // A freshly created, still empty mirror holds no sessions yet.
        if (fs::is_empty(*cfg.mirror_root, ec)) return {};
        throw NotFound("meeting " + std::to_string(cfg.meeting_number) + " not found under " +
                       cfg.mirror_root->string());
    }

    std::vector<fs::path> wg_dirs;
    for (const auto& entry : fs::directory_iterator(meeting_dir, ec)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.starts_with(".")) continue;
        if (!is_valid_acronym(name)) {
            throw ParseError("invalid WG directory name `" + name + "` in " + meeting_dir.string());
        }
        wg_dirs.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list " + meeting_dir.string() + ": " + ec.message());

    std::vector<RawSession> sessions;
    for (const auto& dir : wg_dirs) {
        RawSession s;
        s.wg_acronym = dir.filename().string();
        s.meeting_number = cfg.meeting_number;
        s.agenda_text = read_optional(dir / "agenda.md");
        s.minutes_text = read_optional(dir / "minutes.md");
        s.wg_name = first_heading(s.agenda_text)
                        .value_or(first_heading(s.minutes_text).value_or(default_wg_name(s.wg_acronym)));
        s.draft_names = collect_drafts({}, s.agenda_text, s.minutes_text);
        sessions.push_back(std::move(s));
    }
    sort_sessions(sessions);
    return sessions;
}

bool is_retryable_status(int status) noexcept { return status == 429 || status >= 500; }

std::string get_with_retry(http::Transport& transport, Clock& clock, const std::string& url,
                           const FetchOptions& options)
{
    std::string last_failure;
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        if (attempt > 0) clock.sleep_for(options.base_backoff * (1LL << (attempt - 1)));
        try {
            const auto resp = transport.get(url, {});
            if (resp.status >= 200 && resp.status < 300) return text::sanitize_utf8(resp.body);
            if (resp.status == 404) throw NotFound("not found: " + url);
            if (!is_retryable_status(resp.status)) {
                throw NetworkError("HTTP " + std::to_string(resp.status) + " from " + url);
            }
            last_failure = "HTTP " + std::to_string(resp.status);
        } catch (const http::TransportError& e) {
            last_failure = e.what();
        }
    }
    throw NetworkError("GET " + url + " failed after " + std::to_string(options.max_attempts) +
                       " attempts: " + last_failure);
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t idx)
{
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        throw ParseError("session " + std::to_string(idx) + ": `" + key + "` must be a string");
    }
    return it->get<std::string>();
}

struct ApiSessionStub {
    RawSession session;
    std::optional<std::string> minutes_url;
    std::optional<std::string> agenda_url;
};

std::vector<ApiSessionStub> parse_sessions_payload(const std::string& payload, int meeting)
{
    json doc;
    try {
        doc = json::parse(payload);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sessions payload is not JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("sessions payload must be a JSON array");

    std::vector<ApiSessionStub> stubs;
    std::map<std::string, int> per_wg;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        if (!obj.is_object()) throw ParseError("session " + std::to_string(i) + " is not an object");
        const auto acronym = optional_string(obj, "acronym", i);
        if (!acronym) throw ParseError("session " + std::to_string(i) + " lacks `acronym`");

        ApiSessionStub stub;
        stub.session.wg_acronym = text::to_lower_ascii(text::trim(*acronym));
        if (!is_valid_acronym(stub.session.wg_acronym)) {
            throw ParseError("session " + std::to_string(i) + ": invalid acronym `" + *acronym + "`");
        }
        stub.session.wg_name = optional_string(obj, "name", i).value_or(default_wg_name(stub.session.wg_acronym));
        stub.session.meeting_number = meeting;
        stub.session.session_index = per_wg[stub.session.wg_acronym]++;
        stub.minutes_url = optional_string(obj, "minutes_url", i);
        stub.agenda_url = optional_string(obj, "agenda_url", i);

        if (const auto it = obj.find("drafts"); it != obj.end() && !it->is_null()) {
            if (!it->is_array()) throw ParseError("session " + std::to_string(i) + ": `drafts` must be an array");
            for (const auto& d : *it) {
                if (!d.is_string()) throw ParseError("session " + std::to_string(i) + ": draft entries must be strings");
                const std::string name = strip_draft_version(text::to_lower_ascii(text::trim(d.get<std::string>())));
                if (!is_valid_draft_name(name)) {
                    throw ParseError("session " + std::to_string(i) + ": invalid draft name `" +
                                     d.get<std::string>() + "`");
                }
                stub.session.draft_names.push_back(name);
            }
        }
        stubs.push_back(std::move(stub));
    }
    return stubs;
}

std::vector<RawSession> fetch_from_api(const SourceConfig& cfg, http::Transport* transport,
                                       Clock* clock, const FetchOptions& options)
{
    std::unique_ptr<http::Transport> owned_transport;
    if (!transport) {
        owned_transport = http::make_default_transport(std::chrono::milliseconds(cfg.timeout_ms));
        transport = owned_transport.get();
    }
    SystemClock system_clock;
    if (!clock) clock = &system_clock;

    const std::string base = *cfg.api_base_url;
    const std::string url = http::join_url(base, "meeting/" + std::to_string(cfg.meeting_number) + "/sessions");
    std::string payload;
    try {
        payload = get_with_retry(*transport, *clock, url, options);
    } catch (const NotFound&) {
        throw NotFound("meeting " + std::to_string(cfg.meeting_number) + " not found at " + base);
    }

    auto stubs = parse_sessions_payload(payload, cfg.meeting_number);
    parallel_for(stubs.size(), options.parallelism, [&](std::size_t i) {
        auto& stub = stubs[i];
        if (stub.minutes_url && !stub.minutes_url->empty()) {
            stub.session.minutes_text = get_with_retry(*transport, *clock, http::join_url(base, *stub.minutes_url), options);
        }
        if (stub.agenda_url && !stub.agenda_url->empty()) {
            stub.session.agenda_text = get_with_retry(*transport, *clock, http::join_url(base, *stub.agenda_url), options);
        }
    });

    std::vector<RawSession> sessions;
    sessions.reserve(stubs.size());
    for (auto& stub : stubs) {
        auto& s = stub.session;
        s.draft_names = collect_drafts(s.draft_names, s.agenda_text, s.minutes_text);
        sessions.push_back(std::move(s));
    }
    sort_sessions(sessions);
    return sessions;
}

} // namespace

std::vector<RawSession> fetch_sessions(const SourceConfig& cfg, http::Transport* transport,
                                       Clock* clock, const FetchOptions& options)
{
    cfg.validate();
    if (cfg.mirror_root) return fetch_from_mirror(cfg);
    return fetch_from_api(cfg, transport, clock, options);
}

AttendanceLoad load_attendance(const SourceConfig& cfg)
{
    cfg.validate();
    if (!cfg.mirror_root) return {};
    const fs::path meeting_dir = *cfg.mirror_root / std::to_string(cfg.meeting_number);
    std::error_code ec;
    if (!fs::is_directory(meeting_dir, ec)) {
        if (fs::is_directory(*cfg.mirror_root, ec) && fs::is_empty(*cfg.mirror_root, ec)) return {};
        throw NotFound("meeting " + std::to_string(cfg.meeting_number) + " not found under " +
                       cfg.mirror_root->string());
    }

    AttendanceLoad out;
    auto absorb = [&out](AttendanceLoad part) {
        out.skipped += part.skipped;
        for (auto& row : part.rows) out.rows.push_back(std::move(row));
    };

    const fs::path registrants = meeting_dir / "registrants.csv";
    if (fs::is_regular_file(registrants, ec)) {
        absorb(parse_attendance_csv(text::read_file(registrants.string()), AttendanceScope::meeting_wide(),
                                    registrants.string()));
    }

    std::vector<std::string> wgs;
    for (const auto& entry : fs::directory_iterator(meeting_dir, ec)) {
        if (!entry.is_directory()) continue;
        const std::string name = entry.path().filename().string();
        if (name.starts_with(".")) continue;
        if (!is_valid_acronym(name)) {
            throw ParseError("invalid WG directory name `" + name + "` in " + meeting_dir.string());
        }
        wgs.push_back(name);
    }
    std::sort(wgs.begin(), wgs.end());
    for (const auto& wg : wgs) {
        const fs::path csv = meeting_dir / wg / "attendees.csv";
        if (!fs::is_regular_file(csv, ec)) continue;
        absorb(parse_attendance_csv(text::read_file(csv.string()), AttendanceScope::session(wg), csv.string()));
    }
    return out;
}

} // namespace insights::ingest
