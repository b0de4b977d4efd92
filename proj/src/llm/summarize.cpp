#include "insights/summarize.hpp"

#include "embedded_assets.hpp"
#include "insights/error.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

namespace insights::llm {

using nlohmann::json;

namespace {

/// Max affiliations listed in the facts block.
constexpr std::size_t kFactsAffiliations = 10;

std::string strip_markdown_links(std::string_view s)
{
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == '[') {
            const auto close = s.find("](", i);
            const auto nested = s.find('[', i + 1);
            if (close != std::string_view::npos && (nested == std::string_view::npos || nested > close)) {
                const auto end = s.find(')', close + 2);
                if (end != std::string_view::npos) {
                    out.append(s.substr(i + 1, close - i - 1));
                    i = end + 1;
                    continue;
                }
            }
        }
        out.push_back(s[i++]);
    }
    return out;
}

bool is_draft_char(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

std::string remove_draft_tokens(std::string_view s)
{
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s.substr(i).starts_with("draft-") &&
            (i == 0 || !(std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '-'))) {
            std::size_t end = i + 6;
            while (end < s.size() && is_draft_char(s[end])) ++end;
            // keep a sentence-ending period
            if (end > i + 6 && s[end - 1] == '.') --end;
            i = end;
            continue;
        }
        out.push_back(s[i++]);
    }
    return out;
}

std::string tidy(std::string s)
{
    for (const char* empty : {"()", "( )", "[]", "[ ]"}) {
        for (auto pos = s.find(empty); pos != std::string::npos; pos = s.find(empty)) {
            s.erase(pos, std::char_traits<char>::length(empty));
        }
    }
    std::string collapsed;
    for (char c : s) {
        if (c == ' ' && !collapsed.empty() && collapsed.back() == ' ') continue;
        collapsed.push_back(c);
    }
    std::string_view v = text::trim(collapsed);
    while (!v.empty() && std::string_view(",;:-").find(v.back()) != std::string_view::npos) {
        v.remove_suffix(1);
        v = text::trim(v);
    }
    if (v.size() >= 4 && v.starts_with("**") && v.ends_with("**")) v = text::trim(v.substr(2, v.size() - 4));
    return std::string(v);
}

/// Text of a top-level markdown list item, or nothing.
std::optional<std::string_view> list_item(std::string_view line)
{
    if (line.size() >= 2 && (line[0] == '-' || line[0] == '*' || line[0] == '+') && line[1] == ' ') {
        return line.substr(2);
    }
    std::size_t d = 0;
    while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
    if (d > 0 && d + 1 < line.size() && (line[d] == '.' || line[d] == ')') && line[d + 1] == ' ') {
        return line.substr(d + 2);
    }
    return std::nullopt;
}

/// Splits `title -- presenter` on the last dash separator.
std::pair<std::string, std::string> split_presenter(const std::string& item)
{
    std::size_t best = std::string::npos;
    std::size_t sep_len = 0;
    for (std::string_view sep : {" -- ", " \xE2\x80\x94 ", " \xE2\x80\x93 "}) {
        const auto pos = item.rfind(sep);
        if (pos != std::string::npos && (best == std::string::npos || pos > best)) {
            best = pos;
            sep_len = sep.size();
        }
    }
    if (best == std::string::npos) return {item, {}};
    return {item.substr(0, best), item.substr(best + sep_len)};
}

json affiliations_json(const std::vector<resolve::AffiliationCount>& list)
{
    json out = json::array();
    for (const auto& a : list) out.push_back({{"label", a.label}, {"count", a.count}});
    return out;
}

std::string dump_compact(const json& j)
{
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

} // namespace

std::vector<AgendaTopic> parse_agenda_topics(std::string_view agenda)
{
    std::vector<AgendaTopic> out;
    for (const auto& raw_line : text::split(agenda, '\n')) {
        std::string_view line = raw_line;
        if (line.ends_with('\r')) line.remove_suffix(1);
        const auto item = list_item(line);
        if (!item) continue;

        const std::string plain = strip_markdown_links(*item);
        AgendaTopic topic;
        topic.drafts = ingest::extract_draft_names(plain);
        auto [title, presenter] = split_presenter(remove_draft_tokens(plain));
        topic.title = tidy(title);
        topic.presenter = tidy(presenter);
        if (topic.title.empty() && !topic.drafts.empty()) topic.title = topic.drafts.front();
        if (topic.title.empty()) continue;
        out.push_back(std::move(topic));
    }
    return out;
}

WgFacts facts_for(const corpus::SessionRecord& session)
{
    WgFacts f;
    f.wg_acronym = session.wg_acronym;
    f.wg_name = session.wg_name;
    f.attendee_count = session.attendee_count;
    f.top_affiliations.assign(session.top_affiliations.begin(),
                              session.top_affiliations.begin() +
                                  static_cast<std::ptrdiff_t>(std::min(kFactsAffiliations, session.top_affiliations.size())));
    f.draft_names = session.draft_names;
    f.agenda_topics = parse_agenda_topics(session.agenda_text);
    return f;
}

json facts_to_json(const WgFacts& f)
{
    json topics = json::array();
    for (const auto& t : f.agenda_topics) {
        topics.push_back({{"title", t.title}, {"presenter", t.presenter}, {"drafts", t.drafts}});
    }
    return {{"wg", f.wg_acronym},
            {"wg_name", f.wg_name},
            {"attendee_count", f.attendee_count},
            {"top_affiliations", affiliations_json(f.top_affiliations)},
            {"drafts", f.draft_names},
            {"topics", topics}};
}

WgFacts facts_from_json(const json& doc)
{
    WgFacts f;
    try {
        f.wg_acronym = doc.at("wg").get<std::string>();
        f.wg_name = doc.at("wg_name").get<std::string>();
        f.attendee_count = doc.at("attendee_count").get<std::uint64_t>();
        for (const auto& a : doc.at("top_affiliations")) {
            f.top_affiliations.push_back({a.at("label").get<std::string>(), a.at("count").get<std::uint64_t>()});
        }
        f.draft_names = doc.at("drafts").get<std::vector<std::string>>();
        for (const auto& t : doc.at("topics")) {
            f.agenda_topics.push_back({t.at("title").get<std::string>(), t.at("presenter").get<std::string>(),
                                       t.at("drafts").get<std::vector<std::string>>()});
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed facts block: ") + e.what());
    }
    return f;
}

std::string facts_block(const WgFacts& facts)
{
    return std::string(kFactsBegin) + "\n" + dump_compact(facts_to_json(facts)) + "\n" + std::string(kFactsEnd);
}

std::string mock_complete(const CompletionRequest& request)
{
    // The first marker whose block parses wins; templates may mention the
    // marker in prose before the real block.
    std::optional<json> doc;
    std::string problem = "prompt has no facts block";
    for (std::string_view source : {std::string_view(request.user_prompt), std::string_view(request.system_prompt)}) {
        for (auto begin = source.find(kFactsBegin); begin != std::string_view::npos && !doc;
             begin = source.find(kFactsBegin, begin + 1)) {
            const auto body = begin + kFactsBegin.size();
            const auto end = source.find(kFactsEnd, body);
            if (end == std::string_view::npos) {
                problem = "facts block is not terminated";
                break;
            }
            try {
                doc = json::parse(source.substr(body, end - body));
            } catch (const json::parse_error& e) {
                problem = std::string("facts block is not JSON: ") + e.what();
            }
        }
        if (doc) break;
    }
    if (!doc) throw FormatError(problem);
    const WgFacts facts = facts_from_json(*doc);

    std::vector<std::string> labels;
    for (const auto& a : facts.top_affiliations) labels.push_back(a.label);
    std::string overview = std::to_string(facts.attendee_count) + " participants";
    if (!labels.empty()) overview += "; " + text::join(labels, ", ");

    json topics = json::array();
    for (const auto& t : facts.agenda_topics) {
        json presenters = json::array();
        if (!t.presenter.empty()) presenters.push_back(t.presenter);
        topics.push_back({{"title", t.title}, {"body", ""}, {"presenters", presenters}, {"drafts", t.drafts}});
    }
    return dump_compact({{"overview", overview}, {"topics", topics}});
}

WgSummary parse_summary(std::string_view reply, const std::string& wg_acronym)
{
    const auto open = reply.find('{');
    const auto close = reply.rfind('}');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        throw FormatError("reply contains no JSON object");
    }
    json doc;
    try {
        doc = json::parse(reply.substr(open, close - open + 1));
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("reply is not valid JSON: ") + e.what());
    }

    auto string_list = [](const json& obj, const char* key) {
        std::vector<std::string> out;
        const auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) return out;
        if (!it->is_array()) throw FormatError(std::string("`") + key + "` must be an array");
        for (const auto& v : *it) {
            if (!v.is_string()) throw FormatError(std::string("`") + key + "` entries must be strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    };

    WgSummary s;
    s.wg_acronym = wg_acronym;
    if (!doc.is_object() || !doc.contains("overview") || !doc["overview"].is_string()) {
        throw FormatError("reply lacks a string `overview`");
    }
    s.overview = doc["overview"].get<std::string>();
    const auto topics = doc.find("topics");
    if (topics != doc.end() && !topics->is_null()) {
        if (!topics->is_array()) throw FormatError("`topics` must be an array");
        for (const auto& t : *topics) {
            if (!t.is_object() || !t.contains("title") || !t["title"].is_string()) {
                throw FormatError("each topic needs a string `title`");
            }
            TopicSection section;
            section.title = t["title"].get<std::string>();
            if (const auto b = t.find("body"); b != t.end() && !b->is_null()) {
                if (!b->is_string()) throw FormatError("topic `body` must be a string");
                section.body = b->get<std::string>();
            }
            section.presenters = string_list(t, "presenters");
            for (const auto& d : string_list(t, "drafts")) {
                section.draft_links.push_back(ingest::strip_draft_version(text::to_lower_ascii(text::trim(d))));
            }
            s.topics.push_back(std::move(section));
        }
    }
    return s;
}

void check_grounding(const WgSummary& summary, const WgFacts& facts)
{
    const std::set<std::string> known(facts.draft_names.begin(), facts.draft_names.end());
    auto require_known = [&](const std::string& name, const std::string& where) {
        if (!ingest::is_valid_draft_name(name) || !known.contains(name)) {
            throw GroundingError(summary.wg_acronym + ": " + where + " references `" + name +
                                 "`, which is not among the session's drafts");
        }
    };
    for (const auto& d : ingest::extract_draft_names(summary.overview)) require_known(d, "overview");
    for (const auto& t : summary.topics) {
        for (const auto& d : t.draft_links) require_known(d, "topic `" + t.title + "`");
        for (const auto& d : ingest::extract_draft_names(t.title + "\n" + t.body)) {
            require_known(d, "topic `" + t.title + "`");
        }
    }
}

std::string fill_template(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& values)
{
    std::string out;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl.substr(i).starts_with("{{")) {
            const auto end = tmpl.find("}}", i + 2);
            if (end != std::string_view::npos) {
                const std::string_view key = tmpl.substr(i + 2, end - i - 2);
                const auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
                if (it != values.end()) {
                    out += it->second;
                    i = end + 2;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i++]);
    }
    return out;
}

PromptTemplates PromptTemplates::defaults()
{
    return PromptTemplates{std::string(assets::kSystemTemplate), std::string(assets::kMapTemplate),
                           std::string(assets::kReduceTemplate), std::string(assets::kRepairTemplate)};
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir)
{
    PromptTemplates t = defaults();
    auto read_if = [&dir](const char* name, std::string& into) {
        std::error_code ec;
        const auto p = dir / name;
        if (std::filesystem::is_regular_file(p, ec)) into = text::read_file(p.string());
    };
    read_if("system.txt", t.system);
    read_if("map.txt", t.map);
    read_if("reduce.txt", t.reduce);
    read_if("repair.txt", t.repair);
    return t;
}

WgSummary summarize_wg(const corpus::Corpus& corpus, const index::RetrievalIndex& idx,
                       const std::string& wg_acronym, LlmClient& client, const PromptTemplates& templates,
                       const SummarizeOptions& options)
{
    const corpus::SessionRecord* session = corpus.find(wg_acronym);
    if (!session) throw NotFound("working group `" + wg_acronym + "` is not in the corpus");

    WgFacts facts = facts_for(*session);
    const auto minutes = idx.chunks_for(wg_acronym, index::DocKind::minutes);
    // Without minutes nothing was discussed, so there are no topic sections.
    if (minutes.empty()) facts.agenda_topics.clear();
    const std::string block = facts_block(facts);

    const std::vector<std::pair<std::string, std::string>> common{
        {"facts", block}, {"wg", facts.wg_acronym}, {"wg_name", facts.wg_name}};
    auto with = [&common](std::vector<std::pair<std::string, std::string>> extra) {
        extra.insert(extra.end(), common.begin(), common.end());
        return extra;
    };

    std::string running;
    std::vector<std::string> partials;
    for (std::size_t i = 0; i < minutes.size(); ++i) {
        CompletionRequest req;
        req.system_prompt = templates.system;
        req.user_prompt = fill_template(templates.map, with({{"running_summary", running.empty() ? "(none yet)" : running},
                                                             {"chunk", minutes[i]->text},
                                                             {"part", std::to_string(i + 1)},
                                                             {"parts", std::to_string(minutes.size())}}));
        req.max_output_tokens = options.map_max_tokens;
        req.temperature = options.temperature;
        running = client.complete(req);
        partials.push_back(running);
    }

    std::string chunk_summaries;
    for (std::size_t i = 0; i < partials.size(); ++i) {
        chunk_summaries += "### Part " + std::to_string(i + 1) + "\n" + partials[i] + "\n\n";
    }
    if (chunk_summaries.empty()) chunk_summaries = "(no minutes were recorded)\n";

    CompletionRequest reduce;
    reduce.system_prompt = templates.system;
    reduce.max_output_tokens = options.reduce_max_tokens;
    reduce.temperature = options.temperature;
    auto build_reduce = [&](const std::string& excerpts) {
        return fill_template(templates.reduce, with({{"chunk_summaries", chunk_summaries}, {"excerpts", excerpts}}));
    };

    // Retrieved excerpts ride along only while they fit the context window.
    std::string excerpts;
    if (options.excerpts_per_topic > 0 && !minutes.empty()) {
        reduce.user_prompt = build_reduce("");
        const std::size_t used = prompt_tokens(reduce) + reduce.max_output_tokens;
        std::size_t room = client.context_tokens() > used ? client.context_tokens() - used : 0;
        std::set<std::size_t> included;
        for (const auto& topic : facts.agenda_topics) {
            for (const auto& hit : idx.score(topic.title, options.excerpts_per_topic, wg_acronym)) {
                if (hit.score <= 0.0 || included.contains(hit.chunk)) continue;
                const index::Chunk& c = idx.chunks()[hit.chunk];
                std::string piece = "[" + std::string(index::to_string(c.doc_kind)) + " part " +
                                    std::to_string(c.seq + 1) + "]\n" + c.text + "\n\n";
                const std::size_t cost = text::estimate_tokens(piece) + 1;
                if (cost > room) continue;
                room -= cost;
                included.insert(hit.chunk);
                excerpts += piece;
            }
        }
    }
    if (excerpts.empty()) excerpts = "(none)\n";
    reduce.user_prompt = build_reduce(excerpts);

    std::string reply = client.complete(reduce);
    WgSummary summary;
    try {
        summary = parse_summary(reply, wg_acronym);
    } catch (const FormatError& e) {
        CompletionRequest repair = reduce;
        repair.user_prompt += "\n\n" + fill_template(templates.repair, {{"error", e.what()}, {"reply", reply}});
        reply = client.complete(repair);
        summary = parse_summary(reply, wg_acronym);
    }
    check_grounding(summary, facts);
    return summary;
}

} // namespace insights::llm
