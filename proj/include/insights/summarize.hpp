#pragma once

#include "insights/corpus.hpp"
#include "insights/index.hpp"
#include "insights/llm.hpp"

#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace insights::llm {

/// One agenda line: `- Title -- Presenter draft-name-NN`.
struct AgendaTopic {
    std::string title;
    std::string presenter;
    std::vector<std::string> drafts;

    bool operator==(const AgendaTopic&) const = default;
};

/// Top-level list items of a markdown agenda, in order.
std::vector<AgendaTopic> parse_agenda_topics(std::string_view agenda);

/// Everything a summary may state as fact, copied from one session record.
struct WgFacts {
    std::string wg_acronym;
    std::string wg_name;
    std::uint64_t attendee_count = 0;
    std::vector<resolve::AffiliationCount> top_affiliations;
    std::vector<std::string> draft_names;
    std::vector<AgendaTopic> agenda_topics;

    bool operator==(const WgFacts&) const = default;
};

WgFacts facts_for(const corpus::SessionRecord& session);

nlohmann::json facts_to_json(const WgFacts& facts);
WgFacts facts_from_json(const nlohmann::json& doc);
/// `<<FACTS>>\n{json}\n<<END>>`
std::string facts_block(const WgFacts& facts);

struct TopicSection {
    std::string title;
    std::string body;
    std::vector<std::string> presenters;
    std::vector<std::string> draft_links;

    bool operator==(const TopicSection&) const = default;
};

struct WgSummary {
    std::string wg_acronym;
    std::string overview;
    std::vector<TopicSection> topics;

    bool operator==(const WgSummary&) const = default;
};

/// Parses a model reply holding the summary JSON object (code fences and
/// surrounding prose tolerated). Throws FormatError.
WgSummary parse_summary(std::string_view reply, const std::string& wg_acronym);

/// Throws GroundingError if the summary links or mentions a draft missing
/// from `facts.draft_names`.
void check_grounding(const WgSummary& summary, const WgFacts& facts);

/// Editable prompt text. Placeholders are `{{name}}`.
struct PromptTemplates {
    std::string system;
    std::string map;
    std::string reduce;
    std::string repair;

    /// The templates shipped in data/templates, compiled in.
    static PromptTemplates defaults();
    /// Reads system.txt, map.txt, reduce.txt, repair.txt from `dir`; missing
    /// files fall back to the defaults.
    static PromptTemplates load(const std::filesystem::path& dir);
};

/// Single-pass `{{key}}` substitution; unknown keys are left as is.
std::string fill_template(std::string_view tmpl, const std::vector<std::pair<std::string, std::string>>& values);

struct SummarizeOptions {
    std::size_t map_max_tokens = 1024;
    std::size_t reduce_max_tokens = 2048;
    double temperature = 0.0;
    /// Retrieved excerpts per agenda topic added to the synthesis prompt.
    std::size_t excerpts_per_topic = 2;
};

/// Map step over the WG's minutes chunks (each prompt carries the running
/// summary), then one synthesis request with the facts and every chunk
/// summary. One repair round on unparseable output.
/// Throws NotFound, GroundingError, FormatError and anything LlmClient throws.
WgSummary summarize_wg(const corpus::Corpus& corpus, const index::RetrievalIndex& index,
                       const std::string& wg_acronym, LlmClient& client, const PromptTemplates& templates,
                       const SummarizeOptions& options = {});

} // namespace insights::llm
