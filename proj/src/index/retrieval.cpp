#include "insights/index.hpp"

#include "insights/error.hpp"
#include "insights/resolve.hpp"
#include "insights/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace insights::index {

using nlohmann::json;

std::vector<std::string> terms(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& t : text::split(resolve::normalize(text).normalized, ' ')) {
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

RetrievalIndex::RetrievalIndex(std::vector<Chunk> chunks) : chunks_(std::move(chunks))
{
    tf_.reserve(chunks_.size());
    for (const auto& c : chunks_) {
        std::map<std::string, std::size_t> tf;
        for (auto& t : terms(c.text)) ++tf[std::move(t)];
        for (const auto& [term, count] : tf) ++df_[term];
        tf_.push_back(std::move(tf));
    }
    norms_.reserve(chunks_.size());
    for (const auto& tf : tf_) {
        double sum = 0.0;
        for (const auto& [term, count] : tf) {
            const double w = static_cast<double>(count) * idf(df_.at(term));
            sum += w * w;
        }
        norms_.push_back(std::sqrt(sum));
    }
}

double RetrievalIndex::idf(std::size_t df) const
{
    return std::log(1.0 + static_cast<double>(chunks_.size()) / (1.0 + static_cast<double>(df)));
}

std::vector<ScoredChunk> RetrievalIndex::score(std::string_view query, std::size_t k,
                                               const std::optional<std::string>& wg) const
{
    if (k == 0) throw InvalidArgument("k must be at least 1");
    if (chunks_.empty()) return {};

    std::map<std::string, std::size_t> query_tf;
    for (auto& t : terms(query)) ++query_tf[std::move(t)];
    double query_norm_sq = 0.0;
    std::vector<std::pair<const std::string*, double>> query_weights;
    for (const auto& [term, count] : query_tf) {
        const auto it = df_.find(term);
        const double w = static_cast<double>(count) * idf(it == df_.end() ? 0 : it->second);
        query_norm_sq += w * w;
        if (it != df_.end()) query_weights.emplace_back(&term, w);
    }
    const double query_norm = std::sqrt(query_norm_sq);

    std::vector<ScoredChunk> scored;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (wg && chunks_[i].wg_acronym != *wg) continue;
        double dot = 0.0;
        for (const auto& [term, qw] : query_weights) {
            const auto it = tf_[i].find(*term);
            if (it == tf_[i].end()) continue;
            dot += qw * static_cast<double>(it->second) * idf(df_.at(*term));
        }
        const double denom = query_norm * norms_[i];
        scored.push_back({i, denom > 0.0 ? dot / denom : 0.0});
    }

    auto key = [this](std::size_t i) {
        const Chunk& c = chunks_[i];
        return std::make_tuple(std::cref(c.wg_acronym), c.doc_kind, c.seq);
    };
    std::sort(scored.begin(), scored.end(), [&](const ScoredChunk& a, const ScoredChunk& b) {
        if (a.score != b.score) return a.score > b.score;
        return key(a.chunk) < key(b.chunk);
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<const Chunk*> RetrievalIndex::chunks_for(const std::string& wg, DocKind kind) const
{
    std::vector<const Chunk*> out;
    for (const auto& c : chunks_) {
        if (c.wg_acronym == wg && c.doc_kind == kind) out.push_back(&c);
    }
    std::sort(out.begin(), out.end(), [](const Chunk* a, const Chunk* b) { return a->seq < b->seq; });
    return out;
}

RetrievalIndex build_index(const corpus::Corpus& corpus, const ChunkOptions& options)
{
    std::vector<Chunk> all;
    for (const auto& [wg, session] : corpus.sessions) {
        for (auto& c : chunk_document(session.minutes_text, options, wg, DocKind::minutes)) all.push_back(std::move(c));
        for (auto& c : chunk_document(session.agenda_text, options, wg, DocKind::agenda)) all.push_back(std::move(c));
    }
    return RetrievalIndex(std::move(all));
}

std::string serialize(const RetrievalIndex& index)
{
    json chunks = json::array();
    for (const auto& c : index.chunks()) {
        chunks.push_back({{"wg_acronym", c.wg_acronym},
                          {"doc_kind", std::string(to_string(c.doc_kind))},
                          {"seq", c.seq},
                          {"text", c.text},
                          {"est_tokens", c.est_tokens},
                          {"overlap_scalars", c.overlap_scalars}});
    }
    const json doc = {{"schema", corpus::kSchemaVersion},
                      {"N", index.size()},
                      {"df", index.document_frequency()},
                      {"chunks", chunks}};
    return doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

void save(const RetrievalIndex& index, const std::filesystem::path& dir)
{
    text::write_file((dir / kIndexFile).string(), serialize(index));
}

RetrievalIndex load(const std::filesystem::path& dir)
{
    const auto path = dir / kIndexFile;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("missing " + path.string());
    const json doc = corpus::parse_json_document(text::read_file(path.string()), path.string());
    try {
        if (doc.at("schema").get<int>() != corpus::kSchemaVersion) {
            throw SchemaError("unsupported index schema in " + path.string());
        }
        std::vector<Chunk> chunks;
        for (const auto& c : doc.at("chunks")) {
            Chunk chunk;
            chunk.wg_acronym = c.at("wg_acronym").get<std::string>();
            const auto kind = c.at("doc_kind").get<std::string>();
            if (kind == "minutes") chunk.doc_kind = DocKind::minutes;
            else if (kind == "agenda") chunk.doc_kind = DocKind::agenda;
            else throw SchemaError("unknown doc_kind `" + kind + "`");
            chunk.seq = c.at("seq").get<std::size_t>();
            chunk.text = c.at("text").get<std::string>();
            chunk.est_tokens = c.at("est_tokens").get<std::size_t>();
            chunk.overlap_scalars = c.at("overlap_scalars").get<std::size_t>();
            chunks.push_back(std::move(chunk));
        }
        RetrievalIndex index(std::move(chunks));
        const auto df = doc.at("df").get<std::map<std::string, std::size_t>>();
        if (doc.at("N").get<std::size_t>() != index.size() || df != index.document_frequency()) {
            throw SchemaError("index statistics in " + path.string() + " do not match its chunks");
        }
        return index;
    } catch (const json::exception& e) {
        throw SchemaError("malformed " + path.string() + ": " + e.what());
    }
}

} // namespace insights::index
