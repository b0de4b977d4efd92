#pragma once

#include "insights/corpus.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace insights::index {

enum class DocKind { minutes, agenda };

std::string_view to_string(DocKind kind) noexcept;

struct Chunk {
    std::string wg_acronym;
    DocKind doc_kind = DocKind::minutes;
    std::size_t seq = 0;
    std::string text;
    std::size_t est_tokens = 0;
    /// Leading scalars repeated from the previous chunk (non-zero only after
    /// a hard cut).
    std::size_t overlap_scalars = 0;

    bool operator==(const Chunk&) const = default;
};

struct ChunkOptions {
    std::size_t budget_tokens = 3000;
    std::size_t overlap_tokens = 200;
};

/// Splits `text` into chunks of at most `budget_tokens` estimated tokens.
/// Cuts prefer the last paragraph break (blank line) that fits, then the last
/// sentence end, then a hard cut; only hard cuts carry `overlap_tokens` of
/// context into the next chunk. Throws InvalidBudget unless
/// budget > overlap >= 0.
std::vector<Chunk> chunk_document(std::string_view text, const ChunkOptions& options,
                                  const std::string& wg_acronym = {}, DocKind kind = DocKind::minutes);

/// Inverse of chunk_document: concatenation with overlaps removed.
std::string reconstruct(const std::vector<Chunk>& chunks);

struct ScoredChunk {
    std::size_t chunk = 0; ///< position in RetrievalIndex::chunks()
    double score = 0.0;
};

/// Lexical TF-IDF index over chunks. Built once, then read-only.
class RetrievalIndex {
public:
    RetrievalIndex() = default;
    explicit RetrievalIndex(std::vector<Chunk> chunks);

    [[nodiscard]] const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    [[nodiscard]] const std::map<std::string, std::size_t>& document_frequency() const noexcept { return df_; }
    [[nodiscard]] std::size_t size() const noexcept { return chunks_.size(); }

    /// Top-k chunks by cosine similarity of tf·idf vectors with
    /// idf = ln(1 + N / (1 + df)). Ties, including all-zero scores, fall back
    /// to (wg_acronym, doc_kind, seq) order. `wg` restricts the candidates.
    [[nodiscard]] std::vector<ScoredChunk> score(std::string_view query, std::size_t k,
                                                 const std::optional<std::string>& wg = std::nullopt) const;

    /// Chunks of one WG and kind in seq order.
    [[nodiscard]] std::vector<const Chunk*> chunks_for(const std::string& wg, DocKind kind) const;

    bool operator==(const RetrievalIndex& other) const { return chunks_ == other.chunks_ && df_ == other.df_; }

private:
    [[nodiscard]] double idf(std::size_t df) const;

    std::vector<Chunk> chunks_;
    std::map<std::string, std::size_t> df_;
    std::vector<std::map<std::string, std::size_t>> tf_;
    std::vector<double> norms_;
};

/// Normalized lexical terms of `text`.
std::vector<std::string> terms(std::string_view text);

/// Chunks every session's minutes and agenda, ordered by (wg, kind, seq).
RetrievalIndex build_index(const corpus::Corpus& corpus, const ChunkOptions& options = {});

inline constexpr const char* kIndexFile = "index.json";

std::string serialize(const RetrievalIndex& index);
void save(const RetrievalIndex& index, const std::filesystem::path& dir);
/// Throws IoError or SchemaError.
RetrievalIndex load(const std::filesystem::path& dir);

} // namespace insights::index
