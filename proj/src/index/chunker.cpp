#include "insights/index.hpp"

#include "insights/error.hpp"
#include "insights/text.hpp"

namespace insights::index {

std::string_view to_string(DocKind kind) noexcept
{
    return kind == DocKind::minutes ? "minutes" : "agenda";
}

namespace {

bool is_space(char32_t c) noexcept
{
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0x00A0 ||
           c == 0x2028 || c == 0x2029;
}

bool is_sentence_end(char32_t c) noexcept
{
    return c == U'.' || c == U'!' || c == U'?' || c == 0x3002;
}

enum class Boundary : unsigned char { none, sentence, paragraph };

/// boundary[p] classifies a cut before position p: p starts a non-space run
/// that follows whitespace.
std::vector<Boundary> classify_boundaries(const std::u32string& s)
{
    std::vector<Boundary> out(s.size() + 1, Boundary::none);
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_space(s[i])) {
            ++i;
            continue;
        }
        const std::size_t run_start = i;
        std::size_t newlines = 0;
        while (i < s.size() && is_space(s[i])) {
            if (s[i] == U'\n') ++newlines;
            ++i;
        }
        if (i == s.size()) break;
        if (newlines >= 2) {
            out[i] = Boundary::paragraph;
        } else if (newlines == 1 || (run_start > 0 && is_sentence_end(s[run_start - 1]))) {
            out[i] = Boundary::sentence;
        }
    }
    return out;
}

} // namespace

std::vector<Chunk> chunk_document(std::string_view text, const ChunkOptions& options,
                                  const std::string& wg_acronym, DocKind kind)
{
    if (options.budget_tokens == 0 || options.budget_tokens <= options.overlap_tokens) {
        throw InvalidBudget("chunk budget (" + std::to_string(options.budget_tokens) +
                            ") must exceed overlap (" + std::to_string(options.overlap_tokens) + ")");
    }
    const std::u32string s = text::to_u32(text);
    const std::size_t n = s.size();
    const std::size_t max_len = options.budget_tokens * text::kScalarsPerToken;
    const std::size_t overlap_len = options.overlap_tokens * text::kScalarsPerToken;
    const auto boundaries = classify_boundaries(s);

    std::vector<Chunk> chunks;
    auto emit = [&](std::size_t begin, std::size_t end, std::size_t overlap) {
        Chunk c;
        c.wg_acronym = wg_acronym;
        c.doc_kind = kind;
        c.seq = chunks.size();
        c.text = text::to_utf8(std::u32string_view(s).substr(begin, end - begin));
        c.est_tokens = text::estimate_tokens_for_scalars(end - begin);
        c.overlap_scalars = overlap;
        chunks.push_back(std::move(c));
    };

    std::size_t pos = 0;
    std::size_t carried = 0;
    while (pos < n) {
        if (n - pos <= max_len) {
            emit(pos, n, carried);
            break;
        }
        const std::size_t limit = pos + max_len;
        const std::size_t min_cut = pos + carried + 1;

        std::size_t cut = 0;
        for (Boundary wanted : {Boundary::paragraph, Boundary::sentence}) {
            for (std::size_t p = limit; p >= min_cut; --p) {
                if (boundaries[p] == wanted) {
                    cut = p;
                    break;
                }
            }
            if (cut) break;
        }

        if (cut) {
            emit(pos, cut, carried);
            pos = cut;
            carried = 0;
        } else {
            emit(pos, limit, carried);
            pos = limit - overlap_len;
            carried = overlap_len;
        }
    }
    return chunks;
}

std::string reconstruct(const std::vector<Chunk>& chunks)
{
    std::u32string out;
    for (const auto& c : chunks) {
        const std::u32string s = text::to_u32(c.text);
        out.append(s, std::min(c.overlap_scalars, s.size()));
    }
    return text::to_utf8(out);
}

} // namespace insights::index
