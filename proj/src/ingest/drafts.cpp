#include "insights/ingest.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace insights::ingest {

namespace {

constexpr std::string_view kDraftPrefix = "draft-";

bool is_draft_char(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

bool is_word_char(char c) noexcept
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
}

bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

bool has_version_suffix(std::string_view s) noexcept
{
    const auto n = s.size();
    return n >= 3 && s[n - 3] == '-' && is_digit(s[n - 2]) && is_digit(s[n - 1]);
}

void trim_trailing_separators(std::string& s)
{
    while (!s.empty() && (s.back() == '.' || s.back() == '-')) s.pop_back();
}

void strip_extension(std::string& s)
{
    static constexpr std::array<std::string_view, 4> exts{".txt", ".html", ".xml", ".pdf"};
    for (auto ext : exts) {
        if (s.size() > ext.size() && s.ends_with(ext)) {
            s.resize(s.size() - ext.size());
            return;
        }
    }
}

} // namespace

bool is_valid_acronym(std::string_view s) noexcept
{
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

bool is_valid_draft_name(std::string_view s) noexcept
{
    if (s.size() <= kDraftPrefix.size() || !s.starts_with(kDraftPrefix)) return false;
    if (!std::all_of(s.begin(), s.end(), is_draft_char)) return false;
    if (s.back() == '-' || s.back() == '.') return false;
    return !has_version_suffix(s);
}

std::string strip_draft_version(std::string_view name)
{
    std::string out(name);
    if (has_version_suffix(out)) out.resize(out.size() - 3);
    return out;
}

std::vector<std::string> extract_draft_names(std::string_view text)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    std::size_t pos = 0;
    while ((pos = text.find(kDraftPrefix, pos)) != std::string_view::npos) {
        const std::size_t start = pos;
        pos += kDraftPrefix.size();
        if (start > 0 && is_word_char(text[start - 1])) continue;

        std::size_t end = pos;
        while (end < text.size() && is_draft_char(text[end])) ++end;
        pos = end;

        std::string candidate(text.substr(start, end - start));
        trim_trailing_separators(candidate);
        strip_extension(candidate);
        trim_trailing_separators(candidate);
        candidate = strip_draft_version(candidate);
        if (!is_valid_draft_name(candidate)) continue;
        if (seen.insert(candidate).second) out.push_back(std::move(candidate));
    }
    return out;
}

} // namespace insights::ingest
