#include "insights/text.hpp"

#include "insights/error.hpp"

#include <unicode/unistr.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace insights {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::network: return "NetworkError";
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::not_found: return "NotFound";
    case ErrorKind::invalid_threshold: return "InvalidThreshold";
    case ErrorKind::consistency: return "ConsistencyError";
    case ErrorKind::io: return "IoError";
    case ErrorKind::schema: return "SchemaError";
    case ErrorKind::invalid_budget: return "InvalidBudget";
    case ErrorKind::rate_limit_exhausted: return "RateLimitExhausted";
    case ErrorKind::backend: return "BackendError";
    case ErrorKind::context_overflow: return "ContextOverflow";
    case ErrorKind::grounding: return "GroundingError";
    case ErrorKind::format: return "FormatError";
    case ErrorKind::duplicate_wg: return "DuplicateWg";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

} // namespace insights

namespace insights::text {

namespace {

icu::UnicodeString from_utf8(std::string_view bytes)
{
    // ICU substitutes U+FFFD for each maximal ill-formed subsequence.
    return icu::UnicodeString::fromUTF8(
        icu::StringPiece(bytes.data(), static_cast<int32_t>(bytes.size())));
}

} // namespace

std::string sanitize_utf8(std::string_view bytes)
{
    bool ascii = true;
    for (unsigned char c : bytes) {
        if (c >= 0x80) {
            ascii = false;
            break;
        }
    }
    if (ascii) return std::string(bytes);
    std::string out;
    from_utf8(bytes).toUTF8String(out);
    return out;
}

std::u32string to_u32(std::string_view utf8)
{
    std::u32string out;
    const icu::UnicodeString u = from_utf8(utf8);
    out.reserve(static_cast<std::size_t>(u.length()));
    for (int32_t i = 0; i < u.length();) {
        const UChar32 c = u.char32At(i);
        out.push_back(static_cast<char32_t>(c));
        i += U16_LENGTH(c);
    }
    return out;
}

std::string to_utf8(std::u32string_view scalars)
{
    icu::UnicodeString u;
    for (char32_t c : scalars) u.append(static_cast<UChar32>(c));
    std::string out;
    u.toUTF8String(out);
    return out;
}

std::size_t scalar_count(std::string_view utf8)
{
    return static_cast<std::size_t>(from_utf8(utf8).countChar32());
}

std::size_t estimate_tokens_for_scalars(std::size_t scalars)
{
    return (scalars + kScalarsPerToken - 1) / kScalarsPerToken;
}

std::size_t estimate_tokens(std::string_view utf8)
{
    return estimate_tokens_for_scalars(scalar_count(utf8));
}

std::string_view trim(std::string_view s) noexcept
{
    constexpr std::string_view ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string to_lower_ascii(std::string_view s)
{
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) noexcept
{
    return s.substr(0, prefix.size()) == prefix;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path);
    return sanitize_utf8(ss.str());
}

void write_file(const std::string& path, std::string_view content)
{
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create " + parent.string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

} // namespace insights::text
