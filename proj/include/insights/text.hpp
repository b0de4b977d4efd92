#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace insights::text {

/// Scalars per estimated token. Rough heuristic; replace here if a real
/// tokenizer is ever wired in.
inline constexpr std::size_t kScalarsPerToken = 4;

/// Re-encodes `bytes` as well-formed UTF-8, replacing every ill-formed
/// subsequence with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view scalars);

/// Number of Unicode scalar values in `utf8` (after sanitizing).
std::size_t scalar_count(std::string_view utf8);

/// ceil(scalars / 4)
std::size_t estimate_tokens(std::string_view utf8);
std::size_t estimate_tokens_for_scalars(std::size_t scalars);

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string to_lower_ascii(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix) noexcept;

/// Reads a whole file, sanitized to UTF-8. Throws IoError.
std::string read_file(const std::string& path);
/// Writes `content` atomically enough for a batch tool (truncate + write). Throws IoError.
void write_file(const std::string& path, std::string_view content);

} // namespace insights::text
