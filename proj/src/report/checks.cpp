#include "insights/report.hpp"

#include "insights/text.hpp"

#include <vector>

namespace insights::report {

namespace {

CheckResult fail(std::string message) { return CheckResult{false, std::move(message)}; }

/// Reads `{name}` starting at `pos`; empty when absent.
std::string braced_arg(std::string_view s, std::size_t pos)
{
    if (pos >= s.size() || s[pos] != '{') return {};
    const auto close = s.find('}', pos);
    if (close == std::string_view::npos) return {};
    return std::string(s.substr(pos + 1, close - pos - 1));
}

} // namespace

CheckResult check_latex_balance(std::string_view latex)
{
    long depth = 0;
    std::vector<std::string> envs;
    std::size_t line = 1;
    for (std::size_t i = 0; i < latex.size(); ++i) {
        const char c = latex[i];
        if (c == '\n') {
            ++line;
        } else if (c == '%') {
            while (i + 1 < latex.size() && latex[i + 1] != '\n') ++i;
        } else if (c == '\\') {
            const auto rest = latex.substr(i + 1);
            if (text::starts_with(rest, "begin{")) {
                envs.push_back(braced_arg(latex, i + 6));
            } else if (text::starts_with(rest, "end{")) {
                const auto name = braced_arg(latex, i + 4);
                if (envs.empty()) return fail("line " + std::to_string(line) + ": \\end{" + name + "} without \\begin");
                if (envs.back() != name) {
                    return fail("line " + std::to_string(line) + ": \\end{" + name + "} closes \\begin{" +
                                envs.back() + "}");
                }
                envs.pop_back();
            } else if (!rest.empty()) {
                ++i; // escaped character or first letter of a control word
            }
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth < 0) return fail("line " + std::to_string(line) + ": unmatched }");
        }
    }
    if (depth != 0) return fail(std::to_string(depth) + " unclosed {");
    if (!envs.empty()) return fail("unclosed environment `" + envs.back() + "`");
    return {};
}

CheckResult check_markdown_headings(std::string_view markdown)
{
    int previous = 0;
    std::string fence;
    std::size_t n = 0;
    for (const auto& raw : text::split(markdown, '\n')) {
        ++n;
        std::string_view line = raw;
        std::size_t indent = 0;
        while (indent < line.size() && indent < 4 && line[indent] == ' ') ++indent;
        if (indent >= 4) continue;
        line.remove_prefix(indent);

        if (!fence.empty()) {
            if (text::starts_with(line, fence)) fence.clear();
            continue;
        }
        if (text::starts_with(line, "```") || text::starts_with(line, "~~~")) {
            fence = std::string(line.substr(0, 3));
            continue;
        }

        std::size_t level = 0;
        while (level < line.size() && line[level] == '#') ++level;
        if (level == 0 || level > 6) continue;
        if (level < line.size() && line[level] != ' ' && line[level] != '\t') continue;

        const int lv = static_cast<int>(level);
        if (previous == 0 && lv != 1) {
            return fail("line " + std::to_string(n) + ": first heading is level " + std::to_string(lv));
        }
        if (lv > previous + 1 && previous != 0) {
            return fail("line " + std::to_string(n) + ": heading jumps from level " + std::to_string(previous) +
                        " to " + std::to_string(lv));
        }
        previous = lv;
    }
    if (previous == 0) return fail("no headings");
    return {};
}

} // namespace insights::report
