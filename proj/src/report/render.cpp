#include "insights/report.hpp"

#include "insights/error.hpp"
#include "insights/text.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace insights::report {

namespace {

using Escape = std::function<std::string(std::string_view)>;

bool is_control(unsigned char c) noexcept
{
    return (c < 0x20 && c != '\n' && c != '\t') || c == 0x7f;
}

/// Whitespace runs (newlines included) become one space; trimmed.
std::string single_line(std::string_view s)
{
    std::string out;
    bool space = false;
    for (char c : s) {
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
            space = !out.empty();
            continue;
        }
        if (space) out.push_back(' ');
        space = false;
        out.push_back(c);
    }
    return out;
}

std::string markdown_inline(std::string_view s)
{
    std::string out;
    for (char c : single_line(s)) {
        if (is_control(static_cast<unsigned char>(c))) continue;
        if (std::string_view("\\`*_[]<>#|").find(c) != std::string_view::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

/// Paragraph text: formatting is kept, but no line may open a heading, a
/// setext underline or a code fence.
std::string markdown_block(std::string_view s)
{
    std::string out;
    for (const auto& raw : text::split(s, '\n')) {
        std::string line;
        for (char c : raw) {
            if (!is_control(static_cast<unsigned char>(c)) && c != '\r') line.push_back(c);
        }
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first != std::string::npos) {
            const char c = line[first];
            if (c == '#' || c == '=' || c == '-' || c == '`' || c == '~' || c == '<') {
                line = line.substr(0, first) + "\\" + line.substr(first);
            }
        }
        if (!out.empty()) out.push_back('\n');
        out += line;
    }
    // Collapse runs of blank lines.
    std::string collapsed;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == '\n' && collapsed.size() >= 2 && collapsed[collapsed.size() - 1] == '\n' &&
            collapsed[collapsed.size() - 2] == '\n') {
            continue;
        }
        collapsed.push_back(out[i]);
    }
    return std::string(text::trim(collapsed));
}

std::string latex_inline(std::string_view s) { return latex_escape(single_line(s)); }

std::string latex_block(std::string_view s)
{
    std::string out;
    for (const auto& raw : text::split(s, '\n')) {
        std::string_view line = text::trim(raw);
        if (!out.empty()) out.push_back('\n');
        out += latex_escape(line);
    }
    return std::string(text::trim(out));
}

/// "A", "A and B", "A, B, and C"
std::string human_list(const std::vector<std::string>& items)
{
    if (items.empty()) return {};
    if (items.size() == 1) return items[0];
    if (items.size() == 2) return items[0] + " and " + items[1];
    std::string out;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
    return out + "and " + items.back();
}

std::string attendance_statement(const AttendeesOverview& o, const Escape& esc)
{
    if (o.count == 0) return "No attendance was recorded for this session.";
    std::string s = "The meeting was attended by " + std::to_string(o.count) +
                    (o.count == 1 ? " participant" : " participants");
    if (!o.prominent_affiliations.empty()) {
        std::vector<std::string> names;
        for (const auto& a : o.prominent_affiliations) names.push_back(esc(a));
        s += ", representing institutions such as " + human_list(names);
    }
    return s + ".";
}

std::string chapter_title(const WgReport& r)
{
    const std::string name = std::string(text::trim(r.wg_name));
    if (name.empty()) return r.wg_acronym;
    const std::string lowered = text::to_lower_ascii(name);
    if (lowered.find("(" + r.wg_acronym + ")") != std::string::npos) return name;
    return name + " (" + r.wg_acronym + ")";
}

std::string render_markdown(const WgReport& r)
{
    const Escape esc = markdown_inline;
    std::string out;
    out += "# " + markdown_inline(chapter_title(r)) + "\n\n";
    out += "## Attendees Overview\n\n";
    out += "### Attendance Summary\n\n";
    out += attendance_statement(r.attendees_overview, esc) + "\n\n";
    if (const auto narrative = markdown_block(r.attendees_overview.narrative); !narrative.empty()) {
        out += narrative + "\n\n";
    }
    out += "## Meeting Discussions\n\n";
    if (r.discussions.empty()) out += "No discussion topics were recorded.\n\n";
    for (const auto& d : r.discussions) {
        out += "### " + markdown_inline(d.title) + "\n\n";
        if (const auto body = markdown_block(d.body); !body.empty()) out += body + "\n\n";
        if (!d.presenters.empty()) {
            std::vector<std::string> names;
            for (const auto& p : d.presenters) names.push_back(markdown_inline(p));
            out += "Presented by " + human_list(names) + ".\n\n";
        }
        if (!d.draft_links.empty()) {
            std::vector<std::string> links;
            for (const auto& name : d.draft_links) links.push_back("[" + name + "](" + datatracker_url(name) + ")");
            out += "Drafts: " + text::join(links, ", ") + "\n\n";
        }
    }
    return out;
}

std::string render_latex(const WgReport& r)
{
    const Escape esc = latex_inline;
    std::string out;
    out += "\\section{" + latex_inline(chapter_title(r)) + "}\\label{wg:" + r.wg_acronym + "}\n\n";
    out += "\\subsection{Attendees Overview}\n\n";
    out += "\\subsubsection{Attendance Summary}\n\n";
    out += attendance_statement(r.attendees_overview, esc) + "\n\n";
    if (const auto narrative = latex_block(r.attendees_overview.narrative); !narrative.empty()) {
        out += narrative + "\n\n";
    }
    out += "\\subsection{Meeting Discussions}\n\n";
    if (r.discussions.empty()) out += "No discussion topics were recorded.\n\n";
    for (const auto& d : r.discussions) {
        out += "\\subsubsection{" + latex_inline(d.title) + "}\n\n";
        if (const auto body = latex_block(d.body); !body.empty()) out += body + "\n\n";
        if (!d.presenters.empty()) {
            std::vector<std::string> names;
            for (const auto& p : d.presenters) names.push_back(latex_inline(p));
            out += "Presented by " + human_list(names) + ".\n\n";
        }
        if (!d.draft_links.empty()) {
            std::vector<std::string> links;
            for (const auto& name : d.draft_links) {
                links.push_back("\\href{" + datatracker_url(name) + "}{" + latex_escape(name) + "}");
            }
            out += "Drafts: " + text::join(links, ", ") + "\n\n";
        }
    }
    return out;
}

std::vector<const WgReport*> sorted_unique(const std::vector<WgReport>& reports)
{
    std::vector<const WgReport*> out;
    std::set<std::string> seen;
    for (const auto& r : reports) {
        if (!seen.insert(r.wg_acronym).second) throw DuplicateWg("working group `" + r.wg_acronym + "` appears twice");
        out.push_back(&r);
    }
    std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->wg_acronym < b->wg_acronym; });
    return out;
}

} // namespace

std::string latex_escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '#': out += "\\#"; break;
        case '$': out += "\\$"; break;
        case '%': out += "\\%"; break;
        case '&': out += "\\&"; break;
        case '_': out += "\\_"; break;
        case '{': out += "\\{"; break;
        case '}': out += "\\}"; break;
        case '~': out += "\\textasciitilde{}"; break;
        case '^': out += "\\textasciicircum{}"; break;
        case '\\': out += "\\textbackslash{}"; break;
        default:
            if (!is_control(static_cast<unsigned char>(c))) out.push_back(c);
        }
    }
    return out;
}

RenderedDocument render(const WgReport& report, Format format)
{
    return RenderedDocument{format, format == Format::markdown ? render_markdown(report) : render_latex(report), 1};
}

RenderedDocument assemble_master(const std::vector<WgReport>& reports, int meeting_number, Format format,
                                 const MasterOptions& options)
{
    const auto ordered = sorted_unique(reports);
    const std::string title = "IETF" + std::to_string(meeting_number) + " Meeting Report";
    std::string out;

    if (format == Format::markdown) {
        out += "# " + title + "\n\n";
        out += markdown_inline(options.attribution) + "\n\n";
        if (options.date) out += markdown_inline(*options.date) + "\n\n";
        out += "## Contents\n\n";
        if (ordered.empty()) out += "No working groups were selected.\n\n";
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            out += std::to_string(i + 1) + ". [" + markdown_inline(chapter_title(*ordered[i])) + "](#wg-" +
                   ordered[i]->wg_acronym + ")\n";
        }
        if (!ordered.empty()) out += "\n";
        for (const auto* r : ordered) {
            out += "<a id=\"wg-" + r->wg_acronym + "\"></a>\n\n";
            out += render_markdown(*r);
        }
    } else {
        out += "\\documentclass[11pt]{article}\n";
        out += "\\usepackage{iftex}\n";
        out += "\\ifPDFTeX\n\\usepackage[utf8]{inputenc}\n\\usepackage[T1]{fontenc}\n\\fi\n";
        out += "\\usepackage[hidelinks]{hyperref}\n\n";
        out += "\\title{" + title + "}\n";
        out += "\\author{" + latex_inline(options.attribution) + "}\n";
        out += "\\date{" + (options.date ? latex_inline(*options.date) : std::string()) + "}\n\n";
        out += "\\begin{document}\n\n\\maketitle\n\\tableofcontents\n\\clearpage\n\n";
        for (const auto* r : ordered) {
            out += render_latex(*r);
            out += "\\clearpage\n\n";
        }
        out += "\\end{document}\n";
    }
    return RenderedDocument{format, std::move(out), ordered.size()};
}

} // namespace insights::report
