#include "insights/error.hpp"
#include "insights/ingest.hpp"
#include "insights/text.hpp"

namespace insights::ingest {

std::vector<CsvRecord> parse_csv(std::string_view content, const std::string& file)
{
    std::vector<CsvRecord> records;
    std::size_t i = 0;
    std::size_t line = 1;
    const std::size_t n = content.size();

    while (i < n) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool record_done = false;

        while (!record_done) {
            if (i < n && content[i] == '"') {
                const std::size_t quote_line = line;
                ++i;
                bool closed = false;
                while (i < n) {
                    const char c = content[i];
                    if (c == '"') {
                        if (i + 1 < n && content[i + 1] == '"') {
                            field += '"';
                            i += 2;
                            continue;
                        }
                        ++i;
                        closed = true;
                        break;
                    }
                    if (c == '\n') ++line;
                    field += c;
                    ++i;
                }
                if (!closed) throw ParseError(file, quote_line, "unbalanced quote");
                if (i < n && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
                    throw ParseError(file, line, "unexpected character after closing quote");
                }
            } else {
                while (i < n && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
                    field += content[i++];
                }
            }

            rec.fields.push_back(std::move(field));
            field.clear();

            if (i >= n) {
                record_done = true;
            } else if (content[i] == ',') {
                ++i;
            } else {
                if (content[i] == '\r') ++i;
                if (i < n && content[i] == '\n') ++i;
                ++line;
                record_done = true;
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

AttendanceLoad parse_attendance_csv(std::string_view content, const AttendanceScope& scope,
                                    const std::string& file)
{
    const std::string clean = text::sanitize_utf8(content);
    std::string_view body = clean;
    if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);

    const auto records = parse_csv(body, file);
    if (records.empty()) throw ParseError(file, 1, "missing header `name,affiliation`");
    const auto& header = records.front().fields;
    if (header.size() != 2 || header[0] != "name" || header[1] != "affiliation") {
        throw ParseError(file, records.front().line, "header must be exactly `name,affiliation`");
    }

    AttendanceLoad out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& fields = records[r].fields;
        if (fields.size() > 2) {
            throw ParseError(file, records[r].line,
                             "expected at most 2 fields, got " + std::to_string(fields.size()));
        }
        const auto name = text::trim(fields[0]);
        if (name.empty()) {
            ++out.skipped;
            continue;
        }
        const auto affiliation = fields.size() > 1 ? text::trim(fields[1]) : std::string_view{};
        out.rows.push_back(RawAttendanceRow{std::string(name), std::string(affiliation), scope});
    }
    return out;
}

} // namespace insights::ingest
