#pragma once

// Small RFC-4180-style CSV support: quoted fields, embedded commas/quotes,
// CRLF tolerance. Readers report 1-based line numbers on malformed input.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lodaudit/core.hpp"

namespace lodaudit::csv {

struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;  // line the row started on
};

inline std::vector<Row> parse(std::string_view content) {
    std::vector<Row> rows;
    std::vector<std::string> fields;
    std::string field;
    std::size_t line = 1, row_line = 1;
    bool quoted = false, any = false;
    std::size_t i = 0;
    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(Row{std::move(fields), row_line});
        fields.clear();
        any = false;
        row_line = line;
    };
    while (i < content.size()) {
        char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    quoted = false;
                    ++i;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
                ++i;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty())
                    throw AuditError("csv-parse",
                                     "stray quote on line " + std::to_string(line));
                quoted = any = true;
                ++i;
                break;
            case ',':
                end_field();
                any = true;
                ++i;
                break;
            case '\r': ++i; break;
            case '\n':
                ++line;
                ++i;
                if (any || !field.empty() || !fields.empty()) end_row();
                else row_line = line;
                break;
            default:
                field.push_back(c);
                any = true;
                ++i;
        }
    }
    if (quoted) throw AuditError("csv-parse", "unterminated quote at end of input");
    if (any || !field.empty() || !fields.empty()) end_row();
    return rows;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw AuditError("io-error", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw AuditError("io-error", "cannot write " + path);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw AuditError("io-error", "short write to " + path);
}

// Reads a CSV file and checks the header row matches exactly.
inline std::vector<Row> read_with_header(const std::string& path,
                                         const std::vector<std::string>& header) {
    auto rows = parse(read_file(path));
    if (rows.empty())
        throw AuditError("csv-parse", path + ": missing header row");
    if (rows.front().fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw AuditError("csv-parse", path + ": expected header '" + want + "'");
    }
    rows.erase(rows.begin());
    return rows;
}

inline std::string escape(std::string_view field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

class Writer {
public:
    explicit Writer(std::vector<std::string> header) { row(header); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) buf_ += ',';
            buf_ += escape(fields[i]);
        }
        buf_ += '\n';
    }

    const std::string& str() const { return buf_; }
    void save(const std::string& path) const { write_file(path, buf_); }

private:
    std::string buf_;
};

}  // namespace lodaudit::csv
