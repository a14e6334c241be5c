#include "subaudit/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "subaudit/error.hpp"

namespace subaudit::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

std::size_t Table::require(std::string_view name, std::string_view table_name) const {
    if (auto idx = column(name)) return *idx;
    throw SchemaError("table '" + std::string(table_name) + "' is missing required column '" +
                      std::string(name) + "'");
}

namespace {

// Returns false at end of input with no record read.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields, std::size_t record) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    bool quoted_field = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            if (!field.empty()) throw ParseError(record, "unexpected quote inside unquoted field");
            in_quotes = true;
            quoted_field = true;
        } else if (c == delim) {
            fields.push_back(std::move(field));
            field.clear();
            quoted_field = false;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else if (c == '\n') {
            break;
        } else {
            if (quoted_field) throw ParseError(record, "characters after closing quote");
            field.push_back(c);
        }
    }
    if (in_quotes) throw ParseError(record, "unterminated quoted field");
    if (!any) return false;
    fields.push_back(std::move(field));
    return true;
}

bool blank(const std::vector<std::string>& fields) {
    return fields.size() == 1 && fields[0].empty();
}

}  // namespace

Table read(std::istream& in, char delimiter) {
    Table table;
    std::vector<std::string> fields;
    if (!read_record(in, delimiter, fields, 0)) throw SchemaError("empty table: no header row");
    if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
    table.header = fields;
    std::size_t row = 0;
    while (true) {
        ++row;
        if (!read_record(in, delimiter, fields, row)) break;
        if (blank(fields)) continue;
        if (fields.size() != table.header.size()) {
            throw ParseError(row, "expected " + std::to_string(table.header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        table.rows.push_back(fields);
    }
    return table;
}

Table read_file(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open table '" + path + "'");
    return read(in, delimiter);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(delimiter);
        const std::string& f = fields[i];
        if (f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) {
            out << f;
            continue;
        }
        out.put('"');
        for (char c : f) {
            if (c == '"') out.put('"');
            out.put(c);
        }
        out.put('"');
    }
    out.put('\n');
}

std::string format_general(double value, int digits) {
    if (value == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace subaudit::csv
