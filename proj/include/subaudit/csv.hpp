#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace subaudit::csv {

/// A parsed delimited table. Quoted fields (RFC 4180 style, "" escapes) may
/// contain delimiters and newlines.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column(std::string_view name) const;
    /// Throws SchemaError naming `name` and `table_name` when the column is absent.
    std::size_t require(std::string_view name, std::string_view table_name) const;
};

Table read(std::istream& in, char delimiter = ',');
Table read_file(const std::string& path, char delimiter = ',');

/// Writes one record, quoting fields that need it.
void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

/// Shortest text for small integers, otherwise `%.{digits}g`; never emits "-0".
std::string format_general(double value, int digits = 9);
/// `%.{decimals}f`; never emits "-0.000".
std::string format_fixed(double value, int decimals = 6);

}  // namespace subaudit::csv
