#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

/// Delimited-table descriptor. Fields may be double-quoted; surrounding blanks are trimmed.
struct TableFormat {
    char delimiter = ',';

    static TableFormat comma() { return {','}; }
    static TableFormat tab() { return {'\t'}; }
    /// Accepts "comma", "tab", "," or "\t".
    static TableFormat parse(std::string_view name);
};

struct TableRow {
    std::size_t line = 0;  // 1-based line number in the source
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<TableRow> rows;

    /// Index of a header column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
    /// Index of a header column; throws FormatError naming the column when absent.
    std::size_t require_column(std::string_view name) const;
};

/// Reads a whole table. Blank lines are skipped. A missing header throws FormatError,
/// as does a row whose field count differs from the header's.
Table read_table(std::istream& in, TableFormat format = {});

std::vector<std::string> split_fields(std::string_view line, char delimiter);

/// Shortest round-trip representation of a double ("nan"/"inf" for non-finite).
std::string format_number(double value);

/// Strict numeric parse of a whole field.
std::optional<double> parse_number(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

class TableWriter {
public:
    explicit TableWriter(std::ostream& out, char delimiter = ',') : out_(out), delimiter_(delimiter) {}

    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
    char delimiter_;
};

std::string trim(std::string_view text);

}  // namespace taskrisk
