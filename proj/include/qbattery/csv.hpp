#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qbattery::csv {

/// Shortest-safe round-trip form: 17 significant digits.
std::string format(double value);

double parse_double(std::string_view text);
int parse_int(std::string_view text);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Reads a header + rows table, skipping blank lines and '#' comments.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws Error(Io) if absent.
    std::size_t column(std::string_view name) const;
};

Table read_table(std::istream& in);

}  // namespace qbattery::csv
