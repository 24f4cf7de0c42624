#include "qbattery/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "qbattery/error.hpp"

namespace qbattery::csv {

std::string format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::Io, "not a number: '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::Io, "not an integer: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorKind::Io, "missing column '" + std::string(name) + "'");
}

Table read_table(std::istream& in) {
    Table table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorKind::Io, "row has " + std::to_string(fields.size()) +
                                           " fields, header has " +
                                           std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw Error(ErrorKind::Io, "empty table");
    return table;
}

}  // namespace qbattery::csv
