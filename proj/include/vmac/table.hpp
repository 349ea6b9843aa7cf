#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vmac/error.hpp"

namespace vmac {

/// A CSV-ready table. Cells are stored already serialized, so writing and
/// reading a table back is lossless by construction.
struct OutputTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) {
        if (row.size() != header.size())
            throw Error(Errc::InvalidArgument, "row has " + std::to_string(row.size()) + " cells, header has " +
                                                   std::to_string(header.size()));
        for (const auto& cell : row)
            if (cell.find_first_of(",\n\r") != std::string::npos)
                throw Error(Errc::InvalidArgument, "cell contains a CSV delimiter: " + cell);
        rows.push_back(std::move(row));
    }

    friend bool operator==(const OutputTable&, const OutputTable&) = default;
};

/// Fixed six-decimal rendering used for every numeric cell.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

/// Six significant digits, for human-readable summaries.
inline std::string format_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void write_csv(std::ostream& out, const OutputTable& t) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

inline OutputTable parse_csv(std::istream& in) {
    auto split = [](std::string_view s) {
        std::vector<std::string> cells;
        std::size_t b = 0;
        for (;;) {
            const auto e = s.find(',', b);
            cells.emplace_back(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b));
            if (e == std::string_view::npos) break;
            b = e + 1;
        }
        return cells;
    };
    OutputTable t;
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::MalformedLine, "CSV has no header row");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.add_row(split(line));
    }
    return t;
}

} // namespace vmac
