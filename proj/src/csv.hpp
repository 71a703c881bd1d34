#pragma once

// Minimal numeric CSV reader shared by the curve and tabulated-factor loaders.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rr/errors.hpp"

namespace rr::detail {

struct CsvRow {
    std::size_t line;
    std::vector<double> values;
};

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'", 0);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// Parses `expected_cols` comma separated doubles per non-blank line.
/// Accepts LF and CRLF endings and a leading UTF-8 BOM.
inline std::vector<CsvRow> parse_numeric_csv(std::string_view text, std::size_t expected_cols)
{
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    std::vector<CsvRow> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        CsvRow row{line_no, {}};
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto field = trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            double v = 0.0;
            const auto* first = field.data();
            const auto* last = field.data() + field.size();
            if (!field.empty() && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (field.empty() || ec != std::errc{} || ptr != last) {
                throw ParseError("non-numeric field '" + std::string(field) + "'", line_no);
            }
            row.values.push_back(v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (row.values.size() != expected_cols) {
            throw ParseError("expected " + std::to_string(expected_cols) + " fields, got " +
                                 std::to_string(row.values.size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace rr::detail
