#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace txcap {

// Locale-independent shortest representation that round-trips to the same
// double. All file output goes through here so byte-identical reruns only
// depend on the computed values.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// A plain CSV document: '#'-prefixed comment lines, a header row, then data.
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }

    void write(std::ostream& out) const {
        for (const auto& c : comments)
            out << "# " << c << '\n';
        for (std::size_t i = 0; i < columns.size(); ++i)
            out << columns[i] << (i + 1 < columns.size() ? "," : "");
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << row[i] << (i + 1 < row.size() ? "," : "");
            out << '\n';
        }
    }

    std::string to_string() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }
};

}  // namespace txcap
