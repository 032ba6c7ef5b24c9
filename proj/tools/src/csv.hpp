#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace aoii::cli {

/// CSV emitter: '#' comment header, one column-name row, then data rows.
/// Numbers are written with shortest round-trip formatting.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& comment_lines,
              const std::vector<std::string>& columns);

    template <typename... Ts>
    void row(const Ts&... cells) {
        std::string line;
        append_cells(line, cells...);
        out_ << line << '\n';
    }

    const std::string& path() const { return path_; }

private:
    template <typename T, typename... Rest>
    static void append_cells(std::string& line, const T& first, const Rest&... rest) {
        line += fmt::format("{}", first);
        if constexpr (sizeof...(rest) > 0) {
            line += ',';
            append_cells(line, rest...);
        }
    }

    std::string path_;
    std::ofstream out_;
};

/// Thresholds as a single CSV-safe cell, e.g. "5;10".
std::string format_taus(const std::vector<long>& taus);

} // namespace aoii::cli
