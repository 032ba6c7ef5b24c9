#include "csv.hpp"

#include <aoii/errors.hpp>

namespace aoii::cli {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& comment_lines,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path) {
    if (!out_) {
        throw Error("cannot open output file '" + path + "'");
    }
    for (const auto& line : comment_lines) {
        out_ << line << '\n';
    }
    std::string header;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            header += ',';
        }
        header += columns[i];
    }
    out_ << header << '\n';
}

std::string format_taus(const std::vector<long>& taus) {
    std::string out;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += fmt::format("{}", taus[i]);
    }
    return out;
}

} // namespace aoii::cli
