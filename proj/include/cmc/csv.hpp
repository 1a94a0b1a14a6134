#ifndef CMC_CSV_HPP
#define CMC_CSV_HPP

#include <charconv>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "cmc/dataset.hpp"
#include "cmc/errors.hpp"
#include "cmc/family.hpp"

namespace cmc {

/// How to read a CSV into a Dataset: which column is the response, the
/// family, and 0/1 encodings for two-level text columns.
struct CsvSpec {
    std::string path;
    std::string response;
    Family family;
    // (column, level, encoded value); every level of a mapped column must appear.
    std::vector<std::tuple<std::string, std::string, double>> categorical_map;
};

struct LoadedCsv {
    Dataset dataset;
    std::vector<std::string> predictor_names;  // CSV column order
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    for (auto& s : cells) {
        const auto a = s.find_first_not_of(" \t");
        const auto b = s.find_last_not_of(" \t");
        s = a == std::string::npos ? "" : s.substr(a, b - a + 1);
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
            s = s.substr(1, s.size() - 2);
        }
    }
    return cells;
}

inline double parse_cell(const std::string& cell, int row, const std::string& column) {
    if (cell.empty()) {
        throw NonNumericCell("row " + std::to_string(row) + ", column '" + column +
                             "': missing cell");
    }
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw NonNumericCell("row " + std::to_string(row) + ", column '" + column +
                             "': cannot parse '" + cell + "' as a number");
    }
    return value;
}

} // namespace detail

/// Reads a comma-separated file with a header row. Predictors keep the file's
/// column order. A leading unnamed or "row.names" column is ignored. Mapped
/// text columns are encoded via the categorical map; any other non-numeric
/// cell is an error naming its row and column.
inline LoadedCsv load_csv(const CsvSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw Error("cannot open data file '" + spec.path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error("'" + spec.path + "': empty file");
    std::vector<std::string> header = detail::split_csv_line(line);

    std::size_t first_col = 0;
    if (!header.empty() && (header[0].empty() || header[0] == "row.names")) {
        first_col = 1;  // ignorable index column
    }

    std::size_t response_idx = header.size();
    for (std::size_t j = first_col; j < header.size(); ++j) {
        if (header[j] == spec.response) {
            response_idx = j;
            break;
        }
    }
    if (response_idx == header.size()) {
        throw MissingColumn("response column '" + spec.response + "' not found in '" +
                            spec.path + "'");
    }
    for (const auto& [column, level, value] : spec.categorical_map) {
        bool found = false;
        for (std::size_t j = first_col; j < header.size(); ++j) {
            if (header[j] == column) { found = true; break; }
        }
        if (!found) {
            throw MissingColumn("mapped column '" + column + "' not found in '" +
                                spec.path + "'");
        }
    }

    auto lookup_level = [&](const std::string& column, const std::string& cell,
                            int row) -> std::pair<bool, double> {
        bool mapped_column = false;
        for (const auto& [col, level, value] : spec.categorical_map) {
            if (col != column) continue;
            mapped_column = true;
            if (level == cell) return {true, value};
        }
        if (mapped_column) {
            throw UnmappedLevel("row " + std::to_string(row) + ", column '" + column +
                                "': level '" + cell + "' has no 0/1 mapping");
        }
        return {false, 0.0};
    };

    std::vector<std::string> names;
    for (std::size_t j = first_col; j < header.size(); ++j) {
        if (j != response_idx) names.push_back(header[j]);
    }

    std::vector<double> ybuf;
    std::vector<double> xbuf;  // row major
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size()) {
            throw NonNumericCell("row " + std::to_string(row) + ": expected " +
                                 std::to_string(header.size()) + " cells, got " +
                                 std::to_string(cells.size()));
        }
        for (std::size_t j = first_col; j < cells.size(); ++j) {
            const auto [is_level, encoded] = lookup_level(header[j], cells[j], row);
            const double value =
                is_level ? encoded : detail::parse_cell(cells[j], row, header[j]);
            if (j == response_idx) ybuf.push_back(value);
            else xbuf.push_back(value);
        }
    }

    const Eigen::Index n = static_cast<Eigen::Index>(ybuf.size());
    const Eigen::Index p = static_cast<Eigen::Index>(names.size());
    if (n == 0) throw Error("'" + spec.path + "': no data rows");

    LoadedCsv out;
    out.predictor_names = std::move(names);
    out.dataset.family = spec.family;
    out.dataset.y = Eigen::Map<Eigen::VectorXd>(ybuf.data(), n);
    out.dataset.x.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) out.dataset.x(i, j) = xbuf[i * p + j];
    }
    out.dataset.validate();
    return out;
}

} // namespace cmc

#endif // CMC_CSV_HPP
