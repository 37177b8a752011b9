// csv.hpp — deterministic CSV tables for the CLI outputs

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dimerdyn {

// A cell is a number (%.12g), an integer, text, or missing (NA).
using Cell = std::variant<std::monostate, double, long long, std::string>;

inline Cell na() { return std::monostate{}; }
inline Cell cell(std::optional<double> v) { return v ? Cell(*v) : na(); }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    // Rows are keyed for ordering; write() emits them sorted by key.
    void add_row(std::size_t key, std::vector<Cell> row);

    const std::vector<std::string>& header() const { return header_; }
    std::size_t size() const { return rows_.size(); }

    std::string to_string() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::pair<std::size_t, std::vector<Cell>>> rows_;
};

std::string format_cell(const Cell& c);

} // namespace dimerdyn
