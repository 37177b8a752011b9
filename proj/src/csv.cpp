// csv.cpp — CSV formatting and writing

#include "dimerdyn/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dimerdyn/error.hpp"

namespace dimerdyn {

std::string format_cell(const Cell& c)
{
    struct Visitor {
        std::string operator()(std::monostate) const { return "NA"; }
        std::string operator()(double v) const
        {
            if (std::isnan(v))
                return "NA";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            if (v == 0.0)
                return "0";   // no "-0"
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return buf;
        }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& s) const
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"')
                    q += '"';
                q += ch;
            }
            return q + '"';
        }
    };
    return std::visit(Visitor{}, c);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::size_t key, std::vector<Cell> row)
{
    if (row.size() != header_.size())
        throw DomainError("csv row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(header_.size()));
    rows_.emplace_back(key, std::move(row));
}

std::string CsvTable::to_string() const
{
    auto order = rows_;
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i)
        out += (i ? "," : "") + header_[i];
    out += '\n';
    for (const auto& [key, row] : order) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + format_cell(row[i]);
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out << to_string();
    if (!out)
        throw ConfigError("write failed for '" + path.string() + "'");
}

} // namespace dimerdyn
