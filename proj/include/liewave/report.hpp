#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "liewave/harmonic.hpp"

namespace liewave {

/// Fixed 17-significant-digit formatting: enough to round-trip any double,
/// and byte-stable across runs.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvTable {
    std::string name;  // file stem, ".csv" appended
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);  // '\n' line ends on every platform
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

/// Coefficient dump, one row per matrix entry: rep,k,l,re,im with k,l the
/// zero-based entry indices. realize_preset reads the same layout back.
inline void write_coefficients(const std::filesystem::path& path, const SpectralField& F) {
    auto dual = enumerate_dual(F.spec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "rep,k,l,re,im\n";
    for (std::size_t i = 0; i < dual.size(); ++i) {
        const int d = dual[i].dim;
        const std::string label = dual[i].index.label();
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
                const Complex z = F.coeffs[i][static_cast<std::size_t>(k) * d + l];
                out << label << ',' << k << ',' << l << ',' << fmt17(z.real()) << ',' << fmt17(z.imag())
                    << '\n';
            }
    }
}

}  // namespace liewave
