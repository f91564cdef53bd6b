#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rdc {

// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

// Shortest round-trip decimal form of x ("%.17g" trimmed), locale-free, so
// identical doubles always serialize to identical bytes.
std::string format_double(double x);

// One output table: header names and numeric rows of matching width.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Writes the table as CSV (header line, then one line per row, '\n' endings).
// Throws on I/O failure.
void write_csv(const std::string& path, const DataTable& table);

// One polyline for the SVG writers.
struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

// Minimal self-contained SVG line plot: axes with min/max tick labels and one
// polyline per series. No external assets. Throws on I/O failure.
void write_svg_plot(const std::string& path, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<Series>& series);

// Keeps at most max_points entries by uniform stride, always retaining the
// final entry.
std::vector<double> decimate(const std::vector<double>& values,
                             std::size_t max_points);

} // namespace rdc
