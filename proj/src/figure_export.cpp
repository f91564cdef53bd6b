#include "rdc/figure_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rdc {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double x) {
    if (x == 0.0) {
        return "0"; // collapse -0
    }
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) {
            break;
        }
    }
    return buf;
}

void write_csv(const std::string& path, const DataTable& table) {
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::runtime_error("csv row width mismatch: " + path);
        }
    }
    std::ofstream out = open_out(path);
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        out << (j ? "," : "") << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            out << (j ? "," : "") << format_double(row[j]);
        }
        out << '\n';
    }
    finish(out, path);
}

void write_svg_plot(const std::string& path, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<Series>& series) {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool any = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax <= xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax <= ymin) {
        ymax = ymin + 1.0;
    }
    const double w = 640.0, h = 480.0, ml = 64.0, mr = 16.0, mt = 16.0,
                 mb = 48.0;
    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr);
    };
    auto py = [&](double y) {
        return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb);
    };
    static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                          "#9467bd", "#8c564b", "#e377c2"};
    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"480\" viewBox=\"0 0 640 480\">\n"
        << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
        << "<line x1=\"" << format_double(ml) << "\" y1=\""
        << format_double(h - mb) << "\" x2=\"" << format_double(w - mr)
        << "\" y2=\"" << format_double(h - mb)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << format_double(ml) << "\" y1=\""
        << format_double(mt) << "\" x2=\"" << format_double(ml) << "\" y2=\""
        << format_double(h - mb)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    auto text = [&](double x, double y, const std::string& s,
                    const char* anchor) {
        out << "<text x=\"" << format_double(x) << "\" y=\""
            << format_double(y) << "\" font-family=\"sans-serif\" "
            << "font-size=\"12\" text-anchor=\"" << anchor << "\">" << s
            << "</text>\n";
    };
    text(ml, h - mb + 16.0, format_double(xmin), "middle");
    text(w - mr, h - mb + 16.0, format_double(xmax), "middle");
    text(ml - 6.0, h - mb + 4.0, format_double(ymin), "end");
    text(ml - 6.0, mt + 4.0, format_double(ymax), "end");
    text((ml + w - mr) / 2.0, h - 12.0, x_label, "middle");
    text(ml - 6.0, mt - 2.0, y_label, "end");
    std::size_t color = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\""
            << kColors[color % (sizeof kColors / sizeof kColors[0])]
            << "\" stroke-width=\"1.5\"";
        if (s.dashed) {
            out << " stroke-dasharray=\"5,4\"";
        }
        out << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            out << (i ? " " : "") << format_double(px(s.x[i])) << ','
                << format_double(py(s.y[i]));
        }
        out << "\"/>\n";
        if (!s.label.empty()) {
            text(w - mr - 4.0, mt + 16.0 + 14.0 * static_cast<double>(color),
                 s.label, "end");
        }
        ++color;
    }
    out << "</svg>\n";
    finish(out, path);
}

std::vector<double> decimate(const std::vector<double>& values,
                             std::size_t max_points) {
    if (max_points < 2 || values.size() <= max_points) {
        return values;
    }
    std::vector<double> kept;
    kept.reserve(max_points);
    const std::size_t n = values.size();
    for (std::size_t j = 0; j < max_points; ++j) {
        const std::size_t i = j * (n - 1) / (max_points - 1);
        kept.push_back(values[i]);
    }
    return kept;
}

} // namespace rdc
