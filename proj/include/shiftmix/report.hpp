#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "shiftmix/errors.hpp"
#include "shiftmix/serialize.hpp"

namespace shiftmix {

// One emitted table row. Absent quantities are NaN; they render as "nan" in
// CSV and null in JSON, and are skipped in plots.
struct ReportRow {
    std::int64_t n = 0;
    double codiff_eq_re = std::numeric_limits<double>::quiet_NaN();
    double codiff_eq_im = std::numeric_limits<double>::quiet_NaN();
    double codiff_neq_re = std::numeric_limits<double>::quiet_NaN();
    double codiff_neq_im = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    double rate_formula = std::numeric_limits<double>::quiet_NaN();
    double mc_value = std::numeric_limits<double>::quiet_NaN();
    double mc_stderr = std::numeric_limits<double>::quiet_NaN();
};

inline std::string format_cell(double v) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::string out =
        "n,codiff_eq_re,codiff_eq_im,codiff_neq_re,codiff_neq_im,bound,"
        "rate_formula,mc_value,mc_stderr\n";
    for (const ReportRow& r : rows) {
        out += std::to_string(r.n);
        for (double v : {r.codiff_eq_re, r.codiff_eq_im, r.codiff_neq_re,
                         r.codiff_neq_im, r.bound, r.rate_formula, r.mc_value,
                         r.mc_stderr}) {
            out += ',';
            out += format_cell(v);
        }
        out += '\n';
    }
    return out;
}

namespace detail {

inline ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

} // namespace detail

inline ordered_json report_to_json(const std::string& command,
                                   const ordered_json& config_echo,
                                   const std::vector<ReportRow>& rows) {
    ordered_json out{{"command", command}, {"config", config_echo},
                     {"rows", ordered_json::array()}};
    for (const ReportRow& r : rows) {
        out["rows"].push_back(
            ordered_json{{"n", r.n},
                         {"codiff_eq", {detail::json_number(r.codiff_eq_re),
                                        detail::json_number(r.codiff_eq_im)}},
                         {"codiff_neq", {detail::json_number(r.codiff_neq_re),
                                         detail::json_number(r.codiff_neq_im)}},
                         {"bound", detail::json_number(r.bound)},
                         {"rate_formula", detail::json_number(r.rate_formula)},
                         {"mc_value", detail::json_number(r.mc_value)},
                         {"mc_stderr", detail::json_number(r.mc_stderr)}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Self-contained SVG: magnitudes on a log10 y-axis against n. Deterministic
// text output, no external assets.
// ---------------------------------------------------------------------------
namespace detail {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points; // (n, magnitude > 0)
};

inline std::string svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

inline std::string rows_to_svg(const std::vector<ReportRow>& rows,
                               const std::string& title) {
    constexpr double width = 800.0, height = 500.0;
    constexpr double left = 70.0, right = 20.0, top = 40.0, bottom = 50.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::vector<detail::SvgSeries> series = {
        {"|codiff_eq|", "#1f77b4", {}},  {"|codiff_neq|", "#2ca02c", {}},
        {"bound", "#d62728", {}},        {"rate_formula", "#9467bd", {}},
        {"|mc_value|", "#ff7f0e", {}},
    };
    double n_lo = 0.0, n_hi = 1.0;
    double y_lo = 0.0, y_hi = 0.0;
    bool any = false;
    auto add_point = [&](std::size_t s, double n, double v) {
        if (!std::isfinite(v) || v <= 0.0) return;
        const double ly = std::log10(v);
        if (!any) {
            n_lo = n_hi = n;
            y_lo = y_hi = ly;
            any = true;
        } else {
            n_lo = std::min(n_lo, n);
            n_hi = std::max(n_hi, n);
            y_lo = std::min(y_lo, ly);
            y_hi = std::max(y_hi, ly);
        }
        series[s].points.emplace_back(n, ly);
    };
    for (const ReportRow& r : rows) {
        const double n = static_cast<double>(r.n);
        add_point(0, n, std::hypot(r.codiff_eq_re, r.codiff_eq_im));
        add_point(1, n, std::hypot(r.codiff_neq_re, r.codiff_neq_im));
        add_point(2, n, r.bound);
        add_point(3, n, r.rate_formula);
        add_point(4, n, std::abs(r.mc_value));
    }
    if (!any) {
        n_lo = 0.0;
        n_hi = 1.0;
        y_lo = -1.0;
        y_hi = 1.0;
    }
    if (n_hi == n_lo) n_hi = n_lo + 1.0;
    if (y_hi == y_lo) {
        y_hi += 1.0;
        y_lo -= 1.0;
    }
    y_lo = std::max(y_lo, -18.0);

    auto x_of = [&](double n) { return left + (n - n_lo) / (n_hi - n_lo) * plot_w; };
    auto y_of = [&](double ly) {
        const double clamped = std::clamp(ly, y_lo, y_hi);
        return top + (y_hi - clamped) / (y_hi - y_lo) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg += "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"16\">" +
           title + "</text>\n";
    // frame
    svg += "<rect x=\"" + detail::svg_coord(left) + "\" y=\"" + detail::svg_coord(top) +
           "\" width=\"" + detail::svg_coord(plot_w) + "\" height=\"" +
           detail::svg_coord(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    // y gridlines at integer powers of ten
    for (int e = static_cast<int>(std::ceil(y_lo)); e <= static_cast<int>(std::floor(y_hi));
         ++e) {
        const double y = y_of(e);
        svg += "<line x1=\"" + detail::svg_coord(left) + "\" y1=\"" +
               detail::svg_coord(y) + "\" x2=\"" + detail::svg_coord(left + plot_w) +
               "\" y2=\"" + detail::svg_coord(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::svg_coord(left - 6.0) + "\" y=\"" +
               detail::svg_coord(y + 4.0) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">1e" +
               std::to_string(e) + "</text>\n";
    }
    // x labels at four evenly spaced positions
    for (int i = 0; i <= 4; ++i) {
        const double n = n_lo + (n_hi - n_lo) * i / 4.0;
        svg += "<text x=\"" + detail::svg_coord(x_of(n)) + "\" y=\"" +
               detail::svg_coord(top + plot_h + 18.0) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">n=" +
               detail::svg_coord(n) + "</text>\n";
    }
    // polylines
    for (const detail::SvgSeries& s : series) {
        if (s.points.empty()) continue;
        svg += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [n, ly] : s.points) {
            svg += detail::svg_coord(x_of(n)) + "," + detail::svg_coord(y_of(ly)) + " ";
        }
        svg += "\"/>\n";
    }
    // legend
    double legend_y = top + 14.0;
    for (const detail::SvgSeries& s : series) {
        if (s.points.empty()) continue;
        svg += "<rect x=\"" + detail::svg_coord(left + plot_w - 150.0) + "\" y=\"" +
               detail::svg_coord(legend_y - 9.0) +
               "\" width=\"10\" height=\"10\" fill=\"" + s.color + "\"/>\n";
        svg += "<text x=\"" + detail::svg_coord(left + plot_w - 135.0) + "\" y=\"" +
               detail::svg_coord(legend_y) +
               "\" font-family=\"monospace\" font-size=\"11\">" + s.label + "</text>\n";
        legend_y += 16.0;
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open output file for writing: " + path);
    out << content;
    if (!out) throw ValidationError("failed to write output file: " + path);
}

} // namespace shiftmix
