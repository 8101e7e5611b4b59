#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "connbench/errors.hpp"
#include "connbench/io_util.hpp"

namespace connbench {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        return -1;
    }
    const std::string& at(std::size_t row, int c) const {
        return rows[row][static_cast<std::size_t>(c)];
    }
};

inline CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw SchemaMismatch("csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.columns = split(line, ',');
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row = split(line, ',');
        if (row.size() != t.columns.size())
            throw SchemaMismatch("csv: row width differs from header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace detail {

inline void check_schema(const CsvTable& t, const std::vector<std::string>& expected) {
    for (const std::string& name : expected)
        if (t.col(name) < 0) throw SchemaMismatch("csv: missing column " + name);
    for (const std::string& name : t.columns)
        if (std::find(expected.begin(), expected.end(), name) == expected.end())
            throw SchemaMismatch("csv: unknown column " + name);
}

inline double csv_number(const std::string& s) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaMismatch("csv: expected a number, got \"" + s + "\"");
    }
}

inline int channel(double a, double b, double t) {
    return static_cast<int>(std::lround(a + (b - a) * t));
}

// Dark blue -> teal -> yellow ramp for map values in [0, 1].
inline std::string heat_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    char buf[8];
    if (v < 0.5) {
        const double t = v / 0.5;
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(68, 33, t),
                      channel(1, 144, t), channel(84, 140, t));
    } else {
        const double t = (v - 0.5) / 0.5;
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(33, 253, t),
                      channel(144, 231, t), channel(140, 37, t));
    }
    return buf;
}

// Blue -> red ramp for line strokes keyed by b.
inline std::string cool_warm(double v) {
    v = std::clamp(v, 0.0, 1.0);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", channel(59, 180, v),
                  channel(76, 4, v), channel(192, 38, v));
    return buf;
}

struct PanelBox {
    double x = 0.0, y = 0.0, w = 220.0, h = 180.0;
    double px(double unit) const { return x + unit * w; }
    double py(double unit) const { return y + (1.0 - unit) * h; }
};

inline void open_panel(std::ostringstream& os, const PanelBox& box,
                       const std::string& title, const std::string& xlabel,
                       const std::string& ylabel) {
    os << "<g class=\"panel\">\n";
    os << "<rect x=\"" << box.x << "\" y=\"" << box.y << "\" width=\"" << box.w
       << "\" height=\"" << box.h
       << "\" fill=\"#ffffff\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (double u : {0.0, 0.5, 1.0}) {
        os << "<line x1=\"" << box.px(u) << "\" y1=\"" << box.y + box.h << "\" x2=\""
           << box.px(u) << "\" y2=\"" << box.y + box.h + 4 << "\" stroke=\"#444444\"/>\n";
        os << "<text x=\"" << box.px(u) << "\" y=\"" << box.y + box.h + 16
           << "\" font-size=\"10\" text-anchor=\"middle\">" << u << "</text>\n";
        os << "<line x1=\"" << box.x - 4 << "\" y1=\"" << box.py(u) << "\" x2=\"" << box.x
           << "\" y2=\"" << box.py(u) << "\" stroke=\"#444444\"/>\n";
        os << "<text x=\"" << box.x - 7 << "\" y=\"" << box.py(u) + 3
           << "\" font-size=\"10\" text-anchor=\"end\">" << u << "</text>\n";
    }
    if (!title.empty())
        os << "<text x=\"" << box.x + box.w / 2 << "\" y=\"" << box.y - 6
           << "\" font-size=\"11\" text-anchor=\"middle\">" << title << "</text>\n";
    os << "<text x=\"" << box.x + box.w / 2 << "\" y=\"" << box.y + box.h + 30
       << "\" font-size=\"11\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    os << "<text x=\"" << box.x - 30 << "\" y=\"" << box.y + box.h / 2
       << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 "
       << box.x - 30 << " " << box.y + box.h / 2 << ")\">" << ylabel << "</text>\n";
}

inline void close_panel(std::ostringstream& os) { os << "</g>\n"; }

inline void color_legend(std::ostringstream& os, double x, double y, double lo, double hi,
                         const std::string& label) {
    const double w = 120.0, h = 10.0;
    for (int i = 0; i < 60; ++i)
        os << "<rect x=\"" << x + i * w / 60.0 << "\" y=\"" << y << "\" width=\""
           << w / 60.0 + 0.5 << "\" height=\"" << h << "\" fill=\""
           << heat_color(i / 59.0) << "\"/>\n";
    char lo_s[32], hi_s[32];
    std::snprintf(lo_s, sizeof lo_s, "%.3g", lo);
    std::snprintf(hi_s, sizeof hi_s, "%.3g", hi);
    os << "<text x=\"" << x << "\" y=\"" << y + h + 12
       << "\" font-size=\"10\" text-anchor=\"start\">" << lo_s << "</text>\n";
    os << "<text x=\"" << x + w << "\" y=\"" << y + h + 12
       << "\" font-size=\"10\" text-anchor=\"end\">" << hi_s << "</text>\n";
    os << "<text x=\"" << x + w + 10 << "\" y=\"" << y + h
       << "\" font-size=\"11\" text-anchor=\"start\">" << label << "</text>\n";
}

inline std::string svg_document(double width, double height, const std::string& body) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height
       << "\" font-family=\"sans-serif\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
       << "\" fill=\"#ffffff\"/>\n";
    os << body;
    os << "</svg>\n";
    return os.str();
}

struct MapPoint {
    double d = 0.0, b = 0.0, value = 0.0;
};

// One scatter panel per facet, points at (d, b) colored by the metric.
inline std::string facet_scatter(const std::vector<std::string>& facet_names,
                                 const std::map<std::string, std::vector<MapPoint>>& data,
                                 const std::string& metric) {
    const double margin_l = 56.0, margin_t = 30.0, gap = 40.0;
    const double pw = 220.0, ph = 180.0;
    const int n = std::max<std::size_t>(1, facet_names.size());
    double lo = 1e300, hi = -1e300;
    for (const auto& [name, pts] : data)
        for (const MapPoint& pt : pts) {
            lo = std::min(lo, pt.value);
            hi = std::max(hi, pt.value);
        }
    if (lo > hi) {
        lo = 0.0;
        hi = 1.0;
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::ostringstream body;
    for (int f = 0; f < n; ++f) {
        PanelBox box;
        box.x = margin_l + f * (pw + gap);
        box.y = margin_t;
        box.w = pw;
        box.h = ph;
        const std::string name =
            facet_names.empty() ? "" : facet_names[static_cast<std::size_t>(f)];
        open_panel(body, box, name, "d", "b");
        const auto it = data.find(name);
        if (it != data.end())
            for (const MapPoint& pt : it->second)
                body << "<circle class=\"mark\" cx=\"" << box.px(pt.d) << "\" cy=\""
                     << box.py(pt.b) << "\" r=\"4\" fill=\""
                     << heat_color((pt.value - lo) / span) << "\"/>\n";
        close_panel(body);
    }
    color_legend(body, margin_l, margin_t + ph + 44.0, lo, hi, metric);
    return svg_document(margin_l + n * (pw + gap), margin_t + ph + 84.0, body.str());
}

inline const std::vector<std::string>& results_schema() {
    static const std::vector<std::string> cols = {
        "matrix_id", "b",  "d",  "T",  "mode",     "estimator", "method",
        "param",     "tp", "tn", "fp", "fn",       "accuracy",  "tpr",
        "fpr",       "auc", "chosen_threshold",    "runtime_ms", "replicate",
        "status"};
    return cols;
}

// Shared map-figure body: average `value_col` over ok rows per (facet, matrix).
inline std::string results_map(const CsvTable& t, const std::string& facet_col,
                               const std::string& value_col,
                               const std::vector<std::string>& estimator_filter) {
    check_schema(t, results_schema());
    const int c_facet = t.col(facet_col);
    const int c_value = t.col(value_col);
    const int c_status = t.col("status");
    const int c_est = t.col("estimator");
    const int c_id = t.col("matrix_id");
    const int c_b = t.col("b");
    const int c_d = t.col("d");

    std::vector<std::string> facets;
    struct Acc {
        double b = 0.0, d = 0.0, sum = 0.0;
        int n = 0;
    };
    std::map<std::string, std::map<std::string, Acc>> acc;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.at(r, c_status) != "ok") continue;
        if (t.at(r, c_value) == "-") continue;
        if (!estimator_filter.empty() &&
            std::find(estimator_filter.begin(), estimator_filter.end(), t.at(r, c_est)) ==
                estimator_filter.end())
            continue;
        const std::string facet = t.at(r, c_facet);
        if (std::find(facets.begin(), facets.end(), facet) == facets.end())
            facets.push_back(facet);
        Acc& a = acc[facet][t.at(r, c_id)];
        a.b = csv_number(t.at(r, c_b));
        a.d = csv_number(t.at(r, c_d));
        a.sum += csv_number(t.at(r, c_value));
        ++a.n;
    }
    std::map<std::string, std::vector<MapPoint>> data;
    for (const auto& [facet, by_id] : acc)
        for (const auto& [id, a] : by_id)
            data[facet].push_back({a.d, a.b, a.sum / a.n});
    return facet_scatter(facets, data, value_col);
}

} // namespace detail

inline std::string figure_feasibility(const CsvTable& t) {
    detail::check_schema(t, {"b", "d", "seeds", "feasible"});
    std::map<std::string, std::vector<detail::MapPoint>> data;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double seeds = detail::csv_number(t.at(r, t.col("seeds")));
        const double feas = detail::csv_number(t.at(r, t.col("feasible")));
        if (seeds <= 0.0) throw SchemaMismatch("csv: seeds must be positive");
        data[""].push_back({detail::csv_number(t.at(r, t.col("d"))),
                            detail::csv_number(t.at(r, t.col("b"))), feas / seeds});
    }
    return detail::facet_scatter({""}, data, "feasible fraction");
}

inline std::string figure_auc_map(const CsvTable& t) {
    return detail::results_map(t, "estimator", "auc", {});
}

// Figure-4 style map: one panel per method. Rows are restricted to the
// pairing used in the report plots: correlation-based methods on
// empirical_corr, glasso on raw samples.
inline std::string figure_method_map(const CsvTable& t) {
    return detail::results_map(t, "method", "accuracy", {"empirical_corr", "samples"});
}

inline std::string figure_threshold_curves(const CsvTable& t) {
    detail::check_schema(t, {"matrix_id", "b", "d", "T", "tau", "accuracy"});
    struct Key {
        int dbin;
        int T;
    };
    struct Row {
        std::string id;
        double b, d, tau, acc;
        int T;
    };
    std::vector<Row> rows;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        rows.push_back({t.at(r, t.col("matrix_id")),
                        detail::csv_number(t.at(r, t.col("b"))),
                        detail::csv_number(t.at(r, t.col("d"))),
                        detail::csv_number(t.at(r, t.col("tau"))),
                        detail::csv_number(t.at(r, t.col("accuracy"))),
                        static_cast<int>(detail::csv_number(t.at(r, t.col("T"))))});

    auto dbin_of = [](double d) {
        return std::min(3, static_cast<int>(std::floor(d * 4.0)));
    };
    std::vector<int> t_values;
    std::vector<int> dbins;
    for (const Row& r : rows) {
        if (std::find(t_values.begin(), t_values.end(), r.T) == t_values.end())
            t_values.push_back(r.T);
        const int bin = dbin_of(r.d);
        if (std::find(dbins.begin(), dbins.end(), bin) == dbins.end()) dbins.push_back(bin);
    }
    std::sort(t_values.begin(), t_values.end());
    std::sort(dbins.begin(), dbins.end());

    const double margin_l = 56.0, margin_t = 30.0, gap_x = 40.0, gap_y = 50.0;
    const double pw = 220.0, ph = 180.0;
    const int n_cols = std::max<std::size_t>(1, t_values.size());
    const int n_rows = std::max<std::size_t>(1, dbins.size());

    std::ostringstream body;
    for (int rI = 0; rI < n_rows; ++rI)
        for (int cI = 0; cI < n_cols; ++cI) {
            detail::PanelBox box;
            box.x = margin_l + cI * (pw + gap_x);
            box.y = margin_t + rI * (ph + gap_y);
            box.w = pw;
            box.h = ph;
            std::string title;
            if (!rows.empty()) {
                const int bin = dbins[static_cast<std::size_t>(rI)];
                const int T = t_values[static_cast<std::size_t>(cI)];
                std::ostringstream ts;
                ts << "d in [" << 0.25 * bin << ", " << 0.25 * (bin + 1) << ") , T = " << T;
                title = ts.str();
            }
            detail::open_panel(body, box, title, "tau", "accuracy");
            if (!rows.empty()) {
                const int bin = dbins[static_cast<std::size_t>(rI)];
                const int T = t_values[static_cast<std::size_t>(cI)];
                std::map<std::string, std::vector<const Row*>> lines;
                for (const Row& row : rows)
                    if (row.T == T && dbin_of(row.d) == bin) lines[row.id].push_back(&row);
                for (auto& [id, pts] : lines) {
                    std::sort(pts.begin(), pts.end(),
                              [](const Row* a, const Row* b) { return a->tau < b->tau; });
                    body << "<polyline class=\"mark\" fill=\"none\" stroke=\""
                         << detail::cool_warm(pts.front()->b) << "\" stroke-width=\"1.5\" "
                         << "points=\"";
                    for (const Row* pt : pts)
                        body << box.px(pt->tau) << "," << box.py(pt->acc) << " ";
                    body << "\"/>\n";
                }
            }
            detail::close_panel(body);
        }
    return detail::svg_document(margin_l + n_cols * (pw + gap_x),
                                margin_t + n_rows * (ph + gap_y) + 30.0, body.str());
}

inline std::string render_figure(const std::string& name, std::istream& csv) {
    const CsvTable t = read_csv(csv);
    if (name == "feasibility") return figure_feasibility(t);
    if (name == "auc_map") return figure_auc_map(t);
    if (name == "method_map") return figure_method_map(t);
    if (name == "threshold_curves") return figure_threshold_curves(t);
    throw std::invalid_argument("plot: unknown figure " + name);
}

} // namespace connbench
