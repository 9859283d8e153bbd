#include "tofcover/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tofcover {

namespace {

const char* kPalette[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                          "#66ccee", "#aa3377", "#bbbbbb", "#222222"};
constexpr int kPaletteSize = 8;

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // x, y
};

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

/// Minimal SVG canvas with a linear plot area.
class SvgCanvas {
  public:
    SvgCanvas(double width, double height, double x_min, double x_max, double y_min, double y_max)
        : w_(width), h_(height), x0_(x_min), x1_(x_max), y0_(y_min), y1_(y_max) {
        svg_ << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w_ << "' height='" << h_
             << "' viewBox='0 0 " << w_ << " " << h_ << "'>\n"
             << "<rect width='" << w_ << "' height='" << h_ << "' fill='white'/>\n";
    }

    double px(double x) const { return margin_ + (x - x0_) / (x1_ - x0_) * (w_ - 2 * margin_); }
    double py(double y) const {
        return h_ - margin_ - (y - y0_) / (y1_ - y0_) * (h_ - 2 * margin_);
    }

    void axes(const std::string& x_label, const std::string& y_label, double y_tick) {
        line(margin_, h_ - margin_, w_ - margin_, h_ - margin_, "#000", 1.0);
        line(margin_, margin_, margin_, h_ - margin_, "#000", 1.0);
        for (double y = y0_; y <= y1_ + 1e-9; y += y_tick) {
            line(margin_ - 4, py(y), margin_, py(y), "#000", 1.0);
            line(margin_, py(y), w_ - margin_, py(y), "#eee", 0.5);
            text(margin_ - 8, py(y) + 4, num(y), 11, "end");
        }
        text(w_ / 2, h_ - 8, x_label, 12, "middle");
        svg_ << "<text x='14' y='" << h_ / 2 << "' font-size='12' text-anchor='middle' "
             << "transform='rotate(-90 14 " << h_ / 2 << ")' font-family='sans-serif'>" << y_label
             << "</text>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& color, double width) {
        svg_ << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
             << "' stroke='" << color << "' stroke-width='" << width << "'/>\n";
    }

    void rect(double x, double y, double w, double h, const std::string& fill) {
        svg_ << "<rect x='" << x << "' y='" << y << "' width='" << w << "' height='" << h
             << "' fill='" << fill << "'/>\n";
    }

    void circle(double x, double y, double r, const std::string& fill) {
        svg_ << "<circle cx='" << x << "' cy='" << y << "' r='" << r << "' fill='" << fill
             << "'/>\n";
    }

    void text(double x, double y, const std::string& s, int size,
              const std::string& anchor = "start") {
        svg_ << "<text x='" << x << "' y='" << y << "' font-size='" << size
             << "' text-anchor='" << anchor << "' font-family='sans-serif'>" << s << "</text>\n";
    }

    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color) {
        svg_ << "<polyline fill='none' stroke='" << color << "' stroke-width='2' points='";
        for (const auto& [x, y] : pts) svg_ << px(x) << ',' << py(y) << ' ';
        svg_ << "'/>\n";
    }

    void legend(const std::vector<std::string>& names) {
        double y = margin_ + 6;
        for (size_t i = 0; i < names.size(); ++i) {
            const std::string color = kPalette[i % kPaletteSize];
            rect(w_ - margin_ - 130, y - 8, 10, 10, color);
            text(w_ - margin_ - 115, y + 1, names[i], 11);
            y += 16;
        }
    }

    double margin() const { return margin_; }
    double width() const { return w_; }
    double height() const { return h_; }

    std::string finish() {
        svg_ << "</svg>\n";
        return svg_.str();
    }

  private:
    double w_, h_, x0_, x1_, y0_, y1_;
    double margin_ = 56;
    std::ostringstream svg_;
};

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

void write_series_data(const std::string& path, const std::vector<Series>& series) {
    std::ostringstream os;
    os << "series,x,y\n";
    for (const Series& s : series)
        for (const auto& [x, y] : s.points) os << s.name << ',' << x << ',' << y << "\n";
    write_file(path, os.str());
}

std::string line_chart(const std::vector<Series>& series, const std::string& x_label,
                       const std::string& y_label, double y_max) {
    double x_min = 1e300, x_max = -1e300;
    for (const Series& s : series)
        for (const auto& [x, y] : s.points) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    SvgCanvas canvas(640, 420, x_min, x_max, 0.0, y_max);
    canvas.axes(x_label, y_label, y_max / 10.0);
    std::vector<std::string> names;
    for (size_t i = 0; i < series.size(); ++i) {
        const std::string color = kPalette[i % kPaletteSize];
        canvas.polyline(series[i].points, color);
        for (const auto& [x, y] : series[i].points) canvas.circle(canvas.px(x), canvas.py(y), 2.5, color);
        names.push_back(series[i].name);
    }
    canvas.legend(names);
    return canvas.finish();
}

std::string grouped_bar_chart(const std::vector<std::string>& groups,
                              const std::vector<std::string>& bars,
                              const std::map<std::pair<std::string, std::string>, double>& values,
                              const std::string& y_label, double y_max) {
    SvgCanvas canvas(std::max<double>(640, 120.0 * groups.size() + 160), 420, 0.0, 1.0, 0.0,
                     y_max);
    canvas.axes("", y_label, y_max / 10.0);
    const double plot_w = canvas.width() - 2 * canvas.margin();
    const double group_w = plot_w / groups.size();
    const double bar_w = group_w * 0.8 / bars.size();

    for (size_t g = 0; g < groups.size(); ++g) {
        const double gx = canvas.margin() + group_w * g + group_w * 0.1;
        for (size_t b = 0; b < bars.size(); ++b) {
            const auto it = values.find({groups[g], bars[b]});
            if (it == values.end()) continue;
            const double top = canvas.py(it->second);
            const double bottom = canvas.py(0.0);
            canvas.rect(gx + bar_w * b, top, bar_w * 0.92, bottom - top,
                        kPalette[b % kPaletteSize]);
        }
        canvas.text(gx + group_w * 0.4, canvas.height() - canvas.margin() + 16, groups[g], 11,
                    "middle");
    }
    canvas.legend(bars);
    return canvas.finish();
}

std::string series_name(const SweepRow& row) {
    if (row.vmax_name == "shell") return "shell r=" + num(row.r_param);
    if (row.vmax_name == "operating") return "operating r=" + num(row.r_param);
    if (row.vmax_name == "tool") return "tool r=" + num(row.r_param);
    return row.vmax_name;
}

}  // namespace

ChartKind detect_chart_kind(const std::vector<SweepRow>& rows) {
    std::set<std::string> configs, vmaxes;
    std::set<int> thetas;
    std::set<double> shell_radii;
    bool all_dual = true;
    for (const SweepRow& row : rows) {
        configs.insert(row.config);
        vmaxes.insert(row.vmax_name);
        thetas.insert(row.theta_deg);
        if (row.vmax_name == "shell") shell_radii.insert(row.r_param);
        if (row.config.rfind("n2_", 0) != 0) all_dual = false;
    }
    if (all_dual && thetas.size() >= 3 && vmaxes.size() == 1 && shell_radii.size() >= 2)
        return ChartKind::ShellLines;
    if (all_dual && thetas.size() >= 3) return ChartKind::ThetaLines;
    return ChartKind::ConfigBars;
}

std::string render_sweep_chart(const std::vector<SweepRow>& rows, ChartKind kind,
                               const std::string& out_dir, const std::string& stem) {
    const std::string svg_path = out_dir + "/" + stem + ".svg";
    std::vector<Series> series;

    if (kind == ChartKind::ThetaLines || kind == ChartKind::ShellLines) {
        std::vector<std::string> order;
        std::map<std::string, Series> by_name;
        for (const SweepRow& row : rows) {
            if (row.failed) continue;
            const std::string name =
                kind == ChartKind::ShellLines ? ("r_S=" + num(row.r_param)) : series_name(row);
            if (!by_name.count(name)) {
                order.push_back(name);
                by_name[name].name = name;
            }
            by_name[name].points.push_back({static_cast<double>(row.theta_deg), row.zeta_percent});
        }
        for (const std::string& name : order) {
            auto& s = by_name[name];
            std::sort(s.points.begin(), s.points.end());
            series.push_back(std::move(s));
        }
        write_file(svg_path, line_chart(series, "theta (deg)", "zeta (%)", 100.0));
    } else {
        std::vector<std::string> groups, bars;
        std::map<std::pair<std::string, std::string>, double> values;
        for (const SweepRow& row : rows) {
            if (row.failed) continue;
            if (std::find(groups.begin(), groups.end(), row.config) == groups.end())
                groups.push_back(row.config);
            const std::string bar = series_name(row);
            if (std::find(bars.begin(), bars.end(), bar) == bars.end()) bars.push_back(bar);
            values[{row.config, bar}] = row.zeta_percent;
            bool found = false;
            for (Series& s : series)
                if (s.name == bar) {
                    s.points.push_back({static_cast<double>(groups.size() - 1), row.zeta_percent});
                    found = true;
                }
            if (!found)
                series.push_back({bar, {{static_cast<double>(groups.size() - 1), row.zeta_percent}}});
        }
        write_file(svg_path, grouped_bar_chart(groups, bars, values, "zeta (%)", 100.0));
    }
    write_series_data(out_dir + "/" + stem + "_series.csv", series);
    return svg_path;
}

std::string render_probe_chart(const std::vector<ProbeRow>& rows, const std::string& out_dir,
                               const std::string& stem) {
    std::vector<std::string> groups;
    const std::vector<std::string> bars = {"rmse", "max_error"};
    std::map<std::pair<std::string, std::string>, double> values;
    double y_max = 0.0;
    std::vector<Series> series{{"rmse", {}}, {"max_error", {}}};
    for (const ProbeRow& row : rows) {
        groups.push_back(row.config);
        if (row.seen_count == 0) continue;
        values[{row.config, "rmse"}] = row.rmse;
        values[{row.config, "max_error"}] = row.max_error;
        y_max = std::max({y_max, row.rmse, row.max_error});
        series[0].points.push_back({static_cast<double>(groups.size() - 1), row.rmse});
        series[1].points.push_back({static_cast<double>(groups.size() - 1), row.max_error});
    }
    if (y_max <= 0.0) y_max = 1.0;
    const std::string svg_path = out_dir + "/" + stem + ".svg";
    write_file(svg_path, grouped_bar_chart(groups, bars, values, "error (m)", y_max * 1.1));
    write_series_data(out_dir + "/" + stem + "_series.csv", series);
    return svg_path;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_sweep_csv: cannot open " + path);
    std::vector<SweepRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("config,", 0) == 0) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) f.push_back(field);
        if (f.size() < 10) continue;
        SweepRow row;
        row.config = f[0];
        row.vmax_name = f[1];
        row.r_param = std::stod(f[2]);
        row.theta_deg = std::stoi(f[3]);
        row.zeta_percent = std::stod(f[4]);
        row.lambda_vmax = std::stod(f[5]);
        row.lambda_leftover = std::stod(f[6]);
        row.voxel_size = std::stod(f[7]);
        row.max_depth = std::stoi(f[8]);
        row.pose_phase = std::stod(f[9]);
        row.warnings = f.size() > 10 ? f[10] : "";
        row.failed = row.warnings.rfind("error_", 0) == 0;
        if (!row.failed) rows.push_back(row);
    }
    return rows;
}

}  // namespace tofcover
