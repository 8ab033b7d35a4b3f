#include "petcor/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "petcor/errors.hpp"

namespace petcor {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw SimulationFault("cannot write " + path);
    }
    return out;
}

void write_trace_csv(const SimTrace& tr, const std::string& path) {
    std::ofstream out = open_out(path);

    out << "t,y0";
    for (int c = 0; c < tr.exo_dim; ++c) out << ",v_" << (c + 1);
    for (int i = 0; i < tr.n_agents; ++i) {
        const std::string a = std::to_string(i + 1);
        const int order = tr.orders[i];
        for (int c = 0; c < order; ++c) {
            out << ",X_" << a;
            if (order > 1) out << "_" << (c + 1);
        }
        for (int c = 0; c < order; ++c) {
            out << ",Xhat_" << a;
            if (order > 1) out << "_" << (c + 1);
        }
        out << ",U_" << a << ",e_" << a;
        for (int c = 0; c < tr.exo_dim; ++c) out << ",vhat_" << a << "_" << (c + 1);
        out << ",phi_" << a;
        if (tr.has_diagnostics) {
            out << ",V_" << a << "_1,V_" << a << "_2,V_" << a << "_3,V_" << a << "_4,V_" << a;
            out << ",calV_" << a << "_1,calV_" << a << "_2,calV_" << a << "_3,calV_" << a
                << "_4,calV_" << a << "_5,calV_" << a;
            out << ",w1_" << a;
        }
    }
    out << "\n";

    const std::size_t rows = tr.rows();
    for (std::size_t r = 0; r < rows; ++r) {
        out << num(tr.t[r]) << "," << num(tr.y0[r]);
        for (int c = 0; c < tr.exo_dim; ++c) out << "," << num(tr.v_leader[r * tr.exo_dim + c]);
        for (int i = 0; i < tr.n_agents; ++i) {
            const int order = tr.orders[i];
            for (int c = 0; c < order; ++c) out << "," << num(tr.x[i][r * order + c]);
            for (int c = 0; c < order; ++c) out << "," << num(tr.x_hat[i][r * order + c]);
            out << "," << num(tr.u[i][r]) << "," << num(tr.e[i][r]);
            for (int c = 0; c < tr.exo_dim; ++c) out << "," << num(tr.v_hat[i][r * tr.exo_dim + c]);
            out << "," << num(tr.phi[i][r]);
            if (tr.has_diagnostics) {
                for (int c = 0; c < 5; ++c) out << "," << num(tr.diag[i].v_parts[r * 5 + c]);
                for (int c = 0; c < 6; ++c) out << "," << num(tr.diag[i].calv_parts[r * 6 + c]);
                out << "," << num(tr.diag[i].w_boundary[r]);
            }
        }
        out << "\n";
    }
}

void write_net_events_csv(const SimTrace& tr, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t_event,sender,receiver,kind,deviation_norm,threshold\n";
    for (const NetEvent& ev : tr.net_events) {
        out << num(ev.t) << "," << ev.sender << "," << ev.receiver << "," << ev.kind << ","
            << num(ev.deviation) << "," << num(ev.threshold) << "\n";
    }
}

void write_sensor_events_csv(const SimTrace& tr, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "t_event,agent,phi_value,deviation,threshold\n";
    for (const SensorEvent& ev : tr.sensor_events) {
        out << num(ev.t) << "," << ev.agent << "," << num(ev.phi) << "," << num(ev.deviation)
            << "," << num(ev.threshold) << "\n";
    }
}

// ---- minimal SVG plotting -------------------------------------------------

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Axes {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double y) const {
        return kHeight - kMarginBottom -
               (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void svg_header(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
}

void svg_axes(std::ofstream& out, const Axes& ax, bool log_y) {
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << kWidth - kMarginLeft - kMarginRight << "\" height=\""
        << kHeight - kMarginTop - kMarginBottom << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double x = ax.x_min + (ax.x_max - ax.x_min) * k / 5.0;
        out << "<text x=\"" << ax.px(x) << "\" y=\"" << kHeight - kMarginBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(x) << "</text>\n";
        const double y = ax.y_min + (ax.y_max - ax.y_min) * k / 5.0;
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << ax.py(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(log_y ? std::pow(10.0, y) : y) << "</text>\n";
    }
}

struct Series {
    std::string label;
    const std::vector<double>* y = nullptr;
    std::vector<double> owned;  // used when values are derived (norms, logs)
};

void write_line_plot(const std::string& path, const std::string& title,
                     const std::vector<double>& t, std::vector<Series> series, bool log_y) {
    std::ofstream out = open_out(path);

    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    auto values = [&](const Series& s) -> const std::vector<double>& {
        return s.y ? *s.y : s.owned;
    };
    for (const Series& s : series) {
        for (double v : values(s)) {
            const double yv = log_y ? std::log10(std::max(v, 1e-12)) : v;
            y_min = std::min(y_min, yv);
            y_max = std::max(y_max, yv);
        }
    }
    if (!(y_max > y_min)) {
        y_max = y_min + 1.0;
        y_min -= 1.0;
    }
    const double pad = 0.05 * (y_max - y_min);
    Axes ax{t.front(), t.back(), y_min - pad, y_max + pad};
    if (!(ax.x_max > ax.x_min)) ax.x_max = ax.x_min + 1.0;

    svg_header(out, title);
    svg_axes(out, ax, log_y);

    // Thin long traces so the files stay small; 2000 points per line is
    // plenty at this resolution.
    const std::size_t n = t.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);

    int color = 0;
    double legend_y = kMarginTop + 16;
    for (const Series& s : series) {
        const std::vector<double>& ys = values(s);
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 8]
            << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t k = 0; k < n; k += stride) {
            const double yv = log_y ? std::log10(std::max(ys[k], 1e-12)) : ys[k];
            out << fmt_tick(ax.px(t[k])) << "," << fmt_tick(ax.py(yv)) << " ";
        }
        const double yl = log_y ? std::log10(std::max(ys[n - 1], 1e-12)) : ys[n - 1];
        out << fmt_tick(ax.px(t[n - 1])) << "," << fmt_tick(ax.py(yl));
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kMarginRight - 150 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << kPalette[color % 8]
            << "\">" << s.label << "</text>\n";
        legend_y += 16;
        ++color;
    }
    out << "</svg>\n";
}

void write_event_raster(const std::string& path, const SimTrace& tr) {
    std::ofstream out = open_out(path);
    struct Row {
        std::string label;
        std::vector<double> times;
    };
    std::vector<Row> rows;
    for (const auto& [pair, stats] : tr.pair_stats) {
        Row row;
        row.label = std::to_string(pair.second) + " to " + std::to_string(pair.first);
        for (const NetEvent& ev : tr.net_events) {
            if (ev.receiver == pair.first && ev.sender == pair.second) row.times.push_back(ev.t);
        }
        rows.push_back(std::move(row));
    }
    if (!tr.sensor_events.empty()) {
        for (int i = 1; i <= tr.n_agents; ++i) {
            rows.push_back({"sensor " + std::to_string(i), {}});
            for (const SensorEvent& ev : tr.sensor_events) {
                if (ev.agent == i) rows.back().times.push_back(ev.t);
            }
        }
    }

    const double t_end = tr.t.empty() ? 1.0 : tr.t.back();
    Axes ax{0.0, t_end > 0.0 ? t_end : 1.0, 0.0, static_cast<double>(rows.size())};
    svg_header(out, "Event instants per pair");
    out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << kWidth - kMarginLeft - kMarginRight << "\" height=\""
        << kHeight - kMarginTop - kMarginBottom << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double x = ax.x_max * k / 5.0;
        out << "<text x=\"" << ax.px(x) << "\" y=\"" << kHeight - kMarginBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(x) << "</text>\n";
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double yc = ax.py(r + 0.5);
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << yc + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << rows[r].label << "</text>\n";
        const char* color = kPalette[r % 8];
        for (double tv : rows[r].times) {
            out << "<line x1=\"" << ax.px(tv) << "\" y1=\"" << yc - 6 << "\" x2=\"" << ax.px(tv)
                << "\" y2=\"" << yc + 6 << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace

std::vector<std::string> emit_outputs(const SimTrace& trace, const std::string& dir,
                                      const OutputOptions& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;

    const std::string trace_path = (fs::path(dir) / "trace.csv").string();
    write_trace_csv(trace, trace_path);
    written.push_back(trace_path);

    const std::string net_path = (fs::path(dir) / "events_net.csv").string();
    write_net_events_csv(trace, net_path);
    written.push_back(net_path);

    const std::string sensor_path = (fs::path(dir) / "events_sensor.csv").string();
    write_sensor_events_csv(trace, sensor_path);
    written.push_back(sensor_path);

    if (opts.plots && !trace.t.empty()) {
        std::vector<Series> outputs;
        outputs.push_back({"leader y0", &trace.y0, {}});
        for (int i = 0; i < trace.n_agents; ++i) {
            Series s;
            s.label = "Y_" + std::to_string(i + 1);
            const int order = trace.orders[i];
            s.owned.reserve(trace.rows());
            for (std::size_t r = 0; r < trace.rows(); ++r) {
                s.owned.push_back(trace.x[i][r * order]);
            }
            outputs.push_back(std::move(s));
        }
        const std::string outputs_path = (fs::path(dir) / "outputs.svg").string();
        write_line_plot(outputs_path, "Follower outputs vs leader", trace.t, std::move(outputs),
                        false);
        written.push_back(outputs_path);

        std::vector<Series> errors;
        for (int i = 0; i < trace.n_agents; ++i) {
            Series s;
            s.label = "|e_" + std::to_string(i + 1) + "|";
            s.owned.reserve(trace.rows());
            for (double v : trace.e[i]) s.owned.push_back(std::abs(v));
            errors.push_back(std::move(s));
        }
        const std::string errors_path = (fs::path(dir) / "errors.svg").string();
        write_line_plot(errors_path, "Regulation error norms (log scale)", trace.t,
                        std::move(errors), true);
        written.push_back(errors_path);

        const std::string events_path = (fs::path(dir) / "events.svg").string();
        write_event_raster(events_path, trace);
        written.push_back(events_path);
    }
    return written;
}

}  // namespace petcor
