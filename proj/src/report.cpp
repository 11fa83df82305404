#include "boxdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "boxdim/errors.hpp"

namespace boxdim {

std::string fmt17(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string report_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "experiment,delta,statistic,value,target,tolerance,stderr,verdict\n";
    for (const auto& r : report.rows) {
        os << r.experiment << ',' << fmt17(r.delta) << ',' << r.statistic << ',' << fmt17(r.value) << ','
           << fmt17(r.target) << ',' << fmt17(r.tolerance) << ',' << fmt17(r.stderr_) << ',' << r.verdict << '\n';
    }
    return os.str();
}

nlohmann::json summary_json(const ExperimentReport& report, const std::string& build_id) {
    nlohmann::json j;
    j["experiment"] = report.name;
    j["seed"] = report.seed;
    j["build_id"] = build_id;
    j["verdict"] = report.passed() ? "PASS" : "FAIL";
    j["runtime_seconds"] = report.runtime_seconds;
    j["notes"] = report.notes;
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        if (r.verdict == "INFO") continue;
        rows.push_back({{"delta", r.delta},
                        {"statistic", r.statistic},
                        {"value", r.value},
                        {"target", r.target},
                        {"tolerance", r.tolerance},
                        {"verdict", r.verdict}});
    }
    j["verdicts"] = rows;
    return j;
}

std::string cover_rows_csv(const Campaign& campaign) {
    std::ostringstream os;
    os << "replica,delta,N,M,L,Y,MG,NG\n";
    for (std::size_t i = 0; i < campaign.paths.size(); ++i) {
        for (const auto& r : campaign.paths[i]) {
            os << i << ',' << fmt17(r.delta) << ',' << r.N << ',' << r.M << ',' << fmt17(r.L) << ',' << r.Y << ','
               << r.MG << ',' << r.NG << '\n';
        }
    }
    return os.str();
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, const double* target) {
    constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (target && std::isfinite(*target)) {
        ymin = std::min(ymin, *target);
        ymax = std::max(ymax, *target);
    }
    if (!(xmin <= xmax)) xmin = 0, xmax = 1;
    if (!(ymin <= ymax)) ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
    if (ymax == ymin) {
        const double pad = ymin == 0.0 ? 1.0 : 0.05 * std::abs(ymin);
        ymin -= pad;
        ymax += pad;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
       << "</text>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
           << short_num(xv) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
           << short_num(yv) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << escape_xml(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
       << (T + H - B) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
    if (target && std::isfinite(*target)) {
        os << "<line x1=\"" << L << "\" y1=\"" << py(*target) << "\" x2=\"" << W - R << "\" y2=\"" << py(*target)
           << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    }
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 5] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (k + 1) << "\" text-anchor=\"end\" font-size=\"11\" fill=\""
           << colors[k % 5] << "\">" << escape_xml(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << contents;
}

void write_report_plots(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::map<std::string, std::vector<const ReportRow*>> by_stat;
    for (const auto& r : report.rows) {
        if (std::isfinite(r.value) && r.delta > 0.0) by_stat[r.statistic].push_back(&r);
    }
    for (const auto& [stat, rows] : by_stat) {
        if (rows.size() < 2) continue;
        PlotSeries s;
        s.label = stat;
        for (const auto* r : rows) {
            s.x.push_back(std::log10(r->delta));
            s.y.push_back(r->value);
        }
        const double tgt = rows.front()->target;
        const bool same = std::isfinite(tgt) && std::all_of(rows.begin(), rows.end(), [&](const ReportRow* r) {
                              return r->target == tgt;
                          });
        std::string file = stat;
        for (char& c : file) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') c = '_';
        }
        std::filesystem::create_directories(dir);
        write_text_file(dir / (file + ".svg"),
                        svg_line_plot(report.name + ": " + stat, "log10 delta", stat, {s}, same ? &tgt : nullptr));
    }
}

}  // namespace boxdim
