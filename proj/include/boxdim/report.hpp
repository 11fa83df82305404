#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "boxdim/experiments.hpp"

namespace boxdim {

/// 17 significant digits, round-trip exact; "nan"/"inf" spelled out.
std::string fmt17(double x);

/// experiment,delta,statistic,value,target,tolerance,stderr,verdict
std::string report_csv(const ExperimentReport& report);
/// Verdicts, notes and runtime; the only place wall-clock data appears.
nlohmann::json summary_json(const ExperimentReport& report, const std::string& build_id);

/// replica,delta,N,M,L,Y,MG,NG
std::string cover_rows_csv(const Campaign& campaign);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};
/// Minimal SVG line plot: axes, ticks, one polyline per series and an
/// optional horizontal target line.
std::string svg_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotSeries>& series, const double* target = nullptr);
/// One plot per statistic with at least two δ rows: value against log10 δ.
void write_report_plots(const ExperimentReport& report, const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace boxdim
