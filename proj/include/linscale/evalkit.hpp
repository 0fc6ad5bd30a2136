#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace linscale::eval {

struct MeasurementSeries {
    std::string direction;
    std::vector<double> truth;
    std::vector<double> measured;

    std::size_t size() const { return truth.size(); }
};

struct EvalReport {
    double mae = 0, rmse = 0, bias = 0;
    double std_abs_err = 0;  // population sd of |e|
    double sd_signed = 0;    // population sd of e
    double r2 = 0;
    double max_abs_err = 0;
    std::size_t n = 0;
};

/// Unrounded metrics. Throws Error(input, "TooFewPairs" | "ConstantTruth" | "SizeMismatch").
EvalReport error_metrics_exact(const MeasurementSeries& s);
/// Metrics rounded half away from zero to 3 decimals.
EvalReport error_metrics(const MeasurementSeries& s);
EvalReport rounded(const EvalReport& r, int decimals = 3);

/// Shoelace area of (truth, asp) forward then (truth, disp) backward. Throws GridMismatch.
double hysteresis_area(const MeasurementSeries& asp, const MeasurementSeries& disp);

struct BlandAltman {
    double mean_diff = 0, sd = 0, lower = 0, upper = 0;
    std::size_t outlier_count = 0;
    std::vector<double> diffs;
};

/// d = asp - disp; limits at mean +- 1.96 sample sd; outliers lie strictly outside.
BlandAltman bland_altman(const MeasurementSeries& asp, const MeasurementSeries& disp);

/// The published 24-point syringe experiment (ml).
MeasurementSeries table4_aspirating();
MeasurementSeries table4_dispensing();

/// Long-format CSV with header direction,truth,measured. Series come back in
/// first-appearance order of their direction label.
std::vector<MeasurementSeries> parse_measurements_csv(std::string_view text);

enum class Plot { measured_aspirating, measured_dispensing, error_vs_truth, hysteresis, asp_vs_disp, bland_altman };

const std::vector<Plot>& all_plots();
const char* plot_file(Plot p);
std::string render_svg(Plot p, const MeasurementSeries& asp, const MeasurementSeries& disp);

std::string report_csv(const MeasurementSeries& asp, const MeasurementSeries& disp);

/// Writes report.csv plus one SVG per requested plot into `dir` (created if
/// needed, existing files overwritten). Returns the written paths.
std::vector<std::string> export_report(const std::string& dir, const MeasurementSeries& asp,
                                       const MeasurementSeries& disp, const std::vector<Plot>& plots);

/// Human-readable metric table (three decimals).
std::string metric_table(const MeasurementSeries& asp, const MeasurementSeries& disp);

}  // namespace linscale::eval
