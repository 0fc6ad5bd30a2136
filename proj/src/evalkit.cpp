#include "linscale/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "linscale/errors.hpp"
#include "linscale/raster.hpp"

namespace linscale::eval {

namespace {

double round_dp(double v, int dp) {
    const double k = std::pow(10.0, dp);
    const double s = v * k;
    return std::round(s + std::copysign(1e-9, s)) / k + 0.0;
}

void check_pairs(const MeasurementSeries& s) {
    if (s.truth.size() != s.measured.size())
        throw Error(Stage::input, "SizeMismatch", "series '" + s.direction + "' has unequal truth/measured counts");
}

void check_grid(const MeasurementSeries& a, const MeasurementSeries& b) {
    check_pairs(a);
    check_pairs(b);
    bool same = a.truth.size() == b.truth.size();
    for (std::size_t i = 0; same && i < a.truth.size(); ++i) same = std::fabs(a.truth[i] - b.truth[i]) <= 1e-12;
    if (!same) throw Error(Stage::input, "GridMismatch", "series do not share the same truth grid");
}

std::string fmt(double v, int dp = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", dp, v + 0.0);
    return buf;
}

}  // namespace

EvalReport error_metrics_exact(const MeasurementSeries& s) {
    check_pairs(s);
    const std::size_t n = s.size();
    if (n < 2) throw Error(Stage::input, "TooFewPairs", "error metrics need at least two pairs");
    EvalReport r;
    r.n = n;
    double sum_e = 0, sum_abs = 0, sum_sq = 0, mean_t = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = s.measured[i] - s.truth[i];
        sum_e += e;
        sum_abs += std::fabs(e);
        sum_sq += e * e;
        mean_t += s.truth[i];
        r.max_abs_err = std::max(r.max_abs_err, std::fabs(e));
    }
    mean_t /= double(n);
    r.mae = sum_abs / double(n);
    r.rmse = std::sqrt(sum_sq / double(n));
    r.bias = sum_e / double(n);
    double var_abs = 0, var_e = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = s.measured[i] - s.truth[i];
        var_abs += (std::fabs(e) - r.mae) * (std::fabs(e) - r.mae);
        var_e += (e - r.bias) * (e - r.bias);
        ss_tot += (s.truth[i] - mean_t) * (s.truth[i] - mean_t);
    }
    if (ss_tot == 0.0) throw Error(Stage::input, "ConstantTruth", "R^2 is undefined for a constant truth series");
    r.std_abs_err = std::sqrt(var_abs / double(n));
    r.sd_signed = std::sqrt(var_e / double(n));
    r.r2 = 1.0 - sum_sq / ss_tot;
    return r;
}

EvalReport rounded(const EvalReport& r, int decimals) {
    EvalReport o = r;
    for (double* f : {&o.mae, &o.rmse, &o.bias, &o.std_abs_err, &o.sd_signed, &o.r2, &o.max_abs_err})
        *f = round_dp(*f, decimals);
    return o;
}

EvalReport error_metrics(const MeasurementSeries& s) { return rounded(error_metrics_exact(s), 3); }

double hysteresis_area(const MeasurementSeries& asp, const MeasurementSeries& disp) {
    check_grid(asp, disp);
    std::vector<std::pair<double, double>> poly;
    for (std::size_t i = 0; i < asp.size(); ++i) poly.emplace_back(asp.truth[i], asp.measured[i]);
    for (std::size_t i = disp.size(); i-- > 0;) poly.emplace_back(disp.truth[i], disp.measured[i]);
    double twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& [x0, y0] = poly[i];
        const auto& [x1, y1] = poly[(i + 1) % poly.size()];
        twice += x0 * y1 - x1 * y0;
    }
    return std::fabs(twice) / 2.0;
}

BlandAltman bland_altman(const MeasurementSeries& asp, const MeasurementSeries& disp) {
    check_grid(asp, disp);
    BlandAltman ba;
    const std::size_t n = asp.size();
    if (n == 0) return ba;
    for (std::size_t i = 0; i < n; ++i) ba.diffs.push_back(asp.measured[i] - disp.measured[i]);
    for (double d : ba.diffs) ba.mean_diff += d;
    ba.mean_diff /= double(n);
    if (n > 1) {
        double ss = 0;
        for (double d : ba.diffs) ss += (d - ba.mean_diff) * (d - ba.mean_diff);
        ba.sd = std::sqrt(ss / double(n - 1));
    }
    ba.lower = ba.mean_diff - 1.96 * ba.sd;
    ba.upper = ba.mean_diff + 1.96 * ba.sd;
    for (double d : ba.diffs) ba.outlier_count += (d < ba.lower || d > ba.upper);
    return ba;
}

namespace {

std::vector<double> table4_truth() {
    std::vector<double> t;
    for (int i = 0; i < 24; ++i) t.push_back(i * 0.2);
    return t;
}

}  // namespace

MeasurementSeries table4_aspirating() {
    return {"aspirating",
            table4_truth(),
            {0.00, 0.20, 0.36, 0.59, 0.86, 1.08, 1.21, 1.46, 1.63, 1.82, 1.94, 2.07,
             2.38, 2.55, 2.74, 2.90, 3.11, 3.33, 3.46, 3.86, 3.92, 3.97, 4.30, 4.43}};
}

MeasurementSeries table4_dispensing() {
    return {"dispensing",
            table4_truth(),
            {0.00, 0.26, 0.49, 0.56, 0.75, 0.99, 1.12, 1.49, 1.58, 1.70, 1.89, 2.07,
             2.35, 2.54, 2.72, 2.92, 3.05, 3.34, 3.49, 3.64, 3.81, 3.99, 4.22, 4.46}};
}

std::vector<MeasurementSeries> parse_measurements_csv(std::string_view text) {
    std::vector<MeasurementSeries> out;
    std::map<std::string, std::size_t> index;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            const auto b = cell.find_first_not_of(" \t"), e = cell.find_last_not_of(" \t");
            cols.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
        }
        if (header) {
            header = false;
            if (cols.size() != 3 || cols[0] != "direction" || cols[1] != "truth" || cols[2] != "measured")
                throw Error(Stage::input, "BadCsv", "measurement CSV header must be direction,truth,measured");
            continue;
        }
        if (cols.size() != 3) throw Error(Stage::input, "BadCsv", "line " + std::to_string(line_no) + ": expected 3 columns");
        double t = 0, m = 0;
        try {
            std::size_t p1 = 0, p2 = 0;
            t = std::stod(cols[1], &p1);
            m = std::stod(cols[2], &p2);
            if (p1 != cols[1].size() || p2 != cols[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error(Stage::input, "BadCsv", "line " + std::to_string(line_no) + ": non-numeric value");
        }
        if (!std::isfinite(t)) throw Error(Stage::input, "BadCsv", "line " + std::to_string(line_no) + ": truth not finite");
        auto [it, fresh] = index.try_emplace(cols[0], out.size());
        if (fresh) out.push_back({cols[0], {}, {}});
        out[it->second].truth.push_back(t);
        out[it->second].measured.push_back(m);
    }
    return out;
}

// --- SVG ------------------------------------------------------------------------------

namespace {

class Svg {
public:
    Svg(std::string title, std::string xlabel, std::string ylabel, double x0, double x1, double y0, double y1)
        : title_(std::move(title)), xl_(std::move(xlabel)), yl_(std::move(ylabel)), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        if (x1_ <= x0_) x1_ = x0_ + 1;
        if (y1_ <= y0_) y1_ = y0_ + 1;
    }

    double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kW - kLeft - kRight); }
    double py(double y) const { return kH - kBottom - (y - y0_) / (y1_ - y0_) * (kH - kTop - kBottom); }

    void line(double xa, double ya, double xb, double yb, const char* color, bool dashed = false) {
        body_ << "<line x1=\"" << fmt(px(xa), 2) << "\" y1=\"" << fmt(py(ya), 2) << "\" x2=\"" << fmt(px(xb), 2)
              << "\" y2=\"" << fmt(py(yb), 2) << "\" stroke=\"" << color << "\" stroke-width=\"1.5\""
              << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) body_ << (i ? " " : "") << fmt(px(xs[i]), 2) << ',' << fmt(py(ys[i]), 2);
        body_ << "\"/>\n";
    }

    void points(const std::vector<double>& xs, const std::vector<double>& ys, const char* color) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            body_ << "<circle cx=\"" << fmt(px(xs[i]), 2) << "\" cy=\"" << fmt(py(ys[i]), 2) << "\" r=\"3\" fill=\""
                  << color << "\"/>\n";
    }

    void legend(const std::string& text, const char* color) {
        const double y = kTop + 14 + 16 * legends_++;
        body_ << "<rect x=\"" << kLeft + 10 << "\" y=\"" << fmt(y - 9, 2) << "\" width=\"10\" height=\"10\" fill=\"" << color
              << "\"/>\n<text x=\"" << kLeft + 26 << "\" y=\"" << fmt(y, 2) << "\" font-size=\"12\">" << text << "</text>\n";
    }

    std::string str() const {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 "
           << kW << ' ' << kH << "\" font-family=\"sans-serif\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << kW / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" << title_ << "</text>\n";
        const double l = kLeft, r = kW - kRight, t = kTop, b = kH - kBottom;
        os << "<rect x=\"" << l << "\" y=\"" << t << "\" width=\"" << r - l << "\" height=\"" << b - t
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double xv = x0_ + (x1_ - x0_) * i / 5.0, yv = y0_ + (y1_ - y0_) * i / 5.0;
            os << "<text x=\"" << fmt(px(xv), 2) << "\" y=\"" << b + 16 << "\" font-size=\"11\" text-anchor=\"middle\">"
               << fmt(xv, 2) << "</text>\n";
            os << "<text x=\"" << l - 6 << "\" y=\"" << fmt(py(yv) + 4, 2) << "\" font-size=\"11\" text-anchor=\"end\">"
               << fmt(yv, 2) << "</text>\n";
        }
        os << "<text x=\"" << (l + r) / 2 << "\" y=\"" << kH - 8 << "\" font-size=\"12\" text-anchor=\"middle\">" << xl_
           << "</text>\n";
        os << "<text x=\"14\" y=\"" << (t + b) / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
           << (t + b) / 2 << ")\">" << yl_ << "</text>\n";
        os << body_.str() << "</svg>\n";
        return os.str();
    }

private:
    static constexpr int kW = 560, kH = 420, kLeft = 64, kRight = 20, kTop = 34, kBottom = 46;
    std::string title_, xl_, yl_;
    double x0_, x1_, y0_, y1_;
    std::ostringstream body_;
    int legends_ = 0;
};

std::pair<double, double> span(std::initializer_list<std::reference_wrapper<const std::vector<double>>> vs) {
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& v : vs) {
        for (double x : v.get()) {
            if (first) lo = hi = x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            first = false;
        }
    }
    const double pad = (hi - lo) * 0.05 + 1e-3;
    return {lo - pad, hi + pad};
}

std::vector<double> errors(const MeasurementSeries& s) {
    std::vector<double> e;
    for (std::size_t i = 0; i < s.size(); ++i) e.push_back(s.measured[i] - s.truth[i]);
    return e;
}

constexpr const char* kAsp = "#1f77b4";
constexpr const char* kDisp = "#d62728";

std::string measured_plot(const MeasurementSeries& s, const char* color, const char* title) {
    auto [lo, hi] = span({s.truth, s.measured});
    Svg svg(title, "ground truth", "measured", lo, hi, lo, hi);
    svg.line(lo, lo, hi, hi, "#888888", true);
    svg.points(s.truth, s.measured, color);
    svg.legend(s.direction, color);
    return svg.str();
}

}  // namespace

const std::vector<Plot>& all_plots() {
    static const std::vector<Plot> p = {Plot::measured_aspirating, Plot::measured_dispensing, Plot::error_vs_truth,
                                        Plot::hysteresis, Plot::asp_vs_disp, Plot::bland_altman};
    return p;
}

const char* plot_file(Plot p) {
    switch (p) {
        case Plot::measured_aspirating: return "a_measured_aspirating.svg";
        case Plot::measured_dispensing: return "b_measured_dispensing.svg";
        case Plot::error_vs_truth: return "c_error_vs_truth.svg";
        case Plot::hysteresis: return "d_hysteresis.svg";
        case Plot::asp_vs_disp: return "e_aspirating_vs_dispensing.svg";
        case Plot::bland_altman: return "f_bland_altman.svg";
    }
    return "plot.svg";
}

std::string render_svg(Plot p, const MeasurementSeries& asp, const MeasurementSeries& disp) {
    switch (p) {
        case Plot::measured_aspirating: return measured_plot(asp, kAsp, "Measured (aspirating) vs ground truth");
        case Plot::measured_dispensing: return measured_plot(disp, kDisp, "Measured (dispensing) vs ground truth");
        case Plot::error_vs_truth: {
            const auto ea = errors(asp), ed = errors(disp);
            auto [x0, x1] = span({asp.truth});
            auto [y0, y1] = span({ea, ed});
            Svg svg("Error vs ground truth", "ground truth", "measured - truth", x0, x1, y0, y1);
            svg.line(x0, 0, x1, 0, "#888888", true);
            svg.polyline(asp.truth, ea, kAsp);
            svg.points(asp.truth, ea, kAsp);
            svg.polyline(disp.truth, ed, kDisp);
            svg.points(disp.truth, ed, kDisp);
            svg.legend(asp.direction, kAsp);
            svg.legend(disp.direction, kDisp);
            return svg.str();
        }
        case Plot::hysteresis: {
            check_grid(asp, disp);
            auto [x0, x1] = span({asp.truth});
            auto [y0, y1] = span({asp.measured, disp.measured});
            Svg svg("Hysteresis", "ground truth", "measured", x0, x1, y0, y1);
            svg.polyline(asp.truth, asp.measured, kAsp);
            svg.polyline(disp.truth, disp.measured, kDisp);
            svg.legend(asp.direction, kAsp);
            svg.legend(disp.direction, kDisp);
            return svg.str();
        }
        case Plot::asp_vs_disp: {
            check_grid(asp, disp);
            auto [lo, hi] = span({asp.measured, disp.measured});
            Svg svg("Aspirating vs dispensing", "aspirating", "dispensing", lo, hi, lo, hi);
            svg.line(lo, lo, hi, hi, "#888888", true);
            svg.points(asp.measured, disp.measured, "#2ca02c");
            return svg.str();
        }
        case Plot::bland_altman: {
            const BlandAltman ba = bland_altman(asp, disp);
            std::vector<double> means;
            for (std::size_t i = 0; i < asp.size(); ++i) means.push_back((asp.measured[i] + disp.measured[i]) / 2);
            const std::vector<double> lims = {ba.lower, ba.upper};
            auto [x0, x1] = span({means});
            auto [y0, y1] = span({ba.diffs, lims});
            Svg svg("Bland-Altman", "mean of the two readings", "aspirating - dispensing", x0, x1, y0, y1);
            svg.line(x0, ba.mean_diff, x1, ba.mean_diff, "#444444");
            svg.line(x0, ba.lower, x1, ba.lower, "#d62728", true);
            svg.line(x0, ba.upper, x1, ba.upper, "#d62728", true);
            svg.points(means, ba.diffs, "#1f77b4");
            svg.legend("mean " + fmt(ba.mean_diff, 3), "#444444");
            svg.legend("+-1.96 sd", "#d62728");
            return svg.str();
        }
    }
    return {};
}

std::string report_csv(const MeasurementSeries& asp, const MeasurementSeries& disp) {
    check_grid(asp, disp);
    std::ostringstream os;
    os << "truth,asp,disp,err_asp,err_disp,diff\n";
    for (std::size_t i = 0; i < asp.size(); ++i) {
        os << fmt(asp.truth[i]) << ',' << fmt(asp.measured[i]) << ',' << fmt(disp.measured[i]) << ','
           << fmt(asp.measured[i] - asp.truth[i]) << ',' << fmt(disp.measured[i] - disp.truth[i]) << ','
           << fmt(asp.measured[i] - disp.measured[i]) << '\n';
    }
    const EvalReport a = error_metrics_exact(asp), d = error_metrics_exact(disp);
    const BlandAltman ba = bland_altman(asp, disp);
    os << "\nmetric," << asp.direction << ',' << disp.direction << '\n';
    os << "mae," << fmt(a.mae) << ',' << fmt(d.mae) << '\n';
    os << "rmse," << fmt(a.rmse) << ',' << fmt(d.rmse) << '\n';
    os << "bias," << fmt(a.bias) << ',' << fmt(d.bias) << '\n';
    os << "std_abs_err," << fmt(a.std_abs_err) << ',' << fmt(d.std_abs_err) << '\n';
    os << "sd_signed_err," << fmt(a.sd_signed) << ',' << fmt(d.sd_signed) << '\n';
    os << "r2," << fmt(a.r2) << ',' << fmt(d.r2) << '\n';
    os << "max_abs_err," << fmt(a.max_abs_err) << ',' << fmt(d.max_abs_err) << '\n';
    os << "\nsummary,value\n";
    os << "hysteresis_area," << fmt(hysteresis_area(asp, disp)) << '\n';
    os << "ba_mean_diff," << fmt(ba.mean_diff) << '\n';
    os << "ba_sd," << fmt(ba.sd) << '\n';
    os << "ba_lower," << fmt(ba.lower) << '\n';
    os << "ba_upper," << fmt(ba.upper) << '\n';
    os << "ba_outliers," << ba.outlier_count << '\n';
    return os.str();
}

std::vector<std::string> export_report(const std::string& dir, const MeasurementSeries& asp,
                                       const MeasurementSeries& disp, const std::vector<Plot>& plots) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Stage::io, "IoFailure", "cannot create " + dir + ": " + ec.message());
    std::vector<std::string> written;
    const std::string csv = (std::filesystem::path(dir) / "report.csv").string();
    write_file(csv, report_csv(asp, disp));
    written.push_back(csv);
    for (Plot p : plots) {
        const std::string path = (std::filesystem::path(dir) / plot_file(p)).string();
        write_file(path, render_svg(p, asp, disp));
        written.push_back(path);
    }
    return written;
}

std::string metric_table(const MeasurementSeries& asp, const MeasurementSeries& disp) {
    const EvalReport a = error_metrics(asp), d = error_metrics(disp);
    char buf[512];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf, "%-14s %12s %12s\n", "metric", asp.direction.c_str(), disp.direction.c_str());
    os << buf;
    auto row = [&](const char* name, double x, double y) {
        std::snprintf(buf, sizeof buf, "%-14s %12.3f %12.3f\n", name, x + 0.0, y + 0.0);
        os << buf;
    };
    row("MAE", a.mae, d.mae);
    row("RMSE", a.rmse, d.rmse);
    row("Bias", a.bias, d.bias);
    row("Std", a.std_abs_err, d.std_abs_err);
    row("R2", a.r2, d.r2);
    row("MaxAbsErr", a.max_abs_err, d.max_abs_err);
    return os.str();
}

}  // namespace linscale::eval
