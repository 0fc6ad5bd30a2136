#include <cmath>
#include <filesystem>
#include <random>

#include <unistd.h>

#include "doctest.h"
#include "linscale/errors.hpp"
#include "linscale/evalkit.hpp"
#include "linscale/raster.hpp"

using namespace linscale;
using namespace linscale::eval;
namespace fs = std::filesystem;

namespace {

// Explicit polygon, then the textbook shoelace sum.
double shoelace_oracle(const MeasurementSeries& a, const MeasurementSeries& d) {
    std::vector<std::pair<double, double>> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back({a.truth[i], a.measured[i]});
    for (std::size_t i = d.size(); i-- > 0;) v.push_back({d.truth[i], d.measured[i]});
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        s += p.first * q.second - q.first * p.second;
    }
    return std::fabs(s) / 2;
}

fs::path temp_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("linscale-test-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("evalkit") {

TEST_CASE("table 5 from table 4") {
    EvalReport a = error_metrics(table4_aspirating());
    CHECK(a.mae == 0.070);
    CHECK(a.rmse == 0.089);
    CHECK(a.bias == -0.043);
    CHECK(a.std_abs_err == 0.055);
    CHECK(a.r2 == 0.996);
    CHECK(a.n == 24);

    EvalReport d = error_metrics(table4_dispensing());
    CHECK(d.mae == 0.094);
    CHECK(d.rmse == 0.109);
    CHECK(d.bias == -0.074);
    CHECK(d.std_abs_err == 0.055);
    CHECK(d.r2 == 0.994);

    CHECK(std::max(a.max_abs_err, d.max_abs_err) == 0.23);
}

TEST_CASE("signed sd differs from the table's std column") {
    EvalReport a = error_metrics(table4_aspirating());
    EvalReport d = error_metrics(table4_dispensing());
    CHECK(a.sd_signed == doctest::Approx(0.077).epsilon(0.02));
    CHECK(d.sd_signed == doctest::Approx(0.080).epsilon(0.02));
}

TEST_CASE("perfect measurements") {
    MeasurementSeries s{"x", {0, 1, 2, 3}, {0, 1, 2, 3}};
    EvalReport r = error_metrics(s);
    CHECK(r.mae == 0);
    CHECK(r.rmse == 0);
    CHECK(r.bias == 0);
    CHECK(r.r2 == 1);
}

TEST_CASE("metric errors") {
    CHECK_THROWS_AS(error_metrics(MeasurementSeries{"x", {1}, {1}}), Error);
    CHECK_THROWS_AS(error_metrics(MeasurementSeries{"x", {2, 2, 2}, {1, 2, 3}}), Error);
    CHECK_THROWS_AS(error_metrics(MeasurementSeries{"x", {1, 2}, {1}}), Error);
}

TEST_CASE("rmse >= mae >= |bias| and r2 <= 1") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> err(0.1, 0.5);
    std::uniform_int_distribution<int> n(2, 60);
    for (int t = 0; t < 500; ++t) {
        MeasurementSeries s;
        const int k = n(rng);
        for (int i = 0; i < k; ++i) {
            s.truth.push_back(i * 0.2);
            s.measured.push_back(i * 0.2 + err(rng));
        }
        EvalReport r = error_metrics_exact(s);
        CHECK(r.rmse >= r.mae - 1e-12);
        CHECK(r.mae >= std::fabs(r.bias) - 1e-12);
        CHECK(r.mae >= 0);
        CHECK(r.r2 <= 1.0);
    }
}

TEST_CASE("hysteresis area") {
    auto a = table4_aspirating(), d = table4_dispensing();
    CHECK(hysteresis_area(a, a) <= 1e-12);

    MeasurementSeries lo{"a", {0, 1}, {0, 0}}, hi{"d", {0, 1}, {1, 1}};
    CHECK(hysteresis_area(lo, hi) == doctest::Approx(1.0));

    const double area = hysteresis_area(a, d);
    CHECK(std::fabs(area - shoelace_oracle(a, d)) <= 1e-9);
    const double range = a.truth.back() - a.truth.front();
    CHECK(area < 0.05 * range * range);
    CHECK(hysteresis_area(d, a) == doctest::Approx(area).epsilon(1e-12));

    MeasurementSeries other{"d", {0, 0.3}, {0, 0}};
    CHECK_THROWS_AS(hysteresis_area(lo, other), Error);
}

TEST_CASE("bland altman on table 4") {
    auto a = table4_aspirating(), d = table4_dispensing();
    BlandAltman ba = bland_altman(a, d);

    // Spreadsheet-style oracle over the 24 differences.
    std::vector<double> diff;
    for (std::size_t i = 0; i < a.size(); ++i) diff.push_back(a.measured[i] - d.measured[i]);
    double mean = 0;
    for (double v : diff) mean += v;
    mean /= diff.size();
    double ss = 0;
    for (double v : diff) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (diff.size() - 1));
    std::size_t outside = 0;
    for (double v : diff) outside += v < mean - 1.96 * sd || v > mean + 1.96 * sd;

    CHECK(std::round(ba.mean_diff * 1000) / 1000 == 0.031);
    CHECK(ba.mean_diff == doctest::Approx(mean).epsilon(1e-12));
    CHECK(ba.sd == doctest::Approx(sd).epsilon(1e-12));
    CHECK(ba.lower == doctest::Approx(mean - 1.96 * sd).epsilon(1e-12));
    CHECK(ba.upper == doctest::Approx(mean + 1.96 * sd).epsilon(1e-12));
    CHECK(ba.outlier_count == outside);
    CHECK(ba.outlier_count == 2);  // +0.22 at 3.80 and -0.13 at 0.40
}

TEST_CASE("bland altman degenerate cases") {
    auto a = table4_aspirating();
    BlandAltman same = bland_altman(a, a);
    CHECK(same.mean_diff == 0);
    CHECK(same.lower == 0);
    CHECK(same.upper == 0);
    CHECK(same.outlier_count == 0);

    BlandAltman one = bland_altman(MeasurementSeries{"a", {1}, {1.5}}, MeasurementSeries{"d", {1}, {1.2}});
    CHECK(one.sd == 0);
    CHECK(one.lower == doctest::Approx(0.3));
    CHECK(one.upper == doctest::Approx(0.3));

    CHECK_THROWS_AS(bland_altman(a, MeasurementSeries{"d", {1}, {1}}), Error);
}

TEST_CASE("bland altman limits hold 95 percent of gaussian differences") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> noise(0.0, 0.1);
    MeasurementSeries a{"a", {}, {}}, d{"d", {}, {}};
    for (int i = 0; i < 10000; ++i) {
        a.truth.push_back(i);
        d.truth.push_back(i);
        a.measured.push_back(i + noise(rng));
        d.measured.push_back(i + noise(rng));
    }
    BlandAltman ba = bland_altman(a, d);
    const double inside = 1.0 - double(ba.outlier_count) / 10000.0;
    CHECK(inside >= 0.94);
    CHECK(inside <= 0.96);
}

TEST_CASE("measurement csv") {
    auto s = parse_measurements_csv("direction,truth,measured\naspirating,0,0.1\ndispensing,0,0\naspirating,1,1\ndispensing,1,0.9\n");
    REQUIRE(s.size() == 2);
    CHECK(s[0].direction == "aspirating");
    CHECK(s[0].measured == std::vector<double>{0.1, 1});
    CHECK(s[1].truth == std::vector<double>{0, 1});
    CHECK_THROWS_AS(parse_measurements_csv("a,b,c\nx,1,2\n"), Error);
    CHECK_THROWS_AS(parse_measurements_csv("direction,truth,measured\nx,1\n"), Error);
    CHECK_THROWS_AS(parse_measurements_csv("direction,truth,measured\nx,1,abc\n"), Error);
}

TEST_CASE("report export") {
    auto a = table4_aspirating(), d = table4_dispensing();
    fs::path dir = temp_dir("report");
    auto files = export_report(dir.string(), a, d, all_plots());
    CHECK(files.size() == 7);
    CHECK(fs::exists(dir / "report.csv"));
    for (Plot p : all_plots()) {
        const fs::path f = dir / plot_file(p);
        REQUIRE(fs::exists(f));
        const std::string svg = read_file(f.string());
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("href") == std::string::npos);
    }
    const std::string csv1 = read_file((dir / "report.csv").string());
    CHECK(csv1.rfind("truth,asp,disp,err_asp,err_disp,diff", 0) == 0);
    CHECK(csv1.find("0.070") != std::string::npos);

    // Re-export overwrites with identical bytes.
    const std::string svg1 = read_file((dir / plot_file(Plot::bland_altman)).string());
    export_report(dir.string(), a, d, all_plots());
    CHECK(read_file((dir / "report.csv").string()) == csv1);
    CHECK(read_file((dir / plot_file(Plot::bland_altman)).string()) == svg1);

    fs::path only = temp_dir("csv-only");
    CHECK(export_report(only.string(), a, d, {}).size() == 1);
    std::size_t n = 0;
    for ([[maybe_unused]] auto& e : fs::directory_iterator(only)) ++n;
    CHECK(n == 1);

    fs::remove_all(dir);
    fs::remove_all(only);
}

TEST_CASE("plot inventory") {
    CHECK(all_plots().size() == 6);
    CHECK(std::string(plot_file(Plot::measured_aspirating)) == "a_measured_aspirating.svg");
    CHECK(std::string(plot_file(Plot::bland_altman)) == "f_bland_altman.svg");
}

TEST_CASE("metric table prints table 5") {
    const std::string t = metric_table(table4_aspirating(), table4_dispensing());
    for (const char* v : {"0.070", "0.089", "-0.043", "0.055", "0.996", "0.094", "0.109", "-0.074", "0.994"})
        CHECK(t.find(v) != std::string::npos);
}

}  // TEST_SUITE
