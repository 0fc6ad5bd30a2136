#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "linscale/digits.hpp"
#include "linscale/errors.hpp"
#include "linscale/gauge.hpp"
#include "linscale/orient.hpp"
#include "linscale/synth.hpp"

using namespace linscale;

namespace {

// Smallest distance between two undirected angles, in degrees.
double axis_diff(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

Contour line_contour(double angle_deg, double cx, double cy, int half) {
    Contour c;
    const double r = angle_deg * M_PI / 180;
    for (int t = -half; t <= half; ++t)
        c.points.push_back({int(std::lround(cx + t * std::cos(r))), int(std::lround(cy + t * std::sin(r)))});
    c.area = int(c.points.size());
    c.perimeter = double(c.points.size());
    c.update_bbox();
    return c;
}

std::vector<Contour> tick_contours(const synth::ScaleSpec& spec) {
    return find_contours(synth::render_tick_mask(spec));
}

}  // namespace

TEST_SUITE("orient") {

TEST_CASE("pca of a horizontal line") {
    std::vector<Point2d> pts;
    for (int x = 0; x < 10; ++x) pts.push_back({double(x), 5.0});
    auto a = pca_axes(pts);
    CHECK(a.major_angle.degrees == doctest::Approx(0.0));
    CHECK(a.minor_angle.degrees == doctest::Approx(90.0));
    CHECK(a.centroid.x == doctest::Approx(4.5));
    CHECK(a.centroid.y == doctest::Approx(5.0));
    CHECK(a.lambda2 == doctest::Approx(0.0));
}

TEST_CASE("pca of the diagonal x == y") {
    std::vector<Point2d> pts;
    for (int t = 0; t < 10; ++t) pts.push_back({double(t), double(t)});
    CHECK(pca_axes(pts).major_angle.degrees == doctest::Approx(45.0));
}

TEST_CASE("isotropic square ties to zero degrees") {
    auto a = pca_axes(std::vector<Point2d>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(a.lambda1 == doctest::Approx(a.lambda2));
    CHECK(a.major_angle.degrees == 0.0);
}

TEST_CASE("degenerate point sets throw") {
    CHECK_THROWS_AS(pca_axes(std::vector<Point2d>{}), Error);
    CHECK_THROWS_AS(pca_axes(std::vector<Point2d>{{3, 3}, {3, 3}, {3, 3}}), Error);
    try {
        pca_axes(std::vector<Point2d>{{1, 1}});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::orientation);
        CHECK(e.code() == "DegeneratePointSet");
    }
}

TEST_CASE("pca is rotation equivariant and invariant to shift and scale") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nx(0, 10), ny(0, 3);
    std::vector<Point2d> base;
    for (int i = 0; i < 200; ++i) base.push_back({nx(rng), ny(rng)});
    const double a0 = pca_axes(base).major_angle.degrees;

    for (double theta : {-80.0, -33.0, 0.5, 17.0, 61.0, 89.0}) {
        const double r = theta * M_PI / 180;
        std::vector<Point2d> rot, moved;
        for (auto p : base) {
            rot.push_back({p.x * std::cos(r) - p.y * std::sin(r), p.x * std::sin(r) + p.y * std::cos(r)});
            moved.push_back({3.5 * p.x + 100, 3.5 * p.y - 40});
        }
        auto ax = pca_axes(rot);
        CHECK(axis_diff(ax.major_angle.degrees, a0 + theta) < 1e-9);
        CHECK(axis_diff(ax.minor_angle.degrees, ax.major_angle.degrees + 90) < 1e-9);
        CHECK(ax.lambda1 >= ax.lambda2);
        CHECK(ax.lambda2 >= 0);
        CHECK(ax.major_angle.degrees > -90.0);
        CHECK(ax.major_angle.degrees <= 90.0);
        CHECK(axis_diff(pca_axes(moved).major_angle.degrees, a0) < 1e-9);
    }
}

TEST_CASE("upright rotation turns the axis vertical") {
    for (double a : {-89.0, -45.0, 0.0, 10.0, 90.0}) {
        CAPTURE(a);
        Rotation rot(200, 200, upright_rotation(Angle{a}));
        auto c = rotate_contours({line_contour(a, 100, 100, 60)}, rot);
        CHECK(axis_diff(pca_axes(c).major_angle.degrees, 90.0) < 1.0);
    }
}

TEST_CASE("vertical tick field needs no rotation") {
    // Horizontal ticks stacked vertically: the pooled points spread along y.
    auto spec = synth::preset(synth::Preset::syringe);
    auto ticks = tick_contours(spec);
    REQUIRE(ticks.size() == 21);
    Image img = synth::render_scale(spec, 1).image;
    Reoriented r = reorient(img, ticks);
    CHECK(std::fabs(r.applied.degrees) < 0.5);
    if (r.applied.degrees == 0.0) CHECK(r.image == img);
}

TEST_CASE("reorient twice finds almost nothing the second time") {
    for (double theta : {-50.0, 25.0, 70.0}) {
        auto spec = synth::preset(synth::Preset::syringe);
        spec.rotation_deg = theta;
        Image img = synth::render_scale(spec, 2).image;
        Reoriented once = reorient(img, tick_contours(spec));
        CHECK(axis_diff(once.applied.degrees, -theta) <= 0.5);
        Reoriented twice = reorient(once.image, once.contours);
        CAPTURE(theta);
        CHECK(axis_diff(twice.applied.degrees, 0.0) <= 0.5);
    }
}

TEST_CASE("pipeline recovers scene rotation") {
    for (double theta : {30.0, -75.0}) {
        auto spec = synth::preset(synth::Preset::syringe);
        spec.rotation_deg = theta;
        auto scene = synth::render_scale(spec, 3);
        Reading r = read_scale(scene.image, synth::config_for(synth::Preset::syringe));
        CAPTURE(theta);
        CHECK(axis_diff(r.diagnostics.total_angle.degrees, -theta) <= 0.5);
    }
}

TEST_CASE("crop_to_scale geometry") {
    Image img(300, 300, 3, 50);
    std::vector<Contour> mid{line_contour(0, 150, 100, 49), line_contour(0, 150, 199, 49)};
    // bbox x 101..199, y 100..199
    ScaleCrop exact = crop_to_scale(img, mid, 0.0);
    CHECK(exact.offset == PixelPoint{101, 100});
    CHECK(exact.image.width() == 99);
    CHECK(exact.image.height() == 100);

    ScaleCrop padded = crop_to_scale(img, mid, 0.10);
    CHECK(padded.offset == PixelPoint{101 - 10, 100 - 10});
    CHECK(padded.image.width() == 99 + 20);
    CHECK(padded.image.height() == 100 + 20);

    std::vector<Contour> whole{line_contour(0, 150, 0, 150), line_contour(0, 150, 299, 150)};
    ScaleCrop all = crop_to_scale(img, whole, 0.10);
    CHECK(all.offset == PixelPoint{0, 0});
    CHECK(all.image == img);
}

TEST_CASE("resolve_flip keeps readable text upright") {
    auto score = [](const Image& img) { return recognize_builtin(img).value ? 1 : 0; };
    Image upright = synth::render_label("47", 3.0);
    FlipChoice keep = resolve_flip(upright, score);
    CHECK_FALSE(keep.flipped);
    CHECK(keep.image == upright);
    CHECK(keep.score_upright == 1);

    Image upside = rotate_about_center(upright, Angle{180});
    FlipChoice fix = resolve_flip(upside, score);
    CHECK(fix.flipped);
    CHECK(fix.score_flipped > fix.score_upright);

    Image blank(40, 30, 3, 220);
    FlipChoice tie = resolve_flip(blank, score);
    CHECK_FALSE(tie.flipped);
    CHECK(tie.image == blank);
}

}  // TEST_SUITE
