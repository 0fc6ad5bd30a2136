#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "linscale/errors.hpp"
#include "linscale/raster.hpp"

using namespace linscale;

namespace {

Image checker3x2() {
    Image img(3, 2, 1);
    const int v[2][3] = {{0, 255, 0}, {255, 0, 255}};
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x) img.at(x, y) = static_cast<std::uint8_t>(v[y][x]);
    return img;
}

// Smooth content so bilinear resampling error stays small.
Image smooth_image(int w, int h) {
    Image img(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = static_cast<std::uint8_t>(128 + 100 * std::sin(x * 0.07) * std::cos(y * 0.05));
            img.at(x, y, 1) = static_cast<std::uint8_t>(x * 255 / (w - 1));
            img.at(x, y, 2) = static_cast<std::uint8_t>(y * 255 / (h - 1));
        }
    return img;
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("image constructor validates the buffer") {
    CHECK_THROWS_AS(Image(2, 2, 3, std::vector<std::uint8_t>(5)), Error);
    CHECK_THROWS_AS(Image(0, 2, 1), Error);
    CHECK_THROWS_AS(Image(2, 2, 2), Error);
    Image img(4, 3, 3, 7);
    CHECK(img.data().size() == 36);
    CHECK(img.at(3, 2, 2) == 7);
}

TEST_CASE("resize 4000x3000 to 1000 gives 1000x750") {
    Image big(4000, 3000, 1, 90);
    Image out = resize_longest_edge(big, 1000);
    CHECK(out.width() == 1000);
    CHECK(out.height() == 750);
    CHECK(out.at(500, 300) == 90);
}

TEST_CASE("resize to the current size is the identity") {
    Image img = testutil::random_image(100, 100, 3, 5);
    CHECK(resize_longest_edge(img, 100) == img);
}

TEST_CASE("resize rejects tiny targets and degenerate images") {
    Image img(100, 50, 1);
    CHECK_THROWS_AS(resize_longest_edge(img, 15), Error);
    CHECK_THROWS_AS(resize_longest_edge(Image(1, 40, 1), 100), Error);
}

TEST_CASE("bilinear 3x2 checkerboard to 6x4") {
    // Hand-evaluated with half-pixel centres and edge clamping.
    const int expect[4][6] = {
        {0, 64, 191, 191, 64, 0},
        {64, 96, 159, 159, 96, 64},
        {191, 159, 96, 96, 159, 191},
        {255, 191, 64, 64, 191, 255},
    };
    Image out = resize_bilinear(checker3x2(), 6, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 6; ++x) {
            CAPTURE(x);
            CAPTURE(y);
            CHECK(out.at(x, y) == expect[y][x]);
        }
}

TEST_CASE("resize keeps the aspect ratio within one pixel") {
    const int sizes[][2] = {{640, 480}, {333, 1001}, {17, 999}, {1200, 1199}, {50, 20}};
    for (auto [w, h] : sizes) {
        for (int target : {16, 100, 257, 1000}) {
            Image out = resize_longest_edge(Image(w, h, 1), target);
            CHECK(std::max(out.width(), out.height()) == target);
            const double err = std::fabs(double(out.width()) / out.height() - double(w) / h);
            CHECK(err <= std::max(1.0 / out.height(), 1.0 / out.width()) + 1e-12);
        }
    }
}

TEST_CASE("hsv of primaries and grey") {
    auto hsv = [](Rgb c) { return rgb_to_hsv_pixel(c); };
    CHECK(hsv({255, 0, 0}) == Rgb{0, 255, 255});
    CHECK(hsv({128, 128, 128}) == Rgb{0, 0, 128});
    CHECK(hsv({0, 255, 0}) == Rgb{60, 255, 255});
    CHECK(hsv({0, 0, 255}) == Rgb{120, 255, 255});
    CHECK(hsv({0, 0, 0}) == Rgb{0, 0, 0});
}

TEST_CASE("to_hsv rejects grey images") {
    CHECK_THROWS_AS(to_hsv(Image(3, 3, 1)), Error);
}

TEST_CASE("hsv round trip over the stride-17 lattice") {
    // The max and min channels come back within 2. The middle channel is
    // interpolated from a hue quantized to 2 degree steps, so its error is
    // bounded by half a step across the 60 degree sector: (max - min) / 60,
    // plus one for the two roundings.
    int worst_extreme = 0;
    double worst_mid_excess = -1e9;
    for (int r = 0; r < 256; r += 17)
        for (int g = 0; g < 256; g += 17)
            for (int b = 0; b < 256; b += 17) {
                const Rgb in{std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)};
                const Rgb out = hsv_to_rgb_pixel(rgb_to_hsv_pixel(in));
                const int mx = std::max({r, g, b}), mn = std::min({r, g, b});
                for (int c = 0; c < 3; ++c) {
                    const int err = std::abs(int(out[c]) - int(in[c]));
                    const bool extreme = in[c] == mx || in[c] == mn;
                    if (extreme) {
                        worst_extreme = std::max(worst_extreme, err);
                    } else {
                        worst_mid_excess = std::max(worst_mid_excess, err - ((mx - mn) / 60.0 + 1.0));
                    }
                }
            }
    CHECK(worst_extreme <= 2);
    CHECK(worst_mid_excess <= 0.0);
}

TEST_CASE("grey conversion uses fixed-point luma") {
    Image img(2, 1, 3);
    img.set_rgb(0, 0, {255, 0, 0});
    img.set_rgb(1, 0, {10, 200, 30});
    Image g = to_gray(img);
    CHECK(g.at(0, 0) == (77 * 255 + 128) >> 8);
    CHECK(g.at(1, 0) == (77 * 10 + 150 * 200 + 29 * 30 + 128) >> 8);
}

TEST_CASE("blur of a constant image is unchanged") {
    Image img(9, 7, 3, 201);
    CHECK(gaussian_blur_3x3(img) == img);
}

TEST_CASE("blur of an interior impulse") {
    Image img(5, 5, 1, 0);
    img.at(2, 2) = 255;
    Image out = gaussian_blur_3x3(img);
    CHECK(out.at(2, 2) == 64);
    CHECK(out.at(1, 2) == 32);
    CHECK(out.at(3, 2) == 32);
    CHECK(out.at(2, 1) == 32);
    CHECK(out.at(2, 3) == 32);
    CHECK(out.at(1, 1) == 16);
    CHECK(out.at(3, 3) == 16);
    CHECK(out.at(0, 0) == 0);
}

TEST_CASE("blur of a 1x1 image is unchanged") {
    Image img(1, 1, 3);
    img.set_rgb(0, 0, {3, 140, 250});
    CHECK(gaussian_blur_3x3(img) == img);
}

TEST_CASE("blur preserves the mean") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Image img = testutil::random_image(61, 47, 3, seed);
        Image out = gaussian_blur_3x3(img);
        double a = 0, b = 0;
        for (auto v : img.data()) a += v;
        for (auto v : out.data()) b += v;
        CHECK(std::fabs(a - b) / img.data().size() <= 0.5);
    }
}

TEST_CASE("hsv blur matches rgb blur on the same bytes") {
    Image img = testutil::random_image(13, 11, 3, 9);
    CHECK(gaussian_blur_3x3(HsvImage{img}).pixels == gaussian_blur_3x3(img));
}

TEST_CASE("angle normalization and folding") {
    CHECK(Angle::normalized(180).degrees == doctest::Approx(180));
    CHECK(Angle::normalized(-180).degrees == doctest::Approx(180));
    CHECK(Angle::normalized(370).degrees == doctest::Approx(10));
    CHECK(Angle::normalized(-190).degrees == doctest::Approx(170));
    CHECK(Angle{135}.folded().degrees == doctest::Approx(-45));
    CHECK(Angle{-90}.folded().degrees == doctest::Approx(90));
    CHECK(Angle{90}.folded().degrees == doctest::Approx(90));
    CHECK(Angle{-120}.folded().degrees == doctest::Approx(60));
}

TEST_CASE("rotation by zero is the identity") {
    Image img = testutil::random_image(31, 17, 3, 2);
    CHECK(rotate_about_center(img, Angle{0}) == img);
}

TEST_CASE("rotation by 90 permutes pixels exactly") {
    const int W = 7, H = 4;
    Image img = testutil::random_image(W, H, 1, 3);
    Image out = rotate_about_center(img, Angle{90});
    REQUIRE(out.width() == H);
    REQUIRE(out.height() == W);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) CHECK(out.at(y, W - 1 - x) == img.at(x, y));
}

TEST_CASE("rotation canvas encloses the rotated corners") {
    Rotation r(100, 50, Angle{30});
    const double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
    CHECK(r.out_width() == int(std::ceil(100 * c + 50 * s)));
    CHECK(r.out_height() == int(std::ceil(100 * s + 50 * c)));
    CHECK(rotate_about_center(Image(100, 50, 1), Angle{30}).width() == 112);
}

TEST_CASE("rotation point map inverts") {
    Rotation r(120, 80, Angle{-37.5});
    for (Point2d p : {Point2d{0, 0}, Point2d{119, 79}, Point2d{33.3, 12.9}}) {
        Point2d q = r.invert(r.apply(p));
        CHECK(q.x == doctest::Approx(p.x).epsilon(1e-12));
        CHECK(q.y == doctest::Approx(p.y).epsilon(1e-12));
    }
    // Counter-clockwise on screen: the right end of a horizontal line goes up.
    Rotation ccw(101, 101, Angle{90});
    Point2d right = ccw.apply({100, 50});
    CHECK(right.x == doctest::Approx(50));
    CHECK(right.y == doctest::Approx(0));
}

TEST_CASE("rotate then unrotate recovers the content") {
    const int W = 160, H = 120;
    Image img = smooth_image(W, H);
    for (double deg : {-75.0, -30.0, 12.5, 45.0, 89.0}) {
        CAPTURE(deg);
        Rotation r1(W, H, Angle{deg});
        Image once = rotate_about_center(img, Angle{deg});
        Rotation r2(once.width(), once.height(), Angle{-deg});
        Image back = rotate_about_center(once, Angle{-deg});
        double sum = 0;
        int n = 0;
        for (int y = 2; y < H - 2; ++y)
            for (int x = 2; x < W - 2; ++x) {
                const Point2d q = r2.apply(r1.apply({double(x), double(y)}));
                for (int c = 0; c < 3; ++c) {
                    sum += std::fabs(sample_bilinear(back, q.x, q.y, c) - img.at(x, y, c));
                    ++n;
                }
            }
        CHECK(sum / n <= 3.0);
    }
}

TEST_CASE("rotation fills with the median border colour") {
    Image img(20, 10, 3);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 20; ++x) img.set_rgb(x, y, {10, 20, 30});
    img.set_rgb(0, 0, {255, 255, 255});
    CHECK(median_border_color(img) == Rgb{10, 20, 30});
    Image out = rotate_about_center(img, Angle{45});
    CHECK(out.rgb(0, 0) == Rgb{10, 20, 30});
    Image filled = rotate_about_center(img, Angle{45}, Rgb{1, 2, 3});
    CHECK(filled.rgb(0, 0) == Rgb{1, 2, 3});
}

TEST_CASE("crop") {
    Image img(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.at(x, y) = static_cast<std::uint8_t>(10 * y + x);

    CHECK(crop(img, {0, 0, 4, 4}) == img);

    Image two = crop(img, {1, 2, 2, 2});
    REQUIRE(two.width() == 2);
    CHECK(two.at(0, 0) == 21);
    CHECK(two.at(1, 0) == 22);
    CHECK(two.at(0, 1) == 31);
    CHECK(two.at(1, 1) == 32);

    Image wide = crop(Image(30, 20, 3), {25, 5, 15, 5});
    CHECK(wide.width() == 5);
    CHECK(wide.height() == 5);

    CHECK_THROWS_AS(crop(img, {10, 10, 2, 2}), Error);
}

TEST_CASE("clamp_rect") {
    CHECK(clamp_rect({-5, -5, 10, 10}, 20, 20) == Rect{0, 0, 5, 5});
    CHECK(clamp_rect({15, 0, 10, 3}, 20, 20) == Rect{15, 0, 5, 3});
    CHECK_FALSE(clamp_rect({20, 0, 5, 5}, 20, 20).has_value());
    CHECK_FALSE(clamp_rect({0, 0, 0, 5}, 20, 20).has_value());
}

TEST_CASE("pnm round trip is bit exact") {
    Image rgb = testutil::random_image(17, 9, 3, 4);
    Image grey = testutil::random_image(8, 13, 1, 6);
    CHECK(decode_pnm(encode_pnm(rgb)) == rgb);
    CHECK(decode_pnm(encode_pnm(grey)) == grey);
    CHECK(encode_pnm(grey).rfind("P5", 0) == 0);
    CHECK(encode_pnm(rgb).rfind("P6", 0) == 0);
}

TEST_CASE("pnm decoder handles comments and rejects garbage") {
    std::string text = "P5\n# made by hand\n2 1\n255\n";
    text += char(7);
    text += char(200);
    Image img = decode_pnm(text);
    CHECK(img.width() == 2);
    CHECK(img.at(1, 0) == 200);
    CHECK_THROWS_AS(decode_pnm("P6\n2 2\n255\nabc"), Error);
    CHECK_THROWS_AS(decode_pnm("hello"), Error);
    CHECK_THROWS_AS(decode_pnm("P5\n2 2\n65535\n"), Error);
}

TEST_CASE("png round trip when available") {
    if (!png_supported()) return;
    Image rgb = testutil::random_image(23, 11, 3, 8);
    CHECK(decode_png(encode_png(rgb)) == rgb);
    Image grey = testutil::random_image(5, 4, 1, 9);
    CHECK(decode_png(encode_png(grey)) == grey);
}

}  // TEST_SUITE
