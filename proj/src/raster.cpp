#include "linscale/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linscale/errors.hpp"
#include "linscale/simd.hpp"

namespace linscale {

namespace {

inline std::uint8_t clamp_u8(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

// Exact sine/cosine for multiples of 90 degrees so quarter turns are pure permutations.
void exact_sincos(double degrees, double& s, double& c) {
    const double q = degrees / 90.0;
    if (q == std::round(q)) {
        const int k = ((static_cast<int>(std::round(q)) % 4) + 4) % 4;
        constexpr double cs[4] = {1, 0, -1, 0};
        constexpr double sn[4] = {0, 1, 0, -1};
        c = cs[k];
        s = sn[k];
        return;
    }
    const double r = degrees * std::numbers::pi / 180.0;
    s = std::sin(r);
    c = std::cos(r);
}

}  // namespace

std::optional<Rect> clamp_rect(const Rect& r, int width, int height) {
    const int x0 = std::max(r.x, 0);
    const int y0 = std::max(r.y, 0);
    const int x1 = std::min(r.x + r.w, width);
    const int y1 = std::min(r.y + r.h, height);
    if (x1 <= x0 || y1 <= y0) return std::nullopt;
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

// --- Image ---------------------------------------------------------------

Image::Image(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
        throw Error(Stage::input, "DegenerateImage", "image needs width, height >= 1 and 1 or 3 channels");
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (width < 1 || height < 1 || (channels != 1 && channels != 3)) {
        throw Error(Stage::input, "DegenerateImage", "image needs width, height >= 1 and 1 or 3 channels");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
        throw Error(Stage::input, "DegenerateImage", "pixel buffer size does not match dimensions");
    }
}

Rgb Image::rgb(int x, int y) const noexcept {
    const std::uint8_t* p = row(y) + x * channels_;
    if (channels_ == 1) return {p[0], p[0], p[0]};
    return {p[0], p[1], p[2]};
}

void Image::set_rgb(int x, int y, const Rgb& v) noexcept {
    std::uint8_t* p = row(y) + x * channels_;
    if (channels_ == 1) {
        p[0] = v[0];
        return;
    }
    p[0] = v[0];
    p[1] = v[1];
    p[2] = v[2];
}

// --- Angle ---------------------------------------------------------------

Angle Angle::normalized(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return Angle{d};
}

Angle Angle::folded() const {
    double d = std::fmod(degrees, 180.0);
    if (d <= -90.0) d += 180.0;
    if (d > 90.0) d -= 180.0;
    return Angle{d};
}

double Angle::radians() const { return degrees * std::numbers::pi / 180.0; }

// --- colour --------------------------------------------------------------

Rgb rgb_to_hsv_pixel(const Rgb& px) {
    const int r = px[0], g = px[1], b = px[2];
    const int v = std::max({r, g, b});
    const int mn = std::min({r, g, b});
    const int d = v - mn;
    const int s = v == 0 ? 0 : static_cast<int>(std::floor(255.0 * d / v + 0.5));
    double h = 0.0;
    if (d != 0) {
        if (v == r) {
            h = 60.0 * (g - b) / d;
        } else if (v == g) {
            h = 120.0 + 60.0 * (b - r) / d;
        } else {
            h = 240.0 + 60.0 * (r - g) / d;
        }
        if (h < 0) h += 360.0;
    }
    int hh = static_cast<int>(std::floor(h / 2.0 + 0.5));
    if (hh >= 180) hh -= 180;
    return {static_cast<std::uint8_t>(hh), static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(v)};
}

Rgb hsv_to_rgb_pixel(const Rgb& hsv) {
    const double h = hsv[0] * 2.0;
    const double s = hsv[1] / 255.0;
    const double v = hsv[2];
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    const double m = v - c;
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hp) % 6) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    return {clamp_u8(r + m), clamp_u8(g + m), clamp_u8(b + m)};
}

HsvImage to_hsv(const Image& img) {
    if (img.channels() != 3) {
        throw Error(Stage::input, "WrongChannelCount", "HSV conversion needs a 3-channel image");
    }
    Image out(img.width(), img.height(), 3);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const Rgb hsv = rgb_to_hsv_pixel({src[i], src[i + 1], src[i + 2]});
        dst[i] = hsv[0];
        dst[i + 1] = hsv[1];
        dst[i + 2] = hsv[2];
    }
    return HsvImage{std::move(out)};
}

Image to_rgb(const HsvImage& hsv) {
    Image out(hsv.width(), hsv.height(), 3);
    const auto src = hsv.pixels.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); i += 3) {
        const Rgb rgb = hsv_to_rgb_pixel({src[i], src[i + 1], src[i + 2]});
        dst[i] = rgb[0];
        dst[i + 1] = rgb[1];
        dst[i + 2] = rgb[2];
    }
    return out;
}

Image to_gray(const Image& img) {
    if (img.channels() == 1) return img;
    Image out(img.width(), img.height(), 1);
    simd::kernels().rgb_to_gray(img.data().data(), out.data().data(), img.width() * img.height());
    return out;
}

// --- resize / blur ----------------------------------------------------------

double sample_bilinear(const Image& img, double x, double y, int channel) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, img.width() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = img.at(x0, y0, channel) * (1 - fx) + img.at(x1, y0, channel) * fx;
    const double bot = img.at(x0, y1, channel) * (1 - fx) + img.at(x1, y1, channel) * fx;
    return top * (1 - fy) + bot * fy;
}

Image resize_longest_edge(const Image& img, int target) {
    if (target < 16) throw Error(Stage::input, "InvalidTarget", "resize target must be >= 16");
    if (img.width() < 2 || img.height() < 2) {
        throw Error(Stage::input, "DegenerateImage", "resize needs an image of at least 2x2");
    }
    const int longest = std::max(img.width(), img.height());
    const double k = static_cast<double>(target) / longest;
    int out_w = target, out_h = target;
    if (img.width() >= img.height()) {
        out_h = std::max(1, static_cast<int>(std::lround(img.height() * k)));
    } else {
        out_w = std::max(1, static_cast<int>(std::lround(img.width() * k)));
    }
    if (out_w == img.width() && out_h == img.height()) return img;
    return resize_bilinear(img, out_w, out_h);
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    // Half-pixel-centre convention: src = (dst + 0.5) * scale - 0.5.
    const double sx = static_cast<double>(img.width()) / out_w;
    const double sy = static_cast<double>(img.height()) / out_h;
    Image out(out_w, out_h, img.channels());
    for (int y = 0; y < out_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            for (int c = 0; c < img.channels(); ++c) {
                out.at(x, y, c) = clamp_u8(sample_bilinear(img, src_x, src_y, c));
            }
        }
    }
    return out;
}

Image gaussian_blur_3x3(const Image& img) {
    Image out(img.width(), img.height(), img.channels());
    const auto& k = simd::kernels();
    const int h = img.height();
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* above = img.row(std::max(y - 1, 0));
        const std::uint8_t* below = img.row(std::min(y + 1, h - 1));
        k.blur3x3_row(above, img.row(y), below, out.row(y), img.width(), img.channels());
    }
    return out;
}

HsvImage gaussian_blur_3x3(const HsvImage& img) { return HsvImage{gaussian_blur_3x3(img.pixels)}; }

// --- rotation ----------------------------------------------------------------

Rotation::Rotation(int src_width, int src_height, Angle angle) : angle_(angle) {
    exact_sincos(angle.degrees, sin_, cos_);
    const double ac = std::fabs(cos_);
    const double as = std::fabs(sin_);
    out_w_ = std::max(1, static_cast<int>(std::ceil(src_width * ac + src_height * as - 1e-9)));
    out_h_ = std::max(1, static_cast<int>(std::ceil(src_width * as + src_height * ac - 1e-9)));
    src_cx_ = (src_width - 1) / 2.0;
    src_cy_ = (src_height - 1) / 2.0;
    dst_cx_ = (out_w_ - 1) / 2.0;
    dst_cy_ = (out_h_ - 1) / 2.0;
}

Point2d Rotation::apply(Point2d p) const noexcept {
    const double dx = p.x - src_cx_;
    const double dy = p.y - src_cy_;
    return {dst_cx_ + dx * cos_ + dy * sin_, dst_cy_ - dx * sin_ + dy * cos_};
}

Point2d Rotation::invert(Point2d p) const noexcept {
    const double dx = p.x - dst_cx_;
    const double dy = p.y - dst_cy_;
    return {src_cx_ + dx * cos_ - dy * sin_, src_cy_ + dx * sin_ + dy * cos_};
}

Rgb median_border_color(const Image& img) {
    std::array<std::vector<std::uint8_t>, 3> ch;
    auto push = [&](int x, int y) {
        const Rgb v = img.rgb(x, y);
        for (int c = 0; c < 3; ++c) ch[c].push_back(v[c]);
    };
    for (int x = 0; x < img.width(); ++x) {
        push(x, 0);
        if (img.height() > 1) push(x, img.height() - 1);
    }
    for (int y = 1; y + 1 < img.height(); ++y) {
        push(0, y);
        if (img.width() > 1) push(img.width() - 1, y);
    }
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
        auto& v = ch[c];
        auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        out[c] = *mid;
    }
    return out;
}

Image rotate_about_center(const Image& img, Angle angle, std::optional<Rgb> fill) {
    const Rotation rot(img.width(), img.height(), angle);
    const Rgb fill_color = fill ? *fill : median_border_color(img);
    const int channels = img.channels();
    Image out(rot.out_width(), rot.out_height(), channels);
    const double max_x = img.width() - 1;
    const double max_y = img.height() - 1;
    for (int y = 0; y < out.height(); ++y) {
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < out.width(); ++x) {
            Point2d s = rot.invert({static_cast<double>(x), static_cast<double>(y)});
            // Snap sub-epsilon drift so exact permutations stay exact.
            const double rx = std::round(s.x), ry = std::round(s.y);
            if (std::fabs(s.x - rx) < 1e-9) s.x = rx;
            if (std::fabs(s.y - ry) < 1e-9) s.y = ry;
            std::uint8_t* px = dst + x * channels;
            if (s.x < -0.5 || s.y < -0.5 || s.x > max_x + 0.5 || s.y > max_y + 0.5) {
                for (int c = 0; c < channels; ++c) px[c] = fill_color[c];
                continue;
            }
            for (int c = 0; c < channels; ++c) px[c] = clamp_u8(sample_bilinear(img, s.x, s.y, c));
        }
    }
    return out;
}

Image crop(const Image& img, const Rect& rect) {
    const auto r = clamp_rect(rect, img.width(), img.height());
    if (!r) throw Error(Stage::input, "EmptyIntersection", "crop rectangle does not intersect the image");
    Image out(r->w, r->h, img.channels());
    const std::size_t bytes = static_cast<std::size_t>(r->w) * img.channels();
    for (int y = 0; y < r->h; ++y) {
        const std::uint8_t* src = img.row(r->y + y) + static_cast<std::size_t>(r->x) * img.channels();
        std::copy(src, src + bytes, out.row(y));
    }
    return out;
}

}  // namespace linscale
