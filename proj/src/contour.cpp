#include "linscale/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linscale/errors.hpp"
#include "linscale/simd.hpp"

namespace linscale {

namespace {

// Clockwise on screen (y down), starting east.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

}  // namespace

std::size_t BinaryMask::count() const noexcept {
    return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; }));
}

Image BinaryMask::to_image() const {
    std::vector<std::uint8_t> px(bits_.size());
    std::transform(bits_.begin(), bits_.end(), px.begin(), [](std::uint8_t b) { return b ? 255 : 0; });
    return Image(width_, height_, 1, std::move(px));
}

bool ColorRange::contains(Hsv px) const noexcept {
    const bool h_ok = (hue_wraps && lo.h > hi.h) ? (px.h >= lo.h || px.h <= hi.h)
                                                 : (px.h >= lo.h && px.h <= hi.h);
    return h_ok && px.s >= lo.s && px.s <= hi.s && px.v >= lo.v && px.v <= hi.v;
}

void ColorRange::validate() const {
    if (lo.s > hi.s || lo.v > hi.v)
        throw Error(Stage::config, "InvalidRange", "colour range has lo > hi for S or V");
    if (lo.h > hi.h && !hue_wraps)
        throw Error(Stage::config, "InvalidRange", "colour range has lo.h > hi.h without hue wrap");
    if (lo.h > 179 || hi.h > 179)
        throw Error(Stage::config, "InvalidRange", "hue bounds must lie in 0..179");
}

void Contour::update_bbox() {
    if (points.empty()) {
        bbox = {};
        return;
    }
    bbox = {points[0].x, points[0].x, points[0].y, points[0].y};
    for (const auto& p : points) {
        bbox.x_min = std::min(bbox.x_min, p.x);
        bbox.x_max = std::max(bbox.x_max, p.x);
        bbox.y_min = std::min(bbox.y_min, p.y);
        bbox.y_max = std::max(bbox.y_max, p.y);
    }
}

BinaryMask segment_by_range(const HsvImage& img, const ColorRange& range) {
    BinaryMask mask(img.width(), img.height());
    const std::uint8_t lo[3] = {range.lo.h, range.lo.s, range.lo.v};
    const std::uint8_t hi[3] = {range.hi.h, range.hi.s, range.hi.v};
    const bool wraps = range.hue_wraps && range.lo.h > range.hi.h;
    simd::kernels().in_range_hsv(img.pixels.data().data(), mask.bits().data(),
                                 img.width() * img.height(), lo, hi, wraps);
    return mask;
}

namespace {

// Moore-neighbour border following from the raster-first pixel of a component.
// Stops when the walk returns to the start about to repeat its first move.
Contour trace(const BinaryMask& mask, PixelPoint start) {
    Contour c;
    c.points.push_back(start);

    auto next_from = [&](PixelPoint p, int search) -> int {
        for (int k = 0; k < 8; ++k) {
            const int d = (search + k) & 7;
            if (mask.test(p.x + kDx[d], p.y + kDy[d])) return d;
        }
        return -1;
    };

    // West, north-west, north and north-east of the start are background.
    const int first = next_from(start, 7);
    if (first < 0) {
        c.perimeter = 1.0;
        return c;
    }

    PixelPoint p = start;
    int d = first;
    double perim = 0.0;
    for (;;) {
        p = {p.x + kDx[d], p.y + kDy[d]};
        perim += (d & 1) ? std::numbers::sqrt2 : 1.0;
        const int search = (d & 1) ? (d + 6) & 7 : (d + 7) & 7;
        const int nd = next_from(p, search);
        if (p == start && nd == first) break;
        c.points.push_back(p);
        d = nd;
    }
    c.perimeter = perim;
    return c;
}

}  // namespace

std::vector<Contour> find_contours(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<Contour> out;
    std::vector<std::uint8_t> seen(std::size_t(w) * h, 0);
    std::vector<PixelPoint> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = std::size_t(y) * w + x;
            if (!mask.at(x, y) || seen[idx]) continue;

            int area = 0;
            seen[idx] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const PixelPoint q = stack.back();
                stack.pop_back();
                ++area;
                for (int d = 0; d < 8; ++d) {
                    const int nx = q.x + kDx[d];
                    const int ny = q.y + kDy[d];
                    if (!mask.test(nx, ny)) continue;
                    const std::size_t ni = std::size_t(ny) * w + nx;
                    if (seen[ni]) continue;
                    seen[ni] = 1;
                    stack.push_back({nx, ny});
                }
            }

            Contour c = trace(mask, {x, y});
            c.area = area;
            c.update_bbox();
            out.push_back(std::move(c));
        }
    }

    std::stable_sort(out.begin(), out.end(), [](const Contour& a, const Contour& b) {
        if (a.bbox.y_min != b.bbox.y_min) return a.bbox.y_min < b.bbox.y_min;
        return a.bbox.x_min < b.bbox.x_min;
    });
    return out;
}

double aspect_ratio(const Contour& c) {
    const int dy = c.bbox.height_extent();
    if (dy == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(c.bbox.width_extent()) / dy;
}

std::vector<Contour> filter_linear(std::vector<Contour> contours, double threshold) {
    std::erase_if(contours, [&](const Contour& c) { return !(aspect_ratio(c) > threshold); });
    return contours;
}

std::vector<Contour> filter_by_bounds(std::vector<Contour> contours, Bounds area, Bounds perimeter) {
    std::erase_if(contours, [&](const Contour& c) {
        return !area.contains(c.area) || !perimeter.contains(c.perimeter);
    });
    return contours;
}

}  // namespace linscale
