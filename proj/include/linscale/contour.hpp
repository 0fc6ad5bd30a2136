#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "linscale/raster.hpp"

namespace linscale {

/// One byte per pixel, non-zero = foreground.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height) : width_(width), height_(height), bits_(std::size_t(width) * height, 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool at(int x, int y) const noexcept { return bits_[std::size_t(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) noexcept { bits_[std::size_t(y) * width_ + x] = v ? 255 : 0; }
    /// False outside the mask.
    bool test(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_ && at(x, y);
    }
    std::size_t count() const noexcept;

    std::vector<std::uint8_t>& bits() noexcept { return bits_; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    /// 0/255 grey image, handy for PGM debug dumps.
    Image to_image() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct Hsv {
    std::uint8_t h = 0, s = 0, v = 0;
};

/// Closed HSV box. With `hue_wraps` and lo.h > hi.h the hue interval runs
/// through 179 -> 0 (e.g. reds 170..10).
struct ColorRange {
    Hsv lo{0, 0, 0};
    Hsv hi{179, 255, 255};
    bool hue_wraps = false;

    bool contains(Hsv px) const noexcept;
    /// Throws Error(config) when S/V bounds are inverted or H is inverted without wrap.
    void validate() const;
};

struct BBox {
    int x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    int width_extent() const noexcept { return x_max - x_min; }
    int height_extent() const noexcept { return y_max - y_min; }
};

struct Contour {
    std::vector<PixelPoint> points;  // 8-connected boundary walk, clockwise on screen
    int area = 0;                    // component pixel count
    double perimeter = 0.0;          // closed chain length, sqrt(2) per diagonal step
    BBox bbox;

    /// Recomputes `bbox` from `points`.
    void update_bbox();
};

BinaryMask segment_by_range(const HsvImage& img, const ColorRange& range);

/// Outer boundaries of 8-connected components, ordered by (y_min, x_min).
std::vector<Contour> find_contours(const BinaryMask& mask);

/// Horizontal over vertical pixel extent of the bounding box; +infinity for a
/// single-row contour.
double aspect_ratio(const Contour& c);

std::vector<Contour> filter_linear(std::vector<Contour> contours, double threshold = 2.5);

struct Bounds {
    double min = 0.0;
    double max = std::numeric_limits<double>::infinity();

    bool contains(double v) const noexcept { return v >= min && v <= max; }
};

std::vector<Contour> filter_by_bounds(std::vector<Contour> contours, Bounds area, Bounds perimeter = {});

}  // namespace linscale
