#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace linscale {

struct Point2d {
    double x = 0.0;
    double y = 0.0;
};

struct PixelPoint {
    int x = 0;
    int y = 0;
    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Intersection of `r` with [0,width) x [0,height); nullopt when empty.
std::optional<Rect> clamp_rect(const Rect& r, int width, int height);

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major interleaved 8-bit image with 1 or 3 channels. Three-channel images
/// are stored in RGB order regardless of the file format they came from.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels, std::uint8_t fill = 0);
    Image(int width, int height, int channels, std::vector<std::uint8_t> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }
    bool empty() const noexcept { return data_.empty(); }
    std::size_t stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }

    std::span<const std::uint8_t> data() const noexcept { return data_; }
    std::span<std::uint8_t> data() noexcept { return data_; }

    const std::uint8_t* row(int y) const noexcept { return data_.data() + y * stride(); }
    std::uint8_t* row(int y) noexcept { return data_.data() + y * stride(); }

    std::uint8_t at(int x, int y, int c = 0) const noexcept { return row(y)[x * channels_ + c]; }
    std::uint8_t& at(int x, int y, int c = 0) noexcept { return row(y)[x * channels_ + c]; }

    Rgb rgb(int x, int y) const noexcept;
    void set_rgb(int x, int y, const Rgb& v) noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Three-channel image whose samples are (H, S, V) with H on the 0..179
/// half-degree scale. Kept as a separate type so RGB and HSV buffers never mix.
struct HsvImage {
    Image pixels;

    int width() const noexcept { return pixels.width(); }
    int height() const noexcept { return pixels.height(); }
    Rgb at(int x, int y) const noexcept { return pixels.rgb(x, y); }
};

/// Degrees, counter-clockwise on screen, normalized to (-180, 180].
struct Angle {
    double degrees = 0.0;

    static Angle normalized(double deg);
    /// Direction-less fold into (-90, 90].
    Angle folded() const;
    double radians() const;
};

// --- colour -------------------------------------------------------------

Rgb hsv_to_rgb_pixel(const Rgb& hsv);
Rgb rgb_to_hsv_pixel(const Rgb& rgb);

HsvImage to_hsv(const Image& img);
Image to_rgb(const HsvImage& hsv);
/// Luma with fixed-point BT.601 weights (77, 150, 29) / 256.
Image to_gray(const Image& img);

// --- geometry -----------------------------------------------------------

/// Bilinear resize so the longest edge equals `target`.
Image resize_longest_edge(const Image& img, int target);
/// Bilinear resample to an explicit size (half-pixel-centre convention).
Image resize_bilinear(const Image& img, int out_w, int out_h);

/// Binomial 3x3 blur (1 2 1; 2 4 2; 1 2 1)/16 with edge replication.
Image gaussian_blur_3x3(const Image& img);
HsvImage gaussian_blur_3x3(const HsvImage& img);

/// Rotation about the image centre onto an enlarged canvas. Positive angles turn
/// the content counter-clockwise on screen. `apply` maps source pixel coordinates
/// into the rotated canvas, `invert` maps back.
class Rotation {
public:
    Rotation(int src_width, int src_height, Angle angle);

    int out_width() const noexcept { return out_w_; }
    int out_height() const noexcept { return out_h_; }
    Angle angle() const noexcept { return angle_; }

    Point2d apply(Point2d p) const noexcept;
    Point2d invert(Point2d p) const noexcept;

private:
    Angle angle_;
    double cos_ = 1.0;
    double sin_ = 0.0;
    double src_cx_ = 0.0, src_cy_ = 0.0;
    double dst_cx_ = 0.0, dst_cy_ = 0.0;
    int out_w_ = 0, out_h_ = 0;
};

/// Median of each channel over the border pixels.
Rgb median_border_color(const Image& img);

/// Rotates with bilinear inverse mapping. Pixels that fall outside the source are
/// painted with `fill`, or with the median border colour when not given.
Image rotate_about_center(const Image& img, Angle angle, std::optional<Rgb> fill = std::nullopt);

/// Copy of the part of `rect` that lies inside the image.
Image crop(const Image& img, const Rect& rect);

/// Bilinear sample with edge clamping; `x`, `y` in pixel-centre coordinates.
double sample_bilinear(const Image& img, double x, double y, int channel);

// --- file formats ---------------------------------------------------------

/// Binary PPM (P6) or PGM (P5), maxval 255.
Image decode_pnm(std::string_view bytes);
std::string encode_pnm(const Image& img);

bool png_supported();
Image decode_png(std::string_view bytes);
std::string encode_png(const Image& img);

/// Reads PPM/PGM, or PNG when built with libpng; format detected from magic bytes.
Image read_image(const std::string& path);
/// Writes PNG for a ".png" extension, PNM otherwise.
void write_image(const std::string& path, const Image& img);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace linscale
