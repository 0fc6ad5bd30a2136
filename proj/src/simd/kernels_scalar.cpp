#include "kernels_impl.hpp"

namespace linscale::simd::detail {

namespace {

inline int vsum(const std::uint8_t* a, const std::uint8_t* r, const std::uint8_t* b, int i) {
    return a[i] + 2 * r[i] + b[i];
}

void blur3x3_row_scalar(const std::uint8_t* above, const std::uint8_t* row, const std::uint8_t* below,
                        std::uint8_t* out, int width, int channels) {
    blur3x3_span(above, row, below, out, 0, width * channels, width, channels);
}

void in_range_scalar(const std::uint8_t* hsv, std::uint8_t* mask, int pixels, const std::uint8_t lo[3],
                     const std::uint8_t hi[3], bool hue_wraps) {
    in_range_span(hsv, mask, 0, pixels, lo, hi, hue_wraps);
}

void gray_scalar(const std::uint8_t* rgb, std::uint8_t* gray, int pixels) {
    gray_span(rgb, gray, 0, pixels);
}

}  // namespace

// Byte indices [begin, end) of the output row.
void blur3x3_span(const std::uint8_t* above, const std::uint8_t* row, const std::uint8_t* below,
                  std::uint8_t* out, int begin, int end, int width, int channels) {
    const int n = width * channels;
    for (int i = begin; i < end; ++i) {
        const int left = i - channels >= 0 ? i - channels : i;
        const int right = i + channels < n ? i + channels : i;
        const int acc = vsum(above, row, below, left) + 2 * vsum(above, row, below, i) +
                        vsum(above, row, below, right);
        out[i] = static_cast<std::uint8_t>((acc + 8) >> 4);
    }
}

void in_range_span(const std::uint8_t* hsv, std::uint8_t* mask, int begin, int end,
                   const std::uint8_t lo[3], const std::uint8_t hi[3], bool hue_wraps) {
    for (int p = begin; p < end; ++p) {
        const std::uint8_t h = hsv[3 * p], s = hsv[3 * p + 1], v = hsv[3 * p + 2];
        const bool h_ok = hue_wraps ? (h >= lo[0] || h <= hi[0]) : (h >= lo[0] && h <= hi[0]);
        const bool ok = h_ok && s >= lo[1] && s <= hi[1] && v >= lo[2] && v <= hi[2];
        mask[p] = ok ? 255 : 0;
    }
}

void gray_span(const std::uint8_t* rgb, std::uint8_t* gray, int begin, int end) {
    for (int p = begin; p < end; ++p) {
        const int acc = 77 * rgb[3 * p] + 150 * rgb[3 * p + 1] + 29 * rgb[3 * p + 2] + 128;
        gray[p] = static_cast<std::uint8_t>(acc >> 8);
    }
}

const Kernels& scalar_kernels() {
    static const Kernels k{blur3x3_row_scalar, in_range_scalar, gray_scalar};
    return k;
}

}  // namespace linscale::simd::detail
