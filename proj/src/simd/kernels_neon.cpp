#include "kernels_impl.hpp"

#if defined(__ARM_NEON) || defined(__ARM_NEON__)

#include <arm_neon.h>

namespace linscale::simd::detail {

namespace {

inline uint16x8_t vsum8(const std::uint8_t* a, const std::uint8_t* r, const std::uint8_t* b) {
    const uint16x8_t ab = vaddl_u8(vld1_u8(a), vld1_u8(b));
    return vaddq_u16(ab, vshll_n_u8(vld1_u8(r), 1));
}

void blur3x3_row_neon(const std::uint8_t* above, const std::uint8_t* row, const std::uint8_t* below,
                      std::uint8_t* out, int width, int channels) {
    const int n = width * channels;
    const int c = channels;
    int i = c;
    for (; i + 8 + c <= n; i += 8) {
        const uint16x8_t l = vsum8(above + i - c, row + i - c, below + i - c);
        const uint16x8_t m = vsum8(above + i, row + i, below + i);
        const uint16x8_t r = vsum8(above + i + c, row + i + c, below + i + c);
        const uint16x8_t acc = vaddq_u16(vaddq_u16(l, r), vshlq_n_u16(m, 1));
        // (acc + 8) >> 4 with rounding
        vst1_u8(out + i, vrshrn_n_u16(acc, 4));
    }
    blur3x3_span(above, row, below, out, 0, c < n ? c : n, width, channels);
    if (i < c) i = c;
    blur3x3_span(above, row, below, out, i, n, width, channels);
}

void in_range_neon(const std::uint8_t* hsv, std::uint8_t* mask, int pixels, const std::uint8_t lo[3],
                   const std::uint8_t hi[3], bool hue_wraps) {
    const uint8x16_t lo0 = vdupq_n_u8(lo[0]), hi0 = vdupq_n_u8(hi[0]);
    const uint8x16_t lo1 = vdupq_n_u8(lo[1]), hi1 = vdupq_n_u8(hi[1]);
    const uint8x16_t lo2 = vdupq_n_u8(lo[2]), hi2 = vdupq_n_u8(hi[2]);
    int p = 0;
    for (; p + 16 <= pixels; p += 16) {
        const uint8x16x3_t px = vld3q_u8(hsv + 3 * p);
        const uint8x16_t hg = vcgeq_u8(px.val[0], lo0);
        const uint8x16_t hl = vcleq_u8(px.val[0], hi0);
        const uint8x16_t h_ok = hue_wraps ? vorrq_u8(hg, hl) : vandq_u8(hg, hl);
        const uint8x16_t s_ok = vandq_u8(vcgeq_u8(px.val[1], lo1), vcleq_u8(px.val[1], hi1));
        const uint8x16_t v_ok = vandq_u8(vcgeq_u8(px.val[2], lo2), vcleq_u8(px.val[2], hi2));
        vst1q_u8(mask + p, vandq_u8(h_ok, vandq_u8(s_ok, v_ok)));
    }
    in_range_span(hsv, mask, p, pixels, lo, hi, hue_wraps);
}

void gray_neon(const std::uint8_t* rgb, std::uint8_t* gray, int pixels) {
    const uint8x8_t w_r = vdup_n_u8(77), w_g = vdup_n_u8(150), w_b = vdup_n_u8(29);
    int p = 0;
    for (; p + 8 <= pixels; p += 8) {
        const uint8x8x3_t px = vld3_u8(rgb + 3 * p);
        uint16x8_t acc = vmull_u8(px.val[0], w_r);
        acc = vmlal_u8(acc, px.val[1], w_g);
        acc = vmlal_u8(acc, px.val[2], w_b);
        vst1_u8(gray + p, vrshrn_n_u16(acc, 8));
    }
    gray_span(rgb, gray, p, pixels);
}

}  // namespace

const Kernels* neon_kernels() {
    static const Kernels k{blur3x3_row_neon, in_range_neon, gray_neon};
    return &k;
}

}  // namespace linscale::simd::detail

#else

namespace linscale::simd::detail {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace linscale::simd::detail

#endif
