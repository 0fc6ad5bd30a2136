#pragma once

#include "linscale/simd.hpp"

namespace linscale::simd::detail {

const Kernels& scalar_kernels();
// Return nullptr when the variant is not compiled for this target.
const Kernels* sse41_kernels();
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Scalar tails shared by the vector variants.
void blur3x3_span(const std::uint8_t* above, const std::uint8_t* row, const std::uint8_t* below,
                  std::uint8_t* out, int begin, int end, int width, int channels);
void in_range_span(const std::uint8_t* hsv, std::uint8_t* mask, int begin, int end,
                   const std::uint8_t lo[3], const std::uint8_t hi[3], bool hue_wraps);
void gray_span(const std::uint8_t* rgb, std::uint8_t* gray, int begin, int end);

}  // namespace linscale::simd::detail
