#pragma once

#include <cstdint>
#include <vector>

// Pixel kernels with a scalar reference implementation and vectorized variants
// chosen at runtime. Every variant must be bit-identical to the scalar one.

namespace linscale::simd {

enum class Backend { scalar, sse41, avx2, neon };

const char* backend_name(Backend b);

struct Kernels {
    /// One output row of the binomial 3x3 blur. `above`/`below` are the already
    /// edge-replicated neighbour rows; horizontal replication happens inside.
    void (*blur3x3_row)(const std::uint8_t* above, const std::uint8_t* row,
                        const std::uint8_t* below, std::uint8_t* out, int width, int channels);

    /// Interleaved HSV -> 0/255 mask. When `hue_wraps` the hue test is
    /// h >= lo[0] || h <= hi[0], otherwise lo[0] <= h <= hi[0].
    void (*in_range_hsv)(const std::uint8_t* hsv, std::uint8_t* mask, int pixels,
                         const std::uint8_t lo[3], const std::uint8_t hi[3], bool hue_wraps);

    /// Interleaved RGB -> luma, (77 r + 150 g + 29 b + 128) >> 8.
    void (*rgb_to_gray)(const std::uint8_t* rgb, std::uint8_t* gray, int pixels);
};

/// Backends the running CPU supports, scalar first.
std::vector<Backend> available_backends();

/// Kernel table for a specific backend (must be available).
const Kernels& kernels_for(Backend b);

/// The active table: the best available backend unless overridden by
/// force_backend() or the LINSCALE_SIMD environment variable
/// (scalar | sse41 | avx2 | neon).
const Kernels& kernels();
Backend active_backend();
void force_backend(Backend b);

}  // namespace linscale::simd
