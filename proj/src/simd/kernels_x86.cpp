#include "kernels_impl.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#define LINSCALE_SSE41 __attribute__((target("sse4.1")))
#define LINSCALE_AVX2 __attribute__((target("avx2")))

namespace linscale::simd::detail {

namespace {

// --- shared SSE helpers -------------------------------------------------------

struct Planes16 {
    __m128i c0, c1, c2;
};

// 16 interleaved 3-byte pixels (48 bytes) -> three planes of 16 bytes.
LINSCALE_SSE41 inline Planes16 deinterleave16(const std::uint8_t* src) {
    const __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src));
    const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + 16));
    const __m128i c = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + 32));

    const __m128i a0 = _mm_setr_epi8(0, 3, 6, 9, 12, 15, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    const __m128i b0 = _mm_setr_epi8(-1, -1, -1, -1, -1, -1, 2, 5, 8, 11, 14, -1, -1, -1, -1, -1);
    const __m128i c0 = _mm_setr_epi8(-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 1, 4, 7, 10, 13);

    const __m128i a1 = _mm_setr_epi8(1, 4, 7, 10, 13, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    const __m128i b1 = _mm_setr_epi8(-1, -1, -1, -1, -1, 0, 3, 6, 9, 12, 15, -1, -1, -1, -1, -1);
    const __m128i c1 = _mm_setr_epi8(-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 2, 5, 8, 11, 14);

    const __m128i a2 = _mm_setr_epi8(2, 5, 8, 11, 14, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1);
    const __m128i b2 = _mm_setr_epi8(-1, -1, -1, -1, -1, 1, 4, 7, 10, 13, -1, -1, -1, -1, -1, -1);
    const __m128i c2 = _mm_setr_epi8(-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 0, 3, 6, 9, 12, 15);

    Planes16 p;
    p.c0 = _mm_or_si128(_mm_or_si128(_mm_shuffle_epi8(a, a0), _mm_shuffle_epi8(b, b0)),
                        _mm_shuffle_epi8(c, c0));
    p.c1 = _mm_or_si128(_mm_or_si128(_mm_shuffle_epi8(a, a1), _mm_shuffle_epi8(b, b1)),
                        _mm_shuffle_epi8(c, c1));
    p.c2 = _mm_or_si128(_mm_or_si128(_mm_shuffle_epi8(a, a2), _mm_shuffle_epi8(b, b2)),
                        _mm_shuffle_epi8(c, c2));
    return p;
}

LINSCALE_SSE41 inline __m128i ge_u8(__m128i x, __m128i lo) {
    return _mm_cmpeq_epi8(_mm_max_epu8(x, lo), x);
}

LINSCALE_SSE41 inline __m128i le_u8(__m128i x, __m128i hi) {
    return _mm_cmpeq_epi8(_mm_min_epu8(x, hi), x);
}

// --- SSE4.1 ---------------------------------------------------------------

LINSCALE_SSE41 inline __m128i load8_u16(const std::uint8_t* p) {
    return _mm_cvtepu8_epi16(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

LINSCALE_SSE41 inline __m128i vsum8(const std::uint8_t* a, const std::uint8_t* r, const std::uint8_t* b) {
    return _mm_add_epi16(_mm_add_epi16(load8_u16(a), load8_u16(b)), _mm_slli_epi16(load8_u16(r), 1));
}

LINSCALE_SSE41 void blur3x3_row_sse41(const std::uint8_t* above, const std::uint8_t* row,
                                      const std::uint8_t* below, std::uint8_t* out, int width,
                                      int channels) {
    const int n = width * channels;
    const int c = channels;
    const __m128i eight = _mm_set1_epi16(8);
    int i = c;
    for (; i + 8 + c <= n; i += 8) {
        const __m128i l = vsum8(above + i - c, row + i - c, below + i - c);
        const __m128i m = vsum8(above + i, row + i, below + i);
        const __m128i r = vsum8(above + i + c, row + i + c, below + i + c);
        __m128i acc = _mm_add_epi16(_mm_add_epi16(l, r), _mm_slli_epi16(m, 1));
        acc = _mm_srli_epi16(_mm_add_epi16(acc, eight), 4);
        _mm_storel_epi64(reinterpret_cast<__m128i*>(out + i), _mm_packus_epi16(acc, acc));
    }
    blur3x3_span(above, row, below, out, 0, c < n ? c : n, width, channels);
    if (i < c) i = c;
    blur3x3_span(above, row, below, out, i, n, width, channels);
}

LINSCALE_SSE41 inline __m128i in_range16(const std::uint8_t* src, __m128i lo0, __m128i hi0, __m128i lo1,
                                         __m128i hi1, __m128i lo2, __m128i hi2, bool wraps) {
    const Planes16 p = deinterleave16(src);
    const __m128i hg = ge_u8(p.c0, lo0);
    const __m128i hl = le_u8(p.c0, hi0);
    const __m128i h_ok = wraps ? _mm_or_si128(hg, hl) : _mm_and_si128(hg, hl);
    const __m128i s_ok = _mm_and_si128(ge_u8(p.c1, lo1), le_u8(p.c1, hi1));
    const __m128i v_ok = _mm_and_si128(ge_u8(p.c2, lo2), le_u8(p.c2, hi2));
    return _mm_and_si128(h_ok, _mm_and_si128(s_ok, v_ok));
}

LINSCALE_SSE41 void in_range_sse41(const std::uint8_t* hsv, std::uint8_t* mask, int pixels,
                                   const std::uint8_t lo[3], const std::uint8_t hi[3], bool hue_wraps) {
    const __m128i lo0 = _mm_set1_epi8(static_cast<char>(lo[0]));
    const __m128i hi0 = _mm_set1_epi8(static_cast<char>(hi[0]));
    const __m128i lo1 = _mm_set1_epi8(static_cast<char>(lo[1]));
    const __m128i hi1 = _mm_set1_epi8(static_cast<char>(hi[1]));
    const __m128i lo2 = _mm_set1_epi8(static_cast<char>(lo[2]));
    const __m128i hi2 = _mm_set1_epi8(static_cast<char>(hi[2]));
    int p = 0;
    for (; p + 16 <= pixels; p += 16) {
        const __m128i ok = in_range16(hsv + 3 * p, lo0, hi0, lo1, hi1, lo2, hi2, hue_wraps);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(mask + p), ok);
    }
    in_range_span(hsv, mask, p, pixels, lo, hi, hue_wraps);
}

LINSCALE_SSE41 inline __m128i luma8(__m128i r, __m128i g, __m128i b) {
    __m128i acc = _mm_mullo_epi16(r, _mm_set1_epi16(77));
    acc = _mm_add_epi16(acc, _mm_mullo_epi16(g, _mm_set1_epi16(150)));
    acc = _mm_add_epi16(acc, _mm_mullo_epi16(b, _mm_set1_epi16(29)));
    acc = _mm_add_epi16(acc, _mm_set1_epi16(128));
    return _mm_srli_epi16(acc, 8);
}

LINSCALE_SSE41 void gray_sse41(const std::uint8_t* rgb, std::uint8_t* gray, int pixels) {
    const __m128i zero = _mm_setzero_si128();
    int p = 0;
    for (; p + 16 <= pixels; p += 16) {
        const Planes16 q = deinterleave16(rgb + 3 * p);
        const __m128i lo = luma8(_mm_unpacklo_epi8(q.c0, zero), _mm_unpacklo_epi8(q.c1, zero),
                                 _mm_unpacklo_epi8(q.c2, zero));
        const __m128i hi = luma8(_mm_unpackhi_epi8(q.c0, zero), _mm_unpackhi_epi8(q.c1, zero),
                                 _mm_unpackhi_epi8(q.c2, zero));
        _mm_storeu_si128(reinterpret_cast<__m128i*>(gray + p), _mm_packus_epi16(lo, hi));
    }
    gray_span(rgb, gray, p, pixels);
}

// --- AVX2 ---------------------------------------------------------------------

LINSCALE_AVX2 inline __m256i load16_u16(const std::uint8_t* p) {
    return _mm256_cvtepu8_epi16(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

LINSCALE_AVX2 inline __m256i vsum16(const std::uint8_t* a, const std::uint8_t* r, const std::uint8_t* b) {
    return _mm256_add_epi16(_mm256_add_epi16(load16_u16(a), load16_u16(b)),
                            _mm256_slli_epi16(load16_u16(r), 1));
}

LINSCALE_AVX2 inline __m128i pack16_u8(__m256i v) {
    const __m256i packed = _mm256_packus_epi16(v, v);
    return _mm256_castsi256_si128(_mm256_permute4x64_epi64(packed, 0x08));
}

LINSCALE_AVX2 void blur3x3_row_avx2(const std::uint8_t* above, const std::uint8_t* row,
                                    const std::uint8_t* below, std::uint8_t* out, int width,
                                    int channels) {
    const int n = width * channels;
    const int c = channels;
    const __m256i eight = _mm256_set1_epi16(8);
    int i = c;
    for (; i + 16 + c <= n; i += 16) {
        const __m256i l = vsum16(above + i - c, row + i - c, below + i - c);
        const __m256i m = vsum16(above + i, row + i, below + i);
        const __m256i r = vsum16(above + i + c, row + i + c, below + i + c);
        __m256i acc = _mm256_add_epi16(_mm256_add_epi16(l, r), _mm256_slli_epi16(m, 1));
        acc = _mm256_srli_epi16(_mm256_add_epi16(acc, eight), 4);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(out + i), pack16_u8(acc));
    }
    blur3x3_span(above, row, below, out, 0, c < n ? c : n, width, channels);
    if (i < c) i = c;
    blur3x3_span(above, row, below, out, i, n, width, channels);
}

LINSCALE_AVX2 void gray_avx2(const std::uint8_t* rgb, std::uint8_t* gray, int pixels) {
    const __m256i w_r = _mm256_set1_epi16(77);
    const __m256i w_g = _mm256_set1_epi16(150);
    const __m256i w_b = _mm256_set1_epi16(29);
    const __m256i half = _mm256_set1_epi16(128);
    int p = 0;
    for (; p + 16 <= pixels; p += 16) {
        const Planes16 q = deinterleave16(rgb + 3 * p);
        __m256i acc = _mm256_mullo_epi16(_mm256_cvtepu8_epi16(q.c0), w_r);
        acc = _mm256_add_epi16(acc, _mm256_mullo_epi16(_mm256_cvtepu8_epi16(q.c1), w_g));
        acc = _mm256_add_epi16(acc, _mm256_mullo_epi16(_mm256_cvtepu8_epi16(q.c2), w_b));
        acc = _mm256_srli_epi16(_mm256_add_epi16(acc, half), 8);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(gray + p), pack16_u8(acc));
    }
    gray_span(rgb, gray, p, pixels);
}

LINSCALE_AVX2 inline __m256i ge_u8x32(__m256i x, __m256i lo) {
    return _mm256_cmpeq_epi8(_mm256_max_epu8(x, lo), x);
}

LINSCALE_AVX2 inline __m256i le_u8x32(__m256i x, __m256i hi) {
    return _mm256_cmpeq_epi8(_mm256_min_epu8(x, hi), x);
}

// 32 pixels per step: two deinterleaved halves compared in one 256-bit register.
LINSCALE_AVX2 void in_range_avx2(const std::uint8_t* hsv, std::uint8_t* mask, int pixels,
                                 const std::uint8_t lo[3], const std::uint8_t hi[3], bool hue_wraps) {
    const __m256i lo0 = _mm256_set1_epi8(static_cast<char>(lo[0]));
    const __m256i hi0 = _mm256_set1_epi8(static_cast<char>(hi[0]));
    const __m256i lo1 = _mm256_set1_epi8(static_cast<char>(lo[1]));
    const __m256i hi1 = _mm256_set1_epi8(static_cast<char>(hi[1]));
    const __m256i lo2 = _mm256_set1_epi8(static_cast<char>(lo[2]));
    const __m256i hi2 = _mm256_set1_epi8(static_cast<char>(hi[2]));
    int p = 0;
    for (; p + 32 <= pixels; p += 32) {
        const Planes16 a = deinterleave16(hsv + 3 * p);
        const Planes16 b = deinterleave16(hsv + 3 * p + 48);
        const __m256i h = _mm256_set_m128i(b.c0, a.c0);
        const __m256i s = _mm256_set_m128i(b.c1, a.c1);
        const __m256i v = _mm256_set_m128i(b.c2, a.c2);
        const __m256i hg = ge_u8x32(h, lo0);
        const __m256i hl = le_u8x32(h, hi0);
        const __m256i h_ok = hue_wraps ? _mm256_or_si256(hg, hl) : _mm256_and_si256(hg, hl);
        const __m256i s_ok = _mm256_and_si256(ge_u8x32(s, lo1), le_u8x32(s, hi1));
        const __m256i v_ok = _mm256_and_si256(ge_u8x32(v, lo2), le_u8x32(v, hi2));
        const __m256i ok = _mm256_and_si256(h_ok, _mm256_and_si256(s_ok, v_ok));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(mask + p), ok);
    }
    in_range_span(hsv, mask, p, pixels, lo, hi, hue_wraps);
}

}  // namespace

const Kernels* sse41_kernels() {
    static const Kernels k{blur3x3_row_sse41, in_range_sse41, gray_sse41};
    return &k;
}

const Kernels* avx2_kernels() {
    static const Kernels k{blur3x3_row_avx2, in_range_avx2, gray_avx2};
    return &k;
}

}  // namespace linscale::simd::detail

#else

namespace linscale::simd::detail {
const Kernels* sse41_kernels() { return nullptr; }
const Kernels* avx2_kernels() { return nullptr; }
}  // namespace linscale::simd::detail

#endif
