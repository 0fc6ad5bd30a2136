#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "linscale/contour.hpp"
#include "linscale/raster.hpp"
#include "linscale/simd.hpp"

using namespace linscale;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    std::vector<std::uint8_t> v(n);
    for (auto& b : v) b = static_cast<std::uint8_t>(d(rng));
    return v;
}

struct BackendGuard {
    simd::Backend saved = simd::active_backend();
    ~BackendGuard() { simd::force_backend(saved); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar is always available and listed first") {
    auto b = simd::available_backends();
    REQUIRE_FALSE(b.empty());
    CHECK(b.front() == simd::Backend::scalar);
    MESSAGE("active backend: " << simd::backend_name(simd::active_backend()));
}

TEST_CASE("blur rows match the scalar kernel") {
    const auto& ref = simd::kernels_for(simd::Backend::scalar);
    for (auto backend : simd::available_backends()) {
        const auto& k = simd::kernels_for(backend);
        CAPTURE(simd::backend_name(backend));
        for (int channels : {1, 3}) {
            for (int width = 1; width <= 97; ++width) {
                const std::size_t n = std::size_t(width) * channels;
                // One spare byte in front so the rows start unaligned.
                auto a = random_bytes(n + 1, width * 7 + channels);
                auto r = random_bytes(n + 1, width * 11 + channels);
                auto b = random_bytes(n + 1, width * 13 + channels);
                std::vector<std::uint8_t> want(n), got(n);
                ref.blur3x3_row(a.data() + 1, r.data() + 1, b.data() + 1, want.data(), width, channels);
                k.blur3x3_row(a.data() + 1, r.data() + 1, b.data() + 1, got.data(), width, channels);
                CAPTURE(width);
                CAPTURE(channels);
                CHECK(got == want);
            }
        }
    }
}

TEST_CASE("blur rows on extreme values") {
    const auto& ref = simd::kernels_for(simd::Backend::scalar);
    for (auto backend : simd::available_backends()) {
        const auto& k = simd::kernels_for(backend);
        for (std::uint8_t fill : {std::uint8_t(0), std::uint8_t(255), std::uint8_t(128)}) {
            std::vector<std::uint8_t> row(3 * 70, fill), want(row.size()), got(row.size());
            row[0] = 255 - fill;
            ref.blur3x3_row(row.data(), row.data(), row.data(), want.data(), 70, 3);
            k.blur3x3_row(row.data(), row.data(), row.data(), got.data(), 70, 3);
            CHECK(got == want);
        }
    }
}

TEST_CASE("in_range masks match the scalar kernel") {
    const auto& ref = simd::kernels_for(simd::Backend::scalar);
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> d(0, 255), hue(0, 179);
    for (auto backend : simd::available_backends()) {
        const auto& k = simd::kernels_for(backend);
        CAPTURE(simd::backend_name(backend));
        for (int trial = 0; trial < 200; ++trial) {
            const int pixels = 1 + trial % 83;
            auto hsv = random_bytes(std::size_t(pixels) * 3 + 1, trial);
            for (int p = 0; p < pixels; ++p) hsv[1 + p * 3] = static_cast<std::uint8_t>(hue(rng));
            std::uint8_t lo[3] = {std::uint8_t(hue(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))};
            std::uint8_t hi[3] = {std::uint8_t(hue(rng)), std::uint8_t(d(rng)), std::uint8_t(d(rng))};
            if (lo[1] > hi[1]) std::swap(lo[1], hi[1]);
            if (lo[2] > hi[2]) std::swap(lo[2], hi[2]);
            const bool wraps = trial % 2 == 1;
            if (!wraps && lo[0] > hi[0]) std::swap(lo[0], hi[0]);
            std::vector<std::uint8_t> want(pixels), got(pixels);
            ref.in_range_hsv(hsv.data() + 1, want.data(), pixels, lo, hi, wraps);
            k.in_range_hsv(hsv.data() + 1, got.data(), pixels, lo, hi, wraps);
            CAPTURE(trial);
            CHECK(got == want);
        }
    }
}

TEST_CASE("scalar in_range follows the stated predicate") {
    const auto& ref = simd::kernels_for(simd::Backend::scalar);
    const std::uint8_t lo[3] = {170, 50, 60};
    const std::uint8_t hi[3] = {10, 200, 250};
    const std::uint8_t px[] = {175, 100, 100, 5, 100, 100, 90, 100, 100, 0, 49, 100, 179, 200, 250};
    std::uint8_t mask[5];
    ref.in_range_hsv(px, mask, 5, lo, hi, true);
    CHECK(mask[0] == 255);
    CHECK(mask[1] == 255);
    CHECK(mask[2] == 0);
    CHECK(mask[3] == 0);
    CHECK(mask[4] == 255);
}

TEST_CASE("grey conversion matches the scalar kernel") {
    const auto& ref = simd::kernels_for(simd::Backend::scalar);
    for (auto backend : simd::available_backends()) {
        const auto& k = simd::kernels_for(backend);
        for (int pixels = 1; pixels <= 130; ++pixels) {
            auto rgb = random_bytes(std::size_t(pixels) * 3 + 1, pixels);
            std::vector<std::uint8_t> want(pixels), got(pixels);
            ref.rgb_to_gray(rgb.data() + 1, want.data(), pixels);
            k.rgb_to_gray(rgb.data() + 1, got.data(), pixels);
            CAPTURE(pixels);
            CHECK(got == want);
        }
    }
}

TEST_CASE("image level results agree across backends") {
    BackendGuard guard;
    Image img = testutil::random_image(123, 45, 3, 77);
    ColorRange range{{160, 30, 40}, {20, 220, 230}, true};
    simd::force_backend(simd::Backend::scalar);
    const Image blur_ref = gaussian_blur_3x3(img);
    const Image grey_ref = to_gray(img);
    const auto mask_ref = segment_by_range(HsvImage{img}, range).bits();
    for (auto backend : simd::available_backends()) {
        simd::force_backend(backend);
        CAPTURE(simd::backend_name(backend));
        CHECK(gaussian_blur_3x3(img) == blur_ref);
        CHECK(to_gray(img) == grey_ref);
        CHECK(segment_by_range(HsvImage{img}, range).bits() == mask_ref);
    }
}

}  // TEST_SUITE
