#pragma once

#include <random>
#include <vector>

#include "linscale/contour.hpp"
#include "linscale/raster.hpp"

namespace testutil {

inline linscale::Image random_image(int w, int h, int channels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 255);
    linscale::Image img(w, h, channels);
    for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
    return img;
}

inline linscale::BinaryMask random_mask(int w, int h, double density, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution d(density);
    linscale::BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.set(x, y, d(rng));
    return m;
}

inline linscale::BinaryMask mask_from(const std::vector<const char*>& rows) {
    linscale::BinaryMask m(static_cast<int>(std::string(rows[0]).size()), static_cast<int>(rows.size()));
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) m.set(x, y, rows[y][x] == '#');
    return m;
}

/// Component labels by 8-connected flood fill; -1 for background.
inline std::vector<int> label_components(const linscale::BinaryMask& m, int& count) {
    std::vector<int> lab(std::size_t(m.width()) * m.height(), -1);
    count = 0;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) {
            if (!m.at(x, y) || lab[std::size_t(y) * m.width() + x] >= 0) continue;
            stack.push_back({x, y});
            lab[std::size_t(y) * m.width() + x] = count;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (!m.test(nx, ny)) continue;
                        auto& l = lab[std::size_t(ny) * m.width() + nx];
                        if (l >= 0) continue;
                        l = count;
                        stack.push_back({nx, ny});
                    }
            }
            ++count;
        }
    return lab;
}

}  // namespace testutil
