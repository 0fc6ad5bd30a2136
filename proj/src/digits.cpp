#include "linscale/digits.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cctype>
#include <cmath>

#include "linscale/font.hpp"

namespace linscale {

const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

DigitRoi digit_roi(const MarkerPosition& marker, double spacing, Side side, int img_width, int img_height,
                   RoiShape shape) {
    const int w = std::max(1, static_cast<int>(std::lround(shape.width_frac * marker.length)));
    const int h = std::max(1, static_cast<int>(std::lround(shape.height_frac * spacing)));
    const int y = static_cast<int>(std::lround(marker.y - (h - 1) / 2.0));
    const int x = side == Side::right ? marker.x_max + 1 : marker.x_min - w;
    DigitRoi roi{{0, 0, 0, 0}, side};
    if (auto r = clamp_rect({x, y, w, h}, img_width, img_height)) roi.rect = *r;
    return roi;
}

Side choose_label_side(const HsvImage& img, const ColorRange& ink, const std::vector<MarkerPosition>& markers,
                       double spacing, RoiShape shape) {
    auto density = [&](Side side) {
        long ink_px = 0, total = 0;
        for (const auto& m : markers) {
            const Rect r = digit_roi(m, spacing, side, img.width(), img.height(), shape).rect;
            for (int y = r.y; y < r.y + r.h; ++y) {
                for (int x = r.x; x < r.x + r.w; ++x) {
                    const Rgb p = img.at(x, y);
                    ink_px += ink.contains({p[0], p[1], p[2]});
                    ++total;
                }
            }
        }
        return total ? double(ink_px) / double(total) : 0.0;
    };
    return density(Side::left) > density(Side::right) ? Side::left : Side::right;
}

std::optional<double> parse_ocr_text(std::string_view s) {
    auto trim = [](unsigned char c) { return std::isspace(c) || (std::ispunct(c) && c != '.'); };
    while (!s.empty() && trim(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && trim(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    int dots = 0;
    for (char c : s) {
        if (c == '.') {
            ++dots;
        } else if (!std::isdigit(static_cast<unsigned char>(c))) {
            return std::nullopt;
        }
    }
    if (dots > 1) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// --- recognizer ------------------------------------------------------------------

std::vector<float> resample_area(const std::vector<float>& src, int sw, int sh, int dw, int dh) {
    std::vector<float> out(std::size_t(dw) * dh, 0.0f);
    const double fx = double(sw) / dw;
    const double fy = double(sh) / dh;
    for (int oy = 0; oy < dh; ++oy) {
        const double y0 = oy * fy, y1 = (oy + 1) * fy;
        for (int ox = 0; ox < dw; ++ox) {
            const double x0 = ox * fx, x1 = (ox + 1) * fx;
            double acc = 0.0;
            for (int sy = int(y0); sy < sh && sy < y1; ++sy) {
                const double wy = std::min<double>(sy + 1, y1) - std::max<double>(sy, y0);
                if (wy <= 0) continue;
                for (int sx = int(x0); sx < sw && sx < x1; ++sx) {
                    const double wx = std::min<double>(sx + 1, x1) - std::max<double>(sx, x0);
                    if (wx <= 0) continue;
                    acc += wx * wy * src[std::size_t(sy) * sw + sx];
                }
            }
            out[std::size_t(oy) * dw + ox] = static_cast<float>(acc / (fx * fy));
        }
    }
    return out;
}

double normalized_correlation(const std::vector<float>& a, const std::vector<float>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n == 0) return 0.0;
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 1e-12 || sbb <= 1e-12) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

const GlyphSet& GlyphSet::builtin() {
    static const GlyphSet set = [] {
        GlyphSet gs;
        for (const auto& g : font::glyphs()) {
            const int c0 = g.first_col(), c1 = g.last_col();
            const int w = c1 - c0 + 1;
            std::vector<float> bits(std::size_t(w) * font::kRows);
            for (int r = 0; r < font::kRows; ++r)
                for (int c = c0; c <= c1; ++c) bits[std::size_t(r) * w + (c - c0)] = g.ink(c, r) ? 1.0f : 0.0f;
            gs.templates.push_back({g.ch, resample_area(bits, w, font::kRows, kWidth, kHeight)});
        }
        return gs;
    }();
    return set;
}

int otsu_threshold(const Image& gray) {
    std::array<double, 256> hist{};
    for (auto v : gray.data()) hist[v] += 1.0;
    const double total = static_cast<double>(gray.data().size());
    double sum_all = 0;
    for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

    double w0 = 0, sum0 = 0, best = -1.0;
    int best_t = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += t * hist[t];
        const double w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {
            best = between;
            best_t = t;
        }
    }
    return best_t;
}

OcrResult recognize_builtin(const Image& roi, const GlyphSet& glyphs, const RecognizerParams& params) {
    OcrResult res;
    if (roi.empty() || glyphs.templates.empty()) return res;
    const Image gray = to_gray(roi);
    const int t = otsu_threshold(gray);

    double n0 = 0, s0 = 0, n1 = 0, s1 = 0;
    for (auto v : gray.data()) {
        if (v <= t) {
            n0 += 1;
            s0 += v;
        } else {
            n1 += 1;
            s1 += v;
        }
    }
    if (n0 == 0 || n1 == 0 || s1 / n1 - s0 / n0 < params.min_contrast) return res;

    BinaryMask fg(gray.width(), gray.height());
    for (int y = 0; y < gray.height(); ++y)
        for (int x = 0; x < gray.width(); ++x) fg.set(x, y, gray.at(x, y) <= t);

    std::vector<BBox> boxes;
    const int xe = gray.width() - 1, ye = gray.height() - 1;
    for (const auto& c : find_contours(fg)) {
        const BBox& b = c.bbox;
        const bool on_border = b.x_min == 0 || b.y_min == 0 || b.x_max == xe || b.y_max == ye;
        if (c.area >= params.min_component && !on_border) boxes.push_back(b);
    }
    if (boxes.empty()) return res;

    std::sort(boxes.begin(), boxes.end(), [](const BBox& a, const BBox& b) { return a.x_min < b.x_min; });
    std::vector<BBox> chars;
    for (const auto& b : boxes) {
        if (!chars.empty()) {
            BBox& p = chars.back();
            const int overlap = std::min(p.x_max, b.x_max) - std::max(p.x_min, b.x_min) + 1;
            const int narrow = std::min(p.width_extent(), b.width_extent()) + 1;
            if (overlap * 2 >= narrow) {
                p.x_min = std::min(p.x_min, b.x_min);
                p.x_max = std::max(p.x_max, b.x_max);
                p.y_min = std::min(p.y_min, b.y_min);
                p.y_max = std::max(p.y_max, b.y_max);
                continue;
            }
        }
        chars.push_back(b);
    }

    int ly0 = chars.front().y_min, ly1 = chars.front().y_max;
    for (const auto& b : chars) {
        ly0 = std::min(ly0, b.y_min);
        ly1 = std::max(ly1, b.y_max);
    }

    const double dark = s0 / n0, light = s1 / n1;
    const auto ink = [&](std::uint8_t g) {
        return static_cast<float>(std::clamp((light - g) / (light - dark), 0.0, 1.0));
    };

    bool all_ok = true;
    double conf = 1.0;
    for (const auto& b : chars) {
        char best_ch = '?';
        double best = -1.0;
        // Edge pixels inked by a fraction land on either side of the threshold, so
        // each window side may move by one pixel.
        for (int shift = 0; shift < 81; ++shift) {
            const int x0 = b.x_min + shift % 3 - 1, x1 = b.x_max + shift / 3 % 3 - 1;
            const int y0 = ly0 + shift / 9 % 3 - 1, y1 = ly1 + shift / 27 - 1;
            if (x0 < 0 || y0 < 0 || x1 > xe || y1 > ye || x1 - x0 < 1 || y1 - y0 < 1) continue;
            const int w = x1 - x0 + 1, h = y1 - y0 + 1;
            std::vector<float> win(std::size_t(w) * h);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) win[std::size_t(y) * w + x] = ink(gray.at(x0 + x, y0 + y));
            const auto norm = resample_area(win, w, h, GlyphSet::kWidth, GlyphSet::kHeight);
            for (const auto& tpl : glyphs.templates) {
                const double s = normalized_correlation(norm, tpl.cells);
                if (s > best) {
                    best = s;
                    best_ch = tpl.ch;
                }
            }
        }
        if (best >= params.accept) {
            res.raw_text += best_ch;
            conf = std::min(conf, best);
        } else {
            res.raw_text += '?';
            all_ok = false;
        }
    }
    if (all_ok) {
        res.value = parse_ocr_text(res.raw_text);
        res.confidence = res.value ? conf : 0.0;
    }
    return res;
}

}  // namespace linscale
