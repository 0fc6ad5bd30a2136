#include "linscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "linscale/errors.hpp"
#include "linscale/font.hpp"

namespace linscale::synth {

using nlohmann::json;

const char* preset_name(Preset p) { return p == Preset::syringe ? "syringe" : "cylinder"; }

Preset parse_preset(std::string_view name) {
    if (name == "syringe") return Preset::syringe;
    if (name == "cylinder") return Preset::cylinder;
    throw Error(Stage::input, "SpecInvalid", "unknown preset '" + std::string(name) + "'");
}

double ScaleSpec::value_of_major(int k) const {
    return values_increase_down ? k * major_value_step : (n_major - 1 - k) * major_value_step;
}

double ScaleSpec::v_of_value(double value) const {
    const double d = value / major_value_step * spacing();
    return values_increase_down ? -scale_length / 2 + d : scale_length / 2 - d;
}

void ScaleSpec::validate() const {
    auto need = [](bool ok, const char* what) {
        if (!ok) throw Error(Stage::input, "SpecInvalid", std::string("scale spec: ") + what);
    };
    need(canvas_w >= 16 && canvas_h >= 16, "canvas at least 16x16");
    need(n_major >= 2, "n_major >= 2");
    need(minors_per_major >= 0, "minors_per_major >= 0");
    need(scale_length > 0 && major_value_step > 0, "positive scale length and value step");
    need(level >= -1e-9 && level <= full_scale() + 1e-9, "level within the scale");
    need(scale_factor >= 0.3 && scale_factor <= 3.0, "scale_factor in [0.3, 3]");
    need(noise_sigma >= 0, "noise_sigma >= 0");
    need(major_len > 0 && minor_len > 0 && tick_thickness > 0 && font_cell > 0, "positive tick and font sizes");
    need(plunger_offset >= 0 && plunger_offset <= 0.5, "plunger_offset in [0, 0.5]");
}

ScaleSpec preset(Preset kind) {
    ScaleSpec s;
    s.kind = kind;
    if (kind == Preset::cylinder) {
        s.scale_length = 450;
        s.n_major = 6;
        s.minors_per_major = 9;
        s.major_value_step = 10;
        s.values_increase_down = false;
        s.tick_thickness = 3;
        s.indicator = IndicatorKind::meniscus;
        s.level = 37;
    }
    return s;
}

Config config_for(Preset kind) {
    Config c;
    if (kind == Preset::cylinder) {
        c.indicator = IndicatorKind::meniscus;
        c.indicator_range = {{95, 140, 100}, {115, 255, 255}, false};
        c.indicator_area = {40, 20000};
    }
    return c;
}

// --- rendering ----------------------------------------------------------------------

namespace {

Rgb rgb_of(Hsv h) { return hsv_to_rgb_pixel({h.h, h.s, h.v}); }

struct Clutter {
    bool ellipse = false;
    double cx = 0, cy = 0, rx = 0, ry = 0;
    Rgb color{};

    bool contains(double x, double y) const {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        return ellipse ? dx * dx + dy * dy <= 1.0 : std::fabs(dx) <= 1.0 && std::fabs(dy) <= 1.0;
    }
};

class Layout {
public:
    explicit Layout(const ScaleSpec& s) : s_(s) {
        mirror_ = s.label_side == Side::left ? -1.0 : 1.0;
        const double rad = s.rotation_deg * 3.14159265358979323846 / 180.0;
        cos_ = std::cos(rad);
        sin_ = std::sin(rad);
        if (std::fmod(s.rotation_deg, 90.0) == 0.0) {
            cos_ = std::round(cos_);
            sin_ = std::round(sin_);
        }
        cx_ = s.canvas_w / 2.0;
        cy_ = s.canvas_h / 2.0;
        v_first_ = -s.scale_length / 2;
        minor_spacing_ = s.spacing() / (s.minors_per_major + 1);
        n_ticks_ = (s.n_major - 1) * (s.minors_per_major + 1) + 1;
        level_v_ = s.v_of_value(s.level);
        plunger_h_ = s.plunger_height_frac * s.spacing();
        barrel_c_ = mirror_ * (s.barrel_u0 + s.barrel_u1) / 2;
        barrel_hw_ = (s.barrel_u1 - s.barrel_u0) / 2;

        for (int k = 0; k < s.n_major; ++k) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", s.value_of_major(k));
            labels_.emplace_back(buf);
            const double w = font::text_cells(labels_.back()) * s.font_cell;
            const double inner = s.tick_start + s.major_len + s.label_gap;
            label_x0_.push_back(mirror_ > 0 ? inner : -inner - w);
        }
        colors_ = {rgb_of(s.background), rgb_of(s.barrel), rgb_of(s.ink), rgb_of(s.plunger), rgb_of(s.liquid),
                   rgb_of(s.meniscus)};
    }

    Point2d to_canvas(double u, double v) const {
        const double su = u * s_.scale_factor, sv = v * s_.scale_factor;
        return {cx_ + su * cos_ + sv * sin_, cy_ - su * sin_ + sv * cos_};
    }

    Point2d to_local(double x, double y) const {
        const double dx = x - cx_, dy = y - cy_;
        return {(dx * cos_ - dy * sin_) / s_.scale_factor, (dx * sin_ + dy * cos_) / s_.scale_factor};
    }

    bool in_tick(double u, double v) const {
        const double ul = mirror_ * u;
        const double k = std::round((v - v_first_) / minor_spacing_);
        if (k < 0 || k >= n_ticks_) return false;
        if (std::fabs(v - (v_first_ + k * minor_spacing_)) > s_.tick_thickness / 2) return false;
        const bool major = static_cast<int>(k) % (s_.minors_per_major + 1) == 0;
        const double len = major ? s_.major_len : s_.minor_len;
        return ul >= s_.tick_start && ul <= s_.tick_start + len;
    }

    bool in_label(double u, double v) const {
        const double km = std::round((v - v_first_) / s_.spacing());
        if (km < 0 || km >= s_.n_major) return false;
        const int k = static_cast<int>(km);
        const double cell = s_.font_cell;
        const double y0 = v_first_ + k * s_.spacing() - font::kRows * cell / 2;
        const double x0 = label_x0_[k];
        if (v < y0 || u < x0) return false;
        const int row = static_cast<int>((v - y0) / cell);
        const int col = static_cast<int>((u - x0) / cell);
        if (row >= font::kRows) return false;
        const int ci = col / font::kAdvance, cc = col % font::kAdvance;
        if (ci >= static_cast<int>(labels_[k].size()) || cc >= font::kCols) return false;
        const font::Glyph* g = font::find(labels_[k][ci]);
        return g && g->ink(cc, row);
    }

    bool in_barrel(double u, double v) const {
        const double ul = mirror_ * u;
        return ul >= s_.barrel_u0 && ul <= s_.barrel_u1 && v >= v_first_ - s_.barrel_overhang &&
               v <= -v_first_ + s_.barrel_overhang;
    }

    // Local box that needs anti-aliasing, with `margin` extra local units.
    bool near_scale(double u, double v, double margin) const {
        const double ul = mirror_ * u;
        return ul >= s_.barrel_u0 - margin && ul <= s_.barrel_u1 + margin &&
               v >= v_first_ - s_.barrel_overhang - margin && v <= -v_first_ + s_.barrel_overhang + margin;
    }

    const Rgb& color(double u, double v) const {
        if (in_tick(u, v) || in_label(u, v)) return colors_[2];
        if (!in_barrel(u, v)) return colors_[0];
        if (s_.indicator == IndicatorKind::meniscus) {
            const double t = (u - barrel_c_) / barrel_hw_;
            const double c = level_v_ - s_.meniscus_sag * t * t;
            if (v >= c - s_.meniscus_thickness && v <= c) return colors_[5];
            if (v > c) return colors_[4];
        } else {
            const double top = level_v_ - s_.plunger_offset * plunger_h_;
            if (v >= top && v <= top + plunger_h_) return colors_[3];
        }
        return colors_[1];
    }

    Point2d indicator_local() const { return {barrel_c_, level_v_}; }
    double major_v(int k) const { return v_first_ + k * s_.spacing(); }
    double major_centre_u() const { return mirror_ * (s_.tick_start + s_.major_len / 2); }

    // Canvas bbox of the barrel.
    BBox canvas_box() const {
        const double u0 = mirror_ > 0 ? s_.barrel_u0 : -s_.barrel_u1;
        const double u1 = mirror_ > 0 ? s_.barrel_u1 : -s_.barrel_u0;
        const double v0 = v_first_ - s_.barrel_overhang, v1 = -v_first_ + s_.barrel_overhang;
        BBox b{1 << 30, -(1 << 30), 1 << 30, -(1 << 30)};
        for (double u : {u0, u1}) {
            for (double v : {v0, v1}) {
                const Point2d p = to_canvas(u, v);
                b.x_min = std::min(b.x_min, int(std::floor(p.x)));
                b.x_max = std::max(b.x_max, int(std::ceil(p.x)));
                b.y_min = std::min(b.y_min, int(std::floor(p.y)));
                b.y_max = std::max(b.y_max, int(std::ceil(p.y)));
            }
        }
        return b;
    }

private:
    const ScaleSpec& s_;
    double mirror_ = 1, cos_ = 1, sin_ = 0, cx_ = 0, cy_ = 0;
    double v_first_ = 0, minor_spacing_ = 1, level_v_ = 0, plunger_h_ = 0, barrel_c_ = 0, barrel_hw_ = 1;
    int n_ticks_ = 0;
    std::vector<std::string> labels_;
    std::vector<double> label_x0_;
    std::array<Rgb, 6> colors_{};
};

std::vector<Clutter> place_clutter(const ScaleSpec& s, const Layout& lay, std::mt19937_64& rng) {
    std::vector<Clutter> out;
    const BBox keep = lay.canvas_box();
    const double margin = 120;
    std::uniform_real_distribution<double> ux(0, s.canvas_w), uy(0, s.canvas_h), coin(0, 1);
    const Rgb dark = rgb_of({0, 0, 40}), green = rgb_of({60, 150, 150});
    for (int attempt = 0; attempt < 200 && out.size() < 3; ++attempt) {
        Clutter c;
        c.ellipse = coin(rng) < 0.5;
        c.color = coin(rng) < 0.5 ? dark : green;
        std::uniform_real_distribution<double> ur(c.ellipse ? 40 : 35, 65);
        c.rx = ur(rng);
        c.ry = ur(rng);
        c.cx = ux(rng);
        c.cy = uy(rng);
        const bool inside = c.cx - c.rx >= 0 && c.cx + c.rx < s.canvas_w && c.cy - c.ry >= 0 && c.cy + c.ry < s.canvas_h;
        const bool clear = c.cx + c.rx < keep.x_min - margin || c.cx - c.rx > keep.x_max + margin ||
                           c.cy + c.ry < keep.y_min - margin || c.cy - c.ry > keep.y_max + margin;
        if (inside && clear) out.push_back(c);
    }
    return out;
}

}  // namespace

Scene render_scale(const ScaleSpec& spec, std::uint64_t seed) {
    spec.validate();
    const Layout lay(spec);
    std::mt19937_64 rng(seed);
    const auto clutter = spec.clutter ? place_clutter(spec, lay, rng) : std::vector<Clutter>{};
    const Rgb bg = rgb_of(spec.background);

    Image img(spec.canvas_w, spec.canvas_h, 3);
    const double margin = 2.0 / spec.scale_factor;
    constexpr int kSub = 3;
    for (int y = 0; y < spec.canvas_h; ++y) {
        for (int x = 0; x < spec.canvas_w; ++x) {
            const Point2d c = lay.to_local(x, y);
            Rgb px = bg;
            if (lay.near_scale(c.x, c.y, margin)) {
                int acc[3] = {0, 0, 0};
                for (int sy = 0; sy < kSub; ++sy) {
                    for (int sx = 0; sx < kSub; ++sx) {
                        const Point2d l = lay.to_local(x + (sx - 1) / 3.0, y + (sy - 1) / 3.0);
                        const Rgb& s = lay.color(l.x, l.y);
                        for (int ch = 0; ch < 3; ++ch) acc[ch] += s[ch];
                    }
                }
                for (int ch = 0; ch < 3; ++ch) px[ch] = static_cast<std::uint8_t>((acc[ch] + kSub * kSub / 2) / (kSub * kSub));
            } else {
                for (const auto& cl : clutter)
                    if (cl.contains(x, y)) px = cl.color;
            }
            img.set_rgb(x, y, px);
        }
    }

    if (spec.noise_sigma > 0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::clamp(std::lround(v + noise(rng)), 0L, 255L));
    }

    GroundTruth gt;
    gt.preset = preset_name(spec.kind);
    gt.seed = seed;
    gt.level = spec.level;
    gt.rotation_deg = spec.rotation_deg;
    gt.scale_factor = spec.scale_factor;
    gt.canvas_w = spec.canvas_w;
    gt.canvas_h = spec.canvas_h;
    gt.minor_step = spec.minor_step();
    for (int k = 0; k < spec.n_major; ++k) {
        gt.major_points.push_back(lay.to_canvas(lay.major_centre_u(), lay.major_v(k)));
        gt.major_positions.push_back(spec.canvas_h / 2.0 + spec.scale_factor * lay.major_v(k));
        gt.label_values.push_back(spec.value_of_major(k));
    }
    const Point2d ind = lay.indicator_local();
    gt.indicator_point = lay.to_canvas(ind.x, ind.y);
    return {std::move(img), std::move(gt)};
}

BinaryMask render_tick_mask(const ScaleSpec& spec) {
    spec.validate();
    const Layout lay(spec);
    BinaryMask m(spec.canvas_w, spec.canvas_h);
    for (int y = 0; y < spec.canvas_h; ++y) {
        for (int x = 0; x < spec.canvas_w; ++x) {
            const Point2d l = lay.to_local(x, y);
            if (lay.in_tick(l.x, l.y)) m.set(x, y, true);
        }
    }
    return m;
}

SweepAxis parse_axis(std::string_view name) {
    if (name == "rotation") return SweepAxis::rotation;
    if (name == "scale_factor" || name == "scale") return SweepAxis::scale_factor;
    if (name == "level") return SweepAxis::level;
    throw Error(Stage::input, "SpecInvalid", "unknown sweep axis '" + std::string(name) + "'");
}

ScaleSpec randomized(const ScaleSpec& base, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> rot(-60.0, 60.0), sf(0.6, 1.5);
    const int steps = static_cast<int>(std::lround(base.full_scale() / base.minor_step()));
    std::uniform_int_distribution<int> lvl(0, steps);
    ScaleSpec s = base;
    s.rotation_deg = rot(rng);
    s.scale_factor = sf(rng);
    s.level = lvl(rng) * base.minor_step();
    s.noise_sigma = 5.0;
    s.clutter = true;
    return s;
}

std::vector<Scene> sweep(const ScaleSpec& spec, SweepAxis axis, const std::vector<double>& values, std::uint64_t seed) {
    std::vector<Scene> out;
    for (double v : values) {
        ScaleSpec s = spec;
        switch (axis) {
            case SweepAxis::rotation: s.rotation_deg = v; break;
            case SweepAxis::scale_factor: s.scale_factor = v; break;
            case SweepAxis::level: s.level = v; break;
        }
        out.push_back(render_scale(s, seed));
    }
    return out;
}

Image render_label(std::string_view text, double cell, int pad, double noise_sigma, std::uint64_t seed) {
    const int w = static_cast<int>(std::ceil(font::text_cells(text) * cell)) + 2 * pad;
    const int h = static_cast<int>(std::ceil(font::kRows * cell)) + 2 * pad;
    const Rgb paper = rgb_of({0, 10, 235}), ink = rgb_of({0, 0, 35});
    Image img(std::max(w, 1), std::max(h, 1), 3);
    constexpr int kSub = 4;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            int hits = 0;
            for (int sy = 0; sy < kSub; ++sy) {
                for (int sx = 0; sx < kSub; ++sx) {
                    const double u = x + (sx + 0.5) / kSub - pad, v = y + (sy + 0.5) / kSub - pad;
                    if (u < 0 || v < 0) continue;
                    const int col = static_cast<int>(u / cell), row = static_cast<int>(v / cell);
                    if (row >= font::kRows) continue;
                    const std::size_t ci = static_cast<std::size_t>(col / font::kAdvance);
                    const int cc = col % font::kAdvance;
                    if (ci >= text.size() || cc >= font::kCols) continue;
                    const font::Glyph* g = font::find(text[ci]);
                    hits += g && g->ink(cc, row);
                }
            }
            Rgb px;
            for (int ch = 0; ch < 3; ++ch)
                px[ch] = static_cast<std::uint8_t>((ink[ch] * hits + paper[ch] * (kSub * kSub - hits) + 8) / (kSub * kSub));
            img.set_rgb(x, y, px);
        }
    }
    if (noise_sigma > 0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (auto& v : img.data()) v = static_cast<std::uint8_t>(std::clamp(std::lround(v + noise(rng)), 0L, 255L));
    }
    return img;
}

// --- manifests ----------------------------------------------------------------------------

std::string to_json(const GroundTruth& gt) {
    json pts = json::array();
    for (const auto& p : gt.major_points) pts.push_back({p.x, p.y});
    json j = {
        {"preset", gt.preset},
        {"seed", gt.seed},
        {"level", gt.level},
        {"rotation_deg", gt.rotation_deg},
        {"scale_factor", gt.scale_factor},
        {"canvas", {gt.canvas_w, gt.canvas_h}},
        {"minor_step", gt.minor_step},
        {"major_points", pts},
        {"major_positions", gt.major_positions},
        {"label_values", gt.label_values},
        {"indicator_point", {gt.indicator_point.x, gt.indicator_point.y}},
    };
    return j.dump(2) + "\n";
}

GroundTruth parse_ground_truth(std::string_view json_text) {
    GroundTruth gt;
    try {
        const json j = json::parse(json_text);
        gt.preset = j.at("preset").get<std::string>();
        gt.seed = j.at("seed").get<std::uint64_t>();
        gt.level = j.at("level").get<double>();
        gt.rotation_deg = j.at("rotation_deg").get<double>();
        gt.scale_factor = j.at("scale_factor").get<double>();
        gt.canvas_w = j.at("canvas").at(0).get<int>();
        gt.canvas_h = j.at("canvas").at(1).get<int>();
        gt.minor_step = j.at("minor_step").get<double>();
        for (const auto& p : j.at("major_points")) gt.major_points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        gt.major_positions = j.at("major_positions").get<std::vector<double>>();
        gt.label_values = j.at("label_values").get<std::vector<double>>();
        gt.indicator_point = {j.at("indicator_point").at(0).get<double>(), j.at("indicator_point").at(1).get<double>()};
    } catch (const json::exception& e) {
        throw Error(Stage::io, "BadManifest", std::string("ground-truth manifest: ") + e.what());
    }
    return gt;
}

}  // namespace linscale::synth
