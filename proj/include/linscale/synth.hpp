#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "linscale/config.hpp"
#include "linscale/contour.hpp"
#include "linscale/digits.hpp"
#include "linscale/raster.hpp"

namespace linscale::synth {

enum class Preset { syringe, cylinder };

const char* preset_name(Preset p);
Preset parse_preset(std::string_view name);

/// Scene description. Lengths are in unscaled scene pixels; the scale axis runs
/// along local v (down) and the ticks along local u.
struct ScaleSpec {
    Preset kind = Preset::syringe;
    int canvas_w = 1000;
    int canvas_h = 750;

    double scale_length = 320;  // first to last major
    int n_major = 5;
    int minors_per_major = 4;
    double major_value_step = 1.0;
    bool values_increase_down = true;
    Side label_side = Side::right;

    double major_len = 50;
    double minor_len = 20;
    double tick_thickness = 4;
    double tick_start = -60;  // outer end of every tick (mirrored for left labels)
    double label_gap = 8;
    double font_cell = 4;
    double barrel_u0 = -75, barrel_u1 = 85;
    double barrel_overhang = 60;

    Hsv background{20, 70, 175};
    Hsv barrel{0, 10, 235};
    Hsv ink{0, 0, 35};
    Hsv plunger{175, 110, 240};
    Hsv liquid{100, 50, 240};
    Hsv meniscus{105, 200, 210};

    IndicatorKind indicator = IndicatorKind::plunger;
    double level = 2.2;
    double plunger_height_frac = 0.3;  // of the major spacing
    double plunger_offset = 0.15;
    double meniscus_thickness = 6;
    double meniscus_sag = 8;

    double rotation_deg = 0.0;  // counter-clockwise on screen
    double scale_factor = 1.0;
    double noise_sigma = 0.0;
    bool clutter = false;

    double spacing() const { return scale_length / (n_major - 1); }
    double minor_step() const { return major_value_step / (minors_per_major + 1); }
    double full_scale() const { return major_value_step * (n_major - 1); }
    double value_of_major(int k) const;
    /// Local v of a scale value.
    double v_of_value(double value) const;

    /// Throws Error(input, "SpecInvalid").
    void validate() const;
};

ScaleSpec preset(Preset kind);

/// Read-pipeline configuration matching a preset's colours and indicator.
Config config_for(Preset kind);

struct GroundTruth {
    std::string preset;
    std::uint64_t seed = 0;
    double level = 0.0;
    double rotation_deg = 0.0;
    double scale_factor = 1.0;
    int canvas_w = 0, canvas_h = 0;
    double minor_step = 0.0;
    std::vector<Point2d> major_points;    // tick centres on the canvas
    std::vector<double> major_positions;  // y of each major before rotation
    std::vector<double> label_values;
    Point2d indicator_point;
};

std::string to_json(const GroundTruth& gt);
GroundTruth parse_ground_truth(std::string_view json_text);

struct Scene {
    Image image;
    GroundTruth truth;
};

Scene render_scale(const ScaleSpec& spec, std::uint64_t seed);

enum class SweepAxis { rotation, scale_factor, level };
SweepAxis parse_axis(std::string_view name);

/// `base` with rotation uniform in [-60, 60] degrees, scale factor uniform in
/// [0.6, 1.5], a level drawn from the minor grid, noise sigma 5 and clutter.
ScaleSpec randomized(const ScaleSpec& base, std::uint64_t seed);

std::vector<Scene> sweep(const ScaleSpec& spec, SweepAxis axis, const std::vector<double>& values, std::uint64_t seed);

/// Canvas pixels whose centres fall inside a tick.
BinaryMask render_tick_mask(const ScaleSpec& spec);

/// Dark text on the barrel colour with `pad` pixels of margin; glyph height = 7 * cell.
Image render_label(std::string_view text, double cell, int pad = 6, double noise_sigma = 0.0,
                   std::uint64_t seed = 0);

}  // namespace linscale::synth
