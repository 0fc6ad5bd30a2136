#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "linscale/contour.hpp"
#include "linscale/digits.hpp"

namespace linscale {

enum class IndicatorKind { meniscus, plunger };
enum class OcrEngine { builtin, external };

const char* indicator_name(IndicatorKind k);

/// Every tunable of the read pipeline. Text form is one `key = value` per line,
/// `#` starts a comment; see configs/*.conf for the documented key list.
struct Config {
    int resize_target = 1000;
    double roi_dilate = 0.20;
    int roi_cell = 24;

    ColorRange marker_range{{0, 0, 0}, {179, 100, 145}, false};
    Bounds marker_area{8, 4000};
    Bounds marker_perimeter{6, 600};
    double aspect_threshold = 2.5;
    double group_jump = 0.15;
    double merge_px = 2.0;
    int min_majors = 2;

    double pad_frac = 0.10;
    bool blur = true;

    RoiShape label_roi{};
    OcrEngine ocr_engine = OcrEngine::builtin;
    std::vector<std::string> ocr_command;
    int ocr_timeout_ms = 5000;
    bool ocr_png = false;
    double ocr_accept = 0.8;

    double slope_tolerance = 0.03;

    IndicatorKind indicator = IndicatorKind::plunger;
    double plunger_offset = 0.15;
    ColorRange indicator_range{{165, 70, 120}, {8, 255, 255}, true};
    Bounds indicator_area{93, 20000};

    /// Throws Error(config) on out-of-range values.
    void validate() const;
};

/// Sets one key from its text value. Throws Error(config, "UnknownKey" | "BadValue").
void set_config_value(Config& cfg, std::string_view key, std::string_view value);

/// Parses a whole file body on top of `base`.
Config parse_config(std::string_view text, Config base = {});
Config load_config(const std::string& path, Config base = {});

/// Applies a `key=value` override.
void apply_override(Config& cfg, std::string_view assignment);

/// Canonical text form; parse_config(to_text(c)) == c.
std::string to_text(const Config& cfg);

std::vector<std::string> config_keys();

}  // namespace linscale
