#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linscale/calib.hpp"
#include "linscale/config.hpp"
#include "linscale/contour.hpp"
#include "linscale/digits.hpp"
#include "linscale/marker.hpp"
#include "linscale/raster.hpp"

namespace linscale {

// --- ROI ---------------------------------------------------------------------

struct Detection {
    std::string cls;
    double x = 0, y = 0, w = 0, h = 0;
    double confidence = 0.0;
};

/// Detector output for one image: {"detections": [{"class", "x", "y", "w", "h", "confidence"}]}.
struct Sidecar {
    std::vector<Detection> detections;
};

Sidecar parse_sidecar(std::string_view json_text);
Sidecar load_sidecar(const std::string& path);
std::string to_json(const Sidecar& s);

enum class RoiSource { sidecar, heuristic };

struct Roi {
    Rect rect;
    RoiSource source = RoiSource::heuristic;
};

/// First "linear_scale" box of the sidecar (coordinates multiplied by `sidecar_scale`),
/// else the densest cluster of marker-coloured blobs, dilated by cfg.roi_dilate per side.
Roi locate_roi(const Image& img, const Sidecar* sidecar, const Config& cfg, double sidecar_scale = 1.0);

// --- indicator -----------------------------------------------------------------

/// Largest contour of `range` whose area lies within `area`.
Contour extract_indicator(const HsvImage& hsv, const ColorRange& range, Bounds area);

/// Meniscus: lowest contour row. Plunger: top row plus `plunger_offset` of the bbox height.
double measurement_point(const Contour& indicator, IndicatorKind kind, double plunger_offset = 0.15);

// --- pipeline ------------------------------------------------------------------------

struct OcrOutcome {
    double position = 0.0;
    Rect roi;
    OcrResult result;
};

struct Diagnostics {
    double resize_factor = 1.0;
    Roi roi;
    int contours_total = 0;
    int contours_in_bounds = 0;
    Angle coarse_angle;
    Angle fine_angle;
    Angle total_angle;
    bool flipped = false;
    int flip_score_upright = 0;
    int flip_score_flipped = 0;
    PixelPoint crop_offset;
    int crop_width = 0, crop_height = 0;
    int linear_contours = 0;
    std::vector<int> group_sizes;
    std::vector<int> group_lengths;
    double spacing = 0.0;
    Side label_side = Side::right;
    std::vector<OcrOutcome> ocr;
    std::size_t slope_pairs = 0;
    std::size_t consensus_support = 0;
    double grain = 1.0;
    int indicator_area = 0;
};

struct Reading {
    double value = 0.0;
    LinearRelation relation;
    double indicator_y = 0.0;             // scale-crop coordinates
    std::vector<MarkerReading> markers;   // corrected and completed
    std::vector<MarkerReading> raw;       // as read
    bool low_confidence = false;
    Diagnostics diagnostics;
};

using DebugSink = std::function<void(const std::string& name, const Image& img)>;

struct ReadOptions {
    const Sidecar* sidecar = nullptr;
    DebugSink debug;
};

/// Full pipeline from a photograph to a calibrated reading. Failures throw
/// Error naming the stage.
Reading read_scale(const Image& img, const Config& cfg, const ReadOptions& options = {});

/// OCR of one label ROI with the configured engine.
OcrResult read_label(const Image& roi, const Config& cfg);

}  // namespace linscale
