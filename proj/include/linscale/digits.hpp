#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linscale/contour.hpp"
#include "linscale/marker.hpp"
#include "linscale/raster.hpp"

namespace linscale {

enum class Side { left, right };

const char* side_name(Side s);

struct DigitRoi {
    Rect rect;  // w == 0 when nothing of it lies inside the image
    Side side = Side::right;
};

struct OcrResult {
    std::string raw_text;
    std::optional<double> value;
    double confidence = 0.0;
    std::string error;  // adapter failures, empty otherwise
};

struct RoiShape {
    double width_frac = 1.5;   // of the marker length
    double height_frac = 0.6;  // of the major spacing
};

DigitRoi digit_roi(const MarkerPosition& marker, double spacing, Side side, int img_width, int img_height,
                   RoiShape shape = {});

/// Side whose label ROIs carry more `ink` pixels across all markers; ties go right.
Side choose_label_side(const HsvImage& img, const ColorRange& ink, const std::vector<MarkerPosition>& markers,
                       double spacing, RoiShape shape = {});

/// Strips whitespace and punctuation at both ends, then accepts digits with at
/// most one interior decimal point.
std::optional<double> parse_ocr_text(std::string_view s);

// --- built-in template recognizer -------------------------------------------

struct GlyphTemplate {
    char ch;
    std::vector<float> cells;  // kWidth x kHeight, row-major, 1 = ink
};

struct GlyphSet {
    static constexpr int kWidth = 15;
    static constexpr int kHeight = 21;

    std::vector<GlyphTemplate> templates;

    /// Templates for the embedded bitmap font.
    static const GlyphSet& builtin();
};

struct RecognizerParams {
    double accept = 0.8;      // minimum correlation per character
    int min_contrast = 48;    // Otsu class means closer than this read as blank
    int min_component = 4;    // smaller ink specks are ignored
    // Components touching the window edge (tick stubs, barrel outline) are ignored too.
};

/// Otsu binarization, left-to-right components, correlation against the glyph set.
OcrResult recognize_builtin(const Image& roi, const GlyphSet& glyphs = GlyphSet::builtin(),
                            const RecognizerParams& params = {});

/// Otsu threshold of an 8-bit grey image: the largest level assigned to the dark class.
int otsu_threshold(const Image& gray);

/// Pearson correlation of two equally sized sample vectors; 0 when either is constant.
double normalized_correlation(const std::vector<float>& a, const std::vector<float>& b);

/// Area-averaging resample of a float grid.
std::vector<float> resample_area(const std::vector<float>& src, int sw, int sh, int dw, int dh);

// --- external OCR adapter -----------------------------------------------------

struct AdapterOptions {
    std::vector<std::string> command;  // argv prefix; the image path is appended
    std::chrono::milliseconds timeout{5000};
    bool png = false;  // hand the image over as PNG instead of PPM
};

/// Runs the adapter on `roi`. Throws Error(ocr, AdapterSpawnFailure | AdapterTimeout);
/// a non-zero exit yields a result without value and a recorded error.
OcrResult run_external_ocr(const Image& roi, const AdapterOptions& options);

}  // namespace linscale
