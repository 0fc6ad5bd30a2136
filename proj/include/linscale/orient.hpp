#pragma once

#include <functional>
#include <vector>

#include "linscale/contour.hpp"
#include "linscale/raster.hpp"

namespace linscale {

/// Principal axes of a 2-D point set. Angles are measured in pixel coordinates
/// (atan2(dy, dx) with y pointing down) and folded into (-90, 90].
struct PcaAxes {
    Point2d centroid;
    Angle major_angle;
    Angle minor_angle;
    double lambda1 = 0.0;  // >= lambda2
    double lambda2 = 0.0;
};

PcaAxes pca_axes(const std::vector<Point2d>& points);
PcaAxes pca_axes(const std::vector<Contour>& contours);

/// Rotation that turns a major axis at `major` (pixel-coordinate angle) into the
/// vertical, folded into (-90, 90]. Pass to rotate_about_center.
Angle upright_rotation(Angle major);

/// Maps every contour point through `rot`, rounding to the nearest pixel, and
/// refreshes the bounding boxes. Area and perimeter are carried over.
std::vector<Contour> rotate_contours(const std::vector<Contour>& contours, const Rotation& rot);

struct Reoriented {
    Image image;
    std::vector<Contour> contours;
    Angle applied;
};

/// One PCA pass: rotates the image and the pooled contours so the scale axis is vertical.
Reoriented reorient(const Image& img, const std::vector<Contour>& orienting);

struct ScaleCrop {
    Image image;
    PixelPoint offset;  // top-left of the crop in the input image
};

ScaleCrop crop_to_scale(const Image& img, const std::vector<Contour>& linear, double pad_frac = 0.10);

/// Bounding rectangle used by crop_to_scale, before clamping.
Rect scale_rect(const std::vector<Contour>& linear, double pad_frac);

struct FlipChoice {
    Image image;
    bool flipped = false;
    int score_upright = 0;
    int score_flipped = 0;
};

/// Keeps whichever of `upright` and its half-turn scores higher; ties keep `upright`.
FlipChoice resolve_flip(const Image& upright, const std::function<int(const Image&)>& read_score);

}  // namespace linscale
