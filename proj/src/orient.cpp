#include "linscale/orient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "linscale/errors.hpp"

namespace linscale {

PcaAxes pca_axes(const std::vector<Point2d>& points) {
    if (points.empty()) throw Error(Stage::orientation, "DegeneratePointSet", "no points for PCA");
    const double n = static_cast<double>(points.size());
    double mx = 0, my = 0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto& p : points) {
        const double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    sxx /= n;
    syy /= n;
    sxy /= n;
    if (sxx + syy <= 0.0) throw Error(Stage::orientation, "DegeneratePointSet", "all PCA points coincide");

    const double tr = sxx + syy;
    const double diff = sxx - syy;
    const double disc = std::sqrt(diff * diff / 4.0 + sxy * sxy);
    PcaAxes out;
    out.centroid = {mx, my};
    out.lambda1 = tr / 2.0 + disc;
    out.lambda2 = std::max(0.0, tr / 2.0 - disc);

    const double scale = std::max(std::fabs(sxx), std::fabs(syy));
    double deg = 0.0;
    if (disc > 1e-12 * scale) deg = 0.5 * std::atan2(2.0 * sxy, diff) * 180.0 / std::numbers::pi;
    out.major_angle = Angle{deg}.folded();
    out.minor_angle = Angle{deg + 90.0}.folded();
    return out;
}

PcaAxes pca_axes(const std::vector<Contour>& contours) {
    std::vector<Point2d> pts;
    for (const auto& c : contours)
        for (const auto& p : c.points) pts.push_back({double(p.x), double(p.y)});
    return pca_axes(pts);
}

Angle upright_rotation(Angle major) { return Angle{major.degrees + 90.0}.folded(); }

std::vector<Contour> rotate_contours(const std::vector<Contour>& contours, const Rotation& rot) {
    std::vector<Contour> out;
    out.reserve(contours.size());
    for (const auto& c : contours) {
        Contour r;
        r.area = c.area;
        r.perimeter = c.perimeter;
        r.points.reserve(c.points.size());
        for (const auto& p : c.points) {
            const Point2d q = rot.apply({double(p.x), double(p.y)});
            r.points.push_back({int(std::lround(q.x)), int(std::lround(q.y))});
        }
        r.update_bbox();
        out.push_back(std::move(r));
    }
    return out;
}

Reoriented reorient(const Image& img, const std::vector<Contour>& orienting) {
    if (orienting.empty()) throw Error(Stage::orientation, "DegeneratePointSet", "no contours to orient");
    const PcaAxes axes = pca_axes(orienting);
    const Angle applied = upright_rotation(axes.major_angle);
    const Rotation rot(img.width(), img.height(), applied);
    return {rotate_about_center(img, applied), rotate_contours(orienting, rot), applied};
}

Rect scale_rect(const std::vector<Contour>& linear, double pad_frac) {
    int x0 = linear.front().bbox.x_min, x1 = linear.front().bbox.x_max;
    int y0 = linear.front().bbox.y_min, y1 = linear.front().bbox.y_max;
    for (const auto& c : linear) {
        x0 = std::min(x0, c.bbox.x_min);
        x1 = std::max(x1, c.bbox.x_max);
        y0 = std::min(y0, c.bbox.y_min);
        y1 = std::max(y1, c.bbox.y_max);
    }
    const int w = x1 - x0 + 1;
    const int h = y1 - y0 + 1;
    const int px = static_cast<int>(std::lround(pad_frac * w));
    const int py = static_cast<int>(std::lround(pad_frac * h));
    return {x0 - px, y0 - py, w + 2 * px, h + 2 * py};
}

ScaleCrop crop_to_scale(const Image& img, const std::vector<Contour>& linear, double pad_frac) {
    if (linear.empty()) throw Error(Stage::orientation, "NoLinearContours", "no linear contours to crop to");
    const Rect r = scale_rect(linear, pad_frac);
    const auto clamped = clamp_rect(r, img.width(), img.height());
    if (!clamped) throw Error(Stage::orientation, "EmptyIntersection", "scale lies outside the image");
    return {crop(img, *clamped), {clamped->x, clamped->y}};
}

FlipChoice resolve_flip(const Image& upright, const std::function<int(const Image&)>& read_score) {
    Image turned = rotate_about_center(upright, Angle{180.0});
    FlipChoice out;
    out.score_upright = read_score(upright);
    out.score_flipped = read_score(turned);
    out.flipped = out.score_flipped > out.score_upright;
    out.image = out.flipped ? std::move(turned) : upright;
    return out;
}

}  // namespace linscale
