#include "linscale/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>

#include "json.hpp"
#include "linscale/errors.hpp"
#include "linscale/orient.hpp"

namespace linscale {

using nlohmann::json;

// --- sidecar -------------------------------------------------------------------

Sidecar parse_sidecar(std::string_view json_text) {
    Sidecar out;
    try {
        const json doc = json::parse(json_text);
        for (const auto& d : doc.at("detections")) {
            Detection det;
            det.cls = d.at("class").get<std::string>();
            det.x = d.at("x").get<double>();
            det.y = d.at("y").get<double>();
            det.w = d.at("w").get<double>();
            det.h = d.at("h").get<double>();
            det.confidence = d.value("confidence", 1.0);
            if (det.w <= 0 || det.h <= 0 || det.confidence < 0 || det.confidence > 1)
                throw Error(Stage::detection, "BadSidecar", "detection box needs w, h > 0 and confidence in [0, 1]");
            out.detections.push_back(std::move(det));
        }
    } catch (const json::exception& e) {
        throw Error(Stage::detection, "BadSidecar", std::string("sidecar: ") + e.what());
    }
    return out;
}

Sidecar load_sidecar(const std::string& path) { return parse_sidecar(read_file(path)); }

std::string to_json(const Sidecar& s) {
    json arr = json::array();
    for (const auto& d : s.detections) {
        arr.push_back({{"class", d.cls}, {"x", d.x}, {"y", d.y}, {"w", d.w}, {"h", d.h}, {"confidence", d.confidence}});
    }
    return json{{"detections", arr}}.dump(2) + "\n";
}

// --- ROI ---------------------------------------------------------------------------

namespace {

Rect dilate(const BBox& b, double frac) {
    const int w = b.x_max - b.x_min + 1;
    const int h = b.y_max - b.y_min + 1;
    const int dx = static_cast<int>(std::ceil(frac * w));
    const int dy = static_cast<int>(std::ceil(frac * h));
    return {b.x_min - dx, b.y_min - dy, w + 2 * dx, h + 2 * dy};
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

Roi locate_roi(const Image& img, const Sidecar* sidecar, const Config& cfg, double sidecar_scale) {
    if (sidecar) {
        for (const auto& d : sidecar->detections) {
            if (d.cls != "linear_scale") continue;
            const Rect r{static_cast<int>(std::floor(d.x * sidecar_scale)),
                         static_cast<int>(std::floor(d.y * sidecar_scale)),
                         static_cast<int>(std::ceil(d.w * sidecar_scale)),
                         static_cast<int>(std::ceil(d.h * sidecar_scale))};
            if (auto c = clamp_rect(r, img.width(), img.height())) return {*c, RoiSource::sidecar};
            throw Error(Stage::detection, "NoDetection", "sidecar box lies outside the image");
        }
    }

    const HsvImage hsv = to_hsv(img);
    const auto blobs =
        filter_by_bounds(find_contours(segment_by_range(hsv, cfg.marker_range)), cfg.marker_area, cfg.marker_perimeter);
    if (blobs.empty()) throw Error(Stage::detection, "NoDetection", "no marker-coloured foreground found");

    // Blobs whose cell footprints touch (8-neighbourhood) share a cluster.
    const int cell = cfg.roi_cell;
    std::vector<std::size_t> parent(blobs.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::map<std::pair<int, int>, std::size_t> owner;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        const BBox& b = blobs[i].bbox;
        for (int cy = b.y_min / cell - 1; cy <= b.y_max / cell + 1; ++cy) {
            for (int cx = b.x_min / cell - 1; cx <= b.x_max / cell + 1; ++cx) {
                auto [it, fresh] = owner.try_emplace({cx, cy}, i);
                if (fresh) continue;
                const std::size_t a = find_root(parent, it->second), c = find_root(parent, i);
                if (a != c) parent[std::max(a, c)] = std::min(a, c);
            }
        }
    }

    struct Cluster {
        int count = 0;
        long area = 0;
        BBox box;
    };
    std::map<std::size_t, Cluster> clusters;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        auto& cl = clusters[find_root(parent, i)];
        const BBox& b = blobs[i].bbox;
        if (cl.count == 0) {
            cl.box = b;
        } else {
            cl.box.x_min = std::min(cl.box.x_min, b.x_min);
            cl.box.x_max = std::max(cl.box.x_max, b.x_max);
            cl.box.y_min = std::min(cl.box.y_min, b.y_min);
            cl.box.y_max = std::max(cl.box.y_max, b.y_max);
        }
        ++cl.count;
        cl.area += blobs[i].area;
    }
    const Cluster* best = nullptr;
    for (const auto& [root, cl] : clusters) {
        if (!best || cl.count > best->count || (cl.count == best->count && cl.area > best->area)) best = &cl;
    }
    const auto r = clamp_rect(dilate(best->box, cfg.roi_dilate), img.width(), img.height());
    return {*r, RoiSource::heuristic};
}

// --- indicator ------------------------------------------------------------------------

Contour extract_indicator(const HsvImage& hsv, const ColorRange& range, Bounds area) {
    auto found = filter_by_bounds(find_contours(segment_by_range(hsv, range)), area);
    if (found.empty()) throw Error(Stage::indicator, "IndicatorNotFound", "no indicator contour within the area bounds");
    return *std::max_element(found.begin(), found.end(),
                             [](const Contour& a, const Contour& b) { return a.area < b.area; });
}

double measurement_point(const Contour& indicator, IndicatorKind kind, double plunger_offset) {
    if (kind == IndicatorKind::meniscus) return indicator.bbox.y_max;
    return indicator.bbox.y_min + plunger_offset * indicator.bbox.height_extent();
}

// --- pipeline ----------------------------------------------------------------------------

OcrResult read_label(const Image& roi, const Config& cfg) {
    if (cfg.ocr_engine == OcrEngine::external) {
        AdapterOptions opt;
        opt.command = cfg.ocr_command;
        opt.timeout = std::chrono::milliseconds(cfg.ocr_timeout_ms);
        opt.png = cfg.ocr_png;
        try {
            return run_external_ocr(roi, opt);
        } catch (const Error& e) {
            if (e.code() == "AdapterSpawnFailure") throw;
            OcrResult r;
            r.error = e.what();
            return r;
        }
    }
    RecognizerParams params;
    params.accept = cfg.ocr_accept;
    return recognize_builtin(roi, GlyphSet::builtin(), params);
}

namespace {

Image ensure_rgb(const Image& img) {
    if (img.channels() == 3) return img;
    Image out(img.width(), img.height(), 3);
    const auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    return out;
}

std::vector<Contour> marker_blobs(const HsvImage& hsv, const Config& cfg, int* total = nullptr) {
    auto all = find_contours(segment_by_range(hsv, cfg.marker_range));
    if (total) *total = static_cast<int>(all.size());
    return filter_by_bounds(std::move(all), cfg.marker_area, cfg.marker_perimeter);
}

// Linear contours sharing columns with the median one. Label strokes that pass
// the aspect test sit beside the ticks and would tilt the axis.
std::vector<Contour> tick_column(std::vector<Contour> linear) {
    if (linear.size() < 3) return linear;
    std::vector<const Contour*> order;
    for (const auto& c : linear) order.push_back(&c);
    const auto mid = order.begin() + order.size() / 2;
    std::nth_element(order.begin(), mid, order.end(), [](const Contour* a, const Contour* b) {
        return a->bbox.x_min + a->bbox.x_max < b->bbox.x_min + b->bbox.x_max;
    });
    const BBox ref = (*mid)->bbox;
    std::erase_if(linear, [&](const Contour& c) { return c.bbox.x_max < ref.x_min || c.bbox.x_min > ref.x_max; });
    return linear;
}

// Everything from the upright image to the label reads; run once per flip candidate.
struct Scan {
    Image crop;
    HsvImage hsv;
    PixelPoint offset;
    int linear = 0;
    std::vector<MarkerGroup> groups;
    std::vector<MarkerPosition> majors;
    double spacing = 0.0;
    Side side = Side::right;
    std::vector<OcrOutcome> ocr;
    int reads = 0;
    std::exception_ptr error;
};

Scan scan_scale(const Image& upright, const Config& cfg) {
    Scan s;
    try {
        const auto linear = filter_linear(marker_blobs(to_hsv(upright), cfg), cfg.aspect_threshold);
        if (linear.empty()) throw Error(Stage::orientation, "NoLinearContours", "no linear contours after reorientation");

        Rect r = scale_rect(linear, cfg.pad_frac);
        int longest = 0;
        for (const auto& c : linear) longest = std::max(longest, tick_length(c));
        const int margin = static_cast<int>(std::ceil(cfg.label_roi.width_frac * longest)) + 2;
        r.x -= margin;
        r.w += 2 * margin;
        const auto rc = clamp_rect(r, upright.width(), upright.height());
        if (!rc) throw Error(Stage::orientation, "EmptyIntersection", "scale lies outside the image");
        s.offset = {rc->x, rc->y};
        s.crop = crop(upright, *rc);
        s.hsv = to_hsv(cfg.blur ? gaussian_blur_3x3(s.crop) : s.crop);

        auto ticks = filter_linear(marker_blobs(s.hsv, cfg), cfg.aspect_threshold);
        s.linear = static_cast<int>(ticks.size());
        s.groups = group_by_relative_length(std::move(ticks), cfg.group_jump);
        s.majors = major_markers(s.groups, cfg.merge_px);
        require_majors(s.majors, static_cast<std::size_t>(cfg.min_majors));
        s.spacing = median_spacing(s.majors);
        s.side = choose_label_side(s.hsv, cfg.marker_range, s.majors, s.spacing, cfg.label_roi);

        for (const auto& m : s.majors) {
            OcrOutcome o;
            o.position = m.y;
            o.roi = digit_roi(m, s.spacing, s.side, s.crop.width(), s.crop.height(), cfg.label_roi).rect;
            if (o.roi.w > 0 && o.roi.h > 0) o.result = read_label(crop(s.crop, o.roi), cfg);
            s.reads += o.result.value.has_value();
            s.ocr.push_back(std::move(o));
        }
    } catch (const Error&) {
        s.error = std::current_exception();
    }
    return s;
}

}  // namespace

Reading read_scale(const Image& input, const Config& cfg, const ReadOptions& options) {
    cfg.validate();
    Reading out;
    Diagnostics& dg = out.diagnostics;
    auto dump = [&](const char* name, const Image& img) {
        if (options.debug) options.debug(name, img);
    };

    Image img = ensure_rgb(input);
    const int longest = std::max(img.width(), img.height());
    if (longest != cfg.resize_target) {
        dg.resize_factor = static_cast<double>(cfg.resize_target) / longest;
        img = resize_longest_edge(img, cfg.resize_target);
    }

    dg.roi = locate_roi(img, options.sidecar, cfg, dg.resize_factor);
    const Image roi = crop(img, dg.roi.rect);
    dump("roi", roi);

    // Coarse pass on every marker-coloured blob, fine pass on the linear ones.
    const HsvImage roi_hsv = to_hsv(roi);
    int total = 0;
    const auto blobs = marker_blobs(roi_hsv, cfg, &total);
    dg.contours_total = total;
    dg.contours_in_bounds = static_cast<int>(blobs.size());
    if (options.debug) dump("mask_markers", segment_by_range(roi_hsv, cfg.marker_range).to_image());
    if (blobs.empty()) throw Error(Stage::orientation, "DegeneratePointSet", "no marker contours inside the ROI");

    dg.coarse_angle = upright_rotation(pca_axes(blobs).major_angle);
    const Rotation coarse(roi.width(), roi.height(), dg.coarse_angle);
    const auto linear = tick_column(filter_linear(rotate_contours(blobs, coarse), cfg.aspect_threshold));
    if (linear.size() < 2) throw Error(Stage::orientation, "NoLinearContours", "too few linear contours to orient");
    dg.fine_angle = upright_rotation(pca_axes(linear).major_angle);
    dg.total_angle = Angle{dg.coarse_angle.degrees + dg.fine_angle.degrees}.folded();

    const Image upright = rotate_about_center(roi, dg.total_angle);
    dump("upright", upright);

    std::vector<Scan> scans;
    const FlipChoice flip = resolve_flip(upright, [&](const Image& candidate) {
        scans.push_back(scan_scale(candidate, cfg));
        return scans.back().reads;
    });
    dg.flipped = flip.flipped;
    dg.flip_score_upright = flip.score_upright;
    dg.flip_score_flipped = flip.score_flipped;
    std::size_t pick = flip.flipped ? 1 : 0;
    if (scans[pick].error && !scans[1 - pick].error) {
        pick = 1 - pick;
        dg.flipped = pick == 1;
    }
    Scan& s = scans[pick];
    if (s.error) std::rethrow_exception(s.error);

    dg.crop_offset = s.offset;
    dg.crop_width = s.crop.width();
    dg.crop_height = s.crop.height();
    dg.linear_contours = s.linear;
    for (const auto& g : s.groups) {
        dg.group_sizes.push_back(static_cast<int>(g.members.size()));
        dg.group_lengths.push_back(g.representative_length);
    }
    dg.spacing = s.spacing;
    dg.label_side = s.side;
    dg.ocr = s.ocr;
    dump("scale_crop", s.crop);
    if (options.debug) {
        dump("mask_scale", segment_by_range(s.hsv, cfg.marker_range).to_image());
        for (std::size_t k = 0; k < s.ocr.size(); ++k) {
            if (s.ocr[k].roi.w > 0) options.debug("label_" + std::to_string(k), crop(s.crop, s.ocr[k].roi));
        }
    }

    for (const auto& o : s.ocr) out.raw.push_back({o.position, o.result.value});
    const Calibration cal = calibrate(out.raw, cfg.slope_tolerance);
    dg.slope_pairs = cal.slopes.size();
    dg.consensus_support = cal.consensus.agreeing.size();
    dg.grain = cal.grain;
    out.relation = cal.relation;
    out.markers = cal.corrected;
    out.low_confidence = cal.consensus.low_confidence;

    if (options.debug) dump("mask_indicator", segment_by_range(s.hsv, cfg.indicator_range).to_image());
    const Contour ind = extract_indicator(s.hsv, cfg.indicator_range, cfg.indicator_area);
    dg.indicator_area = ind.area;
    out.indicator_y = measurement_point(ind, cfg.indicator, cfg.plunger_offset);
    out.value = out.relation(out.indicator_y);
    return out;
}

}  // namespace linscale
