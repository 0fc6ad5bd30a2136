#include "linscale/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "linscale/errors.hpp"

namespace linscale {

const char* indicator_name(IndicatorKind k) { return k == IndicatorKind::meniscus ? "meniscus" : "plunger"; }

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, const char* want) {
    throw Error(Stage::config, "BadValue",
                "config key '" + std::string(key) + "': cannot use '" + std::string(value) + "' (" + want + ")");
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

double to_double(std::string_view key, std::string_view v) {
    if (v == "inf") return std::numeric_limits<double>::infinity();
    double d = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), d);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(d)) bad(key, v, "number");
    return d;
}

int to_int(std::string_view key, std::string_view v) {
    int i = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), i);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, v, "integer");
    return i;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad(key, v, "true or false");
}

Hsv to_hsv_triple(std::string_view key, std::string_view v) {
    const auto w = words(v);
    if (w.size() != 3) bad(key, v, "three integers H S V");
    const int h = to_int(key, w[0]), s = to_int(key, w[1]), val = to_int(key, w[2]);
    if (h < 0 || h > 179 || s < 0 || s > 255 || val < 0 || val > 255) bad(key, v, "H 0..179, S and V 0..255");
    return {std::uint8_t(h), std::uint8_t(s), std::uint8_t(val)};
}

Bounds to_bounds(std::string_view key, std::string_view v) {
    const auto w = words(v);
    if (w.size() != 2) bad(key, v, "two numbers: min max");
    Bounds b{to_double(key, w[0]), to_double(key, w[1])};
    if (b.min > b.max) bad(key, v, "min <= max");
    return b;
}

std::string num(double d) {
    if (std::isinf(d)) return "inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, r.ptr);
}

std::string hsv_text(Hsv h) {
    return std::to_string(h.h) + " " + std::to_string(h.s) + " " + std::to_string(h.v);
}

std::string bounds_text(Bounds b) { return num(b.min) + " " + num(b.max); }

std::vector<std::string> split_command(std::string_view key, std::string_view v) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false, any = false;
    for (char c : v) {
        if (c == '"') {
            quoted = !quoted;
            any = true;
        } else if (!quoted && (c == ' ' || c == '\t')) {
            if (any) out.push_back(cur);
            cur.clear();
            any = false;
        } else {
            cur += c;
            any = true;
        }
    }
    if (quoted) bad(key, v, "balanced quotes");
    if (any) out.push_back(cur);
    return out;
}

std::string join_command(const std::vector<std::string>& cmd) {
    std::string out;
    for (const auto& a : cmd) {
        if (!out.empty()) out += ' ';
        out += a.find_first_of(" \t") == std::string::npos ? a : "\"" + a + "\"";
    }
    return out;
}

struct Key {
    const char* name;
    std::function<void(Config&, std::string_view)> set;
    std::function<std::string(const Config&)> get;
};

#define LS_DOUBLE(name, field) \
    {name, [](Config& c, std::string_view v) { c.field = to_double(name, v); }, [](const Config& c) { return num(c.field); }}
#define LS_INT(name, field) \
    {name, [](Config& c, std::string_view v) { c.field = to_int(name, v); }, [](const Config& c) { return std::to_string(c.field); }}
#define LS_BOOL(name, field)                                                     \
    {name, [](Config& c, std::string_view v) { c.field = to_bool(name, v); }, \
     [](const Config& c) { return std::string(c.field ? "true" : "false"); }}
#define LS_HSV(name, field) \
    {name, [](Config& c, std::string_view v) { c.field = to_hsv_triple(name, v); }, [](const Config& c) { return hsv_text(c.field); }}
#define LS_BOUNDS(name, field) \
    {name, [](Config& c, std::string_view v) { c.field = to_bounds(name, v); }, [](const Config& c) { return bounds_text(c.field); }}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        LS_INT("resize_target", resize_target),
        LS_DOUBLE("roi.dilate", roi_dilate),
        LS_INT("roi.cell", roi_cell),
        LS_HSV("marker.lo", marker_range.lo),
        LS_HSV("marker.hi", marker_range.hi),
        LS_BOOL("marker.hue_wraps", marker_range.hue_wraps),
        LS_BOUNDS("marker.area", marker_area),
        LS_BOUNDS("marker.perimeter", marker_perimeter),
        LS_DOUBLE("aspect_threshold", aspect_threshold),
        LS_DOUBLE("group_jump", group_jump),
        LS_DOUBLE("merge_px", merge_px),
        LS_INT("min_majors", min_majors),
        LS_DOUBLE("pad_frac", pad_frac),
        LS_BOOL("blur", blur),
        LS_DOUBLE("label.width_frac", label_roi.width_frac),
        LS_DOUBLE("label.height_frac", label_roi.height_frac),
        {"ocr.engine",
         [](Config& c, std::string_view v) {
             if (v == "builtin") c.ocr_engine = OcrEngine::builtin;
             else if (v == "external") c.ocr_engine = OcrEngine::external;
             else bad("ocr.engine", v, "builtin or external");
         },
         [](const Config& c) { return std::string(c.ocr_engine == OcrEngine::builtin ? "builtin" : "external"); }},
        {"ocr.command", [](Config& c, std::string_view v) { c.ocr_command = split_command("ocr.command", v); },
         [](const Config& c) { return join_command(c.ocr_command); }},
        LS_INT("ocr.timeout_ms", ocr_timeout_ms),
        LS_BOOL("ocr.png", ocr_png),
        LS_DOUBLE("ocr.accept", ocr_accept),
        LS_DOUBLE("slope_tolerance", slope_tolerance),
        {"indicator.kind",
         [](Config& c, std::string_view v) {
             if (v == "plunger") c.indicator = IndicatorKind::plunger;
             else if (v == "meniscus") c.indicator = IndicatorKind::meniscus;
             else bad("indicator.kind", v, "plunger or meniscus");
         },
         [](const Config& c) { return std::string(indicator_name(c.indicator)); }},
        LS_DOUBLE("indicator.plunger_offset", plunger_offset),
        LS_HSV("indicator.lo", indicator_range.lo),
        LS_HSV("indicator.hi", indicator_range.hi),
        LS_BOOL("indicator.hue_wraps", indicator_range.hue_wraps),
        LS_BOUNDS("indicator.area", indicator_area),
    };
    return table;
}

#undef LS_DOUBLE
#undef LS_INT
#undef LS_BOOL
#undef LS_HSV
#undef LS_BOUNDS

void check(bool ok, const char* what) {
    if (!ok) throw Error(Stage::config, "BadValue", std::string("config out of range: ") + what);
}

}  // namespace

void Config::validate() const {
    check(resize_target >= 16, "resize_target >= 16");
    check(roi_dilate >= 0 && roi_dilate <= 2, "roi.dilate in [0, 2]");
    check(roi_cell >= 2, "roi.cell >= 2");
    check(aspect_threshold > 0, "aspect_threshold > 0");
    check(group_jump > 0 && group_jump < 1, "group_jump in (0, 1)");
    check(merge_px >= 0, "merge_px >= 0");
    check(min_majors >= 2, "min_majors >= 2");
    check(pad_frac >= 0 && pad_frac <= 1, "pad_frac in [0, 1]");
    check(label_roi.width_frac > 0 && label_roi.height_frac > 0, "label ROI fractions > 0");
    check(ocr_timeout_ms > 0, "ocr.timeout_ms > 0");
    check(ocr_accept > 0 && ocr_accept <= 1, "ocr.accept in (0, 1]");
    check(ocr_engine == OcrEngine::builtin || !ocr_command.empty(), "ocr.command set for the external engine");
    check(slope_tolerance >= 0 && slope_tolerance < 0.5, "slope_tolerance in [0, 0.5)");
    check(plunger_offset >= 0 && plunger_offset <= 0.5, "indicator.plunger_offset in [0, 0.5]");
    marker_range.validate();
    indicator_range.validate();
}

void set_config_value(Config& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    for (const auto& k : keys()) {
        if (key == k.name) {
            k.set(cfg, value);
            return;
        }
    }
    throw Error(Stage::config, "UnknownKey", "unknown config key '" + std::string(key) + "'");
}

Config parse_config(std::string_view text, Config base) {
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(Stage::config, "BadLine", "config line " + std::to_string(line_no) + ": expected key = value");
        }
        set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    }
    base.validate();
    return base;
}

Config load_config(const std::string& path, Config base) { return parse_config(read_file(path), std::move(base)); }

void apply_override(Config& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw Error(Stage::config, "BadLine", "override '" + std::string(assignment) + "' is not key=value");
    set_config_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

std::string to_text(const Config& cfg) {
    std::ostringstream os;
    for (const auto& k : keys()) os << k.name << " = " << k.get(cfg) << '\n';
    return os.str();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& k : keys()) out.emplace_back(k.name);
    return out;
}

}  // namespace linscale
