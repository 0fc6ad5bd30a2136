// linscale: read linear scales from images, render synthetic scenes, evaluate
// measurement series and batch-process directories.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "linscale/errors.hpp"
#include "linscale/evalkit.hpp"
#include "linscale/gauge.hpp"
#include "linscale/simd.hpp"
#include "linscale/synth.hpp"

namespace fs = std::filesystem;
using namespace linscale;

namespace {

struct ConfigFlags {
    std::string config_path;
    std::string preset;
    std::vector<std::string> overrides;

    void add(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (default: $LINSCALE_CONFIG)");
        cmd->add_option("--preset", preset, "Start from the defaults for a synthetic preset")
            ->check(CLI::IsMember({"syringe", "cylinder"}));
        cmd->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
    }

    Config resolve() const {
        Config cfg = preset.empty() ? Config{} : synth::config_for(synth::parse_preset(preset));
        std::string path = config_path;
        if (path.empty()) {
            if (const char* env = std::getenv("LINSCALE_CONFIG"); env && *env) path = env;
        }
        if (!path.empty()) cfg = load_config(path, cfg);
        for (const auto& o : overrides) apply_override(cfg, o);
        cfg.validate();
        return cfg;
    }
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string num(double v, int dp = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", dp, v + 0.0);
    return buf;
}

int report_error(const Error& e) {
    std::cout << "status=error stage=" << stage_name(e.stage()) << " code=" << e.code() << " message=" << quote(e.what())
              << "\n";
    return exit_code(e.stage());
}

std::string reading_line(const Reading& r) {
    const auto& d = r.diagnostics;
    int reads = 0;
    for (const auto& o : d.ocr) reads += o.result.value.has_value();
    std::ostringstream os;
    os << "status=ok value=" << num(r.value) << " confidence=" << (r.low_confidence ? "low" : "normal")
       << " slope=" << num(r.relation.slope, 6) << " offset=" << num(r.relation.offset, 6)
       << " indicator_y=" << num(r.indicator_y, 2) << " angle=" << num(d.total_angle.degrees, 3)
       << " flipped=" << (d.flipped ? 1 : 0) << " majors=" << d.ocr.size() << " reads=" << reads
       << " roi=" << (d.roi.source == RoiSource::sidecar ? "sidecar" : "heuristic");
    return os.str();
}

bool is_image(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".ppm" || ext == ".pgm" || ext == ".pnm" || ext == ".png";
}

std::optional<Sidecar> sidecar_for(const fs::path& image) {
    fs::path p = image;
    p.replace_extension(".roi.json");
    if (!fs::exists(p)) return std::nullopt;
    return load_sidecar(p.string());
}

// --- read --------------------------------------------------------------------

int cmd_read(const std::string& image, const ConfigFlags& flags, const std::string& roi_path,
             const std::string& debug_dir) {
    try {
        const Config cfg = flags.resolve();
        std::optional<Sidecar> sidecar;
        if (!roi_path.empty()) sidecar = load_sidecar(roi_path);

        ReadOptions opt;
        if (sidecar) opt.sidecar = &*sidecar;
        if (!debug_dir.empty()) {
            fs::create_directories(debug_dir);
            write_file((fs::path(debug_dir) / "config.txt").string(), to_text(cfg));
            opt.debug = [&](const std::string& name, const Image& img) {
                const char* ext = img.channels() == 1 ? ".pgm" : ".ppm";
                write_image((fs::path(debug_dir) / (name + ext)).string(), img);
            };
        }

        const Reading r = read_scale(read_image(image), cfg, opt);
        std::cout << reading_line(r) << "\n";
        if (!debug_dir.empty()) {
            std::ostringstream os;
            os << reading_line(r) << "\n";
            const auto& d = r.diagnostics;
            os << "coarse_angle=" << num(d.coarse_angle.degrees, 3) << " fine_angle=" << num(d.fine_angle.degrees, 3)
               << " contours=" << d.contours_total << " in_bounds=" << d.contours_in_bounds
               << " linear=" << d.linear_contours << " spacing=" << num(d.spacing, 2)
               << " side=" << side_name(d.label_side) << "\n";
            for (std::size_t k = 0; k < d.ocr.size(); ++k) {
                const auto& o = d.ocr[k];
                os << "marker=" << k << " y=" << num(o.position, 2) << " text=" << quote(o.result.raw_text)
                   << " read=" << (o.result.value ? num(*o.result.value, 3) : "none")
                   << " corrected=" << num(*r.markers[k].value, 3) << "\n";
            }
            write_file((fs::path(debug_dir) / "reading.txt").string(), os.str());
        }
        return 0;
    } catch (const Error& e) {
        return report_error(e);
    } catch (const std::exception& e) {
        std::cout << "status=error stage=input code=Exception message=" << quote(e.what()) << "\n";
        return 1;
    }
}

// --- synth -------------------------------------------------------------------

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        double a = 0, b = 0, step = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0)
            throw Error(Stage::input, "SpecInvalid", "sweep range must be start:stop:step");
        for (int i = 0;; ++i) {
            const double v = a + i * step;
            if (v > b + 1e-9) break;
            out.push_back(std::round(v * 1e9) / 1e9);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

struct SynthFlags {
    std::string preset = "syringe";
    std::optional<double> level, rotation, scale, noise;
    bool clutter = false;
    std::string side;
    std::uint64_t seed = 1;
    std::string out = ".";
    std::string sweep;
    int random = 0;
    std::string format = "ppm";
    bool sidecar = false;
};

int cmd_synth(const SynthFlags& f) {
    try {
        synth::ScaleSpec spec = synth::preset(synth::parse_preset(f.preset));
        if (f.level) spec.level = *f.level;
        if (f.rotation) spec.rotation_deg = *f.rotation;
        if (f.scale) spec.scale_factor = *f.scale;
        if (f.noise) spec.noise_sigma = *f.noise;
        if (!f.side.empty()) spec.label_side = f.side == "left" ? Side::left : Side::right;
        spec.clutter = f.clutter;

        std::vector<synth::Scene> scenes;
        if (f.random > 0) {
            for (int i = 0; i < f.random; ++i) scenes.push_back(synth::render_scale(synth::randomized(spec, f.seed + i), f.seed + i));
        } else if (!f.sweep.empty()) {
            const auto eq = f.sweep.find('=');
            if (eq == std::string::npos) throw Error(Stage::input, "SpecInvalid", "--sweep expects axis=values");
            scenes = synth::sweep(spec, synth::parse_axis(f.sweep.substr(0, eq)), parse_values(f.sweep.substr(eq + 1)), f.seed);
        } else {
            scenes.push_back(synth::render_scale(spec, f.seed));
        }

        std::error_code ec;
        fs::create_directories(f.out, ec);
        if (ec) throw Error(Stage::io, "IoFailure", "cannot create " + f.out);
        for (std::size_t i = 0; i < scenes.size(); ++i) {
            char stem[64];
            std::snprintf(stem, sizeof stem, "%s_%03zu", f.preset.c_str(), i);
            const fs::path base = fs::path(f.out) / stem;
            write_image(base.string() + "." + f.format, scenes[i].image);
            write_file(base.string() + ".json", synth::to_json(scenes[i].truth));
            if (f.sidecar) {
                // Box around the rendered major ticks, padded generously.
                const auto& pts = scenes[i].truth.major_points;
                double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
                for (const auto& p : pts) {
                    x0 = std::min(x0, p.x);
                    x1 = std::max(x1, p.x);
                    y0 = std::min(y0, p.y);
                    y1 = std::max(y1, p.y);
                }
                const double pad = 120 * scenes[i].truth.scale_factor;
                Sidecar sc;
                sc.detections.push_back({"linear_scale", x0 - pad, y0 - pad, x1 - x0 + 2 * pad, y1 - y0 + 2 * pad, 1.0});
                write_file(base.string() + ".roi.json", to_json(sc));
            }
            std::cout << base.string() << "." << f.format << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "synth: " << e.what() << "\n";
        return 1;
    }
}

// --- eval --------------------------------------------------------------------

int cmd_eval(const std::string& fixture, const std::string& csv, const std::string& out, bool no_plots) {
    try {
        eval::MeasurementSeries asp, disp;
        if (!csv.empty()) {
            auto series = eval::parse_measurements_csv(read_file(csv));
            if (series.size() != 2) throw Error(Stage::input, "BadCsv", "expected exactly two directions in the CSV");
            asp = series[0];
            disp = series[1];
        } else if (fixture == "table4") {
            asp = eval::table4_aspirating();
            disp = eval::table4_dispensing();
        } else {
            throw Error(Stage::input, "BadArgs", "give --fixture table4 or --measurements FILE");
        }

        std::cout << eval::metric_table(asp, disp);
        const auto ba = eval::bland_altman(asp, disp);
        std::printf("hysteresis_area=%.6f ba_mean_diff=%.3f ba_lower=%.4f ba_upper=%.4f ba_outliers=%zu\n",
                    eval::hysteresis_area(asp, disp), ba.mean_diff, ba.lower, ba.upper, ba.outlier_count);
        if (!out.empty()) {
            for (const auto& p : eval::export_report(out, asp, disp, no_plots ? std::vector<eval::Plot>{} : eval::all_plots()))
                std::cerr << "wrote " << p << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "eval: " << e.code() << ": " << e.what() << "\n";
        return 2;
    }
}

// --- batch -------------------------------------------------------------------

struct BatchRow {
    std::string file;
    std::string status = "error";
    std::string stage, code, message;
    std::optional<double> value, truth, minor_step;
    bool low_confidence = false;
    double angle = 0;
    bool flipped = false;
    double millis = 0;
};

BatchRow process_one(const fs::path& path, const ConfigFlags& flags, bool explicit_config) {
    BatchRow row;
    row.file = path.filename().string();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fs::path manifest = path;
        manifest.replace_extension(".json");
        std::optional<synth::GroundTruth> gt;
        if (fs::exists(manifest)) gt = synth::parse_ground_truth(read_file(manifest.string()));
        if (gt) {
            row.truth = gt->level;
            row.minor_step = gt->minor_step;
        }

        ConfigFlags f = flags;
        if (!explicit_config && gt && f.preset.empty()) f.preset = gt->preset;
        const Config cfg = f.resolve();
        const auto sidecar = sidecar_for(path);
        ReadOptions opt;
        if (sidecar) opt.sidecar = &*sidecar;
        const Reading r = read_scale(read_image(path.string()), cfg, opt);
        row.status = "ok";
        row.value = r.value;
        row.low_confidence = r.low_confidence;
        row.angle = r.diagnostics.total_angle.degrees;
        row.flipped = r.diagnostics.flipped;
    } catch (const Error& e) {
        row.stage = stage_name(e.stage());
        row.code = e.code();
        row.message = e.what();
    } catch (const std::exception& e) {
        row.stage = "input";
        row.code = "Exception";
        row.message = e.what();
    }
    row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

int cmd_batch(const std::string& dir, const ConfigFlags& flags, int workers, const std::string& out_path) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
    if (ec) {
        std::cerr << "batch: cannot list " << dir << ": " << ec.message() << "\n";
        return 1;
    }
    std::sort(files.begin(), files.end());

    const bool explicit_config = !flags.config_path.empty() || std::getenv("LINSCALE_CONFIG");
    std::vector<BatchRow> rows(files.size());
    std::atomic<std::size_t> next{0};
    const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(files.size())));
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < files.size();) rows[i] = process_one(files[i], flags, explicit_config);
        });
    }
    for (auto& t : pool) t.join();

    std::ostringstream os;
    if (!rows.empty()) os << "file,status,stage,code,value,truth,error,within_half_minor,low_confidence,angle,flipped,millis,message\n";
    int ok = 0, scored = 0, within = 0;
    for (const auto& r : rows) {
        os << csv_field(r.file) << ',' << r.status << ',' << r.stage << ',' << r.code << ',';
        os << (r.value ? num(*r.value) : "") << ',' << (r.truth ? num(*r.truth) : "") << ',';
        if (r.value && r.truth) {
            const double err = *r.value - *r.truth;
            const bool in = std::fabs(err) <= *r.minor_step / 2 + 1e-9;
            ++scored;
            within += in;
            os << num(err) << ',' << (in ? 1 : 0) << ',';
        } else {
            os << ",,";
        }
        ok += r.status == "ok";
        os << (r.low_confidence ? 1 : 0) << ',' << num(r.angle, 3) << ',' << (r.flipped ? 1 : 0) << ','
           << num(r.millis, 1) << ',' << csv_field(r.message) << '\n';
    }
    if (!rows.empty()) {
        os << "#summary,images=" << rows.size() << ",ok=" << ok << ",failed=" << rows.size() - ok
           << ",scored=" << scored << ",within_half_minor=" << within << '\n';
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << os.str();
    } else {
        write_file(out_path, os.str());
        std::cerr << "wrote " << out_path << "\n";
    }
    std::cerr << "images=" << rows.size() << " ok=" << ok << " within_half_minor=" << within << "/" << scored << "\n";
    return ok > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Read the level of a linear scale (syringe, measuring cylinder) from an image"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "linscale 0.1.0");
    std::string simd;
    app.add_option("--simd", simd, "Force a kernel backend")->check(CLI::IsMember({"scalar", "sse41", "avx2", "neon"}));

    // read
    auto* read = app.add_subcommand("read", "Read one image; prints key=value pairs");
    std::string image, roi_path, debug_dir;
    ConfigFlags read_flags;
    read->add_option("image", image, "Input image (PPM/PGM/PNG)")->required();
    read->add_option("--roi", roi_path, "Detector sidecar JSON with a linear_scale box");
    read->add_option("--debug-dir", debug_dir, "Dump per-stage images and the effective config here");
    read_flags.add(read);

    // synth
    auto* syn = app.add_subcommand("synth", "Render synthetic scenes with ground-truth manifests");
    SynthFlags sf;
    syn->add_option("--preset", sf.preset, "syringe or cylinder")->check(CLI::IsMember({"syringe", "cylinder"}));
    syn->add_option("--level", sf.level, "Indicator level in scale units");
    syn->add_option("--rotation", sf.rotation, "Rotation in degrees, counter-clockwise");
    syn->add_option("--scale", sf.scale, "Scale factor");
    syn->add_option("--noise", sf.noise, "Gaussian noise sigma in grey levels");
    syn->add_flag("--clutter", sf.clutter, "Scatter distractor shapes");
    syn->add_option("--label-side", sf.side, "left or right")->check(CLI::IsMember({"left", "right"}));
    syn->add_option("--seed", sf.seed, "Random seed");
    syn->add_option("--out", sf.out, "Output directory");
    syn->add_option("--sweep", sf.sweep, "axis=start:stop:step or axis=v1,v2,... (rotation|scale_factor|level)");
    syn->add_option("--random", sf.random, "Render N randomized scenes (rotation +-60, scale 0.6-1.5, noise 5)");
    syn->add_option("--format", sf.format, "ppm or png")->check(CLI::IsMember({"ppm", "png"}));
    syn->add_flag("--sidecar", sf.sidecar, "Also write a detector sidecar per scene");

    // eval
    auto* ev = app.add_subcommand("eval", "Accuracy metrics, hysteresis and Bland-Altman for two series");
    std::string fixture, meas, eval_out;
    bool no_plots = false;
    ev->add_option("--fixture", fixture, "Built-in data set")->check(CLI::IsMember({"table4"}));
    ev->add_option("--measurements", meas, "CSV with direction,truth,measured");
    ev->add_option("--out", eval_out, "Directory for report.csv and SVG plots");
    ev->add_flag("--no-plots", no_plots, "Write the CSV only");

    // batch
    auto* batch = app.add_subcommand("batch", "Read every image in a directory; CSV of results");
    std::string batch_dir, batch_out;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    ConfigFlags batch_flags;
    batch->add_option("dir", batch_dir, "Directory of images (+ optional .json manifests)")->required();
    batch->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    batch->add_option("--out", batch_out, "Results CSV path (default stdout)");
    batch_flags.add(batch);

    // config
    auto* conf = app.add_subcommand("config", "Print the effective configuration");
    ConfigFlags conf_flags;
    conf_flags.add(conf);

    CLI11_PARSE(app, argc, argv);

    if (!simd.empty()) {
        const simd::Backend b = simd == "scalar" ? simd::Backend::scalar
                                : simd == "sse41" ? simd::Backend::sse41
                                : simd == "avx2"  ? simd::Backend::avx2
                                                  : simd::Backend::neon;
        const auto avail = simd::available_backends();
        if (std::find(avail.begin(), avail.end(), b) == avail.end()) {
            std::cerr << "backend " << simd << " is not available on this CPU\n";
            return 1;
        }
        simd::force_backend(b);
    }

    if (*read) return cmd_read(image, read_flags, roi_path, debug_dir);
    if (*syn) return cmd_synth(sf);
    if (*ev) return cmd_eval(fixture, meas, eval_out, no_plots);
    if (*batch) return cmd_batch(batch_dir, batch_flags, workers, batch_out);
    if (*conf) {
        try {
            std::cout << to_text(conf_flags.resolve());
            return 0;
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return 1;
        }
    }
    return 0;
}
