#pragma once

#include <stdexcept>
#include <string>

namespace linscale {

/// Pipeline stage that raised an error. Stages map onto stable CLI exit codes.
enum class Stage {
    input,        // malformed images, bad arguments to primitives
    detection,    // ROI location
    orientation,  // PCA reorientation
    markers,      // marker extraction and grouping
    calibration,  // slope consensus and relation fitting
    indicator,    // level indicator extraction
    ocr,          // external OCR adapter
    config,
    io,
};

const char* stage_name(Stage stage);

/// Process exit code for a stage failure (10..14 for pipeline stages, 1 otherwise).
int exit_code(Stage stage);

/// All library errors carry the failing stage and a short machine-readable code
/// such as "NoConsensus" or "DegenerateImage".
class Error : public std::runtime_error {
public:
    Error(Stage stage, std::string code, const std::string& message)
        : std::runtime_error(message), stage_(stage), code_(std::move(code)) {}

    Stage stage() const noexcept { return stage_; }
    const std::string& code() const noexcept { return code_; }

private:
    Stage stage_;
    std::string code_;
};

inline const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::input: return "input";
        case Stage::detection: return "detection";
        case Stage::orientation: return "orientation";
        case Stage::markers: return "markers";
        case Stage::calibration: return "calibration";
        case Stage::indicator: return "indicator";
        case Stage::ocr: return "ocr";
        case Stage::config: return "config";
        case Stage::io: return "io";
    }
    return "unknown";
}

inline int exit_code(Stage stage) {
    switch (stage) {
        case Stage::detection: return 10;
        case Stage::orientation: return 11;
        case Stage::markers: return 12;
        case Stage::calibration: return 13;
        case Stage::indicator: return 14;
        default: return 1;
    }
}

}  // namespace linscale
