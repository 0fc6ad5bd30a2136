#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linscale/errors.hpp"
#include "linscale/raster.hpp"

namespace linscale {

namespace {

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::string_view bytes, std::size_t& pos) {
    for (;;) {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return std::string(bytes.substr(start, pos - start));
}

int parse_positive(const std::string& tok, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
        throw Error(Stage::io, "BadImage", std::string("invalid PNM ") + what + ": '" + tok + "'");
    }
    return std::stoi(tok);
}

}  // namespace

Image decode_pnm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw Error(Stage::io, "BadImage", "not a binary PPM (P6) or PGM (P5) image");
    }
    const int channels = bytes[1] == '6' ? 3 : 1;
    std::size_t pos = 2;
    const int w = parse_positive(next_token(bytes, pos), "width");
    const int h = parse_positive(next_token(bytes, pos), "height");
    const int maxval = parse_positive(next_token(bytes, pos), "maxval");
    if (maxval != 255) throw Error(Stage::io, "BadImage", "only 8-bit PNM (maxval 255) is supported");
    if (w < 1 || h < 1) throw Error(Stage::io, "BadImage", "PNM dimensions must be positive");
    ++pos;  // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(w) * h * channels;
    if (pos + need > bytes.size()) throw Error(Stage::io, "BadImage", "truncated PNM pixel data");
    std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return Image(w, h, channels, std::move(data));
}

std::string encode_pnm(const Image& img) {
    std::string out = (img.channels() == 3 ? "P6\n" : "P5\n") + std::to_string(img.width()) + " " +
                      std::to_string(img.height()) + "\n255\n";
    const auto d = img.data();
    out.append(reinterpret_cast<const char*>(d.data()), d.size());
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Stage::io, "IoFailure", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Stage::io, "IoFailure", "cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Stage::io, "IoFailure", "short write to " + path);
}

Image read_image(const std::string& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.compare(1, 3, "PNG") == 0) {
        return decode_png(bytes);
    }
    return decode_pnm(bytes);
}

void write_image(const std::string& path, const Image& img) {
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".png" || ext == ".PNG") {
        write_file(path, encode_png(img));
    } else {
        write_file(path, encode_pnm(img));
    }
}

#ifndef LINSCALE_HAVE_PNG
bool png_supported() { return false; }
Image decode_png(std::string_view) {
    throw Error(Stage::io, "Unsupported", "built without PNG support (LINSCALE_WITH_PNG=OFF)");
}
std::string encode_png(const Image&) {
    throw Error(Stage::io, "Unsupported", "built without PNG support (LINSCALE_WITH_PNG=OFF)");
}
#endif

}  // namespace linscale
