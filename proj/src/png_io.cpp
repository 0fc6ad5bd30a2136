#include <png.h>

#include <cstring>

#include "linscale/errors.hpp"
#include "linscale/raster.hpp"

namespace linscale {

bool png_supported() { return true; }

Image decode_png(std::string_view bytes) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
        throw Error(Stage::io, "BadImage", std::string("PNG decode failed: ") + img.message);
    }
    const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
    img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    const int channels = gray ? 1 : 3;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, data.data(), 0, nullptr)) {
        png_image_free(&img);
        throw Error(Stage::io, "BadImage", std::string("PNG decode failed: ") + img.message);
    }
    return Image(static_cast<int>(img.width), static_cast<int>(img.height), channels, std::move(data));
}

std::string encode_png(const Image& src) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(src.width());
    img.height = static_cast<png_uint_32>(src.height());
    img.format = src.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, src.data().data(), 0, nullptr)) {
        throw Error(Stage::io, "IoFailure", std::string("PNG encode failed: ") + img.message);
    }
    std::string out(size, '\0');
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, src.data().data(), 0, nullptr)) {
        throw Error(Stage::io, "IoFailure", std::string("PNG encode failed: ") + img.message);
    }
    out.resize(size);
    return out;
}

}  // namespace linscale
