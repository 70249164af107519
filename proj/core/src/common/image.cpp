#include "uipref/common/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>

#include "uipref/common/error.hpp"

namespace uipref {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw Error(ErrorKind::kInvalidInput, "image dimensions must be positive");
    }
    pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < pixels_.size(); i += 3) {
        pixels_[i] = fill.r;
        pixels_[i + 1] = fill.g;
        pixels_[i + 2] = fill.b;
    }
}

Rgb Image::at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    const auto i = (static_cast<std::size_t>(y) * width_ + x) * 3;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
}

void Image::fill_rect(int x, int y, int w, int h, Rgb c) {
    const int x0 = std::max(0, x);
    const int y0 = std::max(0, y);
    const int x1 = std::min(width_, x + w);
    const int y1 = std::min(height_, y + h);
    for (int yy = y0; yy < y1; ++yy) {
        for (int xx = x0; xx < x1; ++xx) set(xx, yy, c);
    }
}

void Image::stroke_rect(int x, int y, int w, int h, Rgb c) {
    if (w <= 0 || h <= 0) return;
    fill_rect(x, y, w, 1, c);
    fill_rect(x, y + h - 1, w, 1, c);
    fill_rect(x, y, 1, h, c);
    fill_rect(x + w - 1, y, 1, h, c);
}

namespace {

void write_to_string(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), len);
}

void flush_noop(png_structp) {}

struct ReadCursor {
    std::string_view bytes;
    std::size_t pos = 0;
};

void read_from_view(png_structp png, png_bytep data, png_size_t len) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + len > cur->bytes.size()) {
        png_error(png, "truncated png stream");
    }
    std::memcpy(data, cur->bytes.data() + cur->pos, len);
    cur->pos += len;
}

}  // namespace

std::string encode_png(const Image& image) {
    if (image.width() <= 0 || image.height() <= 0) {
        throw Error(ErrorKind::kInvalidInput, "cannot encode empty image");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::kIo, "png writer allocation failed");
    }
    std::string out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorKind::kIo, "png encoding failed");
    }
    png_set_write_fn(png, &out, write_to_string, flush_noop);
    png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    const auto stride = static_cast<std::size_t>(image.width()) * 3;
    for (int y = 0; y < image.height(); ++y) {
        auto* row = const_cast<png_bytep>(image.pixels().data() + stride * y);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

Image decode_png(std::string_view bytes) {
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
        throw Error(ErrorKind::kInvalidInput, "not a png stream");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::kIo, "png reader allocation failed");
    }
    ReadCursor cursor{bytes, 0};
    Image image;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(ErrorKind::kInvalidInput, "png decoding failed");
    }
    png_set_read_fn(png, &cursor, read_from_view);
    png_read_info(png, info);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_expand(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    image = Image(w, h);
    std::vector<png_byte> row(png_get_rowbytes(png, info));
    for (int y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < w; ++x) {
            image.set(x, y, {row[x * 3], row[x * 3 + 1], row[x * 3 + 2]});
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

bool png_dimensions(std::string_view bytes, int& width, int& height) {
    // signature (8) + length (4) + "IHDR" (4) + width (4) + height (4)
    if (bytes.size() < 24 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0 ||
        bytes.substr(12, 4) != "IHDR") {
        return false;
    }
    auto be32 = [&](std::size_t off) {
        return (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off])) << 24) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 1])) << 16) |
               (static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 2])) << 8) |
               static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + 3]));
    };
    width = static_cast<int>(be32(16));
    height = static_cast<int>(be32(20));
    return true;
}

Rgb color_from_hash(std::uint64_t h) {
    return {static_cast<std::uint8_t>(h & 0xff), static_cast<std::uint8_t>((h >> 8) & 0xff),
            static_cast<std::uint8_t>((h >> 16) & 0xff)};
}

}  // namespace uipref
