#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uipref {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB raster. Blobs exchanged with backends are PNG-encoded.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {255, 255, 255});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);

    /// Fills the rectangle clipped to the raster bounds.
    void fill_rect(int x, int y, int w, int h, Rgb c);
    void stroke_rect(int x, int y, int w, int h, Rgb c);

    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

std::string encode_png(const Image& image);
Image decode_png(std::string_view bytes);

/// Reads only the IHDR dimensions of a PNG stream.
bool png_dimensions(std::string_view bytes, int& width, int& height);

Rgb color_from_hash(std::uint64_t h);

}  // namespace uipref
