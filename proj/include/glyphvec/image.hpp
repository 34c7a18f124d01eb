#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace glyphvec {

// 8-bit grayscale raster, row-major, row 0 at the top.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    RasterImage() = default;
    RasterImage(int w, int h, std::uint8_t fill = 255);

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Foreground/background mask with the same layout as RasterImage.
// Foreground (1) means glyph ink.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryImage() = default;
    BinaryImage(int w, int h);

    bool at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t foreground_count() const;
};

// Number of 8-connected foreground components.
int count_components_8(const BinaryImage& mask);

// PNG (8-bit grayscale; color/paletted inputs are converted) and binary
// PGM (P5) codecs. Loading dispatches on the file's magic bytes.
RasterImage load_image(const std::string& path);
RasterImage decode_png(const std::vector<std::uint8_t>& bytes);
RasterImage decode_pgm(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> encode_png(const RasterImage& image);
std::vector<std::uint8_t> encode_pgm(const RasterImage& image);
void save_png(const RasterImage& image, const std::string& path);
void save_pgm(const RasterImage& image, const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);
void write_file(const std::string& path, const std::string& text);

} // namespace glyphvec
