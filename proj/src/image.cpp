#include "glyphvec/image.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <queue>

#include "glyphvec/error.hpp"

namespace glyphvec {

RasterImage::RasterImage(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw PreconditionError("RasterImage dimensions must be >= 1");
    pixels.assign(static_cast<std::size_t>(w) * h, fill);
}

BinaryImage::BinaryImage(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw PreconditionError("BinaryImage dimensions must be >= 1");
    bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t BinaryImage::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t b : bits)
        n += b;
    return n;
}

int count_components_8(const BinaryImage& mask) {
    std::vector<std::uint8_t> seen(mask.bits.size(), 0);
    int components = 0;
    std::queue<std::pair<int, int>> queue;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            std::size_t idx = static_cast<std::size_t>(y) * mask.width + x;
            if (!mask.bits[idx] || seen[idx])
                continue;
            ++components;
            seen[idx] = 1;
            queue.emplace(x, y);
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop();
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0)
                            continue;
                        int nx = cx + dx, ny = cy + dy;
                        if (!mask.in_bounds(nx, ny))
                            continue;
                        std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
                        if (mask.bits[nidx] && !seen[nidx]) {
                            seen[nidx] = 1;
                            queue.emplace(nx, ny);
                        }
                    }
                }
            }
        }
    }
    return components;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed: " + path);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open file for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------- PNG

namespace {

struct PngReadState {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (state->pos + count > state->size)
        png_error(png, "unexpected end of PNG data");
    std::memcpy(out, state->data + state->pos, count);
    state->pos += count;
}

void png_write_to_memory(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

} // namespace

RasterImage decode_png(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw IoError("not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    RasterImage image;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed");
    }

    PngReadState state{bytes.data(), bytes.size(), 0};
    png_set_read_fn(png, &state, png_read_from_memory);
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);
    int color_type = png_get_color_type(png, info);
    int bit_depth = png_get_bit_depth(png, info);

    // Normalize everything to 8-bit grayscale.
    bool has_trns = png_get_valid(png, info, PNG_INFO_tRNS) != 0;
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (has_trns)
        png_set_tRNS_to_alpha(png);
    if (bit_depth == 16)
        png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE || color_type == PNG_COLOR_TYPE_RGB ||
        color_type == PNG_COLOR_TYPE_RGB_ALPHA)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    if (color_type == PNG_COLOR_TYPE_RGB_ALPHA || color_type == PNG_COLOR_TYPE_GRAY_ALPHA ||
        has_trns)
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    image = RasterImage(static_cast<int>(width), static_cast<int>(height));
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y)
        rows[y] = image.pixels.data() + static_cast<std::size_t>(y) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

std::vector<std::uint8_t> encode_png(const RasterImage& image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed");
    }

    png_set_write_fn(png, &out, png_write_to_memory, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(
            image.pixels.data() + static_cast<std::size_t>(y) * image.width);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

// ---------------------------------------------------------------- PGM

RasterImage decode_pgm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> long {
        skip_space();
        long v = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any)
            throw IoError("malformed PGM header");
        return v;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw IoError("not a binary PGM (P5) file");
    pos = 2;
    long width = read_int();
    long height = read_int();
    long maxval = read_int();
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw IoError("invalid PGM dimensions");
    if (pos >= bytes.size() || !std::isspace(bytes[pos]))
        throw IoError("malformed PGM header");
    ++pos; // single whitespace byte before raster data

    RasterImage image(static_cast<int>(width), static_cast<int>(height));
    std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (maxval < 256) {
        if (bytes.size() - pos < count)
            throw IoError("truncated PGM data");
        std::memcpy(image.pixels.data(), bytes.data() + pos, count);
        if (maxval != 255)
            for (auto& p : image.pixels)
                p = static_cast<std::uint8_t>(p * 255L / maxval);
    } else {
        if (bytes.size() - pos < count * 2)
            throw IoError("truncated PGM data");
        for (std::size_t i = 0; i < count; ++i) {
            long v = (static_cast<long>(bytes[pos + 2 * i]) << 8) | bytes[pos + 2 * i + 1];
            image.pixels[i] = static_cast<std::uint8_t>(v * 255L / maxval);
        }
    }
    return image;
}

std::vector<std::uint8_t> encode_pgm(const RasterImage& image) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", image.width, image.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

RasterImage load_image(const std::string& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0)
        return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5')
        return decode_pgm(bytes);
    throw IoError("unsupported image format (expected PNG or binary PGM): " + path);
}

void save_png(const RasterImage& image, const std::string& path) {
    write_file(path, encode_png(image));
}

void save_pgm(const RasterImage& image, const std::string& path) {
    write_file(path, encode_pgm(image));
}

} // namespace glyphvec
