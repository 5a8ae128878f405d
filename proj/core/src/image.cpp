#include "graspbench/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>

namespace graspbench {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        raise(Errc::io_error, "cannot open " + path.string());
    }
    return f;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) {
            raise(Errc::io_error, "libpng init failed");
        }
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) {
            raise(Errc::io_error, "libpng init failed");
        }
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

// Every libpng call runs inside one of these helpers: their frames hold the
// active setjmp and only trivial locals, so an error longjmp never crosses a
// dead frame or clobbers a nontrivial object.

bool decode_header_rgb(PngReader& reader, std::FILE* file, png_uint_32* width,
                       png_uint_32* height, int* channels) {
    if (setjmp(png_jmpbuf(reader.png))) return false;
    png_init_io(reader.png, file);
    png_read_info(reader.png, reader.info);
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(reader.png, reader.info, width, height, &bit_depth, &color_type,
                 nullptr, nullptr, nullptr);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(reader.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(reader.png);
    if (png_get_valid(reader.png, reader.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(reader.png);
    if (bit_depth == 16) png_set_strip_16(reader.png);
    if (color_type & PNG_COLOR_MASK_ALPHA ||
        png_get_valid(reader.png, reader.info, PNG_INFO_tRNS))
        png_set_strip_alpha(reader.png);
    png_read_update_info(reader.png, reader.info);
    *channels = png_get_channels(reader.png, reader.info);
    return true;
}

bool decode_header_gray(PngReader& reader, std::FILE* file, png_uint_32* width,
                        png_uint_32* height, int* bit_depth, bool* is_gray) {
    if (setjmp(png_jmpbuf(reader.png))) return false;
    png_init_io(reader.png, file);
    png_read_info(reader.png, reader.info);
    int color_type = 0;
    png_get_IHDR(reader.png, reader.info, width, height, bit_depth, &color_type,
                 nullptr, nullptr, nullptr);
    *is_gray = color_type == PNG_COLOR_TYPE_GRAY;
    if (!*is_gray) return true;
    if (*bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(reader.png);
        *bit_depth = 8;
    }
    png_read_update_info(reader.png, reader.info);
    return true;
}

bool decode_rows(png_structp png, png_bytep* rows) {
    if (setjmp(png_jmpbuf(png))) return false;
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

bool encode_image(PngWriter& writer, std::FILE* file, int width, int height,
                  int bit_depth, int color_type, png_bytep* rows) {
    if (setjmp(png_jmpbuf(writer.png))) return false;
    png_init_io(writer.png, file);
    png_set_IHDR(writer.png, writer.info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(writer.png, writer.info);
    for (int y = 0; y < height; ++y) {
        png_write_row(writer.png, rows[y]);
    }
    png_write_end(writer.png, nullptr);
    return true;
}

}  // namespace

Image8 read_png(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    PngReader reader;
    png_uint_32 width = 0, height = 0;
    int channels = 0;
    if (!decode_header_rgb(reader, file.get(), &width, &height, &channels)) {
        raise(Errc::parse_error, "corrupt PNG: " + path.string());
    }
    if (channels != 1 && channels != 3) {
        raise(Errc::parse_error, "unsupported channel count in " + path.string());
    }
    Image8 image =
        Image8::make(static_cast<int>(width), static_cast<int>(height), channels);
    std::vector<png_bytep> rows(height);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = image.data.data() + y * stride;
    }
    if (!decode_rows(reader.png, rows.data())) {
        raise(Errc::parse_error, "corrupt PNG: " + path.string());
    }
    return image;
}

std::pair<int, int> read_png_dims(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    PngReader reader;
    png_uint_32 width = 0, height = 0;
    int channels = 0;
    if (!decode_header_rgb(reader, file.get(), &width, &height, &channels)) {
        raise(Errc::parse_error, "corrupt PNG: " + path.string());
    }
    return {static_cast<int>(width), static_cast<int>(height)};
}

void write_png(const std::filesystem::path& path, const Image8& image) {
    if (image.width <= 0 || image.height <= 0 ||
        (image.channels != 1 && image.channels != 3)) {
        raise(Errc::shape_mismatch, "write_png requires a non-empty gray or RGB image");
    }
    FilePtr file = open_file(path, "wb");
    PngWriter writer;
    std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (int y = 0; y < image.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            const_cast<png_bytep>(image.data.data() + y * stride);
    }
    const int color_type =
        image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    if (!encode_image(writer, file.get(), image.width, image.height, 8, color_type,
                      rows.data())) {
        raise(Errc::io_error, "PNG write failed: " + path.string());
    }
}

DepthMap read_depth_png16(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    PngReader reader;
    png_uint_32 width = 0, height = 0;
    int bit_depth = 0;
    bool is_gray = false;
    if (!decode_header_gray(reader, file.get(), &width, &height, &bit_depth, &is_gray)) {
        raise(Errc::parse_error, "corrupt PNG: " + path.string());
    }
    if (!is_gray) {
        raise(Errc::parse_error, "depth PNG must be grayscale: " + path.string());
    }

    const std::size_t sample_bytes = bit_depth == 16 ? 2 : 1;
    const std::size_t stride = static_cast<std::size_t>(width) * sample_bytes;
    std::vector<std::uint8_t> buffer(stride * height);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = buffer.data() + y * stride;
    }
    if (!decode_rows(reader.png, rows.data())) {
        raise(Errc::parse_error, "corrupt PNG: " + path.string());
    }

    DepthMap depth = DepthMap::make(static_cast<int>(width), static_cast<int>(height));
    for (png_uint_32 y = 0; y < height; ++y) {
        const std::uint8_t* row = buffer.data() + y * stride;
        for (png_uint_32 x = 0; x < width; ++x) {
            // PNG stores 16-bit samples big-endian
            const float value =
                sample_bytes == 2
                    ? static_cast<float>(
                          (static_cast<unsigned>(row[2 * x]) << 8 | row[2 * x + 1]) /
                          65535.0)
                    : static_cast<float>(row[x] / 255.0);
            depth.at(static_cast<int>(x), static_cast<int>(y)) = value;
        }
    }
    return depth;
}

void write_depth_png16(const std::filesystem::path& path, const DepthMap& depth) {
    FilePtr file = open_file(path, "wb");
    PngWriter writer;
    const std::size_t stride = static_cast<std::size_t>(depth.width) * 2;
    std::vector<std::uint8_t> buffer(stride * depth.height);
    for (int y = 0; y < depth.height; ++y) {
        std::uint8_t* row = buffer.data() + static_cast<std::size_t>(y) * stride;
        for (int x = 0; x < depth.width; ++x) {
            float v = depth.at(x, y);
            if (!std::isfinite(v)) v = 0.0f;
            v = std::min(1.0f, std::max(0.0f, v));
            const auto q = static_cast<unsigned>(v * 65535.0f + 0.5f);
            row[2 * x] = static_cast<std::uint8_t>(q >> 8);
            row[2 * x + 1] = static_cast<std::uint8_t>(q & 0xFF);
        }
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(depth.height));
    for (int y = 0; y < depth.height; ++y) {
        rows[static_cast<std::size_t>(y)] =
            buffer.data() + static_cast<std::size_t>(y) * stride;
    }
    if (!encode_image(writer, file.get(), depth.width, depth.height, 16,
                      PNG_COLOR_TYPE_GRAY, rows.data())) {
        raise(Errc::io_error, "PNG write failed: " + path.string());
    }
}

namespace {
constexpr char kDepthMagic[4] = {'G', 'B', 'D', 'F'};
}

DepthMap read_depth_f32(const std::filesystem::path& path) {
    FilePtr file = open_file(path, "rb");
    char magic[4];
    std::uint32_t dims[2];
    if (std::fread(magic, 1, 4, file.get()) != 4 ||
        std::memcmp(magic, kDepthMagic, 4) != 0 ||
        std::fread(dims, 4, 2, file.get()) != 2) {
        raise(Errc::parse_error, "not a GBDF depth file: " + path.string());
    }
    DepthMap depth = DepthMap::make(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
    const std::size_t count = depth.data.size();
    if (std::fread(depth.data.data(), sizeof(float), count, file.get()) != count) {
        raise(Errc::parse_error, "truncated GBDF depth file: " + path.string());
    }
    return depth;
}

void write_depth_f32(const std::filesystem::path& path, const DepthMap& depth) {
    FilePtr file = open_file(path, "wb");
    const std::uint32_t dims[2] = {static_cast<std::uint32_t>(depth.width),
                                   static_cast<std::uint32_t>(depth.height)};
    if (std::fwrite(kDepthMagic, 1, 4, file.get()) != 4 ||
        std::fwrite(dims, 4, 2, file.get()) != 2 ||
        std::fwrite(depth.data.data(), sizeof(float), depth.data.size(), file.get()) !=
            depth.data.size()) {
        raise(Errc::io_error, "write failed: " + path.string());
    }
}

DepthMap read_depth(const std::filesystem::path& path) {
    if (path.extension() == ".f32") return read_depth_f32(path);
    return read_depth_png16(path);
}

Mask read_mask_png(const std::filesystem::path& path) {
    const Image8 image = read_png(path);
    Mask mask = Mask::make(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            // gray value for RGB inputs: first channel is enough for binary label art
            const std::uint8_t v = image.at(x, y, 0);
            mask.at(x, y) = v >= 128 ? 1 : 0;
        }
    }
    return mask;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
    Image8 image = Image8::make(mask.width, mask.height, 1);
    for (std::size_t i = 0; i < mask.data.size(); ++i) {
        image.data[i] = mask.data[i] ? 255 : 0;
    }
    write_png(path, image);
}

}  // namespace graspbench
