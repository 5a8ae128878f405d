#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "graspbench/errors.hpp"

namespace graspbench {

// Row-major 8-bit image, 1 (gray) or 3 (RGB) channels.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> data;

    static Image8 make(int width, int height, int channels, std::uint8_t fill = 0) {
        Image8 img;
        img.width = width;
        img.height = height;
        img.channels = channels;
        img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
        return img;
    }

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const Image8& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

// Per-pixel depth in arbitrary units; NaN marks holes.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    static DepthMap make(int width, int height, float fill = 0.0f) {
        DepthMap d;
        d.width = width;
        d.height = height;
        d.data.assign(static_cast<std::size_t>(width) * height, fill);
        return d;
    }

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Binary object mask, 1 = object pixel.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    static Mask make(int width, int height, std::uint8_t fill = 0) {
        Mask m;
        m.width = width;
        m.height = height;
        m.data.assign(static_cast<std::size_t>(width) * height, fill);
        return m;
    }

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// PNG I/O. Reads collapse to 8-bit gray or RGB (palette expanded, alpha
// stripped); writes emit 8-bit gray/RGB.
Image8 read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image8& image);

// Header-only probe, avoids decoding pixel data.
std::pair<int, int> read_png_dims(const std::filesystem::path& path);

// Depth as 16-bit grayscale PNG holding values normalized to [0, 1]
// (value / 65535), or as a raw float32 array file ("GBDF" magic,
// little-endian u32 width/height then row-major float32; see
// docs/formats.md). read_depth dispatches on the file extension.
DepthMap read_depth_png16(const std::filesystem::path& path);
void write_depth_png16(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_depth_f32(const std::filesystem::path& path);
void write_depth_f32(const std::filesystem::path& path, const DepthMap& depth);
DepthMap read_depth(const std::filesystem::path& path);

// Masks are stored as 8-bit grayscale images; object pixels are >= 128.
Mask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);

}  // namespace graspbench
