/*
 Copyright 2026 The crosspaint authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace crosspaint::img {

/// Interleaved 8-bit image, 1 (gray), 3 (RGB) or 4 (RGBA) channels.
struct Image8 {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    bool same_shape(const Image8& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// Per-pixel depth in meters; 0 marks invalid / no geometry.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    DepthImage() = default;
    DepthImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary mask stored as 0 / 255 bytes (the PNG wire form).
struct MaskImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    MaskImage() = default;
    MaskImage(int w, int h, bool fill = false)
        : width(w), height(h),
          data(static_cast<std::size_t>(w) * h, fill ? 255 : 0) {}

    bool at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        data[static_cast<std::size_t>(y) * width + x] = v ? 255 : 0;
    }
    std::size_t count() const;
};

// --- PNG (8-bit gray/RGB/RGBA, non-interlaced) ---

std::vector<std::uint8_t> encode_png(const Image8& image);
std::vector<std::uint8_t> encode_png(const MaskImage& mask);
Image8 decode_png(const std::vector<std::uint8_t>& bytes);  // throws on malformed input
MaskImage decode_png_mask(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const Image8& image);
void write_png(const std::filesystem::path& path, const MaskImage& mask);
Image8 read_png(const std::filesystem::path& path);
MaskImage read_png_mask(const std::filesystem::path& path);

// --- Depth blob: 8-byte header (magic "DPTH", u16 LE width, u16 LE height)
//     followed by row-major little-endian 32-bit floats. ---

std::vector<std::uint8_t> encode_depth(const DepthImage& depth);
DepthImage decode_depth(const std::vector<std::uint8_t>& bytes);
void write_depth(const std::filesystem::path& path, const DepthImage& depth);
DepthImage read_depth(const std::filesystem::path& path);

// --- Color ---

/// Standard hexcone conversions; h in [0, 360), s and v in [0, 1].
std::array<double, 3> rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v);

/// Shifts the HSV value channel of masked pixels by delta (8-bit units),
/// clamped to [0, 255]. Pass nullptr to shift every pixel.
void shift_value_channel(Image8& image, const MaskImage* mask, int delta);

/// Bilinear resize to (width, height) with aspect-fill and center crop.
Image8 resize_aspect_fill(const Image8& src, int width, int height);

// --- Misc ---

std::uint32_t crc32(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

}  // namespace crosspaint::img
