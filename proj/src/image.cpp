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

#include "crosspaint/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace crosspaint::img {

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32_be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& payload) {
    put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
    const std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    const std::uint32_t crc = ::crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
    put_u32_be(out, crc);
}

constexpr std::uint8_t kPngSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::vector<std::uint8_t> encode_png_raw(int width, int height, int channels,
                                         const std::uint8_t* pixels) {
    if (width <= 0 || height <= 0 ||
        (channels != 1 && channels != 3 && channels != 4)) {
        throw std::invalid_argument("encode_png: unsupported image shape");
    }
    const std::size_t rowbytes = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw;
    raw.reserve((rowbytes + 1) * height);
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter type: none
        raw.insert(raw.end(), pixels + y * rowbytes, pixels + (y + 1) * rowbytes);
    }

    uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_size);
    if (compress2(comp.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw std::runtime_error("encode_png: deflate failed");
    }
    comp.resize(comp_size);

    std::vector<std::uint8_t> out(kPngSig, kPngSig + 8);
    std::vector<std::uint8_t> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(channels == 1 ? 0 : channels == 3 ? 2 : 6);  // color type
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", comp);
    append_chunk(out, "IEND", {});
    return out;
}

int paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

Image8 decode_png_impl(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSig, 8) != 0) {
        throw std::runtime_error("decode_png: not a PNG");
    }
    std::size_t pos = 8;
    int width = 0, height = 0, bit_depth = 0, color_type = 0, interlace = 0;
    std::vector<std::uint8_t> idat;
    bool saw_ihdr = false;
    while (pos + 12 <= bytes.size()) {
        const std::uint32_t len = get_u32_be(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) {
            throw std::runtime_error("decode_png: truncated chunk");
        }
        const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
        const std::uint8_t* payload = &bytes[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            width = static_cast<int>(get_u32_be(payload));
            height = static_cast<int>(get_u32_be(payload + 4));
            bit_depth = payload[8];
            color_type = payload[9];
            interlace = payload[12];
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            break;
        }
        pos += 12 + len;
    }
    if (!saw_ihdr || width <= 0 || height <= 0) {
        throw std::runtime_error("decode_png: missing IHDR");
    }
    if (bit_depth != 8 || interlace != 0 ||
        (color_type != 0 && color_type != 2 && color_type != 4 && color_type != 6)) {
        throw std::runtime_error("decode_png: unsupported PNG variant");
    }
    const int channels = color_type == 0 ? 1 : color_type == 2 ? 3 : color_type == 4 ? 2 : 4;
    const std::size_t rowbytes = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw((rowbytes + 1) * height);
    uLongf raw_size = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_size, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        raw_size != raw.size()) {
        throw std::runtime_error("decode_png: inflate failed");
    }

    Image8 out(width, height, channels);
    const int bpp = channels;  // bytes per pixel at depth 8
    for (int y = 0; y < height; ++y) {
        const std::uint8_t filter = raw[y * (rowbytes + 1)];
        const std::uint8_t* src = &raw[y * (rowbytes + 1) + 1];
        std::uint8_t* cur = &out.data[y * rowbytes];
        const std::uint8_t* prev = y > 0 ? &out.data[(y - 1) * rowbytes] : nullptr;
        for (std::size_t i = 0; i < rowbytes; ++i) {
            const int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
            const int b = prev ? prev[i] : 0;
            const int c = (prev && i >= static_cast<std::size_t>(bpp)) ? prev[i - bpp] : 0;
            int v = src[i];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (a + b) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default: throw std::runtime_error("decode_png: bad row filter");
            }
            cur[i] = static_cast<std::uint8_t>(v & 0xFF);
        }
    }
    // Gray+alpha is not a shape the rest of the code handles; drop alpha.
    if (channels == 2) {
        Image8 gray(width, height, 1);
        for (std::size_t i = 0; i < gray.data.size(); ++i) {
            gray.data[i] = out.data[i * 2];
        }
        return gray;
    }
    return out;
}

}  // namespace

std::size_t MaskImage::count() const {
    return static_cast<std::size_t>(
        std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

std::vector<std::uint8_t> encode_png(const Image8& image) {
    return encode_png_raw(image.width, image.height, image.channels, image.data.data());
}

std::vector<std::uint8_t> encode_png(const MaskImage& mask) {
    return encode_png_raw(mask.width, mask.height, 1, mask.data.data());
}

Image8 decode_png(const std::vector<std::uint8_t>& bytes) {
    return decode_png_impl(bytes);
}

MaskImage decode_png_mask(const std::vector<std::uint8_t>& bytes) {
    const Image8 gray = decode_png_impl(bytes);
    MaskImage mask(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            mask.set(x, y, gray.at(x, y, 0) >= 128);
        }
    }
    return mask;
}

void write_png(const std::filesystem::path& path, const Image8& image) {
    write_file(path, encode_png(image));
}

void write_png(const std::filesystem::path& path, const MaskImage& mask) {
    write_file(path, encode_png(mask));
}

Image8 read_png(const std::filesystem::path& path) {
    return decode_png(read_file(path));
}

MaskImage read_png_mask(const std::filesystem::path& path) {
    return decode_png_mask(read_file(path));
}

std::vector<std::uint8_t> encode_depth(const DepthImage& depth) {
    if (depth.width < 0 || depth.width > 0xFFFF || depth.height < 0 || depth.height > 0xFFFF) {
        throw std::invalid_argument("encode_depth: dimensions exceed u16");
    }
    std::vector<std::uint8_t> out;
    out.reserve(8 + depth.data.size() * 4);
    out.insert(out.end(), {'D', 'P', 'T', 'H'});
    auto put_u16 = [&](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    put_u16(static_cast<std::uint16_t>(depth.width));
    put_u16(static_cast<std::uint16_t>(depth.height));
    for (float f : depth.data) {
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
        out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
        out.push_back(static_cast<std::uint8_t>(bits >> 24));
    }
    return out;
}

DepthImage decode_depth(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), "DPTH", 4) != 0) {
        throw std::runtime_error("decode_depth: bad magic");
    }
    const int w = bytes[4] | (bytes[5] << 8);
    const int h = bytes[6] | (bytes[7] << 8);
    const std::size_t n = static_cast<std::size_t>(w) * h;
    if (bytes.size() != 8 + n * 4) {
        throw std::runtime_error("decode_depth: size mismatch");
    }
    DepthImage out(w, h);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = std::uint32_t(bytes[8 + i * 4]) |
                             (std::uint32_t(bytes[9 + i * 4]) << 8) |
                             (std::uint32_t(bytes[10 + i * 4]) << 16) |
                             (std::uint32_t(bytes[11 + i * 4]) << 24);
        std::memcpy(&out.data[i], &bits, 4);
    }
    return out;
}

void write_depth(const std::filesystem::path& path, const DepthImage& depth) {
    write_file(path, encode_depth(depth));
}

DepthImage read_depth(const std::filesystem::path& path) {
    return decode_depth(read_file(path));
}

std::array<double, 3> rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    const double d = mx - mn;
    double h = 0.0;
    if (d > 0.0) {
        if (mx == r) {
            h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
        } else if (mx == g) {
            h = 60.0 * ((b - r) / d + 2.0);
        } else {
            h = 60.0 * ((r - g) / d + 4.0);
        }
    }
    const double s = mx > 0.0 ? d / mx : 0.0;
    return {h, s, mx};
}

std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v) {
    h = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0);
    const double c = v * s;
    const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    const double m = v - c;
    double r = 0, g = 0, b = 0;
    if (h < 60) { r = c; g = x; }
    else if (h < 120) { r = x; g = c; }
    else if (h < 180) { g = c; b = x; }
    else if (h < 240) { g = x; b = c; }
    else if (h < 300) { r = x; b = c; }
    else { r = c; b = x; }
    auto to8 = [&](double f) {
        return static_cast<std::uint8_t>(
            std::clamp(std::floor((f + m) * 255.0 + 0.5), 0.0, 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

void shift_value_channel(Image8& image, const MaskImage* mask, int delta) {
    if (image.channels < 3) {
        throw std::invalid_argument("shift_value_channel: needs RGB image");
    }
    if (mask && (mask->width != image.width || mask->height != image.height)) {
        throw std::invalid_argument("shift_value_channel: mask dimension mismatch");
    }
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (mask && !mask->at(x, y)) {
                continue;
            }
            if (delta == 0) {
                continue;  // exact no-op, no conversion round trip
            }
            auto [h, s, v] = rgb_to_hsv(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2));
            v = std::clamp(v + delta / 255.0, 0.0, 1.0);
            const auto rgb = hsv_to_rgb(h, s, v);
            image.at(x, y, 0) = rgb[0];
            image.at(x, y, 1) = rgb[1];
            image.at(x, y, 2) = rgb[2];
        }
    }
}

Image8 resize_aspect_fill(const Image8& src, int width, int height) {
    if (src.width <= 0 || src.height <= 0 || width <= 0 || height <= 0) {
        throw std::invalid_argument("resize_aspect_fill: empty image");
    }
    const double scale = std::max(static_cast<double>(width) / src.width,
                                  static_cast<double>(height) / src.height);
    const double crop_w = width / scale;
    const double crop_h = height / scale;
    const double x0 = (src.width - crop_w) * 0.5;
    const double y0 = (src.height - crop_h) * 0.5;

    Image8 out(width, height, src.channels);
    for (int y = 0; y < height; ++y) {
        const double sy = y0 + (y + 0.5) * crop_h / height - 0.5;
        const int iy = static_cast<int>(std::floor(sy));
        const double fy = sy - iy;
        const int y1 = std::clamp(iy, 0, src.height - 1);
        const int y2 = std::clamp(iy + 1, 0, src.height - 1);
        for (int x = 0; x < width; ++x) {
            const double sx = x0 + (x + 0.5) * crop_w / width - 0.5;
            const int ix = static_cast<int>(std::floor(sx));
            const double fx = sx - ix;
            const int x1 = std::clamp(ix, 0, src.width - 1);
            const int x2 = std::clamp(ix + 1, 0, src.width - 1);
            for (int c = 0; c < src.channels; ++c) {
                const double top = src.at(x1, y1, c) * (1 - fx) + src.at(x2, y1, c) * fx;
                const double bot = src.at(x1, y2, c) * (1 - fx) + src.at(x2, y2, c) * fx;
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp(std::floor(top * (1 - fy) + bot * fy + 0.5), 0.0, 255.0));
            }
        }
    }
    return out;
}

std::uint32_t crc32(const std::vector<std::uint8_t>& bytes) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path.string());
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("short write: " + path.string());
    }
}

}  // namespace crosspaint::img
