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
#include "crosspaint/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace crosspaint;
using img::Image8;

TEST_CASE("png round trips for gray, rgb and rgba") {
    rng::RandomStream s(rng::SeedPath(51).child("png"));
    for (const int channels : {1, 3, 4}) {
        Image8 src(37, 23, channels);
        for (auto& b : src.data) {
            b = static_cast<std::uint8_t>(s.uniform_int(0, 255));
        }
        const auto bytes = img::encode_png(src);
        const Image8 back = img::decode_png(bytes);
        CHECK(back.width == src.width);
        CHECK(back.height == src.height);
        CHECK(back.channels == src.channels);
        CHECK(back.data == src.data);
    }
}

TEST_CASE("mask png round trip") {
    img::MaskImage mask(16, 9);
    mask.set(3, 4, true);
    mask.set(15, 8, true);
    const auto back = img::decode_png_mask(img::encode_png(mask));
    CHECK(back.data == mask.data);
    CHECK(back.count() == 2);
}

TEST_CASE("png decoder rejects malformed input") {
    CHECK_THROWS_AS(img::decode_png({1, 2, 3, 4}), std::runtime_error);
}

TEST_CASE("depth blob round trip is bit-exact") {
    img::DepthImage d(11, 7);
    rng::RandomStream s(rng::SeedPath(52).child("depth"));
    for (auto& v : d.data) {
        v = static_cast<float>(s.uniform(0.0, 5.0));
    }
    d.at(2, 3) = 0.0f;
    const auto bytes = img::encode_depth(d);
    CHECK(bytes.size() == 8 + d.data.size() * 4);
    CHECK(bytes[0] == 'D');
    const auto back = img::decode_depth(bytes);
    CHECK(back.width == d.width);
    CHECK(back.height == d.height);
    for (std::size_t i = 0; i < d.data.size(); ++i) {
        CHECK(std::memcmp(&back.data[i], &d.data[i], 4) == 0);
    }
}

TEST_CASE("hsv conversion is stable at zero delta") {
    rng::RandomStream s(rng::SeedPath(53).child("hsv"));
    for (int i = 0; i < 100000; ++i) {
        const auto r = static_cast<std::uint8_t>(s.uniform_int(0, 255));
        const auto g = static_cast<std::uint8_t>(s.uniform_int(0, 255));
        const auto b = static_cast<std::uint8_t>(s.uniform_int(0, 255));
        const auto hsv = img::rgb_to_hsv(r, g, b);
        const auto back = img::hsv_to_rgb(hsv[0], hsv[1], hsv[2]);
        CHECK(std::abs(int(back[0]) - int(r)) <= 1);
        CHECK(std::abs(int(back[1]) - int(g)) <= 1);
        CHECK(std::abs(int(back[2]) - int(b)) <= 1);
    }
}

TEST_CASE("value-channel shift clamps at the extremes") {
    Image8 im(1, 1, 3);
    im.at(0, 0, 0) = im.at(0, 0, 1) = im.at(0, 0, 2) = 240;
    img::shift_value_channel(im, nullptr, 30);
    CHECK(im.at(0, 0, 0) == 255);
    CHECK(im.at(0, 0, 1) == 255);
    CHECK(im.at(0, 0, 2) == 255);

    Image8 dark(1, 1, 3);
    dark.at(0, 0, 0) = dark.at(0, 0, 1) = dark.at(0, 0, 2) = 10;
    img::shift_value_channel(dark, nullptr, -30);
    CHECK(dark.at(0, 0, 0) == 0);
}

TEST_CASE("zero delta leaves every pixel untouched") {
    rng::RandomStream s(rng::SeedPath(54).child("hsv"));
    Image8 im(32, 32, 3);
    for (auto& b : im.data) {
        b = static_cast<std::uint8_t>(s.uniform_int(0, 255));
    }
    Image8 copy = im;
    img::shift_value_channel(im, nullptr, 0);
    CHECK(im.data == copy.data);
}

TEST_CASE("shift respects the mask") {
    Image8 im(2, 1, 3, 100);
    img::MaskImage mask(2, 1);
    mask.set(0, 0, true);
    img::shift_value_channel(im, &mask, 50);
    CHECK(im.at(0, 0, 0) == 150);
    CHECK(im.at(1, 0, 0) == 100);
}

TEST_CASE("aspect-fill resize covers the target exactly") {
    Image8 wide(64, 16, 3, 200);
    const Image8 out = img::resize_aspect_fill(wide, 32, 32);
    CHECK(out.width == 32);
    CHECK(out.height == 32);
    CHECK(out.at(0, 0, 0) == 200);
    CHECK(out.at(31, 31, 2) == 200);
}

TEST_CASE("crc32 matches the reference value") {
    const std::string text = "123456789";
    CHECK(img::crc32(std::vector<std::uint8_t>(text.begin(), text.end())) ==
          0xCBF43926u);
}
