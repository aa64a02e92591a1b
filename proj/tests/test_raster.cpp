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

#include "crosspaint/raster.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

using namespace crosspaint;
using geom::Vec3;
using kin::JointConfig;

namespace {

// Two-joint chain whose only capsule is a unit sphere centered at (0,0,2):
// analytic ground truth for the ray-capsule intersection.
kin::KinematicChain sphere_chain() {
    kin::KinematicChain chain;
    chain.name = "sphere";
    kin::JointSpec j;
    j.axis = Vec3(0, 0, 1);
    chain.joints = {j, j};
    kin::Capsule c;
    c.p0 = c.p1 = Vec3(0, 0, 2);
    c.radius = 1.0;
    c.color = {250, 10, 10};
    kin::Capsule inner = c;  // hidden inside the sphere
    inner.radius = 0.5;
    chain.links = {kin::LinkGeometry{{c}}, kin::LinkGeometry{{inner}}};
    chain.home = {0.0, 0.0};
    chain.validate();
    return chain;
}

cam::CameraExtrinsics forward_camera() {
    return cam::look_at(Vec3(0, 0, 0), Vec3(0, 0, 1), Vec3(0, -1, 0));
}

}  // namespace

TEST_CASE("camera facing away sees nothing") {
    const auto reg = kin::ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-a");
    const auto intr = cam::CameraIntrinsics::make(64, 64, 60.0);
    const auto extr = cam::look_at(Vec3(3, 0, 0.5), Vec3(6, 0, 0.5), Vec3(0, 0, 1));
    const auto frame = raster::render(chain, JointConfig{chain.home}, intr, extr);
    CHECK(frame.mask.count() == 0);
    for (const float d : frame.depth.data) {
        CHECK(d == 0.0f);
    }
}

TEST_CASE("center-pixel depth of a unit sphere at z=2") {
    const auto chain = sphere_chain();
    const auto intr = cam::CameraIntrinsics::make(256, 256, 60.0);
    const auto frame = raster::render(chain, JointConfig{chain.home}, intr,
                                      forward_camera());
    CHECK(frame.mask.at(128, 128));
    CHECK(frame.depth.at(128, 128) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(frame.rgb.at(128, 128, 0) > 0);
}

TEST_CASE("mask shrinks as the robot recedes") {
    const auto reg = kin::ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-b");
    const auto intr = cam::CameraIntrinsics::make(128, 128, 60.0);
    std::size_t previous = SIZE_MAX;
    for (const double dist : {1.2, 1.8, 2.6}) {
        const auto extr =
            cam::look_at(Vec3(dist, 0.3, 0.9), Vec3(0, 0, 0.7), Vec3(0, 0, 1));
        const auto frame = raster::render(chain, JointConfig{chain.home}, intr, extr);
        CHECK(frame.mask.count() > 0);
        CHECK(frame.mask.count() < previous);
        previous = frame.mask.count();
    }
}

TEST_CASE("mask and depth stay consistent") {
    const auto reg = kin::ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-c");
    const auto intr = cam::CameraIntrinsics::make(96, 96, 55.0);
    const auto extr = cam::look_at(Vec3(1.2, -0.5, 1.1), Vec3(0, 0, 0.7), Vec3(0, 0, 1));
    const auto frame = raster::render(chain, JointConfig{chain.home}, intr, extr);
    for (int y = 0; y < 96; ++y) {
        for (int x = 0; x < 96; ++x) {
            CHECK(frame.mask.at(x, y) == (frame.depth.at(x, y) > 0.0f));
        }
    }
    // The gripper pose comes from forward kinematics.
    const auto fk = kin::forward_kinematics(chain, JointConfig{chain.home});
    CHECK(geom::approx_equal(frame.gripper_pose, fk.tip, 1e-12));
}

TEST_CASE("composite overlays robot pixels and clamps brightness") {
    const auto chain = sphere_chain();
    const auto intr = cam::CameraIntrinsics::make(64, 64, 60.0);
    const auto fg = raster::render(chain, JointConfig{chain.home}, intr,
                                   forward_camera());

    raster::BackgroundPlate plate;
    plate.rgb = img::Image8(64, 64, 3, 33);

    const auto out = raster::composite(fg, plate, 0);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            for (int c = 0; c < 3; ++c) {
                const auto expected = fg.mask.at(x, y) ? fg.rgb.at(x, y, c)
                                                       : plate.rgb.at(x, y, c);
                CHECK(out.rgb.at(x, y, c) == expected);
            }
        }
    }
    CHECK(out.mask.data == fg.mask.data);
    // Plate depth defaults to the far plane off-mask.
    CHECK(out.depth.at(0, 0) == raster::BackgroundPlate::kDefaultFarDepth);
    CHECK(out.depth.at(32, 32) == fg.depth.at(32, 32));

    raster::BackgroundPlate small;
    small.rgb = img::Image8(32, 32, 3);
    CHECK_THROWS_AS(raster::composite(fg, small, 0), std::invalid_argument);
}

TEST_CASE("background corpus pasting") {
    namespace fs = std::filesystem;
    const fs::path corpus = fs::temp_directory_path() / "crosspaint-corpus";
    fs::remove_all(corpus);
    fs::create_directories(corpus);
    for (int i = 0; i < 100; ++i) {
        img::Image8 im(8, 8, 3, static_cast<std::uint8_t>(i));
        img::write_png(corpus / ("bg_" + std::to_string(i) + ".png"), im);
    }
    // One undecodable file is skipped with a warning.
    std::ofstream(corpus / "junk.png") << "not a png";

    const auto files = raster::list_corpus(corpus);
    CHECK(files.size() == 100);

    const auto chain = sphere_chain();
    const auto intr = cam::CameraIntrinsics::make(8, 8, 60.0);
    const auto base = raster::render(chain, JointConfig{chain.home}, intr,
                                     forward_camera());
    std::vector<raster::Frame> frames(10000, base);

    const rng::SeedPath path = rng::SeedPath(77).child("paste-test");
    const auto out = raster::paste_on_background_corpus(frames, corpus, path, 0);
    REQUIRE(out.size() == frames.size());

    // Determinism: a second pass picks the same plates.
    const auto out2 = raster::paste_on_background_corpus(frames, corpus, path, 0);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(out[i].rgb.data == out2[i].rgb.data);
    }

    // Plate choice is uniform: chi-squared over 100 bins, p > 0.01.
    std::array<std::size_t, 100> hist{};
    for (const auto& f : out) {
        hist[f.rgb.at(0, 0, 0)]++;  // corner pixel encodes the plate id
    }
    const double expected = 10000.0 / 100.0;
    double chi2 = 0;
    for (const auto h : hist) {
        chi2 += (h - expected) * (h - expected) / expected;
    }
    CHECK(chi2 < 134.64);  // 99th percentile of chi-squared with df = 99

    // Single-image corpus: every frame shares that plate.
    const fs::path single = fs::temp_directory_path() / "crosspaint-corpus-1";
    fs::remove_all(single);
    fs::create_directories(single);
    img::write_png(single / "only.png", img::Image8(8, 8, 3, 7));
    const auto same =
        raster::paste_on_background_corpus({base, base, base}, single, path, 0);
    for (const auto& f : same) {
        CHECK(f.rgb.at(0, 0, 0) == 7);
    }

    const fs::path empty = fs::temp_directory_path() / "crosspaint-corpus-0";
    fs::remove_all(empty);
    fs::create_directories(empty);
    CHECK_THROWS_AS(raster::list_corpus(empty), std::runtime_error);

    fs::remove_all(corpus);
    fs::remove_all(single);
    fs::remove_all(empty);
}

TEST_CASE("rendering is deterministic") {
    const auto reg = kin::ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-d");
    const auto intr = cam::CameraIntrinsics::make(64, 64, 50.0);
    const auto extr = cam::look_at(Vec3(1.0, 0.6, 1.0), Vec3(0, 0, 0.6), Vec3(0, 0, 1));
    const auto a = raster::render(chain, JointConfig{chain.home}, intr, extr);
    const auto b = raster::render(chain, JointConfig{chain.home}, intr, extr);
    CHECK(a.rgb.data == b.rgb.data);
    CHECK(a.mask.data == b.mask.data);
    CHECK(std::memcmp(a.depth.data.data(), b.depth.data.data(),
                      a.depth.data.size() * 4) == 0);
}
