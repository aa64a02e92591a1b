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

#include "crosspaint/dataset.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

using namespace crosspaint;
using data::Dataset;
using data::Trajectory;
using geom::Vec3;

namespace {

raster::Frame tiny_frame(std::uint8_t shade, double tx = 0.1) {
    raster::Frame f;
    f.rgb = img::Image8(4, 4, 3, shade);
    f.depth = img::DepthImage(4, 4, 1.5f);
    f.mask = img::MaskImage(4, 4, false);
    f.mask.set(1, 1, true);
    f.intrinsics = cam::CameraIntrinsics::make(4, 4, 60.0);
    f.extrinsics = cam::look_at(Vec3(1, 0, 1), Vec3(0, 0, 0.5), Vec3(0, 0, 1));
    f.gripper_pose = geom::Pose::from_translation(Vec3(tx, 0.2, 0.9));
    f.action = Action{ActionKind::AbsoluteTarget, f.gripper_pose, 0.5};
    return f;
}

Trajectory tiny_traj(const std::string& id, const std::string& robot,
                     const std::string& task, int frames = 2) {
    Trajectory t;
    t.id = id;
    t.robot = robot;
    t.task = task;
    for (int i = 0; i < frames; ++i) {
        t.frames.push_back(tiny_frame(static_cast<std::uint8_t>(40 + 10 * i),
                                      0.1 + 0.01 * i));
    }
    return t;
}

bool poses_bit_equal(const geom::Pose& a, const geom::Pose& b) {
    const auto va = a.to_seven(), vb = b.to_seven();
    return std::memcmp(va.data(), vb.data(), sizeof(va)) == 0;
}

}  // namespace

TEST_CASE("write/read round trip is bit-exact") {
    Dataset ds;
    ds.name = "roundtrip";
    ds.metadata = {{"control_rate_hz", 15}};
    Trajectory traj = tiny_traj("t0", "arm-a", "lift");
    data::ProvenanceEntry prov;
    prov.stage = "ro-aug:arm-a->arm-b";
    prov.config = {{"brightness_range", 30}};
    prov.seed_path = "seed(5)/ro-aug/t0";
    traj.provenance.push_back(prov);
    ds.trajectories.push_back(traj);

    const auto dir = std::filesystem::temp_directory_path() / "crosspaint-ds-rt";
    std::filesystem::remove_all(dir);
    data::write_dataset(ds, dir);
    const Dataset back = data::read_dataset(dir);

    REQUIRE(back.trajectories.size() == 1);
    const auto& bt = back.trajectories[0];
    CHECK(bt.id == "t0");
    CHECK(bt.robot == "arm-a");
    CHECK(bt.task == "lift");
    REQUIRE(bt.provenance.size() == 1);
    CHECK(bt.provenance[0].stage == prov.stage);
    CHECK(bt.provenance[0].config == prov.config);
    CHECK(bt.provenance[0].seed_path == prov.seed_path);
    CHECK(back.metadata.at("control_rate_hz") == 15);

    REQUIRE(bt.frames.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& a = traj.frames[i];
        const auto& b = bt.frames[i];
        CHECK(a.rgb.data == b.rgb.data);
        CHECK(a.mask.data == b.mask.data);
        CHECK(std::memcmp(a.depth.data.data(), b.depth.data.data(),
                          a.depth.data.size() * 4) == 0);
        CHECK(poses_bit_equal(a.gripper_pose, b.gripper_pose));
        CHECK(poses_bit_equal(a.extrinsics.pose, b.extrinsics.pose));
        REQUIRE(b.action.has_value());
        CHECK(poses_bit_equal(a.action->pose, b.action->pose));
        CHECK(a.action->gripper == b.action->gripper);
        CHECK(a.intrinsics.fov_v_deg == b.intrinsics.fov_v_deg);
    }

    // A second write of the same data produces the same content hash.
    const auto dir2 = std::filesystem::temp_directory_path() / "crosspaint-ds-rt2";
    std::filesystem::remove_all(dir2);
    data::write_dataset(back, dir2);
    CHECK(data::hash_dataset_dir(dir) == data::hash_dataset_dir(dir2));

    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("corrupted files fail the checksum and name the file") {
    Dataset ds;
    ds.name = "corrupt";
    ds.trajectories.push_back(tiny_traj("t0", "arm-a", "lift"));
    const auto dir = std::filesystem::temp_directory_path() / "crosspaint-ds-bad";
    std::filesystem::remove_all(dir);
    data::write_dataset(ds, dir);

    const auto victim = dir / "t0" / "frames" / "rgb_000000.png";
    REQUIRE(std::filesystem::exists(victim));
    {
        std::ofstream f(victim, std::ios::binary | std::ios::app);
        f << "tamper";
    }
    try {
        data::read_dataset(dir);
        FAIL("expected checksum error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("rgb_000000.png") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("alignment transforms poses and actions only") {
    Dataset ds;
    ds.name = "align";
    ds.trajectories.push_back(tiny_traj("t0", "arm-b", "push"));

    const Dataset same = data::apply_alignment(ds, geom::Pose::identity());
    CHECK(geom::approx_equal(same.trajectories[0].frames[0].gripper_pose,
                             ds.trajectories[0].frames[0].gripper_pose));
    CHECK(same.trajectories[0].provenance.size() == 1);
    CHECK(same.trajectories[0].provenance[0].stage == "align");

    const geom::RigidTransform shift = geom::Pose::from_translation(Vec3(0.3, 0, 0));
    const Dataset moved = data::apply_alignment(ds, shift);
    CHECK(moved.trajectories[0].frames[0].gripper_pose.translation.x() ==
          doctest::Approx(0.4));
    // Observations untouched.
    CHECK(moved.trajectories[0].frames[0].rgb.data ==
          ds.trajectories[0].frames[0].rgb.data);

    const Dataset back = data::apply_alignment(moved, shift.inverse());
    CHECK(geom::approx_equal(back.trajectories[0].frames[0].gripper_pose,
                             ds.trajectories[0].frames[0].gripper_pose, 1e-9));
    CHECK(geom::approx_equal(back.trajectories[0].frames[0].action->pose,
                             ds.trajectories[0].frames[0].action->pose, 1e-9));
}

TEST_CASE("cross product of four datasets") {
    auto make = [](const std::string& name, const std::string& robot,
                   const std::string& task) {
        Dataset d;
        d.name = name;
        for (int i = 0; i < 150; ++i) {
            d.trajectories.push_back(
                tiny_traj("t" + std::to_string(i), robot, task, 1));
        }
        return d;
    };
    const std::vector<Dataset> inputs = {
        make("d1-s", "arm-a", "task-1"), make("d2-t-to-s", "arm-a", "task-2"),
        make("d1-s-to-t", "arm-b", "task-1"), make("d2-t", "arm-b", "task-2")};

    const Dataset out = data::compose_cross_product(inputs);
    CHECK(out.trajectories.size() == 600);

    const auto st = data::stats(out);
    CHECK(st.total_trajectories == 600);
    REQUIRE(st.cells.size() == 4);
    for (const auto& cell : st.cells) {
        CHECK(cell.trajectories == 150);
    }
    // Every trajectory's provenance names its source dataset.
    for (const auto& t : out.trajectories) {
        REQUIRE_FALSE(t.provenance.empty());
        CHECK(t.provenance.back().stage == "compose");
        CHECK(t.provenance.back().config.contains("source_dataset"));
    }

    // Empty inputs are tolerated.
    std::vector<Dataset> with_empty = inputs;
    with_empty[1].trajectories.clear();
    const Dataset partial = data::compose_cross_product(with_empty);
    CHECK(partial.trajectories.size() == 450);
}

TEST_CASE("stats on a single trajectory") {
    Dataset ds;
    ds.name = "single";
    ds.trajectories.push_back(tiny_traj("t0", "arm-d", "stack", 3));
    const auto st = data::stats(ds);
    REQUIRE(st.cells.size() == 1);
    CHECK(st.cells[0].robot == "arm-d");
    CHECK(st.cells[0].task == "stack");
    CHECK(st.cells[0].frames == 3);
    CHECK(st.total_frames == 3);
    CHECK(st.gripper_bbox_lo.x() == doctest::Approx(0.1));
    CHECK(st.gripper_bbox_hi.x() == doctest::Approx(0.12));
    const auto j = st.to_json();
    CHECK(j.at("total_trajectories") == 1);
}

TEST_CASE("duplicate trajectory ids are rejected on write") {
    Dataset ds;
    ds.name = "dup";
    ds.trajectories.push_back(tiny_traj("t0", "arm-a", "lift"));
    ds.trajectories.push_back(tiny_traj("t0", "arm-b", "lift"));
    const auto dir = std::filesystem::temp_directory_path() / "crosspaint-ds-dup";
    std::filesystem::remove_all(dir);
    CHECK_THROWS(data::write_dataset(ds, dir));
    std::filesystem::remove_all(dir);
}
