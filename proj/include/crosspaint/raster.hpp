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

#include "crosspaint/action.hpp"
#include "crosspaint/camera.hpp"
#include "crosspaint/image.hpp"
#include "crosspaint/kinematics.hpp"
#include "crosspaint/sampler.hpp"

#include <optional>

namespace crosspaint::raster {

/// One timestep: RGB + depth + robot mask under a camera, plus the gripper
/// pose (robot base frame == world frame) and optionally the action taken.
struct Frame {
    img::Image8 rgb;
    img::DepthImage depth;   // 0 = invalid / no geometry
    img::MaskImage mask;     // robot pixels
    cam::CameraIntrinsics intrinsics;
    cam::CameraExtrinsics extrinsics;
    geom::Pose gripper_pose;
    std::optional<Action> action;
};

struct BackgroundPlate {
    img::Image8 rgb;
    std::optional<img::DepthImage> depth;  // absent: constant far plane
    static constexpr float kDefaultFarDepth = 3.0f;
};

struct RenderOptions {
    geom::Vec3 light_dir{0.3, 0.25, -1.0};  // world frame, toward the scene
    double ambient = 0.35;
};

/// Depth-buffered capsule rasterizer: per-pixel analytic ray-capsule
/// intersection, nearest hit wins. Flat shading with one directional light.
/// Deterministic for identical inputs.
Frame render(const kin::KinematicChain& chain, const kin::JointConfig& q,
             const cam::CameraIntrinsics& intrinsics,
             const cam::CameraExtrinsics& extrinsics,
             const RenderOptions& opts = {});

/// Pastes fg's robot pixels (per fg.mask) onto the plate, shifting their HSV
/// value channel by brightness_delta first. Depth takes the robot depth on
/// mask pixels and the plate depth elsewhere. Poses and actions pass through.
Frame composite(const Frame& fg, const BackgroundPlate& plate, int brightness_delta);

/// Lists the decodable images of a corpus directory in sorted order;
/// undecodable files are skipped with a warning on stderr. Throws
/// std::runtime_error when nothing decodable remains.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& corpus_dir);

/// Per frame: picks a corpus image via the frame's seed path child, resizes it
/// (bilinear, aspect-fill, center-crop) and composites the frame onto it.
std::vector<Frame> paste_on_background_corpus(const std::vector<Frame>& frames,
                                              const std::filesystem::path& corpus_dir,
                                              const rng::SeedPath& seed_path,
                                              int brightness_range = 0);

}  // namespace crosspaint::raster
