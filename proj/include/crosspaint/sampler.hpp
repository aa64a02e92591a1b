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

#include "crosspaint/camera.hpp"
#include "crosspaint/geometry.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crosspaint::rng {

/// Hierarchical seed path: a master seed plus an ordered list of components
/// (stage ids, trajectory ids, frame indices). The derived stream is a pure
/// function of (master_seed, path), so per-frame work can run on any worker
/// in any order without changing outputs.
class SeedPath {
public:
    explicit SeedPath(std::uint64_t master_seed);

    SeedPath child(std::string_view component) const;
    SeedPath child(std::uint64_t index) const;

    std::uint64_t key() const { return key_; }
    const std::string& description() const { return desc_; }

private:
    std::uint64_t key_;
    std::string desc_;
};

/// Counter-based random stream: the i-th output is a mix of (key, i), with no
/// sequential state beyond the counter.
class RandomStream {
public:
    explicit RandomStream(const SeedPath& path) : key_(path.key()) {}
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64();
    double uniform01();                        // [0, 1)
    double uniform(double lo, double hi);      // [lo, hi)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive, unbiased
    double normal(double mu, double sigma);    // Box-Muller, two uniforms per draw

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline RandomStream derive_stream(const SeedPath& path) { return RandomStream(path); }

/// End-effector pose sampling ranges for paired-image generation.
struct RobotPoseSamplerConfig {
    geom::Vec3 box_lo{-0.25, -0.25, 0.6};
    geom::Vec3 box_hi{0.25, 0.25, 1.3};
    double zenith_mean = M_PI;        // gripper z-axis biased downward
    double zenith_std = M_PI / 3.5;
};

/// Camera sampling: eye on a hemisphere centered at the gripper position.
struct CameraSamplerConfig {
    double radius_mean = 0.85;
    double radius_std = 0.2;
    double radius_min = 0.2;          // rejection bound
    double zenith_mean = M_PI / 4.0;
    double zenith_std = M_PI / 2.2;   // rejected to [0, pi/2]
    double azimuth_range = M_PI * 3.7 / 4.0;  // uniform in +/- this
    double fov_lo_deg = 40.0;
    double fov_hi_deg = 70.0;
    double pos_noise = 0.02;          // uniform +/- meters per axis
    double rot_noise = 0.02;          // uniform +/- radians per Euler axis
    int width = 256;
    int height = 256;
};

enum class PerturbationMode { Consistent, Inconsistent };

/// Viewpoint-perturbation box ranges (camera frame; y is the image-vertical
/// axis and gets a tighter default range).
struct ViAugConfig {
    double tx_range = 0.25;
    double ty_range = 0.1;
    double tz_range = 0.25;
    double euler_range = 0.1;
    PerturbationMode mode = PerturbationMode::Inconsistent;
};

/// Uniform box translation; gripper z-axis direction from spherical angles
/// (zenith rejected to [0, pi], azimuth uniform), roll about that axis uniform.
geom::Pose sample_robot_pose(const RobotPoseSamplerConfig& cfg, RandomStream& stream);

/// Hemisphere camera around the gripper, looking at it, with sampled fov and
/// small pose noise.
std::pair<cam::CameraExtrinsics, cam::CameraIntrinsics> sample_camera(
    const CameraSamplerConfig& cfg, const geom::Vec3& gripper_position,
    RandomStream& stream);

/// Camera-frame SE(3) perturbation, each component uniform in its range.
geom::RigidTransform sample_view_perturbation(const ViAugConfig& cfg,
                                              RandomStream& stream);

/// Uniform integer in [-range, +range].
int sample_brightness_delta(int range, RandomStream& stream);

}  // namespace crosspaint::rng
