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

#include "crosspaint/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace crosspaint::rng {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

// Order-sensitive fold of a component into the running key.
std::uint64_t fold(std::uint64_t key, std::uint64_t comp) {
    return mix64(key + kGolden + mix64(comp));
}

}  // namespace

SeedPath::SeedPath(std::uint64_t master_seed)
    : key_(mix64(master_seed + kGolden)), desc_("seed:" + std::to_string(master_seed)) {}

SeedPath SeedPath::child(std::string_view component) const {
    SeedPath p = *this;
    p.key_ = fold(key_, fnv1a(component));
    p.desc_ += "/";
    p.desc_ += component;
    return p;
}

SeedPath SeedPath::child(std::uint64_t index) const {
    SeedPath p = *this;
    p.key_ = fold(key_, index ^ 0xA5A5A5A5A5A5A5A5ull);
    p.desc_ += "/" + std::to_string(index);
    return p;
}

std::uint64_t RandomStream::next_u64() {
    return mix64(key_ + (++counter_) * kGolden);
}

double RandomStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw std::invalid_argument("uniform_int: lo > hi");
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) {  // full 64-bit range
        return static_cast<std::int64_t>(next_u64());
    }
    // Rejection sampling for exact uniformity.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

double RandomStream::normal(double mu, double sigma) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mu + sigma * z;
}

namespace {

// Orthonormal frame with the given unit z column and a roll angle about it.
geom::Rotation frame_from_z_axis(const geom::Vec3& z, double roll) {
    const geom::Vec3 ref =
        std::abs(z.z()) < 0.9 ? geom::Vec3(0, 0, 1) : geom::Vec3(1, 0, 0);
    const geom::Vec3 x0 = ref.cross(z).normalized();
    const geom::Vec3 y0 = z.cross(x0);
    const double c = std::cos(roll), s = std::sin(roll);
    geom::Mat3 m;
    m.col(0) = c * x0 + s * y0;
    m.col(2) = z;
    m.col(1) = z.cross(m.col(0));
    return geom::Rotation::from_matrix(m);
}

geom::Vec3 spherical_dir(double zenith, double azimuth) {
    const double st = std::sin(zenith);
    return geom::Vec3(st * std::cos(azimuth), st * std::sin(azimuth), std::cos(zenith));
}

}  // namespace

geom::Pose sample_robot_pose(const RobotPoseSamplerConfig& cfg, RandomStream& stream) {
    geom::Pose p;
    for (int i = 0; i < 3; ++i) {
        p.translation[i] = cfg.box_lo[i] == cfg.box_hi[i]
                               ? cfg.box_lo[i]
                               : stream.uniform(cfg.box_lo[i], cfg.box_hi[i]);
    }
    double zenith;
    do {
        zenith = stream.normal(cfg.zenith_mean, cfg.zenith_std);
    } while (zenith < 0.0 || zenith > M_PI);
    const double azimuth = stream.uniform(0.0, 2.0 * M_PI);
    const double roll = stream.uniform(0.0, 2.0 * M_PI);
    p.rotation = frame_from_z_axis(spherical_dir(zenith, azimuth), roll);
    return p;
}

std::pair<cam::CameraExtrinsics, cam::CameraIntrinsics> sample_camera(
    const CameraSamplerConfig& cfg, const geom::Vec3& gripper_position,
    RandomStream& stream) {
    double r;
    do {
        r = stream.normal(cfg.radius_mean, cfg.radius_std);
    } while (r <= cfg.radius_min);
    double zenith;
    do {
        zenith = stream.normal(cfg.zenith_mean, cfg.zenith_std);
    } while (zenith < 0.0 || zenith > M_PI / 2.0);
    const double azimuth = stream.uniform(-cfg.azimuth_range, cfg.azimuth_range);
    const double fov = stream.uniform(cfg.fov_lo_deg, cfg.fov_hi_deg);

    const geom::Vec3 eye = gripper_position + r * spherical_dir(zenith, azimuth);
    cam::CameraExtrinsics extr = cam::look_at(eye, gripper_position, geom::Vec3(0, 0, 1));

    if (cfg.pos_noise > 0.0 || cfg.rot_noise > 0.0) {
        geom::Vec3 dt;
        for (int i = 0; i < 3; ++i) {
            dt[i] = stream.uniform(-cfg.pos_noise, cfg.pos_noise);
        }
        double e[3];
        for (double& a : e) {
            a = stream.uniform(-cfg.rot_noise, cfg.rot_noise);
        }
        extr.pose.translation += dt;
        extr.pose.rotation =
            extr.pose.rotation * geom::Rotation::from_euler_xyz(e[0], e[1], e[2]);
    }
    return {extr, cam::CameraIntrinsics::make(cfg.width, cfg.height, fov)};
}

geom::RigidTransform sample_view_perturbation(const ViAugConfig& cfg,
                                              RandomStream& stream) {
    auto draw = [&](double range) {
        return range == 0.0 ? 0.0 : stream.uniform(-range, range);
    };
    geom::RigidTransform t;
    t.translation = geom::Vec3(draw(cfg.tx_range), draw(cfg.ty_range), draw(cfg.tz_range));
    t.rotation = geom::Rotation::from_euler_xyz(
        draw(cfg.euler_range), draw(cfg.euler_range), draw(cfg.euler_range));
    return t;
}

int sample_brightness_delta(int range, RandomStream& stream) {
    if (range < 0) {
        throw std::invalid_argument("sample_brightness_delta: negative range");
    }
    if (range == 0) {
        return 0;
    }
    return static_cast<int>(stream.uniform_int(-range, range));
}

}  // namespace crosspaint::rng
