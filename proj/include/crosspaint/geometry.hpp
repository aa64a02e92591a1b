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

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <stdexcept>

namespace crosspaint::geom {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// 3D rotation stored as an orthonormal matrix. When the rotation was
/// constructed from a quaternion the original (canonicalized) quaternion is
/// kept so that serialization round trips are byte-stable.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Builds from a matrix; re-orthonormalizes via polar decomposition when
    /// the orthonormality drift exceeds 1e-9. Throws std::invalid_argument if
    /// the input is not close to a proper rotation (det <= 0 or wild drift).
    static Rotation from_matrix(const Mat3& m);

    /// Builds from a (not necessarily unit) quaternion.
    static Rotation from_quaternion(double w, double x, double y, double z);

    /// Intrinsic XYZ Euler angles, radians: R = Rx(rx) * Ry(ry) * Rz(rz).
    static Rotation from_euler_xyz(double rx, double ry, double rz);

    static Rotation about_x(double angle);
    static Rotation about_y(double angle);
    static Rotation about_z(double angle);
    static Rotation from_axis_angle(const Vec3& axis, double angle);

    const Mat3& matrix() const { return m_; }

    /// Canonical unit quaternion (w, x, y, z) with w >= 0.
    std::array<double, 4> quaternion() const;

    struct EulerXyz {
        double rx, ry, rz;
        bool gimbal_lock;  // |ry| within ~1e-6 of pi/2; rz forced to 0
    };
    EulerXyz to_euler_xyz() const;

    Rotation inverse() const;
    Rotation operator*(const Rotation& rhs) const;
    Vec3 operator*(const Vec3& v) const { return m_ * v; }

    /// Geodesic distance to another rotation, radians in [0, pi].
    double angle_to(const Rotation& other) const;

    /// Max-abs deviation of R * R^T from identity.
    double orthonormality_drift() const;

private:
    Mat3 m_;
    mutable std::optional<std::array<double, 4>> cached_quat_;
};

/// Rigid pose: rotation plus translation in meters. Also used as a
/// frame-change operator (RigidTransform alias below).
struct Pose {
    Rotation rotation;
    Vec3 translation{0.0, 0.0, 0.0};

    static Pose identity() { return Pose{}; }
    static Pose from_translation(const Vec3& t) { return Pose{Rotation{}, t}; }

    Pose inverse() const;
    Pose operator*(const Pose& rhs) const;  // apply rhs, then this
    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    /// Canonical wire form: (tx, ty, tz, qw, qx, qy, qz), qw >= 0.
    std::array<double, 7> to_seven() const;
    static Pose from_seven(const std::array<double, 7>& v);
};

using RigidTransform = Pose;

inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    return a * b;
}

/// Maps a pose expressed in one robot's end-effector frame convention into
/// another's: result = t * p.
inline Pose align_pose(const Pose& p, const RigidTransform& t) {
    return t * p;
}

bool approx_equal(const Pose& a, const Pose& b, double tol = 1e-9);

}  // namespace crosspaint::geom
