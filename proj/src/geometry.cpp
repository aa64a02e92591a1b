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

#include "crosspaint/geometry.hpp"

#include <cmath>

namespace crosspaint::geom {

namespace {

constexpr double kDriftTol = 1e-9;

Mat3 polar_orthonormalize(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

double drift_of(const Mat3& m) {
    return (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace

Rotation Rotation::from_matrix(const Mat3& m) {
    if (m.determinant() <= 0.0 || drift_of(m) > 1e-3) {
        throw std::invalid_argument("Rotation::from_matrix: input is not a proper rotation");
    }
    Rotation r;
    r.m_ = drift_of(m) > kDriftTol ? polar_orthonormalize(m) : m;
    return r;
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
    const double n2 = w * w + x * x + y * y + z * z;
    if (!(n2 > 0.0) || !std::isfinite(n2)) {
        throw std::invalid_argument("Rotation::from_quaternion: zero or non-finite quaternion");
    }
    // An already-canonical quaternion passes through bit-identically, so
    // serialization round trips are byte-stable.
    double s = (w < 0.0) ? -1.0 : 1.0;
    if (std::abs(n2 - 1.0) > 1e-12) {
        s /= std::sqrt(n2);
    }
    if (s != 1.0) {
        w *= s;
        x *= s;
        y *= s;
        z *= s;
    }
    Rotation r;
    r.m_ = Eigen::Quaterniond(w, x, y, z).toRotationMatrix();
    r.cached_quat_ = std::array<double, 4>{w, x, y, z};
    return r;
}

Rotation Rotation::from_euler_xyz(double rx, double ry, double rz) {
    return about_x(rx) * about_y(ry) * about_z(rz);
}

Rotation Rotation::about_x(double a) {
    Rotation r;
    const double c = std::cos(a), s = std::sin(a);
    r.m_ << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

Rotation Rotation::about_y(double a) {
    Rotation r;
    const double c = std::cos(a), s = std::sin(a);
    r.m_ << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

Rotation Rotation::about_z(double a) {
    Rotation r;
    const double c = std::cos(a), s = std::sin(a);
    r.m_ << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

Rotation Rotation::from_axis_angle(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (n < 1e-12) {
        throw std::invalid_argument("Rotation::from_axis_angle: zero axis");
    }
    Rotation r;
    r.m_ = Eigen::AngleAxisd(angle, axis / n).toRotationMatrix();
    return r;
}

std::array<double, 4> Rotation::quaternion() const {
    if (!cached_quat_) {
        Eigen::Quaterniond q(m_);
        q.normalize();
        if (q.w() < 0.0) {
            q.coeffs() *= -1.0;
        }
        cached_quat_ = std::array<double, 4>{q.w(), q.x(), q.y(), q.z()};
    }
    return *cached_quat_;
}

Rotation::EulerXyz Rotation::to_euler_xyz() const {
    // R = Rx * Ry * Rz, so R(0,2) = sin(ry).
    EulerXyz e{};
    const double sy = std::clamp(m_(0, 2), -1.0, 1.0);
    e.gimbal_lock = (1.0 - std::abs(sy)) < 1e-12;
    e.ry = std::asin(sy);
    if (e.gimbal_lock) {
        // rx and rz are coupled; fold everything into rx.
        e.rx = std::atan2(m_(2, 1), m_(1, 1));
        e.rz = 0.0;
    } else {
        e.rx = std::atan2(-m_(1, 2), m_(2, 2));
        e.rz = std::atan2(-m_(0, 1), m_(0, 0));
    }
    return e;
}

Rotation Rotation::inverse() const {
    Rotation r;
    r.m_ = m_.transpose();
    return r;
}

Rotation Rotation::operator*(const Rotation& rhs) const {
    Rotation r;
    r.m_ = m_ * rhs.m_;
    if (drift_of(r.m_) > kDriftTol) {
        r.m_ = polar_orthonormalize(r.m_);
    }
    return r;
}

double Rotation::angle_to(const Rotation& other) const {
    const Mat3 rel = m_.transpose() * other.m_;
    const double c = std::clamp((rel.trace() - 1.0) * 0.5, -1.0, 1.0);
    return std::acos(c);
}

double Rotation::orthonormality_drift() const {
    return drift_of(m_);
}

Pose Pose::inverse() const {
    const Rotation rinv = rotation.inverse();
    return Pose{rinv, -(rinv * translation)};
}

Pose Pose::operator*(const Pose& rhs) const {
    return Pose{rotation * rhs.rotation, rotation * rhs.translation + translation};
}

std::array<double, 7> Pose::to_seven() const {
    const auto q = rotation.quaternion();
    return {translation.x(), translation.y(), translation.z(), q[0], q[1], q[2], q[3]};
}

Pose Pose::from_seven(const std::array<double, 7>& v) {
    Pose p;
    p.translation = Vec3(v[0], v[1], v[2]);
    p.rotation = Rotation::from_quaternion(v[3], v[4], v[5], v[6]);
    return p;
}

bool approx_equal(const Pose& a, const Pose& b, double tol) {
    return (a.translation - b.translation).cwiseAbs().maxCoeff() <= tol &&
           (a.rotation.matrix() - b.rotation.matrix()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace crosspaint::geom
