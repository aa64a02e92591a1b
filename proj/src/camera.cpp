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

#include "crosspaint/camera.hpp"

#include <cmath>

namespace crosspaint::cam {

CameraIntrinsics CameraIntrinsics::make(int width, int height, double fov_v_deg) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("CameraIntrinsics: nonpositive image size");
    }
    if (!(fov_v_deg > 10.0 && fov_v_deg < 170.0)) {
        throw std::invalid_argument("CameraIntrinsics: fov outside (10, 170) degrees");
    }
    return CameraIntrinsics{width, height, fov_v_deg};
}

double CameraIntrinsics::fy() const {
    const double half_fov = fov_v_deg * M_PI / 180.0 * 0.5;
    return (height * 0.5) / std::tan(half_fov);
}

std::optional<PixelDepth> project_camera_frame(const CameraIntrinsics& intr,
                                               const geom::Vec3& pc) {
    if (pc.z() <= 1e-6) {
        return std::nullopt;  // behind camera
    }
    PixelDepth out;
    out.u = intr.cx() + intr.fx() * pc.x() / pc.z();
    out.v = intr.cy() + intr.fy() * pc.y() / pc.z();
    out.depth = pc.z();
    return out;
}

std::optional<PixelDepth> project(const CameraIntrinsics& intr,
                                  const CameraExtrinsics& extr,
                                  const geom::Vec3& point_world) {
    return project_camera_frame(intr, extr.pose.inverse().apply(point_world));
}

geom::Vec3 unproject_camera_frame(const CameraIntrinsics& intr, double u, double v,
                                  double depth) {
    if (!(depth > 0.0)) {
        throw std::invalid_argument("unproject: nonpositive depth");
    }
    return geom::Vec3((u - intr.cx()) / intr.fx() * depth,
                      (v - intr.cy()) / intr.fy() * depth, depth);
}

geom::Vec3 unproject(const CameraIntrinsics& intr, const CameraExtrinsics& extr,
                     double u, double v, double depth) {
    return extr.pose.apply(unproject_camera_frame(intr, u, v, depth));
}

CameraExtrinsics look_at(const geom::Vec3& eye, const geom::Vec3& target,
                         const geom::Vec3& up) {
    const geom::Vec3 forward = target - eye;
    if (forward.norm() <= 1e-6) {
        throw std::invalid_argument("look_at: eye and target coincide");
    }
    const geom::Vec3 z = forward.normalized();
    const geom::Vec3 down = -up;
    geom::Vec3 x = down.cross(z);
    if (x.norm() < 1e-9) {
        throw std::invalid_argument("look_at: up parallel to view direction");
    }
    x.normalize();
    const geom::Vec3 y = z.cross(x);
    geom::Mat3 r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return CameraExtrinsics{geom::Pose{geom::Rotation::from_matrix(r), eye}};
}

}  // namespace crosspaint::cam
