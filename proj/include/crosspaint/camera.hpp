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

#include "crosspaint/geometry.hpp"

#include <optional>

namespace crosspaint::cam {

/// Pinhole intrinsics derived from a vertical field of view. Square pixels:
/// fx = fy = (height/2) / tan(fov/2). Principal point at the image center.
/// Image convention: origin top-left, +y down, pixel centers at integer + 0.5.
struct CameraIntrinsics {
    int width = 0;
    int height = 0;
    double fov_v_deg = 0.0;

    static CameraIntrinsics make(int width, int height, double fov_v_deg);

    double fy() const;
    double fx() const { return fy(); }
    double cx() const { return width * 0.5; }
    double cy() const { return height * 0.5; }
};

/// Camera pose in the world frame. Camera axes: +z forward into the scene,
/// +x right, +y down (matching image coordinates).
struct CameraExtrinsics {
    geom::Pose pose;  // camera-to-world
};

struct PixelDepth {
    double u = 0.0;
    double v = 0.0;
    double depth = 0.0;  // camera-frame z, meters
};

/// Projects a world point; nullopt if the point is behind the camera
/// (camera-frame z <= 1e-6).
std::optional<PixelDepth> project(const CameraIntrinsics& intr,
                                  const CameraExtrinsics& extr,
                                  const geom::Vec3& point_world);

/// Inverse of project. Throws std::invalid_argument for depth <= 0.
geom::Vec3 unproject(const CameraIntrinsics& intr, const CameraExtrinsics& extr,
                     double u, double v, double depth);

/// Camera-frame versions used in inner raster/warp loops.
std::optional<PixelDepth> project_camera_frame(const CameraIntrinsics& intr,
                                               const geom::Vec3& point_cam);
geom::Vec3 unproject_camera_frame(const CameraIntrinsics& intr, double u, double v,
                                  double depth);

/// Places the camera at eye with +z pointing toward target; up is a hint for
/// the world "up" direction (camera +y points opposite to it). Throws
/// std::invalid_argument on degenerate inputs.
CameraExtrinsics look_at(const geom::Vec3& eye, const geom::Vec3& target,
                         const geom::Vec3& up);

}  // namespace crosspaint::cam
