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

#include "crosspaint/dataset.hpp"
#include "crosspaint/raster.hpp"
#include "crosspaint/sampler.hpp"

#include <memory>

namespace crosspaint::viaug {

using data::Trajectory;
using raster::Frame;

/// Disocclusion / out-of-frustum pixels of a synthesized view.
using HoleMap = img::MaskImage;

/// Stage interface: synthesize the frame as seen from the camera perturbed by
/// a camera-frame rigid transform.
class ViewSynthesizer {
public:
    virtual ~ViewSynthesizer() = default;
    virtual Frame synthesize(const Frame& frame, const geom::RigidTransform& perturbation,
                             HoleMap* holes = nullptr) = 0;
};

struct ReprojectOptions {
    bool fill_holes = true;  // nearest-valid dilation; false leaves holes black
};

/// Default synthesizer: forward-warps every valid-depth pixel into the
/// perturbed camera with a z-buffer; unwritten pixels are recorded in the
/// HoleMap. Camera extrinsics update as extr' = extr * perturbation.
/// Throws std::invalid_argument when the frame has no valid depth.
std::pair<Frame, HoleMap> reproject(const Frame& frame,
                                    const geom::RigidTransform& perturbation,
                                    const ReprojectOptions& opts = {});

class DepthReprojector : public ViewSynthesizer {
public:
    explicit DepthReprojector(ReprojectOptions opts = {}) : opts_(opts) {}
    Frame synthesize(const Frame& frame, const geom::RigidTransform& perturbation,
                     HoleMap* holes = nullptr) override {
        auto [out, hole_map] = reproject(frame, perturbation, opts_);
        if (holes) {
            *holes = std::move(hole_map);
        }
        return out;
    }

private:
    ReprojectOptions opts_;
};

struct ViAugResult {
    Trajectory trajectory;
    std::vector<geom::RigidTransform> perturbations;  // one per frame
};

/// Viewpoint-augments one trajectory. Consistent mode draws one perturbation
/// per trajectory; Inconsistent mode draws per frame. Poses and actions are
/// copied bit-identically.
ViAugResult vi_aug(const Trajectory& traj, const rng::ViAugConfig& cfg,
                   const rng::SeedPath& seed_path, ViewSynthesizer* synthesizer = nullptr);

}  // namespace crosspaint::viaug
