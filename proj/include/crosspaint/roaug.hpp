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
#include "crosspaint/kinematics.hpp"
#include "crosspaint/raster.hpp"
#include "crosspaint/sampler.hpp"

#include <memory>

namespace crosspaint::roaug {

using data::Trajectory;
using raster::Frame;

/// Stage interface: robot segmentation.
class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual img::MaskImage mask(const Frame& frame) = 0;
};

struct TranslateResult {
    bool ok = false;
    img::Image8 rgb;          // robot-only layer (non-mask pixels black)
    img::MaskImage mask;
    img::DepthImage depth;
    double ik_pos_residual = 0.0;
    kin::JointConfig solution;
};

/// Stage interface: source-robot -> target-robot image translation.
class RobotTranslator {
public:
    virtual ~RobotTranslator() = default;
    virtual TranslateResult translate(const Frame& frame,
                                      const kin::KinematicChain& source_chain,
                                      const kin::KinematicChain& target_chain) = 0;
    /// Called at trajectory boundaries so stateful translators can reset.
    virtual void begin_trajectory() {}
};

/// Stage interface: trajectory-level hole filling of the background video.
class Inpainter {
public:
    virtual ~Inpainter() = default;
    virtual std::vector<img::Image8> inpaint(const std::vector<img::Image8>& frames,
                                             const std::vector<img::MaskImage>& holes) = 0;
};

/// Default segmenter: trusts the frame's rendered mask when present, falls
/// back to a depth heuristic (valid depth closer than the far plane).
class OracleSegmenter : public Segmenter {
public:
    img::MaskImage mask(const Frame& frame) override;
};

/// Default translator: IK-solves the target chain to the frame's gripper pose
/// (seeded with the previous frame's solution for temporal consistency) and
/// renders it under the frame's camera.
class GeometricTranslator : public RobotTranslator {
public:
    explicit GeometricTranslator(kin::IkOptions ik_opts = {}) : ik_opts_(ik_opts) {}
    TranslateResult translate(const Frame& frame, const kin::KinematicChain& source_chain,
                              const kin::KinematicChain& target_chain) override;
    void begin_trajectory() override { previous_solution_.reset(); }

private:
    kin::IkOptions ik_opts_;
    std::optional<kin::JointConfig> previous_solution_;
};

/// Default inpainter: per hole pixel, the temporal median of that pixel over
/// the frames where it is not masked; pixels masked everywhere fall back to
/// nearest-valid dilation. Non-hole pixels are left untouched.
std::vector<img::Image8> plate_inpaint(const std::vector<img::Image8>& frames,
                                       const std::vector<img::MaskImage>& holes);

class PlateInpainter : public Inpainter {
public:
    std::vector<img::Image8> inpaint(const std::vector<img::Image8>& frames,
                                     const std::vector<img::MaskImage>& holes) override {
        return plate_inpaint(frames, holes);
    }
};

struct RoAugConfig {
    int brightness_range = 30;  // HSV value delta sampled per frame
    bool strict = false;        // abort the trajectory on translator failure
};

struct RoAugFrameReport {
    bool translator_ok = false;
    double ik_pos_residual = 0.0;
    int brightness_delta = 0;
};

struct RoAugReport {
    std::vector<RoAugFrameReport> frames;
    std::size_t failures = 0;
};

struct StageSet {
    std::shared_ptr<Segmenter> segmenter;
    std::shared_ptr<RobotTranslator> translator;
    std::shared_ptr<Inpainter> inpainter;

    static StageSet geometric(kin::IkOptions ik_opts = {});
};

/// Robot-augments one trajectory: segment, fill the background over the whole
/// trajectory, translate the robot, composite with a per-frame brightness
/// delta. Actions and gripper poses are copied bit-identically; frame count
/// preserved. Failed frames keep their inpainted background and are flagged in
/// the report (strict mode throws instead).
std::pair<Trajectory, RoAugReport> ro_aug(const Trajectory& traj,
                                          const kin::KinematicChain& source_chain,
                                          const kin::KinematicChain& target_chain,
                                          const RoAugConfig& cfg,
                                          const rng::SeedPath& seed_path,
                                          const StageSet& stages = StageSet::geometric());

}  // namespace crosspaint::roaug
