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

#include "crosspaint/roaug.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace crosspaint::roaug {

img::MaskImage OracleSegmenter::mask(const Frame& frame) {
    if (frame.mask.width == frame.rgb.width && frame.mask.height == frame.rgb.height &&
        frame.mask.count() > 0) {
        return frame.mask;
    }
    // Imported data without a mask: treat valid depth in front of the far
    // plane as robot geometry.
    img::MaskImage out(frame.rgb.width, frame.rgb.height, false);
    if (frame.depth.width != frame.rgb.width || frame.depth.height != frame.rgb.height) {
        return out;
    }
    const float far = raster::BackgroundPlate::kDefaultFarDepth;
    for (int y = 0; y < frame.depth.height; ++y) {
        for (int x = 0; x < frame.depth.width; ++x) {
            const float d = frame.depth.at(x, y);
            out.set(x, y, d > 0.0f && d < far * 0.99f);
        }
    }
    return out;
}

TranslateResult GeometricTranslator::translate(const Frame& frame,
                                               const kin::KinematicChain& /*source_chain*/,
                                               const kin::KinematicChain& target_chain) {
    TranslateResult out;
    kin::JointConfig seed;
    if (previous_solution_ && previous_solution_->angles.size() == target_chain.dof()) {
        seed = *previous_solution_;
    } else {
        seed.angles = target_chain.home;
    }
    const kin::IkResult ik =
        inverse_kinematics(target_chain, frame.gripper_pose, seed, ik_opts_);
    out.ik_pos_residual = ik.pos_residual;
    out.solution = ik.q;
    if (!ik.ok()) {
        return out;
    }
    previous_solution_ = ik.q;

    const Frame rendered =
        raster::render(target_chain, ik.q, frame.intrinsics, frame.extrinsics);
    out.ok = true;
    out.rgb = rendered.rgb;
    out.mask = rendered.mask;
    out.depth = rendered.depth;
    return out;
}

std::vector<img::Image8> plate_inpaint(const std::vector<img::Image8>& frames,
                                       const std::vector<img::MaskImage>& holes) {
    if (frames.empty()) {
        throw std::invalid_argument("plate_inpaint: no frames");
    }
    if (holes.size() != frames.size()) {
        throw std::invalid_argument("plate_inpaint: frame/mask count mismatch");
    }
    const int w = frames[0].width, h = frames[0].height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].width != w || frames[i].height != h || frames[i].channels != 3 ||
            holes[i].width != w || holes[i].height != h) {
            throw std::invalid_argument("plate_inpaint: dimension mismatch");
        }
    }

    // Median background plate: per pixel, the temporal median over frames
    // where the pixel is not masked.
    img::Image8 plate(w, h, 3, 0);
    img::MaskImage plate_valid(w, h, false);
    std::vector<std::uint8_t> samples;
    samples.reserve(frames.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool any = false;
            for (int c = 0; c < 3; ++c) {
                samples.clear();
                for (std::size_t i = 0; i < frames.size(); ++i) {
                    if (!holes[i].at(x, y)) {
                        samples.push_back(frames[i].at(x, y, c));
                    }
                }
                if (samples.empty()) {
                    break;
                }
                any = true;
                // Lower median keeps the value an actually observed sample.
                std::nth_element(samples.begin(),
                                 samples.begin() + (samples.size() - 1) / 2, samples.end());
                plate.at(x, y, c) = samples[(samples.size() - 1) / 2];
            }
            plate_valid.set(x, y, any);
        }
    }

    // Pixels masked in every frame: nearest-valid dilation (multi-source BFS,
    // 4-connected, deterministic scan order).
    if (plate_valid.count() == 0) {
        // Nothing observable at all; leave the plate black.
    } else if (plate_valid.count() < static_cast<std::size_t>(w) * h) {
        std::deque<std::pair<int, int>> queue;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (plate_valid.at(x, y)) {
                    queue.emplace_back(x, y);
                }
            }
        }
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        while (!queue.empty()) {
            const auto [x, y] = queue.front();
            queue.pop_front();
            for (int k = 0; k < 4; ++k) {
                const int nx = x + dx[k], ny = y + dy[k];
                if (nx < 0 || ny < 0 || nx >= w || ny >= h || plate_valid.at(nx, ny)) {
                    continue;
                }
                for (int c = 0; c < 3; ++c) {
                    plate.at(nx, ny, c) = plate.at(x, y, c);
                }
                plate_valid.set(nx, ny, true);
                queue.emplace_back(nx, ny);
            }
        }
    }

    std::vector<img::Image8> out = frames;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (holes[i].at(x, y)) {
                    for (int c = 0; c < 3; ++c) {
                        out[i].at(x, y, c) = plate.at(x, y, c);
                    }
                }
            }
        }
    }
    return out;
}

StageSet StageSet::geometric(kin::IkOptions ik_opts) {
    StageSet s;
    s.segmenter = std::make_shared<OracleSegmenter>();
    s.translator = std::make_shared<GeometricTranslator>(ik_opts);
    s.inpainter = std::make_shared<PlateInpainter>();
    return s;
}

std::pair<Trajectory, RoAugReport> ro_aug(const Trajectory& traj,
                                          const kin::KinematicChain& source_chain,
                                          const kin::KinematicChain& target_chain,
                                          const RoAugConfig& cfg,
                                          const rng::SeedPath& seed_path,
                                          const StageSet& stages) {
    if (traj.frames.empty()) {
        throw std::invalid_argument("ro_aug: empty trajectory");
    }

    RoAugReport report;
    report.frames.resize(traj.frames.size());

    // Stage 1: segment the source robot out of every frame.
    std::vector<img::MaskImage> source_masks;
    std::vector<img::Image8> backgrounds;
    source_masks.reserve(traj.frames.size());
    backgrounds.reserve(traj.frames.size());
    for (const auto& frame : traj.frames) {
        source_masks.push_back(stages.segmenter->mask(frame));
        backgrounds.push_back(frame.rgb);
    }

    // Stage 2: one video-level inpainting pass over the background.
    const std::vector<img::Image8> plates =
        stages.inpainter->inpaint(backgrounds, source_masks);

    // Median depth of the exposed background, reused for hole pixels.
    std::vector<img::DepthImage> bg_depths(traj.frames.size());
    {
        const int w = traj.frames[0].depth.width, h = traj.frames[0].depth.height;
        img::DepthImage depth_plate(w, h, raster::BackgroundPlate::kDefaultFarDepth);
        std::vector<float> samples;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                samples.clear();
                for (std::size_t i = 0; i < traj.frames.size(); ++i) {
                    if (!source_masks[i].at(x, y)) {
                        samples.push_back(traj.frames[i].depth.at(x, y));
                    }
                }
                if (!samples.empty()) {
                    std::nth_element(samples.begin(),
                                     samples.begin() + (samples.size() - 1) / 2,
                                     samples.end());
                    depth_plate.at(x, y) = samples[(samples.size() - 1) / 2];
                }
            }
        }
        for (std::size_t i = 0; i < traj.frames.size(); ++i) {
            bg_depths[i] = traj.frames[i].depth;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    if (source_masks[i].at(x, y)) {
                        bg_depths[i].at(x, y) = depth_plate.at(x, y);
                    }
                }
            }
        }
    }

    // Stages 3+4: target robot layer, then composite with brightness jitter.
    Trajectory out = traj;
    stages.translator->begin_trajectory();
    for (std::size_t i = 0; i < traj.frames.size(); ++i) {
        const Frame& frame = traj.frames[i];
        auto& fr = report.frames[i];

        rng::RandomStream stream(seed_path.child("ro-aug").child(i));
        fr.brightness_delta = rng::sample_brightness_delta(cfg.brightness_range, stream);

        const TranslateResult tr =
            stages.translator->translate(frame, source_chain, target_chain);
        fr.translator_ok = tr.ok;
        fr.ik_pos_residual = tr.ik_pos_residual;

        Frame& of = out.frames[i];
        if (tr.ok) {
            Frame layer = frame;  // carries camera/pose/action through composite
            layer.rgb = tr.rgb;
            layer.mask = tr.mask;
            layer.depth = tr.depth;
            raster::BackgroundPlate plate;
            plate.rgb = plates[i];
            plate.depth = bg_depths[i];
            of = raster::composite(layer, plate, fr.brightness_delta);
        } else {
            report.failures += 1;
            if (cfg.strict) {
                throw std::runtime_error("ro_aug: translator failed on frame " +
                                         std::to_string(i) + " of trajectory " + traj.id);
            }
            of.rgb = plates[i];
            of.depth = bg_depths[i];
            of.mask = img::MaskImage(frame.rgb.width, frame.rgb.height, false);
        }
        // Observation-only contract: poses and actions stay bit-identical.
        of.gripper_pose = frame.gripper_pose;
        of.action = frame.action;
    }

    out.robot = target_chain.name;
    data::ProvenanceEntry entry;
    entry.stage = "ro-aug:" + source_chain.name + "->" + target_chain.name;
    entry.config = {{"brightness_range", cfg.brightness_range}, {"strict", cfg.strict}};
    entry.seed_path = seed_path.description();
    out.provenance.push_back(std::move(entry));

    return {std::move(out), std::move(report)};
}

}  // namespace crosspaint::roaug
