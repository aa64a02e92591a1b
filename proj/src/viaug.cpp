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

#include "crosspaint/viaug.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace crosspaint::viaug {

std::pair<Frame, HoleMap> reproject(const Frame& frame,
                                    const geom::RigidTransform& perturbation,
                                    const ReprojectOptions& opts) {
    const int w = frame.rgb.width, h = frame.rgb.height;
    if (frame.depth.width != w || frame.depth.height != h) {
        throw std::invalid_argument("reproject: depth dimensions mismatch");
    }
    bool any_depth = false;
    for (float d : frame.depth.data) {
        if (d > 0.0f) {
            any_depth = true;
            break;
        }
    }
    if (!any_depth) {
        throw std::invalid_argument("reproject: frame has no valid depth");
    }

    Frame out = frame;
    out.rgb = img::Image8(w, h, 3, 0);
    out.depth = img::DepthImage(w, h, 0.0f);
    out.mask = img::MaskImage(w, h, false);
    out.extrinsics.pose = frame.extrinsics.pose * perturbation;

    const double fx = frame.intrinsics.fx(), fy = frame.intrinsics.fy();
    const double cx = frame.intrinsics.cx(), cy = frame.intrinsics.cy();

    // A point with old-camera coords P has new-camera coords P' = pert^-1 P.
    const geom::RigidTransform inv = perturbation.inverse();

    std::vector<double> zbuf(static_cast<std::size_t>(w) * h,
                             std::numeric_limits<double>::infinity());
    HoleMap written(w, h, false);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double d = frame.depth.at(x, y);
            if (!(d > 0.0)) {
                continue;
            }
            const geom::Vec3 pc((x + 0.5 - cx) / fx * d, (y + 0.5 - cy) / fy * d, d);
            const geom::Vec3 pn = inv.apply(pc);
            if (pn.z() <= 1e-6) {
                continue;
            }
            const double u = cx + fx * pn.x() / pn.z();
            const double v = cy + fy * pn.y() / pn.z();
            const int tx = static_cast<int>(std::floor(u));
            const int ty = static_cast<int>(std::floor(v));
            if (tx < 0 || ty < 0 || tx >= w || ty >= h) {
                continue;
            }
            const std::size_t idx = static_cast<std::size_t>(ty) * w + tx;
            if (pn.z() >= zbuf[idx]) {
                continue;
            }
            zbuf[idx] = pn.z();
            for (int c = 0; c < 3; ++c) {
                out.rgb.at(tx, ty, c) = frame.rgb.at(x, y, c);
            }
            out.depth.at(tx, ty) = static_cast<float>(pn.z());
            out.mask.set(tx, ty, frame.mask.at(x, y));
            written.set(tx, ty, true);
        }
    }

    HoleMap holes(w, h, false);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            holes.set(x, y, !written.at(x, y));
        }
    }

    if (opts.fill_holes && written.count() > 0) {
        std::deque<std::pair<int, int>> queue;
        img::MaskImage valid = written;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (valid.at(x, y)) {
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
                if (nx < 0 || ny < 0 || nx >= w || ny >= h || valid.at(nx, ny)) {
                    continue;
                }
                for (int c = 0; c < 3; ++c) {
                    out.rgb.at(nx, ny, c) = out.rgb.at(x, y, c);
                }
                out.depth.at(nx, ny) = out.depth.at(x, y);
                valid.set(nx, ny, true);
                queue.emplace_back(nx, ny);
            }
        }
    }

    return {std::move(out), std::move(holes)};
}

ViAugResult vi_aug(const Trajectory& traj, const rng::ViAugConfig& cfg,
                   const rng::SeedPath& seed_path, ViewSynthesizer* synthesizer) {
    DepthReprojector default_synth;
    ViewSynthesizer* synth = synthesizer ? synthesizer : &default_synth;

    const rng::SeedPath stage_path = seed_path.child("vi-aug").child(traj.id);

    ViAugResult result;
    result.trajectory = traj;
    result.perturbations.reserve(traj.frames.size());

    std::optional<geom::RigidTransform> shared;
    if (cfg.mode == rng::PerturbationMode::Consistent) {
        rng::RandomStream stream(stage_path.child("trajectory"));
        shared = rng::sample_view_perturbation(cfg, stream);
    }

    for (std::size_t i = 0; i < traj.frames.size(); ++i) {
        geom::RigidTransform pert;
        if (shared) {
            pert = *shared;
        } else {
            rng::RandomStream stream(stage_path.child(i));
            pert = rng::sample_view_perturbation(cfg, stream);
        }
        result.perturbations.push_back(pert);

        Frame& of = result.trajectory.frames[i];
        of = synth->synthesize(traj.frames[i], pert);
        of.gripper_pose = traj.frames[i].gripper_pose;
        of.action = traj.frames[i].action;
    }

    data::ProvenanceEntry entry;
    entry.stage = std::string("vi-aug:") +
                  (cfg.mode == rng::PerturbationMode::Consistent ? "consistent"
                                                                 : "inconsistent");
    entry.config = {{"tx_range", cfg.tx_range},
                    {"ty_range", cfg.ty_range},
                    {"tz_range", cfg.tz_range},
                    {"euler_range", cfg.euler_range}};
    entry.seed_path = stage_path.description();
    result.trajectory.provenance.push_back(std::move(entry));

    return result;
}

}  // namespace crosspaint::viaug
