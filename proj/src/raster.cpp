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

#include "crosspaint/raster.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

namespace crosspaint::raster {

namespace {

struct Hit {
    double t = -1.0;
    geom::Vec3 normal;
};

// Analytic ray-capsule intersection; ray origin at 0, rd unit length.
// Returns the nearest positive t, or t < 0 on miss.
Hit intersect_capsule(const geom::Vec3& rd, const geom::Vec3& pa, const geom::Vec3& pb,
                      double r) {
    Hit hit;
    const geom::Vec3 ba = pb - pa;
    const geom::Vec3 oa = -pa;
    const double baba = ba.dot(ba);

    auto sphere = [&](const geom::Vec3& center) -> double {
        const geom::Vec3 oc = -center;
        const double b = rd.dot(oc);
        const double c = oc.dot(oc) - r * r;
        const double h = b * b - c;
        if (h < 0.0) {
            return -1.0;
        }
        return -b - std::sqrt(h);
    };

    if (baba < 1e-12) {  // degenerate capsule: a sphere
        const double t = sphere(pa);
        if (t > 1e-6) {
            hit.t = t;
            hit.normal = (t * rd - pa) / r;
        }
        return hit;
    }

    const double bard = ba.dot(rd);
    const double baoa = ba.dot(oa);
    const double a = baba - bard * bard;
    const double b = baba * rd.dot(oa) - baoa * bard;
    const double c = baba * oa.dot(oa) - baoa * baoa - r * r * baba;

    if (a > 1e-12) {
        const double h = b * b - a * c;
        if (h >= 0.0) {
            const double t = (-b - std::sqrt(h)) / a;
            const double y = baoa + t * bard;
            if (t > 1e-6 && y > 0.0 && y < baba) {
                hit.t = t;
                hit.normal = (t * rd + oa - ba * (y / baba)) / r;
                return hit;
            }
        }
    }
    // End caps.
    double best = -1.0;
    geom::Vec3 center;
    for (const geom::Vec3& cap : {pa, pb}) {
        const double t = sphere(cap);
        if (t > 1e-6 && (best < 0.0 || t < best)) {
            best = t;
            center = cap;
        }
    }
    if (best > 0.0) {
        hit.t = best;
        hit.normal = (best * rd - center) / r;
    }
    return hit;
}

struct ScreenBounds {
    int x0, y0, x1, y1;  // half-open
    bool empty() const { return x0 >= x1 || y0 >= y1; }
};

ScreenBounds capsule_bounds(const cam::CameraIntrinsics& intr, const geom::Vec3& a,
                            const geom::Vec3& b, double r) {
    // Conservative screen-space box; falls back to the full image when an
    // endpoint is near or behind the camera plane.
    if (a.z() < 1e-3 + r || b.z() < 1e-3 + r) {
        return {0, 0, intr.width, intr.height};
    }
    const double min_z = std::min(a.z(), b.z());
    const double pad = r * std::max(intr.fx(), intr.fy()) / (min_z - r) + 2.0;
    const double ua = intr.cx() + intr.fx() * a.x() / a.z();
    const double va = intr.cy() + intr.fy() * a.y() / a.z();
    const double ub = intr.cx() + intr.fx() * b.x() / b.z();
    const double vb = intr.cy() + intr.fy() * b.y() / b.z();
    ScreenBounds sb;
    sb.x0 = std::max(0, static_cast<int>(std::floor(std::min(ua, ub) - pad)));
    sb.y0 = std::max(0, static_cast<int>(std::floor(std::min(va, vb) - pad)));
    sb.x1 = std::min(intr.width, static_cast<int>(std::ceil(std::max(ua, ub) + pad)));
    sb.y1 = std::min(intr.height, static_cast<int>(std::ceil(std::max(va, vb) + pad)));
    return sb;
}

}  // namespace

Frame render(const kin::KinematicChain& chain, const kin::JointConfig& q,
             const cam::CameraIntrinsics& intrinsics,
             const cam::CameraExtrinsics& extrinsics, const RenderOptions& opts) {
    const kin::FkResult fk = forward_kinematics(chain, q);
    const std::vector<kin::Capsule> world = kin::world_capsules(chain, fk);

    const geom::Pose world_to_cam = extrinsics.pose.inverse();
    std::vector<kin::Capsule> capsules = world;
    for (auto& c : capsules) {
        c.p0 = world_to_cam.apply(c.p0);
        c.p1 = world_to_cam.apply(c.p1);
    }
    const geom::Vec3 light_cam = -(world_to_cam.rotation * opts.light_dir).normalized();

    Frame frame;
    frame.rgb = img::Image8(intrinsics.width, intrinsics.height, 3, 0);
    frame.depth = img::DepthImage(intrinsics.width, intrinsics.height, 0.0f);
    frame.mask = img::MaskImage(intrinsics.width, intrinsics.height, false);
    frame.intrinsics = intrinsics;
    frame.extrinsics = extrinsics;
    frame.gripper_pose = fk.tip;

    const double fx = intrinsics.fx(), fy = intrinsics.fy();
    const double cx = intrinsics.cx(), cy = intrinsics.cy();

    std::vector<double> zbuf(static_cast<std::size_t>(intrinsics.width) * intrinsics.height,
                             std::numeric_limits<double>::infinity());

    for (const auto& cap : capsules) {
        if (cap.p0.z() <= 1e-6 && cap.p1.z() <= 1e-6) {
            continue;  // fully behind camera
        }
        const ScreenBounds sb = capsule_bounds(intrinsics, cap.p0, cap.p1, cap.radius);
        if (sb.empty()) {
            continue;
        }
        for (int y = sb.y0; y < sb.y1; ++y) {
            for (int x = sb.x0; x < sb.x1; ++x) {
                const geom::Vec3 rd =
                    geom::Vec3((x + 0.5 - cx) / fx, (y + 0.5 - cy) / fy, 1.0).normalized();
                const Hit hit = intersect_capsule(rd, cap.p0, cap.p1, cap.radius);
                if (hit.t <= 0.0) {
                    continue;
                }
                const double z = hit.t * rd.z();
                if (z <= 1e-6) {
                    continue;
                }
                const std::size_t idx = static_cast<std::size_t>(y) * intrinsics.width + x;
                if (z >= zbuf[idx]) {
                    continue;
                }
                zbuf[idx] = z;
                const double shade =
                    opts.ambient +
                    (1.0 - opts.ambient) * std::max(0.0, hit.normal.dot(light_cam));
                for (int ch = 0; ch < 3; ++ch) {
                    frame.rgb.at(x, y, ch) = static_cast<std::uint8_t>(
                        std::clamp(std::floor(cap.color[ch] * shade + 0.5), 0.0, 255.0));
                }
                frame.depth.at(x, y) = static_cast<float>(z);
                frame.mask.set(x, y, true);
            }
        }
    }
    return frame;
}

Frame composite(const Frame& fg, const BackgroundPlate& plate, int brightness_delta) {
    if (plate.rgb.width != fg.rgb.width || plate.rgb.height != fg.rgb.height) {
        throw std::invalid_argument("composite: plate dimensions mismatch");
    }
    Frame out = fg;
    out.rgb = plate.rgb;
    if (out.rgb.channels != 3) {
        throw std::invalid_argument("composite: plate must be RGB");
    }

    img::Image8 robot = fg.rgb;
    img::shift_value_channel(robot, &fg.mask, brightness_delta);

    for (int y = 0; y < fg.rgb.height; ++y) {
        for (int x = 0; x < fg.rgb.width; ++x) {
            if (fg.mask.at(x, y)) {
                for (int c = 0; c < 3; ++c) {
                    out.rgb.at(x, y, c) = robot.at(x, y, c);
                }
                out.depth.at(x, y) = fg.depth.at(x, y);
            } else {
                out.depth.at(x, y) = plate.depth ? plate.depth->at(x, y)
                                                 : BackgroundPlate::kDefaultFarDepth;
            }
        }
    }
    out.mask = fg.mask;
    return out;
}

std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& corpus_dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(corpus_dir)) {
        throw std::runtime_error("background corpus is not a directory: " +
                                 corpus_dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<std::filesystem::path> decodable;
    for (const auto& f : files) {
        try {
            (void)img::read_png(f);
            decodable.push_back(f);
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping undecodable background " << f << ": "
                      << e.what() << "\n";
        }
    }
    if (decodable.empty()) {
        throw std::runtime_error("background corpus has no decodable image: " +
                                 corpus_dir.string());
    }
    return decodable;
}

std::vector<Frame> paste_on_background_corpus(const std::vector<Frame>& frames,
                                              const std::filesystem::path& corpus_dir,
                                              const rng::SeedPath& seed_path,
                                              int brightness_range) {
    const auto corpus = list_corpus(corpus_dir);
    std::map<std::pair<std::string, std::pair<int, int>>, img::Image8> resized_cache;

    std::vector<Frame> out;
    out.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Frame& frame = frames[i];
        rng::RandomStream stream(seed_path.child("paste").child(i));
        const auto pick = static_cast<std::size_t>(
            stream.uniform_int(0, static_cast<std::int64_t>(corpus.size()) - 1));
        const int delta = rng::sample_brightness_delta(brightness_range, stream);

        const auto key = std::make_pair(corpus[pick].string(),
                                        std::make_pair(frame.rgb.width, frame.rgb.height));
        auto it = resized_cache.find(key);
        if (it == resized_cache.end()) {
            img::Image8 plate_img = img::read_png(corpus[pick]);
            if (plate_img.channels != 3) {
                img::Image8 rgb(plate_img.width, plate_img.height, 3);
                for (int y = 0; y < plate_img.height; ++y) {
                    for (int x = 0; x < plate_img.width; ++x) {
                        for (int c = 0; c < 3; ++c) {
                            rgb.at(x, y, c) =
                                plate_img.at(x, y, plate_img.channels == 1 ? 0 : c);
                        }
                    }
                }
                plate_img = std::move(rgb);
            }
            it = resized_cache
                     .emplace(key, img::resize_aspect_fill(plate_img, frame.rgb.width,
                                                           frame.rgb.height))
                     .first;
        }
        BackgroundPlate plate;
        plate.rgb = it->second;
        out.push_back(composite(frame, plate, delta));
    }
    return out;
}

}  // namespace crosspaint::raster
