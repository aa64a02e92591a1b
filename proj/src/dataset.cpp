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

#include "crosspaint/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace crosspaint::data {

using json = nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json pose_to_json(const geom::Pose& p) {
    const auto v = p.to_seven();
    return json(std::vector<double>(v.begin(), v.end()));
}

geom::Pose pose_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 7) {
        throw std::runtime_error("dataset: pose must be 7 numbers");
    }
    std::array<double, 7> a;
    std::copy(v.begin(), v.end(), a.begin());
    return geom::Pose::from_seven(a);
}

json action_to_json(const Action& a) {
    return json{{"kind", a.kind == ActionKind::AbsoluteTarget ? "absolute" : "delta"},
                {"pose", pose_to_json(a.pose)},
                {"gripper", a.gripper}};
}

Action action_from_json(const json& j) {
    Action a;
    const std::string kind = j.at("kind");
    if (kind == "absolute") {
        a.kind = ActionKind::AbsoluteTarget;
    } else if (kind == "delta") {
        a.kind = ActionKind::Delta;
    } else {
        throw std::runtime_error("dataset: unknown action kind " + kind);
    }
    a.pose = pose_from_json(j.at("pose"));
    a.gripper = j.at("gripper");
    if (a.gripper < 0.0 || a.gripper > 1.0) {
        throw std::runtime_error("dataset: gripper channel outside [0, 1]");
    }
    return a;
}

json provenance_to_json(const std::vector<ProvenanceEntry>& prov) {
    json out = json::array();
    for (const auto& p : prov) {
        out.push_back(json{{"stage", p.stage}, {"config", p.config},
                           {"seed_path", p.seed_path}});
    }
    return out;
}

std::vector<ProvenanceEntry> provenance_from_json(const json& j) {
    std::vector<ProvenanceEntry> out;
    for (const auto& p : j) {
        out.push_back(ProvenanceEntry{p.at("stage"), p.at("config"), p.at("seed_path")});
    }
    return out;
}

std::string frame_name(std::size_t i, const char* kind, const char* ext) {
    std::ostringstream os;
    os << kind << "_" << std::setw(6) << std::setfill('0') << i << "." << ext;
    return os.str();
}

std::string crc_hex(std::uint32_t crc) {
    std::ostringstream os;
    os << std::hex << std::setw(8) << std::setfill('0') << crc;
    return os.str();
}

std::uint64_t fnv1a_bytes(std::uint64_t h, const std::uint8_t* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace

Dataset apply_alignment(const Dataset& ds, const geom::RigidTransform& t) {
    Dataset out = ds;
    for (auto& traj : out.trajectories) {
        for (auto& frame : traj.frames) {
            frame.gripper_pose = geom::align_pose(frame.gripper_pose, t);
            if (frame.action) {
                frame.action = align_action(*frame.action, t);
            }
        }
        ProvenanceEntry entry;
        entry.stage = "align";
        const auto seven = t.to_seven();
        entry.config["transform"] = std::vector<double>(seven.begin(), seven.end());
        traj.provenance.push_back(std::move(entry));
    }
    return out;
}

Dataset compose_cross_product(const std::vector<Dataset>& inputs,
                              const std::string& name) {
    Dataset out;
    out.name = name;

    int width = -1, height = -1;
    std::set<std::string> used_ids;
    for (const auto& input : inputs) {
        for (const auto& traj : input.trajectories) {
            for (const auto& frame : traj.frames) {
                if (width < 0) {
                    width = frame.rgb.width;
                    height = frame.rgb.height;
                } else if (frame.rgb.width != width || frame.rgb.height != height) {
                    throw std::invalid_argument(
                        "compose_cross_product: inconsistent frame dimensions across inputs");
                }
            }
            Trajectory copy = traj;
            if (!used_ids.insert(copy.id).second) {
                copy.id = input.name + ":" + copy.id;
                used_ids.insert(copy.id);
            }
            ProvenanceEntry entry;
            entry.stage = "compose";
            entry.config["source_dataset"] = input.name;
            copy.provenance.push_back(std::move(entry));
            out.trajectories.push_back(std::move(copy));
        }
    }

    // Report the (robot, task) grid; warn about empty cells.
    std::set<std::string> robots, tasks;
    std::set<std::pair<std::string, std::string>> cells;
    for (const auto& traj : out.trajectories) {
        robots.insert(traj.robot);
        tasks.insert(traj.task);
        cells.insert({traj.robot, traj.task});
    }
    for (const auto& r : robots) {
        for (const auto& t : tasks) {
            if (!cells.count({r, t})) {
                std::cerr << "warning: cross-product cell (" << r << ", " << t
                          << ") is empty\n";
            }
        }
    }
    return out;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    fs::create_directories(root);

    json manifest;
    manifest["format_version"] = kFormatVersion;
    manifest["name"] = ds.name;
    manifest["camera_convention"] =
        "pinhole, +z forward, +x right, +y down, pixel centers at integer+0.5, "
        "vertical fov";
    manifest["pose_convention"] = "tx ty tz qw qx qy qz, unit quaternion, qw >= 0";
    manifest["metadata"] = ds.metadata;

    std::set<std::string> chains;
    json traj_list = json::array();

    // Deterministic layout: trajectories sorted by id.
    std::vector<const Trajectory*> sorted;
    for (const auto& t : ds.trajectories) {
        sorted.push_back(&t);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const Trajectory* a, const Trajectory* b) { return a->id < b->id; });
    {
        std::set<std::string> ids;
        for (const auto* t : sorted) {
            if (!ids.insert(t->id).second) {
                throw std::invalid_argument("write_dataset: duplicate trajectory id " + t->id);
            }
        }
    }

    for (const Trajectory* traj : sorted) {
        if (traj->frames.empty()) {
            throw std::invalid_argument("write_dataset: trajectory " + traj->id +
                                        " has no frames");
        }
        chains.insert(traj->robot);
        const fs::path tdir = root / traj->id;
        fs::create_directories(tdir / "frames");

        json tj;
        tj["id"] = traj->id;
        tj["robot"] = traj->robot;
        tj["task"] = traj->task;
        tj["provenance"] = provenance_to_json(traj->provenance);
        tj["frames"] = json::array();

        json files = json::object();
        for (std::size_t i = 0; i < traj->frames.size(); ++i) {
            const Frame& f = traj->frames[i];
            const std::string rgb_rel = "frames/" + frame_name(i, "rgb", "png");
            const std::string mask_rel = "frames/" + frame_name(i, "mask", "png");
            const std::string depth_rel = "frames/" + frame_name(i, "depth", "dpth");

            const auto rgb_bytes = img::encode_png(f.rgb);
            const auto mask_bytes = img::encode_png(f.mask);
            const auto depth_bytes = img::encode_depth(f.depth);
            img::write_file(tdir / rgb_rel, rgb_bytes);
            img::write_file(tdir / mask_rel, mask_bytes);
            img::write_file(tdir / depth_rel, depth_bytes);
            files[traj->id + "/" + rgb_rel] = crc_hex(img::crc32(rgb_bytes));
            files[traj->id + "/" + mask_rel] = crc_hex(img::crc32(mask_bytes));
            files[traj->id + "/" + depth_rel] = crc_hex(img::crc32(depth_bytes));

            json fj;
            fj["rgb"] = rgb_rel;
            fj["mask"] = mask_rel;
            fj["depth"] = depth_rel;
            fj["camera"] = json{{"width", f.intrinsics.width},
                                {"height", f.intrinsics.height},
                                {"fov_v_deg", f.intrinsics.fov_v_deg},
                                {"pose", pose_to_json(f.extrinsics.pose)}};
            fj["gripper_pose"] = pose_to_json(f.gripper_pose);
            if (f.action) {
                fj["action"] = action_to_json(*f.action);
            }
            tj["frames"].push_back(std::move(fj));
        }

        const std::string tj_text = tj.dump(2);
        {
            std::ofstream out(tdir / "traj.json", std::ios::binary | std::ios::trunc);
            out << tj_text;
        }
        files[traj->id + "/traj.json"] =
            crc_hex(img::crc32(std::vector<std::uint8_t>(tj_text.begin(), tj_text.end())));

        traj_list.push_back(json{{"id", traj->id}, {"files", files}});
    }

    manifest["chains"] = std::vector<std::string>(chains.begin(), chains.end());
    manifest["trajectories"] = traj_list;

    // Manifest written last: it is the commit point.
    std::ofstream out(root / "manifest.json", std::ios::binary | std::ios::trunc);
    out << manifest.dump(2);
}

Dataset read_dataset(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    const json manifest = json::parse(std::ifstream(root / "manifest.json"));
    if (manifest.at("format_version").get<int>() != kFormatVersion) {
        throw std::runtime_error("read_dataset: unsupported format version");
    }

    Dataset ds;
    ds.name = manifest.at("name");
    ds.metadata = manifest.value("metadata", json::object());

    for (const auto& entry : manifest.at("trajectories")) {
        // Verify checksums before trusting any payload.
        for (const auto& [rel, crc] : entry.at("files").items()) {
            const auto bytes = img::read_file(root / rel);
            if (crc_hex(img::crc32(bytes)) != crc.get<std::string>()) {
                throw std::runtime_error("read_dataset: checksum mismatch for " + rel);
            }
        }

        const std::string id = entry.at("id");
        const fs::path tdir = root / id;
        const json tj = json::parse(std::ifstream(tdir / "traj.json"));

        Trajectory traj;
        traj.id = tj.at("id");
        traj.robot = tj.at("robot");
        traj.task = tj.at("task");
        traj.provenance = provenance_from_json(tj.at("provenance"));
        for (const auto& fj : tj.at("frames")) {
            Frame f;
            f.rgb = img::read_png(tdir / fj.at("rgb").get<std::string>());
            f.mask = img::read_png_mask(tdir / fj.at("mask").get<std::string>());
            f.depth = img::read_depth(tdir / fj.at("depth").get<std::string>());
            const json& cj = fj.at("camera");
            f.intrinsics = cam::CameraIntrinsics::make(cj.at("width"), cj.at("height"),
                                                       cj.at("fov_v_deg"));
            f.extrinsics.pose = pose_from_json(cj.at("pose"));
            f.gripper_pose = pose_from_json(fj.at("gripper_pose"));
            if (fj.contains("action")) {
                f.action = action_from_json(fj.at("action"));
            }
            traj.frames.push_back(std::move(f));
        }
        if (traj.frames.empty()) {
            throw std::runtime_error("read_dataset: trajectory " + traj.id + " is empty");
        }
        ds.trajectories.push_back(std::move(traj));
    }
    return ds;
}

json DatasetStats::to_json() const {
    json cells_json = json::array();
    for (const auto& c : cells) {
        cells_json.push_back(json{{"robot", c.robot},
                                  {"task", c.task},
                                  {"trajectories", c.trajectories},
                                  {"frames", c.frames}});
    }
    return json{
        {"cells", cells_json},
        {"total_trajectories", total_trajectories},
        {"total_frames", total_frames},
        {"gripper_bbox_lo", {gripper_bbox_lo.x(), gripper_bbox_lo.y(), gripper_bbox_lo.z()}},
        {"gripper_bbox_hi", {gripper_bbox_hi.x(), gripper_bbox_hi.y(), gripper_bbox_hi.z()}},
        {"camera_translation_std",
         {camera_translation_std.x(), camera_translation_std.y(),
          camera_translation_std.z()}},
        {"brightness_histogram", brightness_histogram}};
}

DatasetStats stats(const Dataset& ds) {
    DatasetStats out;
    std::map<std::pair<std::string, std::string>, CellStats> cells;

    geom::Vec3 lo = geom::Vec3::Constant(std::numeric_limits<double>::infinity());
    geom::Vec3 hi = -lo;
    geom::Vec3 cam_sum = geom::Vec3::Zero();
    geom::Vec3 cam_sq = geom::Vec3::Zero();
    std::size_t n_frames = 0;

    for (const auto& traj : ds.trajectories) {
        auto& cell = cells[{traj.robot, traj.task}];
        cell.robot = traj.robot;
        cell.task = traj.task;
        cell.trajectories += 1;
        cell.frames += traj.frames.size();
        out.total_trajectories += 1;
        for (const auto& f : traj.frames) {
            out.total_frames += 1;
            ++n_frames;
            lo = lo.cwiseMin(f.gripper_pose.translation);
            hi = hi.cwiseMax(f.gripper_pose.translation);
            cam_sum += f.extrinsics.pose.translation;
            cam_sq += f.extrinsics.pose.translation.cwiseProduct(
                f.extrinsics.pose.translation);

            double v_sum = 0.0;
            const std::size_t pixels =
                static_cast<std::size_t>(f.rgb.width) * f.rgb.height;
            if (pixels > 0) {
                for (int y = 0; y < f.rgb.height; ++y) {
                    for (int x = 0; x < f.rgb.width; ++x) {
                        v_sum += std::max({f.rgb.at(x, y, 0), f.rgb.at(x, y, 1),
                                           f.rgb.at(x, y, 2)});
                    }
                }
                const int bin = std::min(15, static_cast<int>(v_sum / pixels / 16.0));
                out.brightness_histogram[bin] += 1;
            }
        }
    }
    for (const auto& [key, cell] : cells) {
        out.cells.push_back(cell);
    }
    if (n_frames > 0) {
        out.gripper_bbox_lo = lo;
        out.gripper_bbox_hi = hi;
        const geom::Vec3 mean = cam_sum / static_cast<double>(n_frames);
        const geom::Vec3 var =
            cam_sq / static_cast<double>(n_frames) - mean.cwiseProduct(mean);
        out.camera_translation_std = var.cwiseMax(0.0).cwiseSqrt();
    }
    return out;
}

std::string hash_dataset_dir(const std::filesystem::path& root) {
    const auto manifest_bytes = img::read_file(root / "manifest.json");
    std::uint64_t h = 0xCBF29CE484222325ull;
    h = fnv1a_bytes(h, manifest_bytes.data(), manifest_bytes.size());

    const json manifest = json::parse(std::ifstream(root / "manifest.json"));
    std::vector<std::string> rels;
    for (const auto& entry : manifest.at("trajectories")) {
        for (const auto& [rel, crc] : entry.at("files").items()) {
            rels.push_back(rel);
        }
    }
    std::sort(rels.begin(), rels.end());
    for (const auto& rel : rels) {
        h = fnv1a_bytes(h, reinterpret_cast<const std::uint8_t*>(rel.data()), rel.size());
        const auto bytes = img::read_file(root / rel);
        h = fnv1a_bytes(h, bytes.data(), bytes.size());
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace crosspaint::data
