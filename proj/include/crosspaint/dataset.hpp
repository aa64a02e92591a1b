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

#include "crosspaint/raster.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace crosspaint::data {

using raster::Frame;

/// Append-only record of one augmentation/processing stage applied to a
/// trajectory: the stage id, its effective config, and the seed path used.
struct ProvenanceEntry {
    std::string stage;
    nlohmann::json config = nlohmann::json::object();
    std::string seed_path;
};

struct Trajectory {
    std::string id;
    std::string robot;  // chain name
    std::string task;
    std::vector<Frame> frames;
    std::vector<ProvenanceEntry> provenance;
};

struct Dataset {
    std::string name;
    std::vector<Trajectory> trajectories;
    nlohmann::json metadata = nlohmann::json::object();  // e.g. control_rate_hz
};

/// Transforms every gripper pose and action by t; observations untouched; a
/// provenance entry records the transform.
Dataset apply_alignment(const Dataset& ds, const geom::RigidTransform& t);

/// Union of the four datasets of the robot/task cross product. Ids are
/// prefixed with the source dataset name on collision; empty grid cells get a
/// warning on stderr. Throws on inconsistent frame dimensions.
Dataset compose_cross_product(const std::vector<Dataset>& inputs,
                              const std::string& name = "cross-product");

void write_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

struct CellStats {
    std::string robot;
    std::string task;
    std::size_t trajectories = 0;
    std::size_t frames = 0;
};

struct DatasetStats {
    std::vector<CellStats> cells;
    std::size_t total_trajectories = 0;
    std::size_t total_frames = 0;
    geom::Vec3 gripper_bbox_lo{0, 0, 0};
    geom::Vec3 gripper_bbox_hi{0, 0, 0};
    geom::Vec3 camera_translation_std{0, 0, 0};
    std::array<std::size_t, 16> brightness_histogram{};  // per-frame mean V, 16 bins

    nlohmann::json to_json() const;
};

DatasetStats stats(const Dataset& ds);

/// Order-independent content hash of an on-disk dataset: manifest plus every
/// file the manifest lists, hashed in sorted path order.
std::string hash_dataset_dir(const std::filesystem::path& path);

}  // namespace crosspaint::data
