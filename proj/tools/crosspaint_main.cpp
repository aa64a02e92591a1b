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

// Command-line front end: paired-image generation, robot/viewpoint
// augmentation, dataset composition, statistics, previews and a throughput
// harness. Every command taking --seed is bit-reproducible across runs and
// across --workers values.

#include "crosspaint/dataset.hpp"
#include "crosspaint/parallel.hpp"
#include "crosspaint/roaug.hpp"
#include "crosspaint/viaug.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cp = crosspaint;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPartialFailure = 2;

cp::kin::ChainRegistry load_registry() {
    auto reg = cp::kin::ChainRegistry::with_builtins();
    if (const char* extra = std::getenv("CROSSPAINT_REGISTRY")) {
        const std::filesystem::path p(extra);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> files;
            for (const auto& e : std::filesystem::directory_iterator(p)) {
                if (e.path().extension() == ".json") {
                    files.push_back(e.path());
                }
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                reg.load_file(f);
            }
        } else if (std::filesystem::exists(p)) {
            reg.load_file(p);
        } else {
            throw CLI::ValidationError("CROSSPAINT_REGISTRY path does not exist: " +
                                       p.string());
        }
    }
    return reg;
}

struct CommonOpts {
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string config_path;
    json config = json::object();

    void add_to(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Master seed (default 0)");
        cmd->add_option("--workers", workers, "Worker thread count (>= 1)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--config", config_path, "JSON config file; flags override it");
    }

    // Config file values fill in only where the flag was not given.
    void finalize(const CLI::App* cmd) {
        if (config_path.empty()) {
            return;
        }
        std::ifstream in(config_path);
        if (!in) {
            throw CLI::ValidationError("cannot open config file: " + config_path);
        }
        config = json::parse(in);
        if (config.contains("seed") && cmd->count("--seed") == 0) {
            seed = config.at("seed").get<std::uint64_t>();
        }
        if (config.contains("workers") && cmd->count("--workers") == 0) {
            workers = config.at("workers").get<unsigned>();
        }
        if (workers < 1) {
            throw CLI::ValidationError("workers must be >= 1");
        }
    }

    template <typename T>
    void from_config(const CLI::App* cmd, const std::string& flag, const char* key,
                     T& value) const {
        if (config.contains(key) && cmd->count(flag) == 0) {
            value = config.at(key).get<T>();
        }
    }
};

void write_run_report(const std::filesystem::path& dataset_dir, const json& report) {
    std::ofstream out(dataset_dir / "run_report.json", std::ios::trunc);
    out << report.dump(2) << "\n";
}

// --- gen-paired ------------------------------------------------------------

int cmd_gen_paired(const CommonOpts& common, const std::string& robots_csv, int count,
                   int cameras_per_pose, const std::string& out_dir,
                   const std::string& backgrounds, int size) {
    auto registry = load_registry();
    std::vector<std::string> robots;
    {
        std::stringstream ss(robots_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            robots.push_back(item);
        }
    }
    if (robots.size() != 2) {
        throw CLI::ValidationError("--robots expects exactly two chain names");
    }
    for (const auto& r : robots) {
        if (!registry.contains(r)) {
            throw CLI::ValidationError("unknown robot chain: " + r);
        }
    }
    const auto& chain_a = registry.get(robots[0]);
    const auto& chain_b = registry.get(robots[1]);

    cp::rng::RobotPoseSamplerConfig pose_cfg;
    cp::rng::CameraSamplerConfig cam_cfg;
    cam_cfg.width = size;
    cam_cfg.height = size;

    const cp::rng::SeedPath root(common.seed);
    const cp::rng::SeedPath gen = root.child("gen-paired");

    struct PairSlot {
        bool ok = false;
        std::vector<cp::raster::Frame> frames_a;
        std::vector<cp::raster::Frame> frames_b;
    };
    std::vector<PairSlot> slots(static_cast<std::size_t>(count));

    cp::par::parallel_for(static_cast<std::size_t>(count), common.workers, [&](std::size_t i) {
        cp::rng::RandomStream pose_stream(gen.child("pose").child(i));
        const cp::geom::Pose target = cp::rng::sample_robot_pose(pose_cfg, pose_stream);

        const cp::kin::IkResult ik_a = cp::kin::inverse_kinematics(
            chain_a, target, cp::kin::JointConfig{chain_a.home});
        const cp::kin::IkResult ik_b = cp::kin::inverse_kinematics(
            chain_b, target, cp::kin::JointConfig{chain_b.home});
        if (!ik_a.ok() || !ik_b.ok()) {
            return;  // pair skipped, counted below
        }

        PairSlot& slot = slots[i];
        for (int j = 0; j < cameras_per_pose; ++j) {
            cp::rng::RandomStream cam_stream(gen.child("camera").child(i).child(j));
            const auto [extr, intr] =
                cp::rng::sample_camera(cam_cfg, target.translation, cam_stream);
            cp::raster::Frame fa = cp::raster::render(chain_a, ik_a.q, intr, extr);
            cp::raster::Frame fb = cp::raster::render(chain_b, ik_b.q, intr, extr);
            fa.action = cp::Action{cp::ActionKind::AbsoluteTarget, fa.gripper_pose, 1.0};
            fb.action = cp::Action{cp::ActionKind::AbsoluteTarget, fb.gripper_pose, 1.0};
            slot.frames_a.push_back(std::move(fa));
            slot.frames_b.push_back(std::move(fb));
        }
        slot.ok = true;
    });

    cp::data::Dataset ds;
    ds.name = "paired";
    cp::data::Trajectory ta, tb;
    ta.id = robots[0] + "-paired";
    ta.robot = robots[0];
    ta.task = "paired-poses";
    tb.id = robots[1] + "-paired";
    tb.robot = robots[1];
    tb.task = "paired-poses";

    int skipped = 0;
    for (auto& slot : slots) {
        if (!slot.ok) {
            ++skipped;
            continue;
        }
        for (auto& f : slot.frames_a) {
            ta.frames.push_back(std::move(f));
        }
        for (auto& f : slot.frames_b) {
            tb.frames.push_back(std::move(f));
        }
    }
    if (ta.frames.empty()) {
        std::cerr << "error: every sampled pose was unreachable; nothing to write\n";
        return kExitValidation;
    }

    cp::data::ProvenanceEntry prov;
    prov.stage = "gen-paired";
    prov.config = {{"count", count}, {"cameras_per_pose", cameras_per_pose},
                   {"size", size}};
    prov.seed_path = gen.description();
    ta.provenance.push_back(prov);
    tb.provenance.push_back(prov);

    if (!backgrounds.empty()) {
        // Pasted variants with the wider brightness range used for
        // segmentation/translation training data.
        for (const auto* src : {&ta, &tb}) {
            cp::data::Trajectory pasted = *src;
            pasted.id = src->id + "-pasted";
            pasted.frames = cp::raster::paste_on_background_corpus(
                src->frames, backgrounds, gen.child("backgrounds").child(src->robot), 40);
            cp::data::ProvenanceEntry p;
            p.stage = "paste-backgrounds";
            p.config = {{"brightness_range", 40}};
            p.seed_path = gen.child("backgrounds").child(src->robot).description();
            pasted.provenance.push_back(std::move(p));
            ds.trajectories.push_back(std::move(pasted));
        }
    }
    ds.trajectories.push_back(std::move(ta));
    ds.trajectories.push_back(std::move(tb));

    cp::data::write_dataset(ds, out_dir);
    json report = {{"command", "gen-paired"},
                   {"poses_requested", count},
                   {"poses_skipped_unreachable", skipped},
                   {"seed", common.seed},
                   {"effective_config", common.config}};
    write_run_report(out_dir, report);
    std::cout << "gen-paired: " << (count - skipped) << "/" << count << " poses, "
              << cameras_per_pose << " cameras each, skipped " << skipped << "\n";
    return kExitOk;
}

// --- ro-aug ----------------------------------------------------------------

int cmd_ro_aug(const CommonOpts& common, const std::string& in_dir,
               const std::string& source, const std::string& target,
               const std::string& out_dir, int brightness, bool strict) {
    auto registry = load_registry();
    if (!registry.contains(source) || !registry.contains(target)) {
        throw CLI::ValidationError("unknown chain in --source/--target");
    }
    const cp::data::Dataset in = cp::data::read_dataset(in_dir);

    cp::roaug::RoAugConfig cfg;
    cfg.brightness_range = brightness;
    cfg.strict = strict;

    const cp::rng::SeedPath root = cp::rng::SeedPath(common.seed).child("ro-aug");

    cp::data::Dataset out;
    out.name = in.name + "-ro-aug";
    out.metadata = in.metadata;
    out.trajectories.resize(in.trajectories.size());

    std::vector<json> traj_reports(in.trajectories.size());
    std::atomic<std::size_t> total_failures{0};

    cp::par::parallel_for(in.trajectories.size(), common.workers, [&](std::size_t i) {
        const auto& traj = in.trajectories[i];
        // Per-trajectory stage set: the translator is stateful across frames.
        auto stages = cp::roaug::StageSet::geometric();
        auto [aug, report] = cp::roaug::ro_aug(traj, registry.get(source),
                                               registry.get(target), cfg,
                                               root.child(traj.id), stages);
        total_failures += report.failures;
        traj_reports[i] = {{"id", traj.id},
                           {"frames", report.frames.size()},
                           {"translator_failures", report.failures}};
        out.trajectories[i] = std::move(aug);
    });

    cp::data::write_dataset(out, out_dir);
    json report = {{"command", "ro-aug"},
                   {"source", source},
                   {"target", target},
                   {"brightness_range", brightness},
                   {"seed", common.seed},
                   {"trajectories", traj_reports},
                   {"total_translator_failures", total_failures.load()},
                   {"effective_config", common.config}};
    write_run_report(out_dir, report);
    std::cout << "ro-aug: " << out.trajectories.size() << " trajectories, "
              << total_failures.load() << " frame failures\n";
    return kExitOk;
}

// --- vi-aug ----------------------------------------------------------------

int cmd_vi_aug(const CommonOpts& common, const std::string& in_dir,
               const std::string& mode, const std::string& out_dir,
               const cp::rng::ViAugConfig& base_cfg) {
    cp::rng::ViAugConfig cfg = base_cfg;
    if (mode == "consistent") {
        cfg.mode = cp::rng::PerturbationMode::Consistent;
    } else if (mode == "inconsistent") {
        cfg.mode = cp::rng::PerturbationMode::Inconsistent;
    } else {
        throw CLI::ValidationError("--mode must be consistent or inconsistent");
    }
    const cp::data::Dataset in = cp::data::read_dataset(in_dir);
    const cp::rng::SeedPath root(common.seed);

    cp::data::Dataset out;
    out.name = in.name + "-vi-aug";
    out.metadata = in.metadata;
    out.trajectories.resize(in.trajectories.size());

    cp::par::parallel_for(in.trajectories.size(), common.workers, [&](std::size_t i) {
        out.trajectories[i] = cp::viaug::vi_aug(in.trajectories[i], cfg, root).trajectory;
    });

    cp::data::write_dataset(out, out_dir);
    json report = {{"command", "vi-aug"},
                   {"mode", mode},
                   {"tx_range", cfg.tx_range},
                   {"ty_range", cfg.ty_range},
                   {"tz_range", cfg.tz_range},
                   {"euler_range", cfg.euler_range},
                   {"seed", common.seed},
                   {"effective_config", common.config}};
    write_run_report(out_dir, report);
    std::cout << "vi-aug: " << out.trajectories.size() << " trajectories (" << mode
              << ")\n";
    return kExitOk;
}

// --- compose / stats / preview ----------------------------------------------

int cmd_compose(const std::string& inputs_csv, const std::string& out_dir) {
    std::vector<cp::data::Dataset> inputs;
    std::stringstream ss(inputs_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        inputs.push_back(cp::data::read_dataset(item));
        if (inputs.back().name.empty()) {
            inputs.back().name = std::filesystem::path(item).filename().string();
        }
    }
    if (inputs.empty()) {
        throw CLI::ValidationError("--inputs requires at least one dataset");
    }
    const cp::data::Dataset composed = cp::data::compose_cross_product(inputs);
    cp::data::write_dataset(composed, out_dir);
    write_run_report(out_dir, json{{"command", "compose"},
                                   {"inputs", inputs_csv},
                                   {"trajectories", composed.trajectories.size()}});
    std::cout << "compose: " << composed.trajectories.size() << " trajectories\n";
    return kExitOk;
}

int cmd_stats(const std::string& in_dir) {
    const cp::data::Dataset ds = cp::data::read_dataset(in_dir);
    std::cout << cp::data::stats(ds).to_json().dump(2) << "\n";
    return kExitOk;
}

int cmd_preview(const std::string& in_dir, const std::string& traj_id,
                const std::string& out_png) {
    const cp::data::Dataset ds = cp::data::read_dataset(in_dir);
    const cp::data::Trajectory* traj = nullptr;
    for (const auto& t : ds.trajectories) {
        if (t.id == traj_id) {
            traj = &t;
            break;
        }
    }
    if (!traj) {
        std::cerr << "error: trajectory not found: " << traj_id << "\n";
        return kExitValidation;
    }
    const int cols = 4, rows = 4;
    const std::size_t n = std::min<std::size_t>(traj->frames.size(), cols * rows);
    const int tile_w = traj->frames[0].rgb.width;
    const int tile_h = traj->frames[0].rgb.height;
    const int grid_cols = static_cast<int>(std::min<std::size_t>(n, cols));
    const int grid_rows = static_cast<int>((n + cols - 1) / cols);

    cp::img::Image8 montage(grid_cols * tile_w, grid_rows * tile_h, 3, 16);
    for (std::size_t k = 0; k < n; ++k) {
        // Sample evenly across the trajectory.
        const std::size_t src =
            n > 1 ? k * (traj->frames.size() - 1) / (n - 1) : 0;
        const auto& rgb = traj->frames[src].rgb;
        const int ox = static_cast<int>(k % cols) * tile_w;
        const int oy = static_cast<int>(k / cols) * tile_h;
        for (int y = 0; y < tile_h; ++y) {
            for (int x = 0; x < tile_w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    montage.at(ox + x, oy + y, c) = rgb.at(x, y, c);
                }
            }
        }
    }
    cp::img::write_png(out_png, montage);
    std::cout << "preview: wrote " << out_png << " (" << n << " frames)\n";
    return kExitOk;
}

// --- bench -------------------------------------------------------------------

int cmd_bench(const CommonOpts& common, const std::string& stage, int frames) {
    if (frames <= 0) {
        throw CLI::ValidationError("--frames must be > 0");
    }
    auto registry = load_registry();
    const auto& chain = registry.get("arm-a");
    const auto intr = cp::cam::CameraIntrinsics::make(256, 256, 55.0);
    const auto extr = cp::cam::look_at(cp::geom::Vec3(1.4, 0.4, 1.0),
                                       cp::geom::Vec3(0, 0, 0.7), cp::geom::Vec3(0, 0, 1));

    std::cout << "synthesizing " << frames << " input frames at 256x256...\n";
    std::vector<cp::raster::Frame> inputs(static_cast<std::size_t>(frames));
    cp::par::parallel_for(inputs.size(), std::max(common.workers, 4u), [&](std::size_t i) {
        cp::kin::JointConfig q{chain.home};
        q.angles[1] += 0.3 * std::sin(0.08 * static_cast<double>(i));
        q.angles[3] += 0.2 * std::cos(0.05 * static_cast<double>(i));
        inputs[i] = cp::raster::render(chain, q, intr, extr);
    });

    auto time_run = [&](unsigned workers) -> double {
        const auto t0 = std::chrono::steady_clock::now();
        if (stage == "segment") {
            cp::par::parallel_for(inputs.size(), workers, [&](std::size_t i) {
                cp::roaug::OracleSegmenter seg;
                volatile std::size_t sink = seg.mask(inputs[i]).count();
                (void)sink;
            });
        } else if (stage == "translate") {
            const auto& target = registry.get("arm-b");
            cp::par::parallel_for(inputs.size(), workers, [&](std::size_t i) {
                cp::roaug::GeometricTranslator tr;
                volatile bool sink = tr.translate(inputs[i], chain, target).ok;
                (void)sink;
            });
        } else if (stage == "inpaint") {
            // Trajectory-level barrier stage: one pass over all frames.
            std::vector<cp::img::Image8> rgbs;
            std::vector<cp::img::MaskImage> masks;
            for (const auto& f : inputs) {
                rgbs.push_back(f.rgb);
                masks.push_back(f.mask);
            }
            volatile std::size_t sink = cp::roaug::plate_inpaint(rgbs, masks).size();
            (void)sink;
        } else if (stage == "reproject") {
            cp::par::parallel_for(inputs.size(), workers, [&](std::size_t i) {
                cp::geom::RigidTransform pert;
                pert.translation = cp::geom::Vec3(0.1, 0.0, -0.05);
                volatile float sink =
                    cp::viaug::reproject(inputs[i], pert).first.depth.at(0, 0);
                (void)sink;
            });
        } else {
            throw CLI::ValidationError(
                "--stage must be segment, translate, inpaint or reproject");
        }
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(t1 - t0).count();
    };

    const double t_single = time_run(1);
    const unsigned multi = std::max(common.workers, 2u);
    const double t_multi = time_run(multi);
    const double fps_single = frames / std::max(t_single, 1e-9);
    const double fps_multi = frames / std::max(t_multi, 1e-9);

    std::cout << "\nstage        workers  fps        note\n";
    std::cout << "-----------  -------  ---------  ----------------------------\n";
    auto row = [](const std::string& name, const std::string& workers, double fps,
                  const std::string& note) {
        std::printf("%-11s  %-7s  %-9.2f  %s\n", name.c_str(), workers.c_str(), fps,
                    note.c_str());
    };
    row(stage, "1", fps_single, "this machine, geometric stage");
    row(stage, std::to_string(multi), fps_multi, "this machine, geometric stage");
    row("segment", "-", 4.1, "reference, non-binding (GPU model)");
    row("translate", "-", 3.2, "reference, non-binding (GPU model)");
    row("inpaint", "-", 4.6, "reference, non-binding (GPU model)");
    row("reproject", "-", 1.3, "reference, non-binding (GPU model)");

    if (std::thread::hardware_concurrency() >= 4 && stage != "inpaint" &&
        fps_multi < fps_single) {
        std::cerr << "warning: multi-worker throughput below single-worker\n";
    }
    return kExitOk;
}

// --- import -------------------------------------------------------------------

int cmd_import(const std::string& in_dir, const std::string& robot,
               const std::string& task, const std::string& out_dir) {
    namespace fs = std::filesystem;
    cp::data::Dataset ds;
    ds.name = fs::path(in_dir).filename().string();

    std::vector<fs::path> episodes;
    for (const auto& e : fs::directory_iterator(in_dir)) {
        if (e.is_directory()) {
            episodes.push_back(e.path());
        }
    }
    std::sort(episodes.begin(), episodes.end());
    if (episodes.empty()) {
        throw CLI::ValidationError("import: no episode directories in " + in_dir);
    }

    for (const auto& ep : episodes) {
        const json poses = json::parse(std::ifstream(ep / "poses.json"));
        std::vector<fs::path> images;
        for (const auto& e : fs::directory_iterator(ep)) {
            if (e.path().extension() == ".png") {
                images.push_back(e.path());
            }
        }
        std::sort(images.begin(), images.end());
        if (images.size() != poses.at("frames").size()) {
            throw std::runtime_error("import: image/pose count mismatch in " +
                                     ep.string());
        }

        cp::data::Trajectory traj;
        traj.id = ep.filename().string();
        traj.robot = robot;
        traj.task = task;
        const json& cj = poses.at("camera");
        for (std::size_t i = 0; i < images.size(); ++i) {
            cp::raster::Frame f;
            f.rgb = cp::img::read_png(images[i]);
            f.depth = cp::img::DepthImage(f.rgb.width, f.rgb.height, 0.0f);
            f.mask = cp::img::MaskImage(f.rgb.width, f.rgb.height, false);
            f.intrinsics = cp::cam::CameraIntrinsics::make(
                cj.at("width"), cj.at("height"), cj.at("fov_v_deg"));
            std::array<double, 7> pv{};
            const auto cam_pose = cj.at("pose").get<std::vector<double>>();
            std::copy(cam_pose.begin(), cam_pose.end(), pv.begin());
            f.extrinsics.pose = cp::geom::Pose::from_seven(pv);
            const json& fj = poses.at("frames")[i];
            const auto gp = fj.at("gripper_pose").get<std::vector<double>>();
            std::copy(gp.begin(), gp.end(), pv.begin());
            f.gripper_pose = cp::geom::Pose::from_seven(pv);
            if (fj.contains("action")) {
                cp::Action a;
                const auto ap = fj.at("action").at("pose").get<std::vector<double>>();
                std::copy(ap.begin(), ap.end(), pv.begin());
                a.pose = cp::geom::Pose::from_seven(pv);
                a.gripper = fj.at("action").value("gripper", 1.0);
                a.kind = fj.at("action").value("kind", std::string("absolute")) == "delta"
                             ? cp::ActionKind::Delta
                             : cp::ActionKind::AbsoluteTarget;
                f.action = a;
            }
            traj.frames.push_back(std::move(f));
        }
        cp::data::ProvenanceEntry prov;
        prov.stage = "import";
        prov.config = {{"source", ep.string()}};
        traj.provenance.push_back(std::move(prov));
        ds.trajectories.push_back(std::move(traj));
    }

    cp::data::write_dataset(ds, out_dir);
    std::cout << "import: " << ds.trajectories.size() << " trajectories\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-embodiment robot data augmentation"};
    app.require_subcommand(1);

    // gen-paired
    auto* gen = app.add_subcommand(
        "gen-paired", "Render paired images of two robots at shared poses/cameras");
    CommonOpts gen_common;
    gen_common.add_to(gen);
    std::string gen_robots = "arm-a,arm-b", gen_out, gen_backgrounds;
    int gen_count = 10, gen_cameras = 5, gen_size = 256;
    gen->add_option("--robots", gen_robots, "Two chain names, comma separated");
    gen->add_option("--count", gen_count, "Number of robot poses")->check(CLI::PositiveNumber);
    gen->add_option("--cameras", gen_cameras, "Cameras per pose")->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "Output dataset directory")->required();
    gen->add_option("--backgrounds", gen_backgrounds, "Background corpus directory");
    gen->add_option("--size", gen_size, "Image size in pixels")->check(CLI::PositiveNumber);

    // ro-aug
    auto* ro = app.add_subcommand("ro-aug", "Replace the source robot with the target robot");
    CommonOpts ro_common;
    ro_common.add_to(ro);
    std::string ro_in, ro_source, ro_target, ro_out;
    int ro_brightness = 30;
    bool ro_strict = false;
    ro->add_option("--in", ro_in, "Input dataset")->required();
    ro->add_option("--source", ro_source, "Source chain name")->required();
    ro->add_option("--target", ro_target, "Target chain name")->required();
    ro->add_option("--out", ro_out, "Output dataset")->required();
    ro->add_option("--brightness", ro_brightness, "Brightness delta range (default 30)");
    ro->add_flag("--strict", ro_strict, "Abort on any frame failure");

    // vi-aug
    auto* vi = app.add_subcommand("vi-aug", "Synthesize perturbed-camera views");
    CommonOpts vi_common;
    vi_common.add_to(vi);
    std::string vi_in, vi_mode = "inconsistent", vi_out;
    cp::rng::ViAugConfig vi_cfg;
    vi->add_option("--in", vi_in, "Input dataset")->required();
    vi->add_option("--mode", vi_mode, "consistent | inconsistent");
    vi->add_option("--out", vi_out, "Output dataset")->required();
    vi->add_option("--tx-range", vi_cfg.tx_range, "x translation range, m (default 0.25)");
    vi->add_option("--ty-range", vi_cfg.ty_range, "y translation range, m (default 0.1)");
    vi->add_option("--tz-range", vi_cfg.tz_range, "z translation range, m (default 0.25)");
    vi->add_option("--euler-range", vi_cfg.euler_range,
                   "per-axis Euler range, rad (default 0.1)");

    // compose
    auto* comp = app.add_subcommand("compose", "Union datasets into a robot/task cross product");
    std::string comp_inputs, comp_out;
    comp->add_option("--inputs", comp_inputs, "Comma-separated dataset directories")
        ->required();
    comp->add_option("--out", comp_out, "Output dataset")->required();

    // stats
    auto* st = app.add_subcommand("stats", "Print dataset statistics as JSON");
    std::string st_in;
    st->add_option("--in", st_in, "Dataset directory")->required();

    // preview
    auto* pre = app.add_subcommand("preview", "Write a contact-sheet PNG of a trajectory");
    std::string pre_in, pre_traj, pre_out = "montage.png";
    pre->add_option("--in", pre_in, "Dataset directory")->required();
    pre->add_option("--traj", pre_traj, "Trajectory id")->required();
    pre->add_option("--out", pre_out, "Output PNG path");

    // bench
    auto* bench = app.add_subcommand("bench", "Measure geometric stage throughput");
    CommonOpts bench_common;
    bench_common.workers = 4;
    bench_common.add_to(bench);
    std::string bench_stage;
    int bench_frames = 0;
    bench->add_option("--stage", bench_stage, "segment | translate | inpaint | reproject")
        ->required();
    bench->add_option("--frames", bench_frames, "Number of synthetic frames")->required();

    // import
    auto* imp = app.add_subcommand("import", "Import per-episode image folders + pose tables");
    std::string imp_in, imp_robot, imp_task, imp_out;
    imp->add_option("--in", imp_in, "Episodes root directory")->required();
    imp->add_option("--robot", imp_robot, "Robot chain name for the episodes")->required();
    imp->add_option("--task", imp_task, "Task label")->required();
    imp->add_option("--out", imp_out, "Output dataset")->required();

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            gen_common.finalize(gen);
            gen_common.from_config(gen, "--count", "count", gen_count);
            gen_common.from_config(gen, "--size", "size", gen_size);
            return cmd_gen_paired(gen_common, gen_robots, gen_count, gen_cameras, gen_out,
                                  gen_backgrounds, gen_size);
        }
        if (ro->parsed()) {
            ro_common.finalize(ro);
            ro_common.from_config(ro, "--brightness", "brightness", ro_brightness);
            return cmd_ro_aug(ro_common, ro_in, ro_source, ro_target, ro_out,
                              ro_brightness, ro_strict);
        }
        if (vi->parsed()) {
            vi_common.finalize(vi);
            vi_common.from_config(vi, "--tx-range", "tx_range", vi_cfg.tx_range);
            vi_common.from_config(vi, "--ty-range", "ty_range", vi_cfg.ty_range);
            vi_common.from_config(vi, "--tz-range", "tz_range", vi_cfg.tz_range);
            vi_common.from_config(vi, "--euler-range", "euler_range", vi_cfg.euler_range);
            return cmd_vi_aug(vi_common, vi_in, vi_mode, vi_out, vi_cfg);
        }
        if (comp->parsed()) {
            return cmd_compose(comp_inputs, comp_out);
        }
        if (st->parsed()) {
            return cmd_stats(st_in);
        }
        if (pre->parsed()) {
            return cmd_preview(pre_in, pre_traj, pre_out);
        }
        if (bench->parsed()) {
            bench_common.finalize(bench);
            return cmd_bench(bench_common, bench_stage, bench_frames);
        }
        if (imp->parsed()) {
            return cmd_import(imp_in, imp_robot, imp_task, imp_out);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        // Strict-mode pipeline aborts surface as partial failures.
        const std::string what = e.what();
        if (what.find("translator failed") != std::string::npos) {
            return kExitPartialFailure;
        }
        return kExitValidation;
    }
    return kExitValidation;
}
