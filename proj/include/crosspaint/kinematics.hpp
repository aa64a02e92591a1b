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

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace crosspaint::kin {

/// Revolute joint: rotation about `axis` after the fixed `origin` offset from
/// the parent link frame.
struct JointSpec {
    geom::Vec3 axis{0, 0, 1};  // unit vector in the joint's own frame
    geom::Pose origin;         // parent-link frame -> joint frame
    double lo = -M_PI;
    double hi = M_PI;
};

/// Capsule: segment p0-p1 with a radius, in the owning link's frame.
struct Capsule {
    geom::Vec3 p0;
    geom::Vec3 p1;
    double radius = 0.0;
    std::array<std::uint8_t, 3> color{200, 200, 200};
};

struct LinkGeometry {
    std::vector<Capsule> capsules;
};

/// Serial arm: joints[i] connects link i-1 to link i; links[i] is rigid to the
/// frame after joints[i]; `base` is rigid to the base frame.
struct KinematicChain {
    std::string name;
    std::vector<JointSpec> joints;
    std::vector<LinkGeometry> links;  // one entry per joint
    LinkGeometry base;
    geom::Pose tip_offset;            // last link frame -> gripper tip
    std::vector<double> home;

    std::size_t dof() const { return joints.size(); }
    void validate() const;  // throws std::invalid_argument on contract violations
};

struct JointConfig {
    std::vector<double> angles;
};

struct FkResult {
    geom::Pose tip;                       // gripper tip in base frame
    std::vector<geom::Pose> link_poses;   // frame after each joint
};

/// Forward kinematics. Throws std::out_of_range if q violates joint limits.
FkResult forward_kinematics(const KinematicChain& chain, const JointConfig& q);

enum class IkStatus { Converged, Unreachable };

struct IkResult {
    IkStatus status = IkStatus::Unreachable;
    JointConfig q;
    double pos_residual = 0.0;  // meters
    double rot_residual = 0.0;  // radians
    int iterations = 0;
    int restarts_used = 0;

    bool ok() const { return status == IkStatus::Converged; }
};

struct IkOptions {
    double lambda = 0.05;        // damping
    double step_clamp = 0.2;     // radians, per joint per iteration
    double tol_pos = 1e-4;       // meters
    double tol_rot = 1e-3;       // radians
    int max_iterations = 200;
    int restarts = 8;            // deterministic restarts after the seed fails
};

/// Damped-least-squares IK. Runs from `seed` first; on failure tries
/// `opts.restarts` deterministic restarts and returns the converged solution
/// closest to the seed in joint space. On total failure returns Unreachable
/// with the best-effort residual.
IkResult inverse_kinematics(const KinematicChain& chain, const geom::Pose& target,
                            const JointConfig& seed, const IkOptions& opts = {});

/// All capsules of the chain at configuration q, in the base (world) frame.
std::vector<Capsule> world_capsules(const KinematicChain& chain, const FkResult& fk);

/// Registry of robot models. Ships four built-in arms with distinct
/// silhouettes ("arm-a".."arm-d") plus a 2-link planar chain ("planar-2")
/// used for analytic tests; more chains can be loaded from JSON files.
class ChainRegistry {
public:
    static ChainRegistry with_builtins();

    void add(KinematicChain chain);
    void load_file(const std::filesystem::path& path);
    const KinematicChain& get(const std::string& name) const;
    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, KinematicChain> chains_;
};

KinematicChain chain_from_json_text(const std::string& text);
std::string chain_to_json_text(const KinematicChain& chain);

}  // namespace crosspaint::kin
