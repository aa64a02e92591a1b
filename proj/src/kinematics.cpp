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

#include "crosspaint/kinematics.hpp"

#include "crosspaint/sampler.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <fstream>

namespace crosspaint::kin {

using json = nlohmann::json;

void KinematicChain::validate() const {
    if (joints.size() < 2 || joints.size() > 8) {
        throw std::invalid_argument("chain " + name + ": joint count out of range [2, 8]");
    }
    if (links.size() != joints.size()) {
        throw std::invalid_argument("chain " + name + ": need one link per joint");
    }
    if (home.size() != joints.size()) {
        throw std::invalid_argument("chain " + name + ": home size != joint count");
    }
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const auto& j = joints[i];
        if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
            throw std::invalid_argument("chain " + name + ": joint axis not unit length");
        }
        if (!(j.lo < j.hi)) {
            throw std::invalid_argument("chain " + name + ": joint limits lo >= hi");
        }
        if (home[i] < j.lo || home[i] > j.hi) {
            throw std::invalid_argument("chain " + name + ": home outside joint limits");
        }
        if (links[i].capsules.empty()) {
            throw std::invalid_argument("chain " + name + ": link without capsules");
        }
        for (const auto& c : links[i].capsules) {
            if (!(c.radius > 0.0)) {
                throw std::invalid_argument("chain " + name + ": capsule radius <= 0");
            }
        }
    }
}

FkResult forward_kinematics(const KinematicChain& chain, const JointConfig& q) {
    if (q.angles.size() != chain.dof()) {
        throw std::out_of_range("forward_kinematics: joint config size mismatch");
    }
    for (std::size_t i = 0; i < chain.dof(); ++i) {
        if (q.angles[i] < chain.joints[i].lo - 1e-12 ||
            q.angles[i] > chain.joints[i].hi + 1e-12) {
            throw std::out_of_range("forward_kinematics: joint " + std::to_string(i) +
                                    " outside limits");
        }
    }
    FkResult out;
    out.link_poses.reserve(chain.dof());
    geom::Pose t;
    for (std::size_t i = 0; i < chain.dof(); ++i) {
        t = t * chain.joints[i].origin *
            geom::Pose{geom::Rotation::from_axis_angle(chain.joints[i].axis, q.angles[i]),
                       geom::Vec3::Zero()};
        out.link_poses.push_back(t);
    }
    out.tip = t * chain.tip_offset;
    return out;
}

namespace {

struct Attempt {
    bool converged = false;
    JointConfig q;
    double pos_residual = 0.0;
    double rot_residual = 0.0;
    int iterations = 0;
};

// Combined task-space error magnitude used for step acceptance.
double task_error(const KinematicChain& chain, const geom::Pose& target,
                  const JointConfig& q, geom::Vec3* e_p, geom::Vec3* e_r,
                  FkResult* fk_out) {
    const FkResult fk = forward_kinematics(chain, q);
    *e_p = target.translation - fk.tip.translation;
    const geom::Mat3 rel = target.rotation.matrix() * fk.tip.rotation.matrix().transpose();
    const Eigen::AngleAxisd aa(rel);
    *e_r = aa.angle() * aa.axis();
    *fk_out = fk;
    return e_p->norm() + 0.3 * e_r->norm();
}

Attempt dls_solve(const KinematicChain& chain, const geom::Pose& target,
                  JointConfig q, const IkOptions& opts, rng::RandomStream kicks) {
    const int n = static_cast<int>(chain.dof());
    Attempt att;
    att.q = q;
    Eigen::MatrixXd jac(6, n);
    FkResult fk;
    geom::Vec3 e_p, e_r;
    double cost = task_error(chain, target, q, &e_p, &e_r, &fk);
    double best_cost = cost;
    double window_best = cost;
    int since_progress = 0;
    for (int iter = 0; iter <= opts.max_iterations; ++iter) {
        if (cost <= best_cost) {
            best_cost = cost;
            att.q = q;
            att.pos_residual = e_p.norm();
            att.rot_residual = e_r.norm();
        }
        att.iterations = iter;
        if (e_p.norm() <= opts.tol_pos && e_r.norm() <= opts.tol_rot) {
            att.q = q;
            att.pos_residual = e_p.norm();
            att.rot_residual = e_r.norm();
            att.converged = true;
            return att;
        }
        if (iter == opts.max_iterations) {
            break;
        }

        // A stalled iteration is stuck in a local minimum (typically a joint
        // limit); spend the remaining budget from a fresh deterministic
        // configuration instead.
        if (cost < window_best - 1e-12) {
            window_best = cost;
            since_progress = 0;
        } else if (++since_progress >= 10) {
            for (int i = 0; i < n; ++i) {
                q.angles[i] = kicks.uniform(chain.joints[i].lo, chain.joints[i].hi);
            }
            cost = task_error(chain, target, q, &e_p, &e_r, &fk);
            window_best = cost;
            since_progress = 0;
            continue;
        }

        for (int i = 0; i < n; ++i) {
            const geom::Vec3 z = chain.joints[i].axis.isApprox(geom::Vec3::Zero())
                                     ? geom::Vec3::UnitZ()
                                     : fk.link_poses[i].rotation * chain.joints[i].axis;
            const geom::Vec3 p = fk.link_poses[i].translation;
            jac.block<3, 1>(0, i) = z.cross(fk.tip.translation - p);
            jac.block<3, 1>(3, i) = z;
        }
        Eigen::Matrix<double, 6, 1> err;
        err << e_p, e_r;
        const Eigen::Matrix<double, 6, 6> a =
            jac * jac.transpose() +
            opts.lambda * opts.lambda * Eigen::Matrix<double, 6, 6>::Identity();
        Eigen::VectorXd dq = jac.transpose() * a.ldlt().solve(err);
        for (int i = 0; i < n; ++i) {
            dq[i] = std::clamp(dq[i], -opts.step_clamp, opts.step_clamp);
        }

        // Backtracking: halve the damped step until the task error decreases,
        // which keeps the iteration from oscillating near joint limits.
        double scale = 1.0;
        for (int bt = 0; bt < 5; ++bt) {
            JointConfig trial = q;
            for (int i = 0; i < n; ++i) {
                trial.angles[i] = std::clamp(trial.angles[i] + scale * dq[i],
                                             chain.joints[i].lo, chain.joints[i].hi);
            }
            geom::Vec3 t_p, t_r;
            FkResult t_fk;
            const double t_cost = task_error(chain, target, trial, &t_p, &t_r, &t_fk);
            if (t_cost < cost || bt == 4) {
                q = std::move(trial);
                cost = t_cost;
                e_p = t_p;
                e_r = t_r;
                fk = std::move(t_fk);
                break;
            }
            scale *= 0.5;
        }
    }
    return att;
}

double joint_distance(const JointConfig& a, const JointConfig& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.angles.size(); ++i) {
        const double d = a.angles[i] - b.angles[i];
        s += d * d;
    }
    return std::sqrt(s);
}

rng::SeedPath ik_seed_path(const KinematicChain& chain, const geom::Pose& target) {
    const auto seven = target.to_seven();
    const std::string_view target_bytes(reinterpret_cast<const char*>(seven.data()),
                                        seven.size() * sizeof(double));
    return rng::SeedPath(0x1B5E9A3Full)
        .child("ik-restart")
        .child(chain.name)
        .child(target_bytes);
}

// Deterministic restart configurations: a pure function of chain, target and
// restart index, so IK results never depend on caller state.
JointConfig restart_config(const KinematicChain& chain, const geom::Pose& target,
                           int restart_index) {
    rng::RandomStream stream(
        ik_seed_path(chain, target).child(static_cast<std::uint64_t>(restart_index)));
    JointConfig q;
    q.angles.reserve(chain.dof());
    for (const auto& j : chain.joints) {
        q.angles.push_back(stream.uniform(j.lo, j.hi));
    }
    return q;
}

// Stream feeding the in-attempt stall re-seeds; a pure function of chain,
// target and attempt index like the restart configurations.
rng::RandomStream kick_stream(const KinematicChain& chain, const geom::Pose& target,
                              int attempt_index) {
    return rng::RandomStream(
        ik_seed_path(chain, target).child("kick").child(
            static_cast<std::uint64_t>(attempt_index)));
}

}  // namespace

IkResult inverse_kinematics(const KinematicChain& chain, const geom::Pose& target,
                            const JointConfig& seed, const IkOptions& opts) {
    if (seed.angles.size() != chain.dof()) {
        throw std::out_of_range("inverse_kinematics: seed size mismatch");
    }

    IkResult out;
    const Attempt first = dls_solve(chain, target, seed, opts, kick_stream(chain, target, 0));
    if (first.converged) {
        out.status = IkStatus::Converged;
        out.q = first.q;
        out.pos_residual = first.pos_residual;
        out.rot_residual = first.rot_residual;
        out.iterations = first.iterations;
        return out;
    }

    Attempt best_failed = first;
    bool have_converged = false;
    Attempt best_converged;
    double best_distance = 0.0;
    for (int k = 0; k < opts.restarts; ++k) {
        const Attempt att = dls_solve(chain, target, restart_config(chain, target, k), opts,
                                      kick_stream(chain, target, k + 1));
        if (att.converged) {
            const double d = joint_distance(att.q, seed);
            if (!have_converged || d < best_distance) {
                have_converged = true;
                best_converged = att;
                best_converged.iterations += k + 1;  // fold restart count into stats
                best_distance = d;
            }
        } else if (att.pos_residual < best_failed.pos_residual) {
            best_failed = att;
        }
        out.restarts_used = k + 1;
    }

    const Attempt& chosen = have_converged ? best_converged : best_failed;
    out.status = have_converged ? IkStatus::Converged : IkStatus::Unreachable;
    out.q = chosen.q;
    out.pos_residual = chosen.pos_residual;
    out.rot_residual = chosen.rot_residual;
    out.iterations = chosen.iterations;
    return out;
}

std::vector<Capsule> world_capsules(const KinematicChain& chain, const FkResult& fk) {
    std::vector<Capsule> out;
    auto add = [&](const LinkGeometry& link, const geom::Pose& pose) {
        for (Capsule c : link.capsules) {
            c.p0 = pose.apply(c.p0);
            c.p1 = pose.apply(c.p1);
            out.push_back(c);
        }
    };
    add(chain.base, geom::Pose::identity());
    for (std::size_t i = 0; i < chain.dof(); ++i) {
        add(chain.links[i], fk.link_poses[i]);
    }
    return out;
}

// --- JSON schema ---

namespace {

json pose_to_json(const geom::Pose& p) {
    const auto v = p.to_seven();
    return json(std::vector<double>(v.begin(), v.end()));
}

geom::Pose pose_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 7) {
        throw std::invalid_argument("pose: expected 7 numbers");
    }
    std::array<double, 7> a;
    std::copy(v.begin(), v.end(), a.begin());
    return geom::Pose::from_seven(a);
}

json capsule_to_json(const Capsule& c) {
    return json{{"p0", {c.p0.x(), c.p0.y(), c.p0.z()}},
                {"p1", {c.p1.x(), c.p1.y(), c.p1.z()}},
                {"radius", c.radius},
                {"color", {c.color[0], c.color[1], c.color[2]}}};
}

Capsule capsule_from_json(const json& j) {
    Capsule c;
    c.p0 = geom::Vec3(j.at("p0")[0], j.at("p0")[1], j.at("p0")[2]);
    c.p1 = geom::Vec3(j.at("p1")[0], j.at("p1")[1], j.at("p1")[2]);
    c.radius = j.at("radius");
    const auto col = j.at("color");
    c.color = {col[0].get<std::uint8_t>(), col[1].get<std::uint8_t>(),
               col[2].get<std::uint8_t>()};
    return c;
}

json link_to_json(const LinkGeometry& l) {
    json caps = json::array();
    for (const auto& c : l.capsules) {
        caps.push_back(capsule_to_json(c));
    }
    return json{{"capsules", caps}};
}

LinkGeometry link_from_json(const json& j) {
    LinkGeometry l;
    for (const auto& c : j.at("capsules")) {
        l.capsules.push_back(capsule_from_json(c));
    }
    return l;
}

}  // namespace

std::string chain_to_json_text(const KinematicChain& chain) {
    json j;
    j["name"] = chain.name;
    j["tip_offset"] = pose_to_json(chain.tip_offset);
    j["home"] = chain.home;
    j["joints"] = json::array();
    for (const auto& joint : chain.joints) {
        j["joints"].push_back(json{{"axis", {joint.axis.x(), joint.axis.y(), joint.axis.z()}},
                                   {"origin", pose_to_json(joint.origin)},
                                   {"limits", {joint.lo, joint.hi}}});
    }
    j["links"] = json::array();
    for (const auto& link : chain.links) {
        j["links"].push_back(link_to_json(link));
    }
    j["base"] = link_to_json(chain.base);
    return j.dump(2);
}

KinematicChain chain_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    KinematicChain chain;
    chain.name = j.at("name");
    chain.tip_offset = pose_from_json(j.at("tip_offset"));
    chain.home = j.at("home").get<std::vector<double>>();
    for (const auto& joint : j.at("joints")) {
        JointSpec spec;
        const auto axis = joint.at("axis");
        spec.axis = geom::Vec3(axis[0], axis[1], axis[2]);
        spec.origin = pose_from_json(joint.at("origin"));
        spec.lo = joint.at("limits")[0];
        spec.hi = joint.at("limits")[1];
        chain.joints.push_back(spec);
    }
    for (const auto& link : j.at("links")) {
        chain.links.push_back(link_from_json(link));
    }
    if (j.contains("base")) {
        chain.base = link_from_json(j.at("base"));
    }
    chain.validate();
    return chain;
}

// --- Built-in chains ---

namespace {

struct ArmJoint {
    geom::Vec3 axis;
    geom::Vec3 offset;
    double lo, hi;
};

KinematicChain build_arm(const std::string& name, const std::vector<ArmJoint>& joints,
                         const geom::Vec3& tip, std::vector<double> home,
                         double radius, std::array<std::uint8_t, 3> color_a,
                         std::array<std::uint8_t, 3> color_b) {
    KinematicChain chain;
    chain.name = name;
    for (const auto& aj : joints) {
        JointSpec spec;
        spec.axis = aj.axis.normalized();
        spec.origin = geom::Pose::from_translation(aj.offset);
        spec.lo = aj.lo;
        spec.hi = aj.hi;
        chain.joints.push_back(spec);
    }
    chain.tip_offset = geom::Pose::from_translation(tip);
    chain.home = std::move(home);

    // Each link gets a capsule spanning from its own frame origin to the next
    // joint's offset (the tip offset for the last link).
    for (std::size_t i = 0; i < chain.joints.size(); ++i) {
        const geom::Vec3 end = i + 1 < chain.joints.size()
                                   ? chain.joints[i + 1].origin.translation
                                   : chain.tip_offset.translation;
        Capsule c;
        c.p0 = geom::Vec3::Zero();
        c.p1 = end;
        c.radius = i + 1 == chain.joints.size() ? radius * 0.6 : radius;
        c.color = (i % 2 == 0) ? color_a : color_b;
        LinkGeometry link;
        link.capsules.push_back(c);
        chain.links.push_back(link);
    }
    Capsule pedestal;
    pedestal.p0 = geom::Vec3(0, 0, -0.02);
    pedestal.p1 = chain.joints[0].origin.translation;
    pedestal.radius = radius * 1.4;
    pedestal.color = color_b;
    chain.base.capsules.push_back(pedestal);

    chain.validate();
    return chain;
}

}  // namespace

ChainRegistry ChainRegistry::with_builtins() {
    using V = geom::Vec3;
    ChainRegistry reg;

    // 7-dof arm, white/blue, the widest reach of the set.
    reg.add(build_arm(
        "arm-a",
        {{V(0, 0, 1), V(0, 0, 0.15), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.10), -2.2, 2.2},
         {V(0, 0, 1), V(0, 0, 0.35), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.10), -2.4, 2.4},
         {V(0, 0, 1), V(0, 0, 0.50), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.15), -2.2, 2.2},
         {V(0, 0, 1), V(0, 0, 0.10), -2.9, 2.9}},
        V(0, 0, 0.15), {0.0, -0.5, 0.0, 1.1, 0.0, 0.8, 0.0}, 0.055,
        {235, 235, 235}, {60, 90, 200}));

    // 6-dof arm, gray, long upper arm and forearm.
    reg.add(build_arm(
        "arm-b",
        {{V(0, 0, 1), V(0, 0, 0.12), -3.1, 3.1},
         {V(0, 1, 0), V(0, 0, 0.08), -3.1, 3.1},
         {V(0, 1, 0), V(0, 0, 0.55), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.50), -3.1, 3.1},
         {V(0, 0, 1), V(0, 0, 0.10), -3.1, 3.1},
         {V(0, 1, 0), V(0, 0, 0.10), -3.1, 3.1}},
        V(0, 0, 0.12), {0.0, -0.8, 1.4, -0.6, 0.0, 0.4}, 0.045,
        {150, 150, 155}, {70, 70, 75}));

    // 7-dof arm, red/black, with a lateral shoulder offset.
    KinematicChain arm_c = build_arm(
        "arm-c",
        {{V(0, 0, 1), V(0, 0, 0.17), -2.9, 2.9},
         {V(0, 1, 0), V(0.08, 0, 0.10), -2.5, 2.5},
         {V(0, 0, 1), V(0, 0, 0.40), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.12), -2.5, 2.5},
         {V(0, 0, 1), V(0, 0, 0.40), -2.9, 2.9},
         {V(0, 1, 0), V(0, 0, 0.12), -2.5, 2.5},
         {V(0, 0, 1), V(0, 0, 0.12), -2.9, 2.9}},
        V(0, 0, 0.14), {0.0, -0.6, 0.0, 1.0, 0.0, 0.7, 0.0}, 0.06,
        {190, 40, 40}, {35, 35, 35});
    reg.add(arm_c);

    // 6-dof arm, slim and dark.
    reg.add(build_arm(
        "arm-d",
        {{V(0, 0, 1), V(0, 0, 0.16), -3.1, 3.1},
         {V(0, 1, 0), V(0, 0, 0.12), -2.8, 2.8},
         {V(0, 1, 0), V(0, 0, 0.41), -2.8, 2.8},
         {V(0, 0, 1), V(0, 0, 0.21), -3.1, 3.1},
         {V(0, 1, 0), V(0, 0, 0.21), -2.8, 2.8},
         {V(0, 0, 1), V(0, 0, 0.16), -3.1, 3.1}},
        V(0, 0, 0.10), {0.0, -0.7, 1.2, 0.0, 0.6, 0.0}, 0.04,
        {45, 45, 45}, {90, 140, 90}));

    // Planar 2-link chain for analytic FK tests: links 0.3 m and 0.2 m in the
    // xy plane, both joints about +z, tip 0.2 m along local x.
    {
        KinematicChain planar;
        planar.name = "planar-2";
        JointSpec j1;
        j1.axis = V(0, 0, 1);
        j1.lo = -M_PI;
        j1.hi = M_PI;
        JointSpec j2 = j1;
        j2.origin = geom::Pose::from_translation(V(0.3, 0, 0));
        planar.joints = {j1, j2};
        planar.tip_offset = geom::Pose::from_translation(V(0.2, 0, 0));
        planar.home = {0.0, 0.0};
        Capsule c1;
        c1.p0 = V::Zero();
        c1.p1 = V(0.3, 0, 0);
        c1.radius = 0.02;
        c1.color = {200, 120, 40};
        Capsule c2 = c1;
        c2.p1 = V(0.2, 0, 0);
        c2.color = {40, 120, 200};
        planar.links = {LinkGeometry{{c1}}, LinkGeometry{{c2}}};
        planar.base.capsules.push_back(c1);
        planar.validate();
        reg.add(planar);
    }

    return reg;
}

void ChainRegistry::add(KinematicChain chain) {
    chain.validate();
    chains_[chain.name] = std::move(chain);
}

void ChainRegistry::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open chain file: " + path.string());
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    add(chain_from_json_text(text));
}

const KinematicChain& ChainRegistry::get(const std::string& name) const {
    const auto it = chains_.find(name);
    if (it == chains_.end()) {
        throw std::out_of_range("unknown chain: " + name);
    }
    return it->second;
}

bool ChainRegistry::contains(const std::string& name) const {
    return chains_.count(name) != 0;
}

std::vector<std::string> ChainRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, chain] : chains_) {
        out.push_back(name);
    }
    return out;
}

}  // namespace crosspaint::kin
