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

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace crosspaint;
using kin::ChainRegistry;
using kin::JointConfig;

namespace {

JointConfig random_config(const kin::KinematicChain& chain, rng::RandomStream& s,
                          double margin = 0.9) {
    JointConfig q;
    for (const auto& j : chain.joints) {
        const double mid = 0.5 * (j.lo + j.hi);
        const double half = 0.5 * (j.hi - j.lo) * margin;
        q.angles.push_back(s.uniform(mid - half, mid + half));
    }
    return q;
}

}  // namespace

TEST_CASE("planar chain analytic forward kinematics") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& planar = reg.get("planar-2");

    const auto fk = kin::forward_kinematics(planar, JointConfig{{M_PI / 2, 0.0}});
    CHECK(fk.tip.translation.x() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fk.tip.translation.y() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fk.tip.translation.z() == doctest::Approx(0.0).epsilon(1e-12));

    // Elbow fully folded: tip back toward the base.
    const auto folded = kin::forward_kinematics(planar, JointConfig{{0.0, M_PI}});
    CHECK(folded.tip.translation.x() == doctest::Approx(0.1));
    CHECK(folded.tip.translation.y() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("built-in arms match frozen home tip poses") {
    // Values frozen from an independent numpy implementation of the chain
    // definitions (axis-angle products, canonical quaternion with w >= 0).
    struct Expected {
        const char* name;
        double t[3];
        double q[4];
    };
    const Expected table[] = {
        {"arm-a",
         {0.397638547831997, 0.0, 1.22387208826702},
         {0.764842187284488, 0.0, 0.644217687237691, 0.0}},
        {"arm-b",
         {-0.065494412220182, 0.0, 1.30638381687613},
         {0.980066577841242, 0.0, 0.198669330795061, 0.0}},
        {"arm-c",
         {0.220597365451053, 0.0, 1.29606122820518},
         {0.852524522059506, 0.0, 0.522687228930659, 0.0}},
        {"arm-d",
         {0.168943388062285, 0.0, 1.08010496435125},
         {0.852524522059506, 0.0, 0.522687228930659, 0.0}},
    };

    const auto reg = ChainRegistry::with_builtins();
    for (const auto& exp : table) {
        const auto& chain = reg.get(exp.name);
        const auto fk = kin::forward_kinematics(chain, JointConfig{chain.home});
        const auto seven = fk.tip.to_seven();
        for (int i = 0; i < 3; ++i) {
            CHECK(seven[i] == doctest::Approx(exp.t[i]).epsilon(1e-12));
        }
        for (int i = 0; i < 4; ++i) {
            CHECK(seven[3 + i] == doctest::Approx(exp.q[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("last wrist joint leaves its own frame origin fixed") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-a");
    JointConfig q{chain.home};
    const auto fk0 = kin::forward_kinematics(chain, q);
    q.angles.back() += 0.7;
    const auto fk1 = kin::forward_kinematics(chain, q);
    const std::size_t last = chain.dof() - 1;
    CHECK((fk0.link_poses[last].translation - fk1.link_poses[last].translation).norm() <
          1e-12);
}

TEST_CASE("forward kinematics rejects limit violations") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-b");
    JointConfig q{chain.home};
    q.angles[0] = chain.joints[0].hi + 0.1;
    CHECK_THROWS_AS(kin::forward_kinematics(chain, q), std::out_of_range);
}

TEST_CASE("inverse kinematics fixed point from the true seed") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-a");
    rng::RandomStream s(rng::SeedPath(21).child("kin"));
    for (int i = 0; i < 50; ++i) {
        const JointConfig q = random_config(chain, s);
        const auto target = kin::forward_kinematics(chain, q).tip;
        const auto ik = kin::inverse_kinematics(chain, target, q);
        REQUIRE(ik.ok());
        double dist = 0;
        for (std::size_t k = 0; k < q.angles.size(); ++k) {
            dist = std::max(dist, std::abs(ik.q.angles[k] - q.angles[k]));
        }
        CHECK(dist < 1e-6);
    }
}

TEST_CASE("inverse kinematics round trip from home") {
    const auto reg = ChainRegistry::with_builtins();
    rng::RandomStream s(rng::SeedPath(22).child("kin"));
    for (const char* name : {"arm-a", "arm-b", "arm-c", "arm-d"}) {
        const auto& chain = reg.get(name);
        int converged = 0;
        const int n = 100;
        for (int i = 0; i < n; ++i) {
            const JointConfig q = random_config(chain, s);
            const auto target = kin::forward_kinematics(chain, q).tip;
            const auto ik =
                kin::inverse_kinematics(chain, target, JointConfig{chain.home});
            if (!ik.ok()) {
                continue;
            }
            ++converged;
            const auto reached = kin::forward_kinematics(chain, ik.q).tip;
            CHECK((reached.translation - target.translation).norm() <= 1e-4);
            CHECK(reached.rotation.angle_to(target.rotation) <= 1e-3);
        }
        CHECK(converged >= 95);
    }
}

TEST_CASE("inverse kinematics reports unreachable targets") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-c");
    const auto target = geom::Pose::from_translation(geom::Vec3(10, 0, 0));
    const auto ik = kin::inverse_kinematics(chain, target, JointConfig{chain.home});
    CHECK_FALSE(ik.ok());
    CHECK(ik.status == kin::IkStatus::Unreachable);
    CHECK(ik.pos_residual > 1.0);
}

TEST_CASE("chain json round trip and registry file loading") {
    const auto reg = ChainRegistry::with_builtins();
    const auto& chain = reg.get("arm-d");
    const std::string text = kin::chain_to_json_text(chain);

    const auto back = kin::chain_from_json_text(text);
    CHECK(back.name == chain.name);
    CHECK(back.dof() == chain.dof());
    CHECK(geom::approx_equal(back.tip_offset, chain.tip_offset, 1e-12));
    const auto fk_a = kin::forward_kinematics(chain, JointConfig{chain.home});
    const auto fk_b = kin::forward_kinematics(back, JointConfig{back.home});
    CHECK(geom::approx_equal(fk_a.tip, fk_b.tip, 1e-12));

    const auto path = std::filesystem::temp_directory_path() / "crosspaint-chain.json";
    {
        std::ofstream out(path);
        std::string renamed = text;
        const auto pos = renamed.find("arm-d");
        renamed.replace(pos, 5, "arm-x");
        out << renamed;
    }
    ChainRegistry loaded = ChainRegistry::with_builtins();
    loaded.load_file(path);
    CHECK(loaded.contains("arm-x"));
    std::filesystem::remove(path);
}

TEST_CASE("chain validation rejects bad specs") {
    const auto reg = ChainRegistry::with_builtins();
    kin::KinematicChain chain = reg.get("planar-2");
    chain.home = {10.0, 0.0};  // outside limits
    CHECK_THROWS_AS(chain.validate(), std::invalid_argument);
}
