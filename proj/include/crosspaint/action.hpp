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

namespace crosspaint {

enum class ActionKind { AbsoluteTarget, Delta };

/// Cartesian end-effector action: either an absolute target pose or a delta,
/// plus a gripper open/close channel in [0, 1].
struct Action {
    ActionKind kind = ActionKind::AbsoluteTarget;
    geom::Pose pose;
    double gripper = 1.0;
};

/// Transforms an action into another end-effector frame convention. Absolute
/// targets transform as poses; delta translations rotate and delta rotations
/// conjugate by t's rotation. The gripper channel passes through unchanged.
inline Action align_action(const Action& a, const geom::RigidTransform& t) {
    Action out = a;
    if (a.kind == ActionKind::AbsoluteTarget) {
        out.pose = geom::align_pose(a.pose, t);
    } else {
        out.pose.translation = t.rotation * a.pose.translation;
        out.pose.rotation = t.rotation * a.pose.rotation * t.rotation.inverse();
    }
    return out;
}

}  // namespace crosspaint
