#pragma once

#include <span>
#include <utility>
#include <vector>

#include "crowdcast/energy.hpp"
#include "crowdcast/grouping.hpp"

namespace crowdcast {

/// Assembles the step geometry of agent `self_id` standing at `self_pos`.
/// `others` may contain the agent itself; it is skipped. Group mates are the
/// members of `group` found in `others`. Obstacle samples become neighbors
/// with zero velocity. Gains are bound to `params`.
EnergyContext make_context(int self_id, Position self_pos, Velocity prev_vel, double desired_speed,
                           Goal goal,
                           std::span<const std::pair<int, AgentKinematics>> others,
                           std::span<const Position> obstacles, const Group* group,
                           const ParamSet& params);

}  // namespace crowdcast
