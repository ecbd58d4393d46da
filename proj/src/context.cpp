#include "crowdcast/context.hpp"

#include <algorithm>

namespace crowdcast {

EnergyContext make_context(int self_id, Position self_pos, Velocity prev_vel, double desired_speed,
                           Goal goal,
                           std::span<const std::pair<int, AgentKinematics>> others,
                           std::span<const Position> obstacles, const Group* group,
                           const ParamSet& params) {
    EnergyContext ctx;
    ctx.self_pos = self_pos;
    ctx.prev_vel = prev_vel;
    ctx.desired_speed = desired_speed;
    ctx.goal = goal;
    ctx.neighbors.reserve(others.size() + obstacles.size());
    for (const auto& [id, kin] : others) {
        if (id == self_id) continue;
        ctx.neighbors.push_back({self_pos - kin.pos, kin.vel, 0.0});
        if (group && std::find(group->members.begin(), group->members.end(), id) !=
                         group->members.end())
            ctx.group.push_back({self_pos - kin.pos, kin.vel});
    }
    for (const auto& ob : obstacles) ctx.neighbors.push_back({self_pos - ob, Velocity{}, 0.0});
    if (group) ctx.group_speed = group->avg_speed;
    ctx.bind(params);
    return ctx;
}

}  // namespace crowdcast
