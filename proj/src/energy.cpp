#include "crowdcast/energy.hpp"

#include <cmath>

namespace crowdcast {

namespace {

// Unit vector, or nullopt when the norm is at or below kUnitEps.
inline std::optional<Vec2> unit(Vec2 a) {
    const double n = norm(a);
    if (n <= kUnitEps) return std::nullopt;
    return a / n;
}

double self_terms_direction(Velocity v, const EnergyContext& ctx) {
    if (const auto* dest = std::get_if<Destination>(&ctx.goal))
        return direction_energy(v, ctx.self_pos, dest->z);
    return heading_direction_energy(v, std::get<Heading>(ctx.goal).theta);
}

EnergyBreakdown weighted(Velocity v, const EnergyContext& ctx, double collision) {
    const ParamSet& p = ctx.params;
    EnergyBreakdown e;
    e.damp = damp_energy(v, ctx.prev_vel);
    e.speed = speed_energy(v, ctx.desired_speed);
    e.direction = self_terms_direction(v, ctx);
    e.attraction = attraction_energy(v, ctx);
    e.group = ctx.group_speed ? group_speed_energy(v, *ctx.group_speed) : 0.0;
    e.collision = collision;
    e.total = p.lambda0 * e.damp + p.lambda1 * e.speed + p.lambda2 * e.direction +
              p.lambda3 * e.attraction + p.lambda4 * e.group + e.collision;
    return e;
}

}  // namespace

void EnergyContext::bind(const ParamSet& p) {
    params = p;
    for (auto& n : neighbors) n.gain = interaction_gain(n.offset, params);
}

double damp_energy(Velocity v, Velocity v_prev) { return squared_norm(v - v_prev); }

double speed_energy(Velocity v, double desired_speed) {
    const double diff = norm(v) - desired_speed;
    return diff * diff;
}

double direction_energy(Velocity v, Position p, Position z) {
    const auto toward = unit(z - p);
    const auto dir = unit(v);
    if (!toward || !dir) return 0.0;
    return -dot(*toward, *dir);
}

double heading_direction_energy(Velocity v, double theta) {
    const auto dir = unit(v);
    if (!dir) return 0.0;
    return -(std::cos(theta) * dir->x + std::sin(theta) * dir->y);
}

double attraction_energy(Velocity v, const EnergyContext& ctx) {
    const auto dir = unit(v);
    const auto own = unit(ctx.prev_vel);
    if (!dir || !own) return 0.0;
    double sum = 0.0;
    for (const auto& mate : ctx.group) {
        const auto theirs = unit(mate.vel);
        const auto away = unit(mate.offset);
        if (!theirs || !away) continue;
        sum += dot(*own, *theirs) * dot(*away, *dir);
    }
    return sum;
}

double group_speed_energy(Velocity v, double group_speed) {
    const double diff = norm(v) - group_speed;
    return diff * diff;
}

double interaction_gain(Vec2 offset, const ParamSet& params) {
    const double gap = params.d - norm(offset);
    return params.w / (2.0 * params.d) * (gap + std::sqrt(gap * gap + params.alpha));
}

double collision_energy_new(Velocity v, const EnergyContext& ctx) {
    double sum = 0.0;
    for (const auto& n : ctx.neighbors) {
        const double r = norm(n.offset);
        if (r <= kUnitEps) continue;
        sum += n.gain * dot(n.offset, n.vel - v) / r;
    }
    return sum;
}

double collision_energy_original(Velocity v, const EnergyContext& ctx,
                                 const LegacyParamSet& legacy) {
    const auto dir = unit(v);
    double sum = 0.0;
    for (const auto& n : ctx.neighbors) {
        const double r = norm(n.offset);
        if (r <= kUnitEps) continue;
        const Vec2 away = n.offset / r;
        // With a zero velocity there is no heading; the view factor is 1/2.
        const double cos_view = dir ? dot(away, *dir) : 0.0;
        const double view = std::pow(0.5 * (1.0 - cos_view), legacy.beta);
        const double w = std::exp(-r * r / (2.0 * legacy.sigma_w * legacy.sigma_w)) * view;

        const Vec2 rel = v - n.vel;
        const double rel_norm = norm(rel);
        double closest = r;
        if (rel_norm > kUnitEps) {
            if (legacy.orthogonal_distance) {
                const Vec2 r_hat = rel / rel_norm;
                closest = norm(n.offset - dot(n.offset, r_hat) * r_hat);
            } else {
                closest = norm(n.offset - (dot(n.offset, rel) / rel_norm) * rel);
            }
        }
        sum += w * std::exp(-closest * closest / (2.0 * legacy.sigma_d * legacy.sigma_d));
    }
    return sum;
}

EnergyBreakdown total_energy(Velocity v, const EnergyContext& ctx) {
    return weighted(v, ctx, collision_energy_new(v, ctx));
}

EnergyBreakdown total_energy(Velocity v, const EnergyContext& ctx, const LegacyParamSet& legacy) {
    return weighted(v, ctx, collision_energy_original(v, ctx, legacy));
}

double energy_value(Velocity v, const EnergyContext& ctx) { return PreparedEnergy(ctx)(v); }

PreparedEnergy::PreparedEnergy(const EnergyContext& ctx)
    : params_(ctx.params),
      prev_vel_(ctx.prev_vel),
      desired_speed_(ctx.desired_speed),
      group_speed_(ctx.group_speed),
      goal_dir_{},
      attraction_dir_{},
      collision_const_(0.0),
      collision_slope_{} {
    if (const auto* dest = std::get_if<Destination>(&ctx.goal)) {
        goal_dir_ = unit(dest->z - ctx.self_pos).value_or(Vec2{});
    } else {
        const double th = std::get<Heading>(ctx.goal).theta;
        goal_dir_ = {std::cos(th), std::sin(th)};
    }
    if (const auto own = unit(ctx.prev_vel)) {
        for (const auto& mate : ctx.group) {
            const auto theirs = unit(mate.vel);
            const auto away = unit(mate.offset);
            if (theirs && away) attraction_dir_ += dot(*own, *theirs) * *away;
        }
    }
    for (const auto& n : ctx.neighbors) {
        const double r = norm(n.offset);
        if (r <= kUnitEps) continue;
        const Vec2 scaled = (n.gain / r) * n.offset;
        collision_const_ += dot(scaled, n.vel);
        collision_slope_ += scaled;
    }
}

double PreparedEnergy::operator()(Velocity v) const {
    const ParamSet& p = params_;
    const double speed = norm(v);
    double e = collision_const_ - dot(collision_slope_, v);
    if (p.lambda0 != 0.0) e += p.lambda0 * squared_norm(v - prev_vel_);
    if (p.lambda1 != 0.0) {
        const double diff = speed - desired_speed_;
        e += p.lambda1 * diff * diff;
    }
    if (speed > kUnitEps) {
        const Vec2 dir = v / speed;
        e -= p.lambda2 * dot(goal_dir_, dir);
        e += p.lambda3 * dot(attraction_dir_, dir);
    }
    if (p.lambda4 != 0.0 && group_speed_) {
        const double diff = speed - *group_speed_;
        e += p.lambda4 * diff * diff;
    }
    return e;
}

}  // namespace crowdcast
