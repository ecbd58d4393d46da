#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "crowdcast/core.hpp"

namespace crowdcast {

/// Norms at or below this are treated as zero; the affected unit vector and
/// its term contribute nothing.
inline constexpr double kUnitEps = 1e-9;

struct Destination {
    Position z;
};
struct Heading {
    double theta = 0.0;  // radians
};
using Goal = std::variant<Destination, Heading>;

struct GroupMate {
    Vec2 offset;   // p_i - p_j
    Velocity vel;  // v_j at the previous step
};

struct Neighbor {
    Vec2 offset;         // p_i - p_j
    Velocity vel;        // v_j; zero for obstacles
    double gain = 0.0;   // D(offset), set by EnergyContext::bind
};

/// Everything about one agent at one step that does not depend on the
/// candidate velocity.
struct EnergyContext {
    Position self_pos;
    Velocity prev_vel;
    double desired_speed = 0.0;            // u_i
    Goal goal = Heading{0.0};
    std::vector<GroupMate> group;          // excludes self
    std::optional<double> group_speed;     // u_l, empty for singletons
    std::vector<Neighbor> neighbors;       // other agents and obstacle samples
    ParamSet params;

    /// Stores `p` and recomputes every neighbor gain.
    void bind(const ParamSet& p);
};

/// Parameters of the older Gaussian collision term.
struct LegacyParamSet {
    double sigma_d = 0.4;   // comfort distance [m]
    double sigma_w = 2.0;   // reaction distance [m]
    double beta = 1.5;      // view-angle exponent
    /// Closest-approach distance: true uses the orthogonal point-to-line
    /// distance, false the single-normalisation form as printed.
    bool orthogonal_distance = true;
};

struct EnergyBreakdown {
    double damp = 0.0;
    double speed = 0.0;
    double direction = 0.0;
    double attraction = 0.0;
    double group = 0.0;
    double collision = 0.0;
    double total = 0.0;
};

double damp_energy(Velocity v, Velocity v_prev);
double speed_energy(Velocity v, double desired_speed);
double direction_energy(Velocity v, Position p, Position z);
double heading_direction_energy(Velocity v, double theta);
double attraction_energy(Velocity v, const EnergyContext& ctx);
double group_speed_energy(Velocity v, double group_speed);
double interaction_gain(Vec2 offset, const ParamSet& params);
double collision_energy_new(Velocity v, const EnergyContext& ctx);
double collision_energy_original(Velocity v, const EnergyContext& ctx,
                                 const LegacyParamSet& legacy);

/// Weighted sum with the smooth collision term.
EnergyBreakdown total_energy(Velocity v, const EnergyContext& ctx);
/// Weighted sum with the Gaussian collision term.
EnergyBreakdown total_energy(Velocity v, const EnergyContext& ctx, const LegacyParamSet& legacy);

/// Scalar fast path of total_energy(v, ctx).total.
double energy_value(Velocity v, const EnergyContext& ctx);

}  // namespace crowdcast

namespace crowdcast {

/// EnergyContext reduced to per-step aggregates so that each evaluation is
/// O(1) in the number of neighbors and group mates. The smooth collision
/// term is affine in v and the attraction term is linear in the unit
/// direction of v, so both collapse to a constant and a vector.
class PreparedEnergy {
public:
    explicit PreparedEnergy(const EnergyContext& ctx);

    double operator()(Velocity v) const;

private:
    ParamSet params_;
    Velocity prev_vel_;
    double desired_speed_;
    std::optional<double> group_speed_;
    Vec2 goal_dir_;            // zero when undefined
    Vec2 attraction_dir_;      // sum of (own . theirs) * away
    double collision_const_;   // sum of D * away . v_j
    Vec2 collision_slope_;     // sum of D * away
};

}  // namespace crowdcast
