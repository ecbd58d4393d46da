#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "crowdcast/error.hpp"

namespace crowdcast {

/// Plain 2-D vector in the navigation frame. Positions are in meters,
/// velocities in meters/second.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

using Position = Vec2;
using Velocity = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
constexpr double squared_norm(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Rotates `a` counter-clockwise by `angle` radians.
inline Vec2 rotate(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

/// Smallest absolute difference between two angles, in [0, pi].
double angular_distance(double a, double b);

inline constexpr double kPi = std::numbers::pi;

struct TimedPosition {
    int frame = 0;
    Position pos;
};

/// Most recent observed positions of one agent, oldest first, at consecutive
/// resampled frames.
struct ObservationWindow {
    int agent_id = 0;
    std::vector<TimedPosition> frames;
    double dt = 0.4;

    std::size_t size() const { return frames.size(); }
    const Position& position(std::size_t k) const { return frames[k].pos; }
    int last_frame() const { return frames.back().frame; }
    std::vector<Position> positions() const;

    /// Throws InvalidConfig when frames are not strictly increasing and
    /// contiguous or a coordinate is not finite.
    void validate() const;
};

/// The eight per-agent energy parameters.
struct ParamSet {
    double lambda0 = 1.0;  // damping
    double lambda1 = 1.0;  // desired speed
    double lambda2 = 1.0;  // direction
    double lambda3 = 0.0;  // group attraction
    double lambda4 = 0.0;  // group speed
    double w = 1.0;        // interaction strength
    double d = 1.0;        // interaction distance [m]
    double alpha = 0.0;    // smoothing [m^2], kept below d

    static constexpr std::size_t kSize = 8;

    std::array<double, kSize> to_array() const {
        return {lambda0, lambda1, lambda2, lambda3, lambda4, w, d, alpha};
    }
    static ParamSet from_array(const std::array<double, kSize>& a);

    /// Clamps alpha into [0, d) and negative weights to zero.
    ParamSet clamped() const;

    /// Used for agents whose window is too short to fit.
    static ParamSet fallback() { return {}; }

    friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

struct AgentKinematics {
    Position pos;
    Velocity vel;
};

/// Agents present at one resampled frame.
struct SceneFrame {
    int frame_index = 0;
    std::vector<std::pair<int, AgentKinematics>> agents;  // sorted by id

    const AgentKinematics* find(int agent_id) const;
};

/// Frame-aligned history up to (and including) an issue frame, plus the
/// static obstacle samples of the scene.
struct SceneHistory {
    std::vector<SceneFrame> frames;  // ascending frame_index
    std::vector<Position> obstacles;
    double dt = 0.4;

    const SceneFrame* at(int frame_index) const;
    int last_frame() const { return frames.empty() ? 0 : frames.back().frame_index; }
};

struct PredictorConfig {
    int obs_len = 8;                 // N
    int pred_len = 12;               // N_p
    double dt = 0.4;                 // seconds between resampled frames
    int min_obs = 7;                 // observation filter for ADE2/FDE2
    double frechet_threshold = 1.8;  // grouping threshold [m]
    int n_salps = 12;                // parameter swarm size
    int n_iters = 10;                // parameter swarm iterations
    int n_v_salps = 10;              // velocity swarm size
    int n_v_iters = 5;               // velocity swarm iterations
    int n_headings = 31;             // odd, centered on the average heading
    double heading_step = kPi / 30;  // radians
    double eta = 0.5;                // Frechet vs. summed-distance weight
    double v_bound = 2.5;            // per-component velocity bound [m/s]
    std::vector<double> speed_weights;  // empty = uniform
    int stride = 8;                  // frames between issued predictions
    std::uint64_t rng_seed = 0;
    int threads = 1;

    /// Throws InvalidConfig on violated invariants.
    void validate() const;
};

/// (p_k - p_{k-1}) / dt.
Velocity finite_velocity(const ObservationWindow& window, std::size_t k);

/// Uniform weights 1/n.
std::vector<double> uniform_weights(std::size_t n);

/// Weights for a window of `steps` velocity samples, derived from the
/// configured weights (uniform when none are configured).
std::vector<double> weights_for(const PredictorConfig& cfg, std::size_t steps);

/// Weighted mean of the observed step speeds.
double desired_speed(const ObservationWindow& window, std::span<const double> weights);

}  // namespace crowdcast
