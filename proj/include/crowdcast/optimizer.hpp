#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "crowdcast/core.hpp"
#include "crowdcast/energy.hpp"
#include "crowdcast/grouping.hpp"
#include "crowdcast/rng.hpp"

namespace crowdcast {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
struct Bounds {
    Point<D> lo{};
    Point<D> hi{};

    Point<D> clamp(Point<D> x) const {
        for (std::size_t i = 0; i < D; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
        return x;
    }
    Point<D> sample(Rng& rng) const {
        Point<D> x{};
        for (std::size_t i = 0; i < D; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        return x;
    }
};

/// Leader step size schedule: 2 exp(-(4k/L)^2).
double c1_weight(int k, int max_iters);

/// Salp chain. `states[0]` is the leader.
template <std::size_t D>
struct Swarm {
    std::vector<Point<D>> states;
    Bounds<D> bounds;
    Point<D> food{};
    double food_cost = std::numeric_limits<double>::infinity();
    int iteration = 0;  // iterations completed
    int max_iters = 1;
};

/// One salp-swarm move: the leader jumps around the food with a shrinking
/// radius, each follower moves to the midpoint between its previous state
/// and its (already updated) predecessor, then all states are clamped.
template <std::size_t D>
Swarm<D> ssa_update(Swarm<D> swarm, Rng& rng) {
    if (swarm.states.empty()) return swarm;
    const int k = swarm.iteration + 1;
    const double c1 = c1_weight(std::min(k, swarm.max_iters), swarm.max_iters);
    const auto& b = swarm.bounds;

    auto& leader = swarm.states[0];
    for (std::size_t i = 0; i < D; ++i) {
        const double c2 = rng.uniform();
        const double c3 = rng.uniform(-1.0, 1.0);
        const double sign = c3 >= 0.0 ? 1.0 : -1.0;
        leader[i] = swarm.food[i] + sign * c1 * ((b.hi[i] - b.lo[i]) * c2 + b.lo[i]);
    }
    leader = b.clamp(leader);
    for (std::size_t n = 1; n < swarm.states.size(); ++n) {
        auto& x = swarm.states[n];
        const auto& ahead = swarm.states[n - 1];
        for (std::size_t i = 0; i < D; ++i) x[i] = 0.5 * (x[i] + ahead[i]);
        x = b.clamp(x);
    }
    swarm.iteration = k;
    return swarm;
}

struct GdSettings {
    int max_steps = 100;
    double initial_step = 0.1;
    double backtrack = 0.5;
    double tolerance = 1e-6;  // stop when the gradient norm is smaller
    double fd_step = 1e-6;    // central-difference half width
};

template <std::size_t D>
struct GdResult {
    Point<D> x{};
    double value = 0.0;
    int steps = 0;
};

/// Projected gradient descent with central-difference gradients and an
/// Armijo backtracking line search. The step length grows after each
/// accepted move. Never returns a point worse than `start`.
template <std::size_t D, class F>
GdResult<D> gradient_descent(const F& objective, Point<D> start, const Bounds<D>& bounds,
                             const GdSettings& s = {}) {
    GdResult<D> best{bounds.clamp(start), 0.0, 0};
    best.value = objective(best.x);
    if (!std::isfinite(best.value)) return best;

    double step = s.initial_step;
    for (int it = 0; it < s.max_steps; ++it) {
        Point<D> grad{};
        double grad_sq = 0.0;
        for (std::size_t i = 0; i < D; ++i) {
            Point<D> fwd = best.x, bwd = best.x;
            fwd[i] += s.fd_step;
            bwd[i] -= s.fd_step;
            grad[i] = (objective(fwd) - objective(bwd)) / (2.0 * s.fd_step);
            grad_sq += grad[i] * grad[i];
        }
        if (!std::isfinite(grad_sq)) return best;
        if (std::sqrt(grad_sq) < s.tolerance) break;

        bool accepted = false;
        Point<D> trial{};
        double trial_value = 0.0;
        while (step > 1e-14) {
            for (std::size_t i = 0; i < D; ++i) trial[i] = best.x[i] - step * grad[i];
            trial = bounds.clamp(trial);
            double decrease = 0.0;
            for (std::size_t i = 0; i < D; ++i) decrease += grad[i] * (best.x[i] - trial[i]);
            trial_value = objective(trial);
            if (!std::isfinite(trial_value)) return best;
            if (trial_value <= best.value - 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= s.backtrack;
        }
        if (!accepted) break;

        double move_sq = 0.0;
        for (std::size_t i = 0; i < D; ++i) move_sq += (trial[i] - best.x[i]) * (trial[i] - best.x[i]);
        best.x = trial;
        best.value = trial_value;
        best.steps = it + 1;
        if (move_sq == 0.0) break;
        step *= 2.0;
    }
    return best;
}

struct SwarmSettings {
    int n_salps = 12;
    int n_iters = 10;
};

template <std::size_t D>
struct SwarmResult {
    Point<D> best{};
    double cost = std::numeric_limits<double>::infinity();
    std::vector<double> history;  // food cost after each iteration
};

/// Salp-swarm minimisation. When `gd` is set, every improving sample is
/// refined by gradient descent before it becomes the food. `seed_point`
/// replaces the first random sample.
template <std::size_t D, class F>
SwarmResult<D> minimize_swarm(const F& objective, const Bounds<D>& bounds,
                              const SwarmSettings& settings, Rng& rng,
                              const std::optional<Point<D>>& seed_point = std::nullopt,
                              const std::optional<GdSettings>& gd = std::nullopt) {
    Swarm<D> swarm;
    swarm.bounds = bounds;
    swarm.max_iters = settings.n_iters;
    swarm.states.reserve(static_cast<std::size_t>(settings.n_salps));
    for (int n = 0; n < settings.n_salps; ++n) {
        if (n == 0 && seed_point)
            swarm.states.push_back(bounds.clamp(*seed_point));
        else
            swarm.states.push_back(bounds.sample(rng));
    }

    SwarmResult<D> result;
    for (int k = 1; k <= settings.n_iters; ++k) {
        std::size_t arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < swarm.states.size(); ++n) {
            const double c = objective(swarm.states[n]);
            if (c < best) {
                best = c;
                arg = n;
            }
        }
        if (best <= swarm.food_cost) {
            if (gd) {
                const auto refined = gradient_descent<D>(objective, swarm.states[arg], bounds, *gd);
                swarm.food = refined.x;
                swarm.food_cost = refined.value;
            } else {
                swarm.food = swarm.states[arg];
                swarm.food_cost = best;
            }
        }
        result.history.push_back(swarm.food_cost);
        swarm = ssa_update(std::move(swarm), rng);
    }
    result.best = swarm.food;
    result.cost = swarm.food_cost;
    return result;
}

/// Minimiser of the step energy: a velocity swarm seeded with the previous
/// velocity, with gradient-descent refinement of every improvement, inside
/// the box |v|_inf <= v_bound.
Velocity estimate_velocity(const EnergyContext& ctx, const PredictorConfig& cfg, Rng& rng,
                           const GdSettings& gd = {});

/// Search box for the parameter swarm.
Bounds<ParamSet::kSize> param_bounds();

struct ParamFit {
    ParamSet params;
    double cost = 0.0;             // sum of squared velocity errors
    std::vector<double> history;   // best cost after each iteration
};

/// Fit target for one agent: one context per fitted step (geometry at the
/// step's start, destination at the last observed position) and the
/// observed velocity the step produced.
struct FitStep {
    EnergyContext ctx;
    Velocity observed;
};

/// Builds the per-step fit targets from observed data only.
std::vector<FitStep> build_fit_steps(const ObservationWindow& window, const SceneHistory& history,
                                     const GroupTable& groups, const PredictorConfig& cfg);

/// Sum of squared differences between observed velocities and the
/// energy-minimising velocities under `params`. Each step draws from its own
/// stream derived from `seed` and `stream`, so step order does not matter.
double param_cost(const ParamSet& params, const std::vector<FitStep>& steps,
                  const PredictorConfig& cfg, std::uint64_t seed, std::int64_t stream,
                  std::span<const std::size_t> order = {});

/// Parameter estimation for one agent by salp swarm over param_bounds().
ParamFit estimate_parameters(const ObservationWindow& window, const SceneHistory& history,
                             const GroupTable& groups, const PredictorConfig& cfg,
                             std::uint64_t seed);

}  // namespace crowdcast
