#include "crowdcast/optimizer.hpp"

#include <numeric>

#include "crowdcast/context.hpp"

namespace crowdcast {

double c1_weight(int k, int max_iters) {
    const double r = 4.0 * static_cast<double>(k) / static_cast<double>(max_iters);
    return 2.0 * std::exp(-r * r);
}

Velocity estimate_velocity(const EnergyContext& ctx, const PredictorConfig& cfg, Rng& rng,
                           const GdSettings& gd) {
    const PreparedEnergy energy(ctx);
    const auto objective = [&energy](const Point<2>& v) { return energy(Velocity{v[0], v[1]}); };
    const Bounds<2> box{{-cfg.v_bound, -cfg.v_bound}, {cfg.v_bound, cfg.v_bound}};
    const auto result = minimize_swarm<2>(objective, box, {cfg.n_v_salps, cfg.n_v_iters}, rng,
                                          Point<2>{ctx.prev_vel.x, ctx.prev_vel.y}, gd);
    return {result.best[0], result.best[1]};
}

Bounds<ParamSet::kSize> param_bounds() {
    // lambda0..lambda4, w, d, alpha
    return {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0},
            {10.0, 10.0, 10.0, 10.0, 10.0, 5.0, 10.0, 10.0}};
}

std::vector<FitStep> build_fit_steps(const ObservationWindow& window, const SceneHistory& history,
                                     const GroupTable& groups, const PredictorConfig& cfg) {
    if (window.size() < 3)
        throw Error(ErrorCode::WindowTooShort,
                    "parameter fit needs at least three positions for agent " +
                        std::to_string(window.agent_id));
    const double u = desired_speed(window, weights_for(cfg, window.size() - 1));
    const Position dest = window.frames.back().pos;
    const Group* group = groups.group_of(window.agent_id);

    std::vector<FitStep> steps;
    for (std::size_t k = 2; k < window.size(); ++k) {
        const auto& start = window.frames[k - 1];
        const SceneFrame* frame = history.at(start.frame);
        std::span<const std::pair<int, AgentKinematics>> others;
        if (frame) others = frame->agents;
        FitStep step{make_context(window.agent_id, start.pos, finite_velocity(window, k - 1), u,
                                  Destination{dest}, others, history.obstacles, group,
                                  ParamSet::fallback()),
                     finite_velocity(window, k)};
        steps.push_back(std::move(step));
    }
    return steps;
}

double param_cost(const ParamSet& params, const std::vector<FitStep>& steps,
                  const PredictorConfig& cfg, std::uint64_t seed, std::int64_t stream,
                  std::span<const std::size_t> order) {
    std::vector<std::size_t> natural;
    if (order.empty()) {
        natural.resize(steps.size());
        std::iota(natural.begin(), natural.end(), std::size_t{0});
        order = natural;
    }
    // Per-step terms are summed in step order whatever the evaluation order.
    std::vector<double> terms(steps.size(), 0.0);
    for (std::size_t s : order) {
        EnergyContext ctx = steps[s].ctx;
        ctx.bind(params);
        Rng rng(derive_seed(seed, {stream, static_cast<std::int64_t>(s)}));
        const Velocity v = estimate_velocity(ctx, cfg, rng);
        terms[s] = squared_norm(steps[s].observed - v);
    }
    return std::accumulate(terms.begin(), terms.end(), 0.0);
}

ParamFit estimate_parameters(const ObservationWindow& window, const SceneHistory& history,
                             const GroupTable& groups, const PredictorConfig& cfg,
                             std::uint64_t seed) {
    const auto steps = build_fit_steps(window, history, groups, cfg);
    const auto bounds = param_bounds();

    std::int64_t evaluation = 0;
    const auto objective = [&](const Point<ParamSet::kSize>& x) {
        const ParamSet p = ParamSet::from_array(x).clamped();
        return param_cost(p, steps, cfg, seed, ++evaluation);
    };
    Rng rng(derive_seed(seed, {-1}));
    const auto result =
        minimize_swarm<ParamSet::kSize>(objective, bounds, {cfg.n_salps, cfg.n_iters}, rng);
    return {ParamSet::from_array(result.best).clamped(), result.cost, result.history};
}

}  // namespace crowdcast
