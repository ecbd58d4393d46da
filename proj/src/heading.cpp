#include "crowdcast/heading.hpp"

#include "crowdcast/context.hpp"
#include "crowdcast/optimizer.hpp"
#include "crowdcast/rng.hpp"

namespace crowdcast {

double average_heading(const ObservationWindow& window) {
    if (window.size() < 2)
        throw Error(ErrorCode::WindowTooShort, "average heading needs at least two positions");
    double sx = 0.0, sy = 0.0;
    bool any = false;
    for (std::size_t k = 1; k < window.size(); ++k) {
        const Vec2 step = window.position(k) - window.position(k - 1);
        const double len = norm(step);
        if (len <= kUnitEps) continue;
        const double a = std::atan2(step.y, step.x);
        sx += std::cos(a);
        sy += std::sin(a);
        any = true;
    }
    if (!any || (std::abs(sx) <= kUnitEps && std::abs(sy) <= kUnitEps))
        throw Error(ErrorCode::HeadingUndefined,
                    "agent " + std::to_string(window.agent_id) + " has no usable heading");
    return wrap_angle(std::atan2(sy, sx));
}

std::vector<double> sample_headings(double centre, int n, double step) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    const int half = (n - 1) / 2;
    for (int m = -half; m <= half; ++m) out.push_back(wrap_angle(centre + m * step));
    return out;
}

std::vector<Position> resample_path(const ObservationWindow& window, const ParamSet& params,
                                    double theta, const SceneHistory& history,
                                    const GroupTable& groups, const PredictorConfig& cfg,
                                    std::uint64_t seed) {
    if (window.size() < 2)
        throw Error(ErrorCode::WindowTooShort, "resampling needs at least two positions");
    const double u = desired_speed(window, weights_for(cfg, window.size() - 1));
    const Group* group = groups.group_of(window.agent_id);

    std::vector<Position> path;
    path.reserve(window.size() - 1);
    Position pos = window.position(0);
    Velocity vel = finite_velocity(window, 1);
    for (std::size_t k = 1; k < window.size(); ++k) {
        const SceneFrame* frame = history.at(window.frames[k - 1].frame);
        std::span<const std::pair<int, AgentKinematics>> others;
        if (frame) others = frame->agents;
        const EnergyContext ctx = make_context(window.agent_id, pos, vel, u, Heading{theta},
                                               others, history.obstacles, group, params);
        Rng rng(derive_seed(seed, {static_cast<std::int64_t>(k)}));
        vel = estimate_velocity(ctx, cfg, rng);
        pos += vel * window.dt;
        path.push_back(pos);
    }
    return path;
}

double heading_cost(std::span<const Position> observed, std::span<const Position> resampled,
                    double eta) {
    if (observed.size() != resampled.size())
        throw Error(ErrorCode::PathLengthMismatch,
                    std::to_string(observed.size()) + " observed vs " +
                        std::to_string(resampled.size()) + " resampled positions");
    if (observed.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) sum += distance(observed[k], resampled[k]);
    return eta * discrete_frechet(observed, resampled) + (1.0 - eta) * sum;
}

HeadingEstimate estimate_target_heading(const ObservationWindow& window, const ParamSet& params,
                                        const SceneHistory& history, const GroupTable& groups,
                                        const PredictorConfig& cfg, std::uint64_t seed) {
    HeadingEstimate est;
    try {
        est.average = average_heading(window);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::HeadingUndefined) throw;
        est.average = 0.0;  // stationary agent: any centre is as good
    }
    const auto observed = window.positions();
    const std::span<const Position> target(observed.begin() + 1, observed.end());

    const auto thetas = sample_headings(est.average, cfg.n_headings, cfg.heading_step);
    std::size_t best = 0;
    for (std::size_t n = 0; n < thetas.size(); ++n) {
        HeadingCandidate c;
        c.theta = thetas[n];
        c.resampled_path = resample_path(window, params, c.theta, history, groups, cfg,
                                         derive_seed(seed, {static_cast<std::int64_t>(n)}));
        c.frechet = discrete_frechet(target, c.resampled_path);
        for (std::size_t k = 0; k < target.size(); ++k)
            c.distance_sum += distance(target[k], c.resampled_path[k]);
        c.cost = cfg.eta * c.frechet + (1.0 - cfg.eta) * c.distance_sum;
        est.candidates.push_back(std::move(c));

        const auto& cur = est.candidates.back();
        const auto& inc = est.candidates[best];
        if (n > 0 && (cur.cost < inc.cost ||
                      (cur.cost == inc.cost && angular_distance(cur.theta, est.average) <
                                                   angular_distance(inc.theta, est.average))))
            best = n;
    }
    est.theta = est.candidates[best].theta;
    return est;
}

}  // namespace crowdcast
