#include "crowdcast/pipeline.hpp"

#include <algorithm>

#include "crowdcast/context.hpp"
#include "crowdcast/parallel.hpp"
#include "crowdcast/rng.hpp"

namespace crowdcast {

std::uint64_t agent_seed(std::uint64_t global_seed, int agent_id, int issue_frame) {
    return derive_seed(global_seed, {agent_id, issue_frame});
}

std::vector<Position> linear_baseline(const ObservationWindow& window, int pred_len) {
    if (window.size() < 2)
        throw Error(ErrorCode::WindowTooShort, "linear baseline needs two positions");
    const Position last = window.frames.back().pos;
    const Velocity v = finite_velocity(window, window.size() - 1);
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(pred_len));
    for (int k = 1; k <= pred_len; ++k) out.push_back(last + v * (k * window.dt));
    return out;
}

namespace {

enum Stage : std::int64_t { kParams = 1, kHeading = 2, kRollout = 3 };

}  // namespace

std::vector<PredictionRecord> predict_scene(const std::vector<ObservationWindow>& windows,
                                            const SceneHistory& history,
                                            const PredictorConfig& cfg,
                                            const PredictOptions& options) {
    std::vector<ObservationWindow> active;
    std::vector<std::pair<int, AgentKinematics>> bystanders;
    for (const auto& w : windows) {
        if (w.size() >= 2)
            active.push_back(w);
        else if (w.size() == 1)
            bystanders.push_back({w.agent_id, {w.frames.back().pos, Velocity{}}});
    }
    std::sort(active.begin(), active.end(),
              [](const auto& a, const auto& b) { return a.agent_id < b.agent_id; });
    if (active.empty()) return {};

    const int t = history.last_frame();
    const GroupTable groups = group_information(active, cfg);

    std::vector<PredictionRecord> records(active.size());
    parallel_for(active.size(), cfg.threads, [&](std::size_t i) {
        const auto& w = active[i];
        auto& rec = records[i];
        rec.agent_id = w.agent_id;
        rec.issue_frame = t;
        rec.observed = w;
        if (const Group* g = groups.group_of(w.agent_id)) rec.group_id = g->group_id;

        const std::uint64_t seed = agent_seed(cfg.rng_seed, w.agent_id, t);
        if (options.fixed_params)
            rec.params = options.fixed_params->clamped();
        else
            rec.params = w.size() >= 3 ? estimate_parameters(w, history, groups, cfg,
                                                             derive_seed(seed, {kParams}))
                                             .params
                                       : ParamSet::fallback();
        auto heading = estimate_target_heading(w, rec.params, history, groups, cfg,
                                               derive_seed(seed, {kHeading}));
        rec.theta_star = heading.theta;
        if (options.keep_headings) rec.headings = std::move(heading.candidates);
    });

    // Synchronous rollout: every agent reads the step k-1 states, then all
    // positions advance together.
    std::vector<AgentKinematics> state(active.size());
    std::vector<double> speeds(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        const auto& w = active[i];
        state[i] = {w.frames.back().pos, finite_velocity(w, w.size() - 1)};
        speeds[i] = desired_speed(w, weights_for(cfg, w.size() - 1));
        records[i].predicted.reserve(static_cast<std::size_t>(cfg.pred_len));
    }

    for (int k = 1; k <= cfg.pred_len; ++k) {
        std::vector<std::pair<int, AgentKinematics>> snapshot;
        snapshot.reserve(active.size() + bystanders.size());
        for (std::size_t i = 0; i < active.size(); ++i)
            snapshot.push_back({active[i].agent_id, state[i]});
        snapshot.insert(snapshot.end(), bystanders.begin(), bystanders.end());
        if (options.observer) options.observer(k, snapshot);

        std::vector<Velocity> next(active.size());
        parallel_for(active.size(), cfg.threads, [&](std::size_t i) {
            const auto& rec = records[i];
            const EnergyContext ctx =
                make_context(rec.agent_id, state[i].pos, state[i].vel, speeds[i],
                             Heading{rec.theta_star}, snapshot, history.obstacles,
                             groups.group_of(rec.agent_id), rec.params);
            Rng rng(derive_seed(agent_seed(cfg.rng_seed, rec.agent_id, t), {kRollout, k}));
            next[i] = estimate_velocity(ctx, cfg, rng);
        });
        for (std::size_t i = 0; i < active.size(); ++i) {
            state[i].vel = next[i];
            state[i].pos += next[i] * cfg.dt;
            records[i].predicted.push_back(state[i].pos);
        }
    }
    return records;
}

}  // namespace crowdcast
