#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "crowdcast/core.hpp"
#include "crowdcast/grouping.hpp"
#include "crowdcast/heading.hpp"
#include "crowdcast/optimizer.hpp"

namespace crowdcast {

/// One issued prediction.
struct PredictionRecord {
    int agent_id = 0;
    int issue_frame = 0;                 // t
    ObservationWindow observed;          // window used (N_actual = observed.size())
    double theta_star = 0.0;             // radians
    ParamSet params;
    std::vector<Position> predicted;     // N_p positions
    std::optional<int> group_id;
    std::vector<HeadingCandidate> headings;  // filled when requested
};

/// Called once per rollout step with the states every agent read from.
/// Used to check that a step only depends on the previous step.
using RolloutObserver =
    std::function<void(int step, const std::vector<std::pair<int, AgentKinematics>>& read)>;

struct PredictOptions {
    bool keep_headings = false;
    RolloutObserver observer;
    /// Skips the parameter fit and uses these weights for every agent.
    std::optional<ParamSet> fixed_params;
};

/// Groups, fits and rolls out every agent of `windows` (agents with fewer
/// than two positions are skipped). `history` must end at the issue frame.
/// Output is ordered by agent id.
std::vector<PredictionRecord> predict_scene(const std::vector<ObservationWindow>& windows,
                                            const SceneHistory& history,
                                            const PredictorConfig& cfg,
                                            const PredictOptions& options = {});

/// Constant-velocity extrapolation of the last observed step.
std::vector<Position> linear_baseline(const ObservationWindow& window, int pred_len);

/// Seed of one agent's estimation streams at one issue frame.
std::uint64_t agent_seed(std::uint64_t global_seed, int agent_id, int issue_frame);

}  // namespace crowdcast
