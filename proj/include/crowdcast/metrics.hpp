#pragma once

#include <map>
#include <span>
#include <vector>

#include "crowdcast/core.hpp"

namespace crowdcast {

/// A prediction paired with the ground truth that followed it. `truth` holds
/// the true positions at t+1, t+2, ... for as long as the agent stayed in
/// the scene, capped at the horizon.
struct ScoredPrediction {
    int agent_id = 0;
    int issue_frame = 0;
    int n_observed = 0;  // N_actual at issue time
    std::vector<Position> predicted;
    std::vector<Position> truth;
};

struct RecordError {
    int issue_frame = 0;
    int agent_id = 0;
    int n_observed = 0;
    int compared = 0;     // N_l
    double ade = 0.0;     // mean pointwise error over the compared nodes
    double fde = 0.0;     // error at the last compared node
};

struct AgentContribution {
    int predictions = 0;             // K_i
    std::vector<int> lengths;        // N_l^i
    double displacement_sum = 0.0;   // sum over records and nodes
    double weighted_final_sum = 0.0; // sum over records of N_l * final error
    double ade = 0.0;
    double fde = 0.0;
};

struct EvalReport {
    double ade = 0.0;
    double fde = 0.0;
    double ade2 = 0.0;
    double fde2 = 0.0;
    int n_eval = 0;      // agents with at least one eligible record
    int n_full = 0;      // records with a full-horizon ground truth
    std::map<int, AgentContribution> per_agent;
    std::vector<RecordError> per_record;
};

/// Classic ADE/FDE over the records whose ground truth covers the whole
/// horizon. Throws EmptyEvaluation when there are none.
std::pair<double, double> ade_fde(std::span<const ScoredPrediction> records, int pred_len);

/// Stream-aware ADE2/FDE2: records observed for fewer than `min_obs` frames
/// are dropped, each remaining record is compared over its available ground
/// truth, and agents are averaged with weights equal to compared lengths.
std::pair<double, double> ade2_fde2(std::span<const ScoredPrediction> records, int min_obs);

/// Both metric families plus per-agent and per-record detail. ADE/FDE are
/// left at zero when no record covers the full horizon.
EvalReport evaluate(std::span<const ScoredPrediction> records, int pred_len, int min_obs);

}  // namespace crowdcast
