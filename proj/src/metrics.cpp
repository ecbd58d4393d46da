#include "crowdcast/metrics.hpp"

#include <algorithm>
#include <tuple>

namespace crowdcast {

namespace {

std::size_t compared_length(const ScoredPrediction& r) {
    return std::min(r.predicted.size(), r.truth.size());
}

}  // namespace

std::pair<double, double> ade_fde(std::span<const ScoredPrediction> records, int pred_len) {
    const auto horizon = static_cast<std::size_t>(pred_len);
    double ade = 0.0, fde = 0.0;
    int n = 0;
    for (const auto& r : records) {
        if (r.predicted.size() < horizon || r.truth.size() < horizon || horizon == 0) continue;
        double sum = 0.0;
        for (std::size_t k = 0; k < horizon; ++k) sum += distance(r.predicted[k], r.truth[k]);
        ade += sum / static_cast<double>(horizon);
        fde += distance(r.predicted[horizon - 1], r.truth[horizon - 1]);
        ++n;
    }
    if (n == 0) throw Error(ErrorCode::EmptyEvaluation, "no record covers the full horizon");
    return {ade / n, fde / n};
}

EvalReport evaluate(std::span<const ScoredPrediction> records, int pred_len, int min_obs) {
    EvalReport report;
    for (const auto& r : records) {
        const std::size_t len = compared_length(r);
        RecordError row{r.issue_frame, r.agent_id, r.n_observed, static_cast<int>(len), 0.0, 0.0};
        double sum = 0.0;
        for (std::size_t k = 0; k < len; ++k) sum += distance(r.predicted[k], r.truth[k]);
        if (len > 0) {
            row.ade = sum / static_cast<double>(len);
            row.fde = distance(r.predicted[len - 1], r.truth[len - 1]);
        }
        report.per_record.push_back(row);

        if (r.n_observed < min_obs || len == 0) continue;
        auto& agent = report.per_agent[r.agent_id];
        agent.predictions += 1;
        agent.lengths.push_back(static_cast<int>(len));
        agent.displacement_sum += sum;
        agent.weighted_final_sum += static_cast<double>(len) * row.fde;
    }

    for (auto& [id, agent] : report.per_agent) {
        double total_len = 0.0;
        for (int l : agent.lengths) total_len += l;
        agent.ade = agent.displacement_sum / total_len;
        agent.fde = agent.weighted_final_sum / total_len;
        report.ade2 += agent.ade;
        report.fde2 += agent.fde;
    }
    report.n_eval = static_cast<int>(report.per_agent.size());
    if (report.n_eval > 0) {
        report.ade2 /= report.n_eval;
        report.fde2 /= report.n_eval;
    }

    const auto horizon = static_cast<std::size_t>(pred_len);
    for (const auto& r : records)
        if (horizon > 0 && r.predicted.size() >= horizon && r.truth.size() >= horizon)
            ++report.n_full;
    if (report.n_full > 0) std::tie(report.ade, report.fde) = ade_fde(records, pred_len);
    return report;
}

std::pair<double, double> ade2_fde2(std::span<const ScoredPrediction> records, int min_obs) {
    const auto report = evaluate(records, 0, min_obs);
    if (report.n_eval == 0)
        throw Error(ErrorCode::EmptyEvaluation, "no record passes the observation filter");
    return {report.ade2, report.fde2};
}

}  // namespace crowdcast
