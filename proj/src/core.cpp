#include "crowdcast/core.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace crowdcast {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::EmptySequence: return "EmptySequence";
        case ErrorCode::HeadingUndefined: return "HeadingUndefined";
        case ErrorCode::PathLengthMismatch: return "PathLengthMismatch";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateRecord: return "DuplicateRecord";
        case ErrorCode::EmptyEvaluation: return "EmptyEvaluation";
        case ErrorCode::HorizonMismatch: return "HorizonMismatch";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

double wrap_angle(double radians) {
    double r = std::remainder(radians, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double angular_distance(double a, double b) {
    return std::abs(std::remainder(a - b, 2.0 * kPi));
}

std::vector<Position> ObservationWindow::positions() const {
    std::vector<Position> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f.pos);
    return out;
}

void ObservationWindow::validate() const {
    if (!(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "window dt must be positive");
    for (std::size_t k = 0; k < frames.size(); ++k) {
        if (!is_finite(frames[k].pos))
            throw Error(ErrorCode::InvalidConfig, "non-finite position in window of agent " +
                                                      std::to_string(agent_id));
        if (k > 0 && frames[k].frame != frames[k - 1].frame + 1)
            throw Error(ErrorCode::InvalidConfig, "window frames of agent " +
                                                      std::to_string(agent_id) +
                                                      " are not contiguous");
    }
}

ParamSet ParamSet::from_array(const std::array<double, kSize>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
}

ParamSet ParamSet::clamped() const {
    ParamSet p = *this;
    for (double* v : {&p.lambda0, &p.lambda1, &p.lambda2, &p.lambda3, &p.lambda4, &p.w})
        *v = std::max(*v, 0.0);
    p.d = std::max(p.d, 1e-6);
    p.alpha = std::clamp(p.alpha, 0.0, p.d * (1.0 - 1e-9));
    return p;
}

const AgentKinematics* SceneFrame::find(int agent_id) const {
    auto it = std::lower_bound(agents.begin(), agents.end(), agent_id,
                               [](const auto& entry, int id) { return entry.first < id; });
    if (it == agents.end() || it->first != agent_id) return nullptr;
    return &it->second;
}

const SceneFrame* SceneHistory::at(int frame_index) const {
    auto it = std::lower_bound(frames.begin(), frames.end(), frame_index,
                               [](const SceneFrame& f, int idx) { return f.frame_index < idx; });
    if (it == frames.end() || it->frame_index != frame_index) return nullptr;
    return &*it;
}

void PredictorConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
    if (obs_len < 2) fail("obs_len must be >= 2");
    if (pred_len < 1) fail("pred_len must be >= 1");
    if (!(dt > 0.0)) fail("dt must be positive");
    if (min_obs < 1) fail("min_obs must be >= 1");
    if (!(frechet_threshold > 0.0)) fail("frechet_threshold must be positive");
    if (n_salps < 1 || n_iters < 1 || n_v_salps < 1 || n_v_iters < 1)
        fail("swarm sizes and iteration counts must be >= 1");
    if (n_headings < 1 || n_headings % 2 == 0) fail("n_headings must be odd");
    if (!(heading_step > 0.0)) fail("heading_step must be positive");
    if (!(eta >= 0.0 && eta <= 1.0)) fail("eta must lie in [0, 1]");
    if (!(v_bound > 0.0)) fail("v_bound must be positive");
    if (stride < 1) fail("stride must be >= 1");
    if (threads < 1) fail("threads must be >= 1");
    if (!speed_weights.empty()) {
        if (speed_weights.size() != static_cast<std::size_t>(obs_len - 1))
            throw Error(ErrorCode::InvalidWeights, "speed_weights must have obs_len - 1 entries");
        double sum = 0.0;
        for (double w : speed_weights) {
            if (!(w > 0.0)) throw Error(ErrorCode::InvalidWeights, "speed weights must be > 0");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw Error(ErrorCode::InvalidWeights, "speed weights must sum to 1");
    }
}

Velocity finite_velocity(const ObservationWindow& window, std::size_t k) {
    if (k == 0 || k >= window.size())
        throw Error(ErrorCode::WindowTooShort,
                    "no frame pair (" + std::to_string(k) + ", " + std::to_string(k) +
                        "-1) in window of agent " + std::to_string(window.agent_id));
    return (window.position(k) - window.position(k - 1)) / window.dt;
}

std::vector<double> uniform_weights(std::size_t n) {
    return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

std::vector<double> weights_for(const PredictorConfig& cfg, std::size_t steps) {
    if (cfg.speed_weights.empty() || steps > cfg.speed_weights.size())
        return uniform_weights(steps);
    std::vector<double> w(cfg.speed_weights.end() - static_cast<std::ptrdiff_t>(steps),
                          cfg.speed_weights.end());
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    return w;
}

double desired_speed(const ObservationWindow& window, std::span<const double> weights) {
    if (window.size() < 2)
        throw Error(ErrorCode::WindowTooShort, "desired speed needs at least two positions");
    if (weights.size() != window.size() - 1)
        throw Error(ErrorCode::InvalidWeights, "expected " + std::to_string(window.size() - 1) +
                                                   " weights, got " +
                                                   std::to_string(weights.size()));
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw Error(ErrorCode::InvalidWeights, "weights must be > 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(ErrorCode::InvalidWeights, "weights must sum to 1");

    double u = 0.0;
    for (std::size_t k = 1; k < window.size(); ++k)
        u += weights[k - 1] * norm(finite_velocity(window, k));
    return u;
}

}  // namespace crowdcast
