#include "crowdcast/io.hpp"

#include <istream>
#include <ostream>

#include "crowdcast/dataset.hpp"

namespace crowdcast {

using nlohmann::json;

namespace {

json points(const std::vector<Position>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back({p.x, p.y});
    return arr;
}

std::vector<Position> points_from(const json& arr) {
    std::vector<Position> out;
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2)
            throw Error(ErrorCode::ParseError, "point must be a two-element array");
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

}  // namespace

RecordLine to_line(const PredictionRecord& record) {
    RecordLine line;
    line.t = record.issue_frame;
    line.agent_id = record.agent_id;
    line.obs = record.observed.positions();
    line.pred = record.predicted;
    line.theta_deg = record.theta_star * 180.0 / kPi;
    line.params = record.params;
    line.group = record.group_id;
    return line;
}

json to_json(const RecordLine& line) {
    const auto& p = line.params;
    json j;
    j["t"] = line.t;
    j["agent_id"] = line.agent_id;
    j["obs"] = points(line.obs);
    j["pred"] = points(line.pred);
    j["theta_deg"] = line.theta_deg;
    j["theta_params"] = {{"lambda0", p.lambda0}, {"lambda1", p.lambda1}, {"lambda2", p.lambda2},
                         {"lambda3", p.lambda3}, {"lambda4", p.lambda4}, {"w", p.w},
                         {"d", p.d},             {"alpha", p.alpha}};
    j["group"] = line.group ? json(*line.group) : json(nullptr);
    return j;
}

RecordLine line_from_json(const json& j) {
    RecordLine line;
    line.t = j.at("t").get<int>();
    line.agent_id = j.at("agent_id").get<int>();
    line.obs = points_from(j.at("obs"));
    line.pred = points_from(j.at("pred"));
    line.theta_deg = j.at("theta_deg").get<double>();
    if (j.contains("theta_params")) {
        const auto& tp = j["theta_params"];
        auto& p = line.params;
        p.lambda0 = tp.at("lambda0").get<double>();
        p.lambda1 = tp.at("lambda1").get<double>();
        p.lambda2 = tp.at("lambda2").get<double>();
        p.lambda3 = tp.at("lambda3").get<double>();
        p.lambda4 = tp.at("lambda4").get<double>();
        p.w = tp.at("w").get<double>();
        p.d = tp.at("d").get<double>();
        p.alpha = tp.at("alpha").get<double>();
    }
    if (j.contains("group") && !j["group"].is_null()) line.group = j["group"].get<int>();
    return line;
}

void write_records(std::ostream& out, const std::vector<RecordLine>& lines) {
    for (const auto& l : lines) out << to_json(l).dump() << '\n';
}

std::vector<RecordLine> read_records(std::istream& in) {
    std::vector<RecordLine> out;
    std::string text;
    int line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(line_from_json(json::parse(text)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError,
                        "records line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

json to_json(const PredictorConfig& c) {
    return {{"obs_len", c.obs_len},
            {"pred_len", c.pred_len},
            {"dt", c.dt},
            {"min_obs", c.min_obs},
            {"frechet_threshold", c.frechet_threshold},
            {"n_salps", c.n_salps},
            {"n_iters", c.n_iters},
            {"n_v_salps", c.n_v_salps},
            {"n_v_iters", c.n_v_iters},
            {"n_headings", c.n_headings},
            {"heading_step", c.heading_step},
            {"eta", c.eta},
            {"v_bound", c.v_bound},
            {"speed_weights", c.speed_weights},
            {"stride", c.stride},
            {"rng_seed", c.rng_seed}};
}

PredictorConfig config_from_json(const json& j) {
    PredictorConfig c;
    c.obs_len = j.value("obs_len", c.obs_len);
    c.pred_len = j.value("pred_len", c.pred_len);
    c.dt = j.value("dt", c.dt);
    c.min_obs = j.value("min_obs", c.min_obs);
    c.frechet_threshold = j.value("frechet_threshold", c.frechet_threshold);
    c.n_salps = j.value("n_salps", c.n_salps);
    c.n_iters = j.value("n_iters", c.n_iters);
    c.n_v_salps = j.value("n_v_salps", c.n_v_salps);
    c.n_v_iters = j.value("n_v_iters", c.n_v_iters);
    c.n_headings = j.value("n_headings", c.n_headings);
    c.heading_step = j.value("heading_step", c.heading_step);
    c.eta = j.value("eta", c.eta);
    c.v_bound = j.value("v_bound", c.v_bound);
    c.speed_weights = j.value("speed_weights", c.speed_weights);
    c.stride = j.value("stride", c.stride);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    return c;
}

// Threads are excluded: results do not depend on them.
std::string config_hash(const PredictorConfig& cfg) { return fnv1a_hex(to_json(cfg).dump()); }

json to_json(const RunManifest& m) {
    return {{"config", to_json(m.config)},
            {"config_hash", config_hash(m.config)},
            {"threads", m.config.threads},
            {"data", {{"path", m.data_path}, {"fnv1a", m.data_hash}, {"format", m.format},
                      {"frame_stride", m.frame_stride}}},
            {"seed", m.seed},
            {"version", m.version},
            {"timings_s", m.timings}};
}

json to_json(const EvalReport& r) {
    json agents = json::object();
    for (const auto& [id, a] : r.per_agent)
        agents[std::to_string(id)] = {{"predictions", a.predictions}, {"lengths", a.lengths},
                                      {"ade2", a.ade},                {"fde2", a.fde}};
    return {{"ade", r.ade},       {"fde", r.fde},       {"ade2", r.ade2},
            {"fde2", r.fde2},     {"n_eval", r.n_eval}, {"n_full", r.n_full},
            {"per_agent", agents}};
}

}  // namespace crowdcast
