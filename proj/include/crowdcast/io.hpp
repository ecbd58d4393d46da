#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "crowdcast/core.hpp"
#include "crowdcast/metrics.hpp"
#include "crowdcast/pipeline.hpp"

namespace crowdcast {

inline constexpr const char* kVersion = "0.1.0";

/// One line of a records file. Observed positions are the window ending at
/// frame t; predicted positions start at t+1.
struct RecordLine {
    int t = 0;
    int agent_id = 0;
    std::vector<Position> obs;
    std::vector<Position> pred;
    double theta_deg = 0.0;
    ParamSet params;
    std::optional<int> group;
};

RecordLine to_line(const PredictionRecord& record);

nlohmann::json to_json(const RecordLine& line);
RecordLine line_from_json(const nlohmann::json& j);

/// One compact JSON object per line, in input order.
void write_records(std::ostream& out, const std::vector<RecordLine>& lines);
/// Throws ParseError with the offending line number.
std::vector<RecordLine> read_records(std::istream& in);

nlohmann::json to_json(const PredictorConfig& cfg);
PredictorConfig config_from_json(const nlohmann::json& j);
/// FNV-1a digest of the canonical JSON form of the config.
std::string config_hash(const PredictorConfig& cfg);

struct RunManifest {
    PredictorConfig config;
    std::string data_path;
    std::string data_hash;
    std::string format = "tsv";
    int frame_stride = 1;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    std::map<std::string, double> timings;  // seconds per stage
};

nlohmann::json to_json(const RunManifest& m);

nlohmann::json to_json(const EvalReport& report);

}  // namespace crowdcast
