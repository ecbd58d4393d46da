#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crowdcast/core.hpp"
#include "crowdcast/metrics.hpp"

namespace crowdcast {

struct TrajectoryRow {
    int frame = 0;  // resampled frame index
    int agent_id = 0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

/// Rows sorted by (agent, frame), unique per (frame, agent).
struct TrajectoryTable {
    std::vector<TrajectoryRow> rows;
    int frame_stride = 1;  // raw frames per resampled frame
    double dt = 0.4;       // seconds per resampled frame

    bool empty() const { return rows.empty(); }
    int first_frame() const;
    int last_frame() const;

    /// Positions of one agent at frames [first, last], in frame order.
    std::vector<TimedPosition> track(int agent_id, int first, int last) const;
    /// Agent ids present at `frame`, ascending.
    std::vector<int> agents_at(int frame) const;
    std::optional<Position> position(int agent_id, int frame) const;
};

/// Obstacle boundary samples; one "x y" pair per line.
using ObstacleMap = std::vector<Position>;

/// Normalised format: frame, agent id, x, y separated by tabs or spaces, an
/// optional header line, '#' comments. Raw frame numbers are divided by
/// `frame_stride` (rounded) to give resampled frames.
TrajectoryTable load_tsv(const std::filesystem::path& path, int frame_stride = 1, double dt = 0.4);
TrajectoryTable parse_tsv(std::istream& in, int frame_stride = 1, double dt = 0.4);

/// Eight-column observation matrix (frame, id, x, z, y, vx, vz, vy); keeps
/// frame, id, x and y.
TrajectoryTable load_obsmat(const std::filesystem::path& path, int frame_stride = 1,
                            double dt = 0.4);
TrajectoryTable parse_obsmat(std::istream& in, int frame_stride = 1, double dt = 0.4);

void write_tsv(std::ostream& out, const TrajectoryTable& table);
void write_obsmat(std::ostream& out, const TrajectoryTable& table);

ObstacleMap load_obstacles(const std::filesystem::path& path);
ObstacleMap parse_obstacles(std::istream& in);

/// Sorts rows by (agent, frame) and rejects duplicate (frame, agent) pairs.
void normalise(TrajectoryTable& table);

/// Agents at one issue frame, their windows, and the scene up to that frame.
struct IssueBatch {
    int issue_frame = 0;
    std::vector<ObservationWindow> windows;
    SceneHistory history;
};

/// Frames at which predictions are issued: every `stride`-th frame counted
/// from the table's first frame.
std::vector<int> issue_frames(const TrajectoryTable& table, int stride);

/// Window of `agent_id` at issue frame t: the longest contiguous run of
/// frames ending at t, capped at `obs_len`.
ObservationWindow window_at(const TrajectoryTable& table, int agent_id, int t, int obs_len);

/// Scene frames [first, t] with velocities derived from frames <= t only.
SceneHistory scene_history(const TrajectoryTable& table, int first, int t,
                           const ObstacleMap& obstacles);

IssueBatch make_issue(const TrajectoryTable& table, int t, const PredictorConfig& cfg,
                      const ObstacleMap& obstacles);

/// Lazily walks the issue frames of a table.
class WindowStream {
public:
    WindowStream(const TrajectoryTable& table, const PredictorConfig& cfg, ObstacleMap obstacles);

    std::optional<IssueBatch> next();

private:
    const TrajectoryTable& table_;
    PredictorConfig cfg_;
    ObstacleMap obstacles_;
    std::vector<int> frames_;
    std::size_t cursor_ = 0;
};

/// True positions at t+1 .. t+pred_len while the agent stays present.
std::vector<Position> ground_truth(const TrajectoryTable& table, int agent_id, int t,
                                   int pred_len);

/// Keeps rows with frame < first + n_frames.
TrajectoryTable head_frames(const TrajectoryTable& table, int n_frames);

/// FNV-1a 64-bit digest of a byte range, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace crowdcast
