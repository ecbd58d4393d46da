#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crowdcast/core.hpp"
#include "crowdcast/dataset.hpp"

namespace crowdcast::synthetic {

/// A generated track: positions at first_frame, first_frame + 1, ...
struct Track {
    int agent_id = 0;
    int first_frame = 0;
    std::vector<Position> path;

    int last_frame() const { return first_frame + static_cast<int>(path.size()) - 1; }
};

Track straight(int id, Position start, Velocity vel, int first_frame, int n_frames, double dt);

/// Constant speed along a circular arc turning at `turn_rate` rad/s.
Track arc(int id, Position start, double speed, double heading, double turn_rate, int first_frame,
          int n_frames, double dt);

/// Straight mean motion with a lateral sinusoidal sway of the given
/// amplitude [m] and period [frames].
Track weaving(int id, Position start, Velocity mean_vel, double amplitude, double period,
              double phase, int first_frame, int n_frames, double dt);

/// `n` walkers with random headings and speeds in a square, spaced so that
/// nobody starts closer than 1.5 m to another. Every track covers
/// frames [0, n_frames).
std::vector<Track> crowd(int n, std::uint64_t seed, int n_frames, double dt);

TrajectoryTable to_table(std::span<const Track> tracks, double dt);

/// Window of the last `obs_len` positions ending at frame t.
ObservationWindow window(const Track& track, int t, int obs_len, double dt);

}  // namespace crowdcast::synthetic
