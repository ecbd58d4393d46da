#include "crowdcast/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "crowdcast/rng.hpp"

namespace crowdcast::synthetic {

Track straight(int id, Position start, Velocity vel, int first_frame, int n_frames, double dt) {
    Track t{id, first_frame, {}};
    for (int k = 0; k < n_frames; ++k) t.path.push_back(start + vel * (k * dt));
    return t;
}

Track arc(int id, Position start, double speed, double heading, double turn_rate, int first_frame,
          int n_frames, double dt) {
    Track t{id, first_frame, {}};
    Position p = start;
    for (int k = 0; k < n_frames; ++k) {
        t.path.push_back(p);
        if (std::abs(turn_rate) < 1e-12) {
            p += Vec2{std::cos(heading), std::sin(heading)} * (speed * dt);
        } else {
            // exact chord of the arc over one step
            const double next = heading + turn_rate * dt;
            const double r = speed / turn_rate;
            p += Vec2{r * (std::sin(next) - std::sin(heading)), -r * (std::cos(next) - std::cos(heading))};
            heading = next;
        }
    }
    return t;
}

Track weaving(int id, Position start, Velocity mean_vel, double amplitude, double period,
              double phase, int first_frame, int n_frames, double dt) {
    Track t{id, first_frame, {}};
    const double s = norm(mean_vel);
    const Vec2 lateral = s > 0.0 ? Vec2{-mean_vel.y / s, mean_vel.x / s} : Vec2{0.0, 0.0};
    for (int k = 0; k < n_frames; ++k) {
        const double sway = amplitude * std::sin(2.0 * kPi * k / period + phase);
        t.path.push_back(start + mean_vel * (k * dt) + lateral * sway);
    }
    return t;
}

std::vector<Track> crowd(int n, std::uint64_t seed, int n_frames, double dt) {
    Rng rng(derive_seed(seed, {0x63726f77}));
    const double side = 4.0 + 2.5 * std::sqrt(static_cast<double>(std::max(n, 1)));
    std::vector<Position> starts;
    std::vector<Track> tracks;
    for (int i = 0; i < n; ++i) {
        Position p{};
        for (int attempt = 0; attempt < 1000; ++attempt) {
            p = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
            const bool clear = std::all_of(starts.begin(), starts.end(),
                                           [&](const Position& q) { return distance(p, q) >= 1.5; });
            if (clear) break;
        }
        starts.push_back(p);
        const double heading = rng.uniform(-kPi, kPi);
        const double speed = rng.uniform(0.8, 1.6);
        tracks.push_back(
            straight(i + 1, p, Vec2{std::cos(heading), std::sin(heading)} * speed, 0, n_frames, dt));
    }
    return tracks;
}

TrajectoryTable to_table(std::span<const Track> tracks, double dt) {
    TrajectoryTable table;
    table.dt = dt;
    for (const auto& t : tracks)
        for (std::size_t k = 0; k < t.path.size(); ++k)
            table.rows.push_back(
                {t.first_frame + static_cast<int>(k), t.agent_id, t.path[k].x, t.path[k].y});
    normalise(table);
    return table;
}

ObservationWindow window(const Track& track, int t, int obs_len, double dt) {
    ObservationWindow w;
    w.agent_id = track.agent_id;
    w.dt = dt;
    const int first = std::max(track.first_frame, t - obs_len + 1);
    for (int f = first; f <= std::min(t, track.last_frame()); ++f)
        w.frames.push_back({f, track.path[static_cast<std::size_t>(f - track.first_frame)]});
    return w;
}

}  // namespace crowdcast::synthetic
