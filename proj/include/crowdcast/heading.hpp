#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "crowdcast/core.hpp"
#include "crowdcast/grouping.hpp"

namespace crowdcast {

struct HeadingCandidate {
    double theta = 0.0;                   // radians, (-pi, pi]
    std::vector<Position> resampled_path; // N-1 positions
    double frechet = 0.0;                 // discrete Frechet component
    double distance_sum = 0.0;            // summed pointwise distances
    double cost = 0.0;                    // eta * frechet + (1 - eta) * distance_sum
};

struct HeadingEstimate {
    double theta = 0.0;
    double average = 0.0;  // centre of the candidate fan
    std::vector<HeadingCandidate> candidates;
};

/// Circular mean of the signed per-step headings of the window.
double average_heading(const ObservationWindow& window);

/// Odd fan of n headings spaced by `step`, centred on `centre`, wrapped to
/// (-pi, pi].
std::vector<double> sample_headings(double centre, int n, double step);

/// Re-simulates the observed window of an agent toward heading `theta` with
/// fitted parameters, reading other agents from ground truth at each step.
/// Returns the N-1 positions after the first observed one.
std::vector<Position> resample_path(const ObservationWindow& window, const ParamSet& params,
                                    double theta, const SceneHistory& history,
                                    const GroupTable& groups, const PredictorConfig& cfg,
                                    std::uint64_t seed);

double heading_cost(std::span<const Position> observed, std::span<const Position> resampled,
                    double eta);

/// Scores every candidate of the fan and keeps the cheapest; ties go to the
/// candidate closest to the fan centre.
HeadingEstimate estimate_target_heading(const ObservationWindow& window, const ParamSet& params,
                                        const SceneHistory& history, const GroupTable& groups,
                                        const PredictorConfig& cfg, std::uint64_t seed);

}  // namespace crowdcast
