#pragma once

#include <limits>
#include <span>
#include <vector>

#include "crowdcast/core.hpp"

namespace crowdcast {

/// Dense row-major square matrix.
template <class T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

/// Pairwise discrete Frechet distances [m].
using SimilarityMatrix = SquareMatrix<double>;
/// 1 where two agents are close enough to share a group.
using BinaryMatrix = SquareMatrix<unsigned char>;

/// Entry used for pairs whose windows overlap in fewer than two frames.
/// Finite, and larger than any usable threshold.
inline constexpr double kNoOverlap = std::numeric_limits<double>::max();

struct Group {
    int group_id = 0;         // 1-based, in discovery order
    std::vector<int> members; // agent ids, in discovery order
    double avg_speed = 0.0;   // u_l [m/s]
};

struct GroupTable {
    std::vector<Group> groups;

    /// Group containing `agent_id`, or nullptr for singletons.
    const Group* group_of(int agent_id) const;
};

/// Discrete Frechet distance over monotone couplings (Eiter-Mannila DP).
double discrete_frechet(std::span<const Position> a, std::span<const Position> b);

/// Pairwise distances between windows, each pair restricted to the frames
/// both windows cover.
SimilarityMatrix similarity_matrix(std::span<const ObservationWindow> windows);

BinaryMatrix binary_matrix(const SimilarityMatrix& sim, double threshold);

/// Connected components with at least two members, found by breadth-first
/// expansion from the lowest unvisited index. Returns row indices.
std::vector<std::vector<std::size_t>> divide_groups(const BinaryMatrix& b);

/// Attaches agent ids and the mean desired speed of each group's members.
GroupTable group_speeds(const std::vector<std::vector<std::size_t>>& membership,
                        std::span<const ObservationWindow> windows, const PredictorConfig& cfg);

/// Similarity matrix, thresholding, division and speeds in one call.
GroupTable group_information(std::span<const ObservationWindow> windows,
                             const PredictorConfig& cfg);

}  // namespace crowdcast
