#include "crowdcast/grouping.hpp"

#include <algorithm>
#include <deque>

namespace crowdcast {

const Group* GroupTable::group_of(int agent_id) const {
    for (const auto& g : groups)
        if (std::find(g.members.begin(), g.members.end(), agent_id) != g.members.end())
            return &g;
    return nullptr;
}

double discrete_frechet(std::span<const Position> a, std::span<const Position> b) {
    if (a.empty() || b.empty())
        throw Error(ErrorCode::EmptySequence, "discrete Frechet distance of an empty sequence");

    // Rolling row of the coupling table: row[j] holds the bottleneck of the
    // best coupling of a[0..i] with b[0..j].
    const std::size_t m = b.size();
    std::vector<double> row(m);
    row[0] = distance(a[0], b[0]);
    for (std::size_t j = 1; j < m; ++j) row[j] = std::max(row[j - 1], distance(a[0], b[j]));

    for (std::size_t i = 1; i < a.size(); ++i) {
        double diag = row[0];
        row[0] = std::max(row[0], distance(a[i], b[0]));
        for (std::size_t j = 1; j < m; ++j) {
            const double up = row[j];
            const double best = std::min({diag, up, row[j - 1]});
            row[j] = std::max(best, distance(a[i], b[j]));
            diag = up;
        }
    }
    return row[m - 1];
}

namespace {

std::vector<Position> slice(const ObservationWindow& w, int first, int last) {
    std::vector<Position> out;
    for (const auto& f : w.frames)
        if (f.frame >= first && f.frame <= last) out.push_back(f.pos);
    return out;
}

}  // namespace

SimilarityMatrix similarity_matrix(std::span<const ObservationWindow> windows) {
    const std::size_t n = windows.size();
    SimilarityMatrix sim(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& wi = windows[i];
            const auto& wj = windows[j];
            double value = kNoOverlap;
            if (!wi.frames.empty() && !wj.frames.empty()) {
                const int first = std::max(wi.frames.front().frame, wj.frames.front().frame);
                const int last = std::min(wi.frames.back().frame, wj.frames.back().frame);
                if (last - first + 1 >= 2) {
                    const auto a = slice(wi, first, last);
                    const auto b = slice(wj, first, last);
                    if (a.size() >= 2 && b.size() >= 2) value = discrete_frechet(a, b);
                }
            }
            sim(i, j) = value;
            sim(j, i) = value;
        }
    }
    return sim;
}

BinaryMatrix binary_matrix(const SimilarityMatrix& sim, double threshold) {
    const std::size_t n = sim.size();
    BinaryMatrix b(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(i, j) = (i != j && sim(i, j) <= threshold) ? 1 : 0;
    return b;
}

std::vector<std::vector<std::size_t>> divide_groups(const BinaryMatrix& b) {
    const std::size_t n = b.size();
    std::vector<std::vector<std::size_t>> groups;
    std::vector<bool> active(n, true);

    auto neighbours = [&](std::size_t row) {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < n; ++j)
            if (b(row, j)) out.push_back(j);
        return out;
    };

    for (std::size_t base = 0; base < n; ++base) {
        if (!active[base]) continue;
        std::deque<std::size_t> pending;
        for (std::size_t j : neighbours(base)) pending.push_back(j);
        if (pending.empty()) {
            active[base] = false;
            continue;
        }
        std::vector<std::size_t> members{base};
        members.insert(members.end(), pending.begin(), pending.end());
        while (!pending.empty()) {
            const std::size_t next = pending.front();
            pending.pop_front();
            for (std::size_t j : neighbours(next)) {
                if (std::find(members.begin(), members.end(), j) == members.end()) {
                    members.push_back(j);
                    pending.push_back(j);
                }
            }
        }
        for (std::size_t m : members) active[m] = false;
        groups.push_back(std::move(members));
    }
    return groups;
}

GroupTable group_speeds(const std::vector<std::vector<std::size_t>>& membership,
                        std::span<const ObservationWindow> windows, const PredictorConfig& cfg) {
    GroupTable table;
    int next_id = 1;
    for (const auto& indices : membership) {
        Group g;
        g.group_id = next_id++;
        double sum = 0.0;
        for (std::size_t idx : indices) {
            const auto& w = windows[idx];
            g.members.push_back(w.agent_id);
            sum += desired_speed(w, weights_for(cfg, w.size() - 1));
        }
        g.avg_speed = indices.empty() ? 0.0 : sum / static_cast<double>(indices.size());
        table.groups.push_back(std::move(g));
    }
    return table;
}

GroupTable group_information(std::span<const ObservationWindow> windows,
                             const PredictorConfig& cfg) {
    const auto sim = similarity_matrix(windows);
    const auto bin = binary_matrix(sim, cfg.frechet_threshold);
    return group_speeds(divide_groups(bin), windows, cfg);
}

}  // namespace crowdcast
