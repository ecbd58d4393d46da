#include <gtest/gtest.h>

#include <algorithm>

#include "crowdcast/grouping.hpp"
#include "crowdcast/rng.hpp"
#include "oracles.hpp"

using namespace crowdcast;

namespace {

std::vector<Position> line(Position start, Vec2 step, int n) {
    std::vector<Position> out;
    for (int k = 0; k < n; ++k) out.push_back(start + step * k);
    return out;
}

ObservationWindow window_of(int id, int first_frame, const std::vector<Position>& ps) {
    ObservationWindow w;
    w.agent_id = id;
    for (std::size_t k = 0; k < ps.size(); ++k)
        w.frames.push_back({first_frame + static_cast<int>(k), ps[k]});
    return w;
}

BinaryMatrix from_edges(std::size_t n, std::initializer_list<std::pair<int, int>> one_based) {
    BinaryMatrix b(n, 0);
    for (auto [i, j] : one_based) {
        b(i - 1, j - 1) = 1;
        b(j - 1, i - 1) = 1;
    }
    return b;
}

}  // namespace

TEST(Frechet, IdenticalSequencesAreZero) {
    const auto p = line({1, 2}, {0.3, -0.1}, 6);
    EXPECT_EQ(discrete_frechet(p, p), 0.0);
}

TEST(Frechet, SinglePointsReduceToEuclidean) {
    std::vector<Position> a{{0, 0}}, b{{3, 4}};
    EXPECT_DOUBLE_EQ(discrete_frechet(a, b), 5.0);
}

TEST(Frechet, ParallelLinesOffset) {
    const auto a = line({0, 0}, {0.5, 0}, 5);
    const auto b = line({0, 0.7}, {0.5, 0}, 5);
    EXPECT_NEAR(discrete_frechet(a, b), 0.7, 1e-15);
}

TEST(Frechet, MatchesExhaustiveCouplings) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Position> a, b;
        const int na = 4 + static_cast<int>(rng.uniform() * 3);
        const int nb = 4 + static_cast<int>(rng.uniform() * 3);
        for (int i = 0; i < na; ++i) a.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        for (int i = 0; i < nb; ++i) b.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        EXPECT_EQ(discrete_frechet(a, b), oracle::brute_frechet(a, b));
        EXPECT_EQ(discrete_frechet(a, b), discrete_frechet(b, a));
    }
}

TEST(Frechet, EmptyInputThrows) {
    std::vector<Position> a, b{{0, 0}};
    EXPECT_THROW(discrete_frechet(a, b), Error);
}

TEST(SimilarityMatrix, SingleAgentIsZero) {
    std::vector<ObservationWindow> ws{window_of(1, 0, line({0, 0}, {0.4, 0}, 8))};
    const auto s = similarity_matrix(ws);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s(0, 0), 0.0);
}

TEST(SimilarityMatrix, IdenticalTrajectories) {
    const auto p = line({0, 0}, {0.4, 0.1}, 8);
    std::vector<ObservationWindow> ws{window_of(1, 0, p), window_of(2, 0, p)};
    const auto s = similarity_matrix(ws);
    EXPECT_EQ(s(0, 1), 0.0);
    EXPECT_EQ(s(1, 0), 0.0);
}

TEST(SimilarityMatrix, MatchesPerPairFrechet) {
    std::vector<ObservationWindow> ws{
        window_of(1, 0, line({0, 0}, {0.4, 0}, 8)),
        window_of(2, 0, line({0, 1}, {0.4, 0.05}, 8)),
        window_of(3, 0, line({5, 5}, {-0.3, 0.2}, 8)),
    };
    const auto s = similarity_matrix(ws);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const auto a = ws[i].positions();
            const auto b = ws[j].positions();
            EXPECT_EQ(s(i, j), i == j ? 0.0 : oracle::brute_frechet(a, b));
        }
}

TEST(SimilarityMatrix, UsesOverlappingFramesOnly) {
    // agent 2 appears at frame 5; only frames 5..7 are compared
    const auto a = line({0, 0}, {0.4, 0}, 8);
    const auto b = line({2.0, 0.5}, {0.4, 0}, 3);
    std::vector<ObservationWindow> ws{window_of(1, 0, a), window_of(2, 5, b)};
    const auto s = similarity_matrix(ws);
    const std::vector<Position> tail(a.begin() + 5, a.end());
    EXPECT_DOUBLE_EQ(s(0, 1), oracle::brute_frechet(tail, b));
}

TEST(SimilarityMatrix, ShortOverlapIsNeverGrouped) {
    std::vector<ObservationWindow> ws{window_of(1, 0, line({0, 0}, {0.4, 0}, 8)),
                                      window_of(2, 7, line({2.8, 0}, {0.4, 0}, 1))};
    const auto s = similarity_matrix(ws);
    EXPECT_EQ(s(0, 1), kNoOverlap);
    EXPECT_EQ(binary_matrix(s, 1e300)(0, 1), 0);
}

TEST(BinaryMatrix, ThresholdIsInclusive) {
    SimilarityMatrix s(3, 5.0);
    s(1, 2) = s(2, 1) = 1.8;
    const auto b = binary_matrix(s, 1.8);
    EXPECT_EQ(b(1, 2), 1);
    EXPECT_EQ(b(2, 1), 1);
    EXPECT_EQ(b(0, 1), 0);
}

TEST(BinaryMatrix, DiagonalAlwaysZero) {
    SimilarityMatrix s(4, 0.0);
    const auto b = binary_matrix(s, 1.0);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(b(i, i), 0);
    EXPECT_EQ(b(0, 3), 1);
}

TEST(BinaryMatrix, AllFarIsZero) {
    SimilarityMatrix s(3, 10.0);
    for (std::size_t i = 0; i < 3; ++i) s(i, i) = 0.0;
    const auto b = binary_matrix(s, 1.8);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(b(i, j), 0);
}

TEST(DivideGroups, SevenAgentBreadthFirstOrder) {
    const auto b = from_edges(7, {{1, 2}, {1, 3}, {2, 6}, {3, 4}});
    const auto groups = divide_groups(b);
    ASSERT_EQ(groups.size(), 1u);
    const std::vector<std::size_t> expected{0, 1, 2, 5, 3};  // agents 1,2,3,6,4
    EXPECT_EQ(groups[0], expected);
}

TEST(DivideGroups, NoEdgesNoGroups) {
    EXPECT_TRUE(divide_groups(BinaryMatrix(5, 0)).empty());
}

TEST(DivideGroups, MatchesUnionFind) {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 8);
        const double p = rng.uniform(0.05, 0.5);
        BinaryMatrix b(n, 0);
        std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng.uniform() < p) b(i, j) = b(j, i) = 1, adj[i][j] = adj[j][i] = 1;
        auto groups = divide_groups(b);
        for (auto& g : groups) std::sort(g.begin(), g.end());
        std::sort(groups.begin(), groups.end());
        EXPECT_EQ(groups, oracle::union_find_components(adj));
    }
}

TEST(GroupSpeeds, MeanOfMemberSpeeds) {
    std::vector<ObservationWindow> ws{
        window_of(4, 0, line({0, 0}, {0.32, 0}, 8)),   // 0.8 m/s
        window_of(7, 0, line({0, 1}, {0.48, 0}, 8)),   // 1.2 m/s
        window_of(9, 0, line({0, 2}, {0.64, 0}, 8)),   // 1.6 m/s
    };
    const auto table = group_speeds({{0, 1, 2}}, ws, PredictorConfig{});
    ASSERT_EQ(table.groups.size(), 1u);
    EXPECT_NEAR(table.groups[0].avg_speed, 1.2, 1e-12);
    EXPECT_EQ(table.groups[0].group_id, 1);
    EXPECT_EQ(table.groups[0].members, (std::vector<int>{4, 7, 9}));
    EXPECT_NE(table.group_of(7), nullptr);
    EXPECT_EQ(table.group_of(5), nullptr);

    const auto pair = group_speeds({{0, 1}}, ws, PredictorConfig{});
    EXPECT_NEAR(pair.groups[0].avg_speed, 1.0, 1e-12);
}

TEST(GroupInformation, PairWalkingTogether) {
    std::vector<ObservationWindow> ws{
        window_of(1, 0, line({0, 0}, {0.5, 0}, 8)),
        window_of(2, 0, line({0, 0.6}, {0.5, 0}, 8)),
        window_of(3, 0, line({10, 10}, {-0.5, 0}, 8)),
    };
    const auto table = group_information(ws, PredictorConfig{});
    ASSERT_EQ(table.groups.size(), 1u);
    EXPECT_EQ(table.groups[0].members, (std::vector<int>{1, 2}));
    EXPECT_NEAR(table.groups[0].avg_speed, 1.25, 1e-12);
}
