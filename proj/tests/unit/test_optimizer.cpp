#include <gtest/gtest.h>

#include <cmath>

#include "crowdcast/dataset.hpp"
#include "crowdcast/optimizer.hpp"
#include "crowdcast/synthetic.hpp"
#include "oracles.hpp"
#include "random_scenes.hpp"

using namespace crowdcast;

namespace {

EnergyContext bare_context(const ParamSet& p) {
    EnergyContext ctx;
    ctx.bind(p);
    return ctx;
}

Bounds<2> box(double b) { return {{-b, -b}, {b, b}}; }

}  // namespace

TEST(C1Weight, Schedule) {
    EXPECT_DOUBLE_EQ(c1_weight(0, 10), 2.0);
    EXPECT_DOUBLE_EQ(c1_weight(10, 10), 2.0 * std::exp(-16.0));
    EXPECT_NEAR(c1_weight(10, 10), 2.25e-7, 0.01e-7);
    EXPECT_DOUBLE_EQ(c1_weight(5, 10), 2.0 * std::exp(-4.0));
}

TEST(SsaUpdate, FollowerAtLeaderStaysPut) {
    Swarm<2> s;
    s.bounds = box(5);
    s.food = {1.0, 1.0};
    s.max_iters = 10;
    s.states = {{0.5, 0.5}, {0.5, 0.5}};
    Rng rng(1);
    const auto next = ssa_update(s, rng);
    // the follower averages with the updated leader
    EXPECT_DOUBLE_EQ(next.states[1][0], 0.5 * (0.5 + next.states[0][0]));
    EXPECT_DOUBLE_EQ(next.states[1][1], 0.5 * (0.5 + next.states[0][1]));
    EXPECT_EQ(next.iteration, 1);
}

TEST(SsaUpdate, FollowerChainIsMidpointRecurrence) {
    Swarm<1> s;
    s.bounds = {{-100.0}, {100.0}};
    s.max_iters = 4;
    s.iteration = 4;  // c1 tiny: the leader lands next to the food
    s.food = {3.0};
    s.states = {{0.0}, {8.0}, {-4.0}, {16.0}};
    Rng rng(2);
    const auto next = ssa_update(s, rng);
    const double leader = next.states[0][0];
    EXPECT_NEAR(leader, 3.0, 1e-3);
    const double f1 = 0.5 * (8.0 + leader);
    const double f2 = 0.5 * (-4.0 + f1);
    const double f3 = 0.5 * (16.0 + f2);
    EXPECT_DOUBLE_EQ(next.states[1][0], f1);
    EXPECT_DOUBLE_EQ(next.states[2][0], f2);
    EXPECT_DOUBLE_EQ(next.states[3][0], f3);
}

TEST(SsaUpdate, LeaderFollowsFormulaWithRecordedDraws) {
    Swarm<2> s;
    s.bounds = {{-1.0, 0.0}, {3.0, 2.0}};
    s.max_iters = 10;
    s.iteration = 2;
    s.food = {1.0, 1.0};
    s.states = {{0.0, 0.0}};
    Rng rng(77), replay(77);
    const auto next = ssa_update(s, rng);
    const double c1 = c1_weight(3, 10);
    for (std::size_t i = 0; i < 2; ++i) {
        const double c2 = replay.uniform();
        const double c3 = replay.uniform(-1.0, 1.0);
        const double raw = s.food[i] + (c3 >= 0 ? 1.0 : -1.0) * c1 * ((s.bounds.hi[i] - s.bounds.lo[i]) * c2 + s.bounds.lo[i]);
        EXPECT_DOUBLE_EQ(next.states[0][i], std::clamp(raw, s.bounds.lo[i], s.bounds.hi[i]));
    }
}

TEST(SsaUpdate, DeterministicAndInBounds) {
    Swarm<3> s;
    s.bounds = {{-1, -2, 0}, {1, 2, 5}};
    s.max_iters = 10;
    s.food = {0.9, -1.9, 4.9};
    Rng init(5);
    for (int n = 0; n < 8; ++n) s.states.push_back(s.bounds.sample(init));
    Rng a(9), b(9);
    auto sa = s, sb = s;
    for (int k = 0; k < 10; ++k) {
        sa = ssa_update(sa, a);
        sb = ssa_update(sb, b);
        for (const auto& x : sa.states)
            for (std::size_t i = 0; i < 3; ++i) {
                EXPECT_GE(x[i], s.bounds.lo[i]);
                EXPECT_LE(x[i], s.bounds.hi[i]);
            }
    }
    EXPECT_EQ(sa.states, sb.states);
}

TEST(GradientDescent, ConvexQuadratic) {
    const auto f = [](const Point<2>& x) { return std::pow(x[0] - 1, 2) + std::pow(x[1] - 2, 2); };
    const auto r = gradient_descent<2>(f, {0.0, 0.0}, box(2.5));
    EXPECT_NEAR(r.x[0], 1.0, 1e-4);
    EXPECT_NEAR(r.x[1], 2.0, 1e-4);
}

TEST(GradientDescent, StartAtOptimumStays) {
    const auto f = [](const Point<2>& x) { return std::pow(x[0] - 1, 2) + std::pow(x[1] - 2, 2); };
    const auto r = gradient_descent<2>(f, {1.0, 2.0}, box(2.5));
    EXPECT_EQ(r.x[0], 1.0);
    EXPECT_EQ(r.x[1], 2.0);
    EXPECT_EQ(r.value, 0.0);
}

TEST(GradientDescent, RandomQuadraticsMatchClosedForm) {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        // f(x) = 1/2 x^T A x - b^T x with A symmetric positive definite
        const double l1 = rng.uniform(0.5, 4), l2 = rng.uniform(0.5, 4), th = rng.uniform(0, kPi);
        const double c = std::cos(th), s = std::sin(th);
        const double a11 = l1 * c * c + l2 * s * s, a22 = l1 * s * s + l2 * c * c,
                     a12 = (l1 - l2) * c * s;
        const Vec2 star{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        const double b1 = a11 * star.x + a12 * star.y, b2 = a12 * star.x + a22 * star.y;
        const auto f = [&](const Point<2>& x) {
            return 0.5 * (a11 * x[0] * x[0] + 2 * a12 * x[0] * x[1] + a22 * x[1] * x[1]) - b1 * x[0] - b2 * x[1];
        };
        const Point<2> start{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)};
        const auto r = gradient_descent<2>(f, start, box(2.5));
        EXPECT_NEAR(r.x[0], star.x, 1e-3);
        EXPECT_NEAR(r.x[1], star.y, 1e-3);
        EXPECT_LE(r.value, f(start));
    }
}

TEST(GradientDescent, NonFiniteObjectiveReturnsBestSoFar) {
    const auto f = [](const Point<1>& x) { return x[0] < 0.5 ? std::nan("") : x[0] * x[0]; };
    const auto r = gradient_descent<1>(f, {2.0}, Bounds<1>{{-5.0}, {5.0}});
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_LE(r.value, 4.0);
}

TEST(MinimizeSwarm, FoodCostNonincreasing) {
    const auto f = [](const Point<4>& x) {
        double s = 0;
        for (double v : x) s += std::pow(v - 0.3, 2) + 0.1 * std::sin(5 * v);
        return s;
    };
    Bounds<4> b{{-3, -3, -3, -3}, {3, 3, 3, 3}};
    for (const bool hybrid : {false, true}) {
        Rng rng(4);
        const auto r = minimize_swarm<4>(f, b, {12, 10}, rng, std::nullopt,
                                         hybrid ? std::optional<GdSettings>(GdSettings{}) : std::nullopt);
        ASSERT_EQ(r.history.size(), 10u);
        for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k], r.history[k - 1]);
        EXPECT_EQ(r.cost, f(r.best));
    }
}

TEST(EstimateVelocity, DampOnlyReturnsPrevious) {
    ParamSet p;
    p.lambda0 = 1;
    p.lambda1 = p.lambda2 = p.lambda3 = p.lambda4 = 0;
    p.w = 0;
    auto ctx = bare_context(p);
    ctx.prev_vel = {0.8, -1.1};
    Rng rng(3);
    const auto v = estimate_velocity(ctx, PredictorConfig{}, rng);
    EXPECT_NEAR(v.x, 0.8, 1e-3);
    EXPECT_NEAR(v.y, -1.1, 1e-3);
}

TEST(EstimateVelocity, SpeedAndHeadingMatchGridSearch) {
    ParamSet p;
    p.lambda0 = 0;
    p.lambda1 = p.lambda2 = 1;
    p.lambda3 = p.lambda4 = 0;
    p.w = 0;
    for (const double theta : {0.3, 2.0, -2.6}) {
        auto ctx = bare_context(p);
        ctx.prev_vel = {-0.5, 0.4};
        ctx.desired_speed = 1.2;
        ctx.goal = Heading{theta};
        Rng rng(8);
        const auto v = estimate_velocity(ctx, PredictorConfig{}, rng);
        const auto grid = oracle::grid_argmin([&](Vec2 x) { return total_energy(x, ctx).total; },
                                              {0, 0}, 2.5, 0.01);
        EXPECT_NEAR(v.x, grid.x, 0.05);
        EXPECT_NEAR(v.y, grid.y, 0.05);
        EXPECT_NEAR(v.x, 1.2 * std::cos(theta), 0.05);
        EXPECT_NEAR(v.y, 1.2 * std::sin(theta), 0.05);
    }
}

TEST(EstimateVelocity, NoWorseThanPreviousAndDeterministic) {
    Rng scenes(41);
    for (int i = 0; i < 50; ++i) {
        auto ctx = testing_support::random_context(scenes);
        Rng a(i), b(i);
        const auto va = estimate_velocity(ctx, PredictorConfig{}, a);
        const auto vb = estimate_velocity(ctx, PredictorConfig{}, b);
        EXPECT_EQ(va.x, vb.x);
        EXPECT_EQ(va.y, vb.y);
        Vec2 prev = ctx.prev_vel;
        prev.x = std::clamp(prev.x, -2.5, 2.5);
        prev.y = std::clamp(prev.y, -2.5, 2.5);
        EXPECT_LE(energy_value(va, ctx), energy_value(prev, ctx) + 1e-12);
        EXPECT_LE(std::abs(va.x), 2.5);
        EXPECT_LE(std::abs(va.y), 2.5);
    }
}

class ParameterFit : public ::testing::Test {
protected:
    PredictorConfig cfg;
    IssueBatch straight_scene() {
        std::vector<synthetic::Track> tracks{synthetic::straight(1, {0, 0}, {1.1, 0.4}, 0, 20, cfg.dt)};
        table_ = synthetic::to_table(tracks, cfg.dt);
        return make_issue(table_, 7, cfg, {});
    }
    IssueBatch pair_scene() {
        std::vector<synthetic::Track> tracks{
            synthetic::straight(1, {0, 0}, {1.2, 0.0}, 0, 20, cfg.dt),
            synthetic::straight(2, {0, 0.7}, {1.2, 0.0}, 0, 20, cfg.dt)};
        table_ = synthetic::to_table(tracks, cfg.dt);
        return make_issue(table_, 7, cfg, {});
    }
    TrajectoryTable table_;
};

TEST_F(ParameterFit, StraightWalkerReproducesVelocities) {
    const auto batch = straight_scene();
    const auto groups = group_information(batch.windows, cfg);
    const auto fit = estimate_parameters(batch.windows[0], batch.history, groups, cfg, 99);
    const auto steps = build_fit_steps(batch.windows[0], batch.history, groups, cfg);
    ASSERT_EQ(steps.size(), 6u);
    for (std::size_t s = 0; s < steps.size(); ++s) {
        EnergyContext ctx = steps[s].ctx;
        ctx.bind(fit.params);
        Rng rng(s);
        const auto v = estimate_velocity(ctx, cfg, rng);
        EXPECT_LE(norm(v - steps[s].observed), 0.05);
    }
}

TEST_F(ParameterFit, GridOracleFindsAnExactFit) {
    // A coarse grid over the direction and speed weights already contains a
    // parameter set reproducing the straight walk, so the fit target is reachable.
    const auto batch = straight_scene();
    const auto groups = group_information(batch.windows, cfg);
    const auto steps = build_fit_steps(batch.windows[0], batch.history, groups, cfg);
    double best = 1e300;
    for (double l0 : {0.0, 1.0, 5.0})
        for (double l1 : {0.0, 1.0, 5.0})
            for (double l2 : {0.0, 1.0, 5.0}) {
                ParamSet p;
                p.lambda0 = l0;
                p.lambda1 = l1;
                p.lambda2 = l2;
                p.lambda3 = p.lambda4 = p.w = 0;
                best = std::min(best, param_cost(p, steps, cfg, 1, 1));
            }
    EXPECT_LE(best, 6 * 0.05 * 0.05);
}

TEST_F(ParameterFit, PairBeatsContradictoryParameters) {
    const auto batch = pair_scene();
    const auto groups = group_information(batch.windows, cfg);
    ASSERT_EQ(groups.groups.size(), 1u);
    const auto fit = estimate_parameters(batch.windows[0], batch.history, groups, cfg, 5);
    const auto steps = build_fit_steps(batch.windows[0], batch.history, groups, cfg);
    ParamSet bad;
    bad.lambda0 = 0;
    bad.lambda1 = 0;
    bad.lambda2 = 0;
    bad.lambda3 = 10;
    bad.lambda4 = 10;
    bad.w = 5;
    bad.d = 10;
    EXPECT_LT(param_cost(fit.params, steps, cfg, 5, 1), param_cost(bad, steps, cfg, 5, 1));
}

TEST_F(ParameterFit, DeterministicAndBounded) {
    const auto batch = pair_scene();
    const auto groups = group_information(batch.windows, cfg);
    const auto a = estimate_parameters(batch.windows[1], batch.history, groups, cfg, 17);
    const auto b = estimate_parameters(batch.windows[1], batch.history, groups, cfg, 17);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.cost, b.cost);
    const auto bounds = param_bounds();
    const auto x = a.params.to_array();
    for (std::size_t i = 0; i < ParamSet::kSize; ++i) {
        EXPECT_GE(x[i], bounds.lo[i]);
        EXPECT_LE(x[i], bounds.hi[i]);
    }
    EXPECT_LT(a.params.alpha, a.params.d);
    for (std::size_t k = 1; k < a.history.size(); ++k) EXPECT_LE(a.history[k], a.history[k - 1]);
}

TEST_F(ParameterFit, StepOrderDoesNotMatter) {
    const auto batch = pair_scene();
    const auto groups = group_information(batch.windows, cfg);
    const auto steps = build_fit_steps(batch.windows[0], batch.history, groups, cfg);
    Rng rng(2);
    const auto p = testing_support::random_params(rng);
    const std::vector<std::size_t> reversed{5, 4, 3, 2, 1, 0};
    const std::vector<std::size_t> shuffled{3, 0, 5, 1, 4, 2};
    const double base = param_cost(p, steps, cfg, 8, 3);
    EXPECT_NEAR(param_cost(p, steps, cfg, 8, 3, reversed), base, 1e-12);
    EXPECT_NEAR(param_cost(p, steps, cfg, 8, 3, shuffled), base, 1e-12);
}

TEST_F(ParameterFit, ShortWindowRejected) {
    auto batch = straight_scene();
    auto w = batch.windows[0];
    w.frames.erase(w.frames.begin(), w.frames.end() - 2);
    try {
        estimate_parameters(w, batch.history, GroupTable{}, cfg, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WindowTooShort);
    }
}
