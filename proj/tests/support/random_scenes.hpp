#pragma once

#include "crowdcast/energy.hpp"
#include "crowdcast/rng.hpp"

namespace testing_support {

inline crowdcast::ParamSet random_params(crowdcast::Rng& rng) {
    crowdcast::ParamSet p;
    p.lambda0 = rng.uniform(0, 10);
    p.lambda1 = rng.uniform(0, 10);
    p.lambda2 = rng.uniform(0, 10);
    p.lambda3 = rng.uniform(0, 10);
    p.lambda4 = rng.uniform(0, 10);
    p.w = rng.uniform(0, 5);
    p.d = rng.uniform(0.1, 10);
    p.alpha = rng.uniform(0, p.d * 0.99);
    return p;
}

/// Random context with 0-3 group mates, 0-5 neighbors and either goal kind.
inline crowdcast::EnergyContext random_context(crowdcast::Rng& rng) {
    using namespace crowdcast;
    EnergyContext ctx;
    ctx.self_pos = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    ctx.prev_vel = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    ctx.desired_speed = rng.uniform(0, 2);
    if (rng.uniform() < 0.5)
        ctx.goal = Heading{rng.uniform(-kPi, kPi)};
    else
        ctx.goal = Destination{{rng.uniform(-10, 10), rng.uniform(-10, 10)}};
    const int mates = static_cast<int>(rng.uniform() * 4);
    for (int i = 0; i < mates; ++i)
        ctx.group.push_back({{rng.uniform(-2, 2), rng.uniform(-2, 2)},
                             {rng.uniform(-2, 2), rng.uniform(-2, 2)}});
    if (mates > 0) ctx.group_speed = rng.uniform(0, 2);
    const int neighbors = static_cast<int>(rng.uniform() * 6);
    for (int i = 0; i < neighbors; ++i)
        ctx.neighbors.push_back({{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                                 {rng.uniform(-2, 2), rng.uniform(-2, 2)},
                                 0.0});
    ctx.bind(random_params(rng));
    return ctx;
}

}  // namespace testing_support
