#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "fmc/env.hpp"
#include "fmc/envs/chain_trap.hpp"
#include "fmc/envs/point_navigator.hpp"
#include "fmc/envs/trap_gridworld.hpp"
#include "fmc/rng.hpp"

using namespace fmc;
using envs::ChainTrap;
using envs::PointNavigator;
using envs::TrapGridworld;

static_assert(Environment<ChainTrap>);
static_assert(Environment<TrapGridworld>);
static_assert(Environment<PointNavigator>);

TEST_CASE("chain trap basics") {
    const ChainTrap env;
    const auto start = env.reset(0);
    CHECK(start.state.pos == ChainTrap::kStart);
    CHECK(start.observation == std::vector<double>{1.0});
    CHECK_FALSE(start.dead);

    SECTION("stepping right from position 3") {
        const auto out = env.step({3}, env.descriptor().action_space.action(ChainTrap::kRight));
        CHECK(out.state.pos == 4);
        CHECK(out.reward == 0.0);
        CHECK_FALSE(out.dead);
    }
    SECTION("goal pays ten and becomes terminal") {
        const auto out = env.step({5}, env.descriptor().action_space.action(ChainTrap::kRight));
        CHECK(out.state.pos == 6);
        CHECK(out.reward == 10.0);
        CHECK_FALSE(out.dead);
        CHECK(env.is_terminal(out.state));
        const auto again = env.step(out.state, env.descriptor().action_space.action(ChainTrap::kLeft));
        CHECK(again.state.pos == 6);
        CHECK(again.reward == 0.0);
    }
    SECTION("stepping left from the start is death") {
        const auto out = env.step({1}, env.descriptor().action_space.action(ChainTrap::kLeft));
        CHECK(out.dead);
        CHECK(out.reward == 0.0);
        CHECK(env.is_terminal(out.state));
    }
    SECTION("action out of space") {
        CHECK_THROWS_AS(env.step({3}, Action{7, {}}), ContractViolation);
    }
}

TEST_CASE("trap gridworld basics") {
    const TrapGridworld env;
    const auto start = env.reset(7);
    CHECK(start.observation == std::vector<double>{0.0, 2.0});

    SECTION("stepping into an excluded cell kills with zero reward") {
        const TrapGridworld::State above{TrapGridworld::kTrapRowLo - 1, TrapGridworld::kTrapColLo};
        const auto out = env.step(above, env.descriptor().action_space.action(TrapGridworld::kDown));
        CHECK(out.dead);
        CHECK(out.reward == 0.0);
        CHECK(out.observation ==
              std::vector<double>{double(TrapGridworld::kTrapRowLo), double(TrapGridworld::kTrapColLo)});
    }
    SECTION("grid edges clamp") {
        const auto out = env.step({0, 0}, env.descriptor().action_space.action(TrapGridworld::kUp));
        CHECK(out.state == TrapGridworld::State{0, 0});
    }
    SECTION("goal pays ten") {
        const TrapGridworld::State beside{TrapGridworld::kGoalRow, TrapGridworld::kGoalCol - 1};
        const auto out = env.step(beside, env.descriptor().action_space.action(TrapGridworld::kRight));
        CHECK(out.reward == 10.0);
        CHECK(env.is_terminal(out.state));
    }
}

TEST_CASE("point navigator dynamics") {
    const PointNavigator env;
    const auto start = env.reset(1);
    CHECK(start.observation == std::vector<double>{0.0, 0.0});

    SECTION("Euler step and distance reward") {
        const auto out = env.step({0.0, 0.0}, Action{-1, {0.5, -0.25}});
        REQUIRE(out.observation.size() == 2);
        CHECK_THAT(out.observation[0], Catch::Matchers::WithinAbs(0.05, 1e-12));
        CHECK_THAT(out.observation[1], Catch::Matchers::WithinAbs(-0.025, 1e-12));
        const double expected_dist =
            std::sqrt((0.05 - PointNavigator::kGoalX) * (0.05 - PointNavigator::kGoalX) +
                      (-0.025 - PointNavigator::kGoalY) * (-0.025 - PointNavigator::kGoalY));
        CHECK_THAT(out.reward, Catch::Matchers::WithinAbs(-expected_dist, 1e-12));
    }
    SECTION("entering the obstacle is death") {
        const PointNavigator::State near{PointNavigator::kObstacleX - PointNavigator::kObstacleRadius - 0.05,
                                         PointNavigator::kObstacleY};
        const auto out = env.step(near, Action{-1, {1.0, 0.0}});
        CHECK(out.dead);
        CHECK(out.reward == 0.0);
    }
    SECTION("goal bonus on entering the radius") {
        const PointNavigator::State close{PointNavigator::kGoalX - PointNavigator::kGoalRadius - 0.05,
                                          PointNavigator::kGoalY};
        const auto out = env.step(close, Action{-1, {1.0, 0.0}});
        CHECK(out.reward > PointNavigator::kGoalBonus - 1.0);
        CHECK(env.is_terminal(out.state));
    }
    SECTION("action outside the box") {
        CHECK_THROWS_AS(env.step({0.0, 0.0}, Action{-1, {1.5, 0.0}}), ContractViolation);
    }
}

TEST_CASE("dead states absorb every action") {
    const ChainTrap chain;
    const auto dead_out = chain.step({ChainTrap::kTrap}, chain.descriptor().action_space.action(1));
    CHECK(dead_out.dead);
    CHECK(dead_out.reward == 0.0);
    CHECK(dead_out.state.pos == ChainTrap::kTrap);

    const TrapGridworld grid;
    const TrapGridworld::State trapped{TrapGridworld::kTrapRowLo, TrapGridworld::kTrapColLo};
    for (int a = 0; a < 5; ++a) {
        const auto out = grid.step(trapped, grid.descriptor().action_space.action(a));
        CHECK(out.dead);
        CHECK(out.reward == 0.0);
        CHECK(out.state == trapped);
    }
}

namespace {

template <Environment E>
void check_determinism(const E& env, std::uint64_t seed) {
    Rng rng(seed);
    const auto& space = env.descriptor().action_space;
    auto state = env.reset(seed).state;
    for (int i = 0; i < 1000; ++i) {
        const auto action = space.sample(rng);
        const auto a = env.step(state, action);
        const auto b = env.step(state, action);
        REQUIRE(a.observation == b.observation);
        REQUIRE(a.reward == b.reward);
        REQUIRE(a.dead == b.dead);
        REQUIRE(a.state == b.state);
        // Random restart-ish walk: follow the transition unless it died.
        state = a.dead ? env.reset(seed + static_cast<std::uint64_t>(i)).state : a.state;
    }
}

}  // namespace

TEST_CASE("replaying any (state, action) pair is bit-identical") {
    check_determinism(ChainTrap{}, 11);
    check_determinism(TrapGridworld{}, 12);
    check_determinism(PointNavigator{}, 13);
}

TEST_CASE("descriptors serialize to snake_case JSON and round-trip") {
    const TrapGridworld env;
    const nlohmann::json j = env.descriptor();
    CHECK(j.at("name") == "trap_gridworld");
    CHECK(j.at("observation_dim") == 2);
    CHECK(j.at("max_episode_steps") == env.descriptor().max_episode_steps);
    CHECK(j.at("action_space").at("kind") == "discrete");
    const auto back = j.get<EnvironmentDescriptor>();
    CHECK(back.name == env.descriptor().name);
    CHECK(back.action_space == env.descriptor().action_space);

    const PointNavigator nav;
    const nlohmann::json jn = nav.descriptor();
    CHECK(jn.at("action_space").at("kind") == "continuous");
    CHECK(jn.at("action_space").at("low") == std::vector<double>{-1.0, -1.0});
    const auto nav_back = jn.get<EnvironmentDescriptor>();
    CHECK(nav_back.action_space == nav.descriptor().action_space);
}

TEST_CASE("action space invariants") {
    CHECK_THROWS_AS(ActionSpace::discrete(std::vector<std::vector<double>>{}), ContractViolation);
    CHECK_THROWS_AS(ActionSpace::discrete({{1.0}, {1.0, 2.0}}), ContractViolation);
    CHECK_THROWS_AS(ActionSpace::continuous({0.0}, {0.0}), ContractViolation);

    const auto box = ActionSpace::continuous({-1.0, 0.0}, {1.0, 2.0});
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        CHECK(box.contains(box.sample(rng)));
    }
    const auto onehot = ActionSpace::discrete(3);
    CHECK(onehot.embeddings()[1] == std::vector<double>{0.0, 1.0, 0.0});
    CHECK(onehot.contains(Action{2, {}}));
    CHECK_FALSE(onehot.contains(Action{3, {}}));
}
