#pragma once

#include <cmath>
#include <cstdint>

#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc::envs {

// Continuous 2D point mass steered by an acceleration vector in [-1,1]^2,
// integrated with Euler steps of dt = 0.1: p' = p + a * dt. A circular dead
// obstacle sits between the start and the goal (slightly off the straight
// line, so the shorter detour side is unambiguous). Reward is the negative
// Euclidean distance to the goal, plus 100 on entering the goal radius.
class PointNavigator {
public:
    struct State {
        double x = 0.0;
        double y = 0.0;
        bool operator==(const State&) const = default;
    };

    static constexpr double kDt = 0.1;
    static constexpr double kGoalX = 1.2;
    static constexpr double kGoalY = 0.0;
    static constexpr double kGoalRadius = 0.15;
    static constexpr double kGoalBonus = 100.0;
    static constexpr double kObstacleX = 0.55;
    static constexpr double kObstacleY = 0.05;
    static constexpr double kObstacleRadius = 0.2;

    PointNavigator() {
        descriptor_.name = "point_navigator";
        descriptor_.action_space = ActionSpace::continuous({-1.0, -1.0}, {1.0, 1.0});
        descriptor_.observation_dim = 2;
        descriptor_.max_episode_steps = 200;
    }

    Step<State> reset(std::uint64_t /*seed*/) const {
        const State s{0.0, 0.0};
        return {s, observation(s), 0.0, false};
    }

    Step<State> step(const State& s, const Action& a) const {
        if (!descriptor_.action_space.contains(a)) {
            throw ContractViolation("PointNavigator: action out of space");
        }
        if (is_dead(s)) {
            return {s, observation(s), 0.0, true};
        }
        if (at_goal(s)) {
            return {s, observation(s), 0.0, false};
        }
        const State next{s.x + a.value[0] * kDt, s.y + a.value[1] * kDt};
        if (is_dead(next)) {
            return {next, observation(next), 0.0, true};
        }
        const double dist = goal_distance(next);
        const double reward = -dist + (dist <= kGoalRadius ? kGoalBonus : 0.0);
        return {next, observation(next), reward, false};
    }

    bool is_terminal(const State& s) const { return is_dead(s) || at_goal(s); }

    const EnvironmentDescriptor& descriptor() const { return descriptor_; }

    static bool is_dead(const State& s) {
        const double dx = s.x - kObstacleX;
        const double dy = s.y - kObstacleY;
        return std::sqrt(dx * dx + dy * dy) < kObstacleRadius;
    }

    static double goal_distance(const State& s) {
        const double dx = s.x - kGoalX;
        const double dy = s.y - kGoalY;
        return std::sqrt(dx * dx + dy * dy);
    }

    static bool at_goal(const State& s) { return goal_distance(s) <= kGoalRadius; }

    static std::vector<double> observation(const State& s) { return {s.x, s.y}; }

private:
    EnvironmentDescriptor descriptor_;
};

}  // namespace fmc::envs
