#pragma once

#include <cstdint>

#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc::envs {

// A line of positions 0..6. The walk starts at position 1, position 0 is the
// trap (dead) and position 6 pays 10 and ends the episode. Small enough for
// full brute-force enumeration at every horizon the tests use.
class ChainTrap {
public:
    struct State {
        int pos = kStart;
        bool operator==(const State&) const = default;
    };

    static constexpr int kTrap = 0;
    static constexpr int kStart = 1;
    static constexpr int kGoal = 6;
    static constexpr double kGoalReward = 10.0;
    static constexpr int kLeft = 0;
    static constexpr int kRight = 1;

    ChainTrap() {
        descriptor_.name = "chain_trap";
        descriptor_.action_space = ActionSpace::discrete(2);
        descriptor_.observation_dim = 1;
        descriptor_.max_episode_steps = 8;
    }

    Step<State> reset(std::uint64_t /*seed*/) const {
        const State s{kStart};
        return {s, observation(s), 0.0, false};
    }

    Step<State> step(const State& s, const Action& a) const {
        if (!descriptor_.action_space.contains(a)) {
            throw ContractViolation("ChainTrap: action out of space");
        }
        if (s.pos == kTrap) {
            return {s, observation(s), 0.0, true};
        }
        if (s.pos == kGoal) {
            return {s, observation(s), 0.0, false};
        }
        const State next{s.pos + (a.index == kRight ? 1 : -1)};
        if (next.pos == kTrap) {
            return {next, observation(next), 0.0, true};
        }
        const double reward = next.pos == kGoal ? kGoalReward : 0.0;
        return {next, observation(next), reward, false};
    }

    bool is_terminal(const State& s) const { return s.pos == kTrap || s.pos == kGoal; }

    const EnvironmentDescriptor& descriptor() const { return descriptor_; }

    static std::vector<double> observation(const State& s) {
        return {static_cast<double>(s.pos)};
    }

private:
    EnvironmentDescriptor descriptor_;
};

}  // namespace fmc::envs
