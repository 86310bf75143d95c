#pragma once

#include <algorithm>
#include <cstdint>

#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc::envs {

// 9x9 grid. Start (0,2), goal (8,6) worth 10. A rectangular band of dead
// cells (rows 3..5, cols 2..6) sits between them, so every route has to
// detour through the two-column corridors at either side of the board.
// Moves off the grid clamp in place; every non-goal step pays 0.
class TrapGridworld {
public:
    struct State {
        int row = kStartRow;
        int col = kStartCol;
        bool operator==(const State&) const = default;
    };

    static constexpr int kSize = 9;
    static constexpr int kStartRow = 0;
    static constexpr int kStartCol = 2;
    static constexpr int kGoalRow = 8;
    static constexpr int kGoalCol = 6;
    static constexpr double kGoalReward = 10.0;
    // Dead band, inclusive bounds.
    static constexpr int kTrapRowLo = 3;
    static constexpr int kTrapRowHi = 5;
    static constexpr int kTrapColLo = 2;
    static constexpr int kTrapColHi = 6;

    enum ActionId { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kStay = 4 };

    TrapGridworld() {
        descriptor_.name = "trap_gridworld";
        descriptor_.action_space = ActionSpace::discrete(5);
        descriptor_.observation_dim = 2;
        descriptor_.max_episode_steps = 300;
    }

    Step<State> reset(std::uint64_t /*seed*/) const {
        const State s{kStartRow, kStartCol};
        return {s, observation(s), 0.0, false};
    }

    Step<State> step(const State& s, const Action& a) const {
        if (!descriptor_.action_space.contains(a)) {
            throw ContractViolation("TrapGridworld: action out of space");
        }
        if (is_dead(s)) {
            return {s, observation(s), 0.0, true};
        }
        if (is_goal(s)) {
            return {s, observation(s), 0.0, false};
        }
        State next = s;
        switch (a.index) {
            case kUp: next.row -= 1; break;
            case kDown: next.row += 1; break;
            case kLeft: next.col -= 1; break;
            case kRight: next.col += 1; break;
            case kStay: break;
            default: break;
        }
        next.row = std::clamp(next.row, 0, kSize - 1);
        next.col = std::clamp(next.col, 0, kSize - 1);
        if (is_dead(next)) {
            return {next, observation(next), 0.0, true};
        }
        const double reward = is_goal(next) ? kGoalReward : 0.0;
        return {next, observation(next), reward, false};
    }

    bool is_terminal(const State& s) const { return is_dead(s) || is_goal(s); }

    const EnvironmentDescriptor& descriptor() const { return descriptor_; }

    static bool is_dead(const State& s) {
        return s.row >= kTrapRowLo && s.row <= kTrapRowHi && s.col >= kTrapColLo && s.col <= kTrapColHi;
    }

    static bool is_goal(const State& s) { return s.row == kGoalRow && s.col == kGoalCol; }

    static std::vector<double> observation(const State& s) {
        return {static_cast<double>(s.row), static_cast<double>(s.col)};
    }

private:
    EnvironmentDescriptor descriptor_;
};

}  // namespace fmc::envs
