#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fmc/env.hpp"
#include "fmc/error.hpp"

namespace fmc {

// Ground truth for one root action: the best undiscounted return over all
// action sequences up to the horizon that start with it, and whether any of
// those sequences reaches the full horizon alive.
struct ActionValue {
    double optimal_return = 0.0;
    bool reachable_alive = false;
};

struct ActionValueTable {
    std::vector<ActionValue> entries;     // one per discrete action index
    std::int64_t nodes_expanded = 0;      // env.step calls made
};

namespace detail {

template <Environment E>
struct ExhaustiveSearch {
    const E& env;
    const ActionSpace& space;
    std::int64_t nodes = 0;

    struct Sub {
        double best = -std::numeric_limits<double>::infinity();
        bool alive_reach = false;
    };

    Sub dfs(const typename E::State& state, int remaining) {
        if (remaining == 0) return {0.0, true};
        Sub result;
        for (std::size_t a = 0; a < space.num_actions(); ++a) {
            auto outcome = env.step(state, space.action(static_cast<int>(a)));
            ++nodes;
            if (outcome.dead) {
                result.best = std::max(result.best, outcome.reward);
            } else {
                const Sub sub = dfs(outcome.state, remaining - 1);
                result.best = std::max(result.best, outcome.reward + sub.best);
                result.alive_reach = result.alive_reach || sub.alive_reach;
            }
        }
        return result;
    }
};

}  // namespace detail

// Depth-first enumeration of every action sequence up to `horizon`
// environment steps. Dead states prune their subtree. Horizon 0 returns a
// zero table (no enumeration, every action trivially alive-reachable).
// Refuses instances with |A|^horizon > 10^7.
template <Environment E>
ActionValueTable exhaustive_values(const E& env, const typename E::State& root_state, int horizon) {
    const ActionSpace& space = env.descriptor().action_space;
    if (!space.is_discrete()) {
        throw UnsupportedSpaceError("exhaustive_values: discrete action spaces only");
    }
    if (horizon < 0) {
        throw ContractViolation("exhaustive_values: negative horizon");
    }
    if (std::pow(static_cast<double>(space.num_actions()), static_cast<double>(horizon)) > 1e7) {
        throw SizeLimitError("exhaustive_values: |A|^horizon exceeds 10^7");
    }

    ActionValueTable table;
    table.entries.resize(space.num_actions());
    if (horizon == 0) {
        for (auto& e : table.entries) e = {0.0, true};
        return table;
    }

    detail::ExhaustiveSearch<E> search{env, space};
    for (std::size_t a = 0; a < space.num_actions(); ++a) {
        auto outcome = env.step(root_state, space.action(static_cast<int>(a)));
        ++search.nodes;
        if (outcome.dead) {
            table.entries[a] = {outcome.reward, false};
        } else {
            const auto sub = search.dfs(outcome.state, horizon - 1);
            table.entries[a] = {outcome.reward + sub.best, sub.alive_reach};
        }
    }
    table.nodes_expanded = search.nodes;
    return table;
}

// Argmax of optimal_return; on return ties prefers actions that can stay
// alive, then the lowest index.
inline int oracle_best_action(const ActionValueTable& table) {
    if (table.entries.empty()) {
        throw ContractViolation("oracle_best_action: empty table");
    }
    std::size_t best = 0;
    for (std::size_t a = 1; a < table.entries.size(); ++a) {
        const auto& cand = table.entries[a];
        const auto& cur = table.entries[best];
        if (cand.optimal_return > cur.optimal_return ||
            (cand.optimal_return == cur.optimal_return && cand.reachable_alive && !cur.reachable_alive)) {
            best = a;
        }
    }
    return static_cast<int>(best);
}

}  // namespace fmc
