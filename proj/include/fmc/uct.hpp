#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fmc/env.hpp"
#include "fmc/error.hpp"
#include "fmc/rng.hpp"

namespace fmc {

// Standard UCT planner over the clonable-environment contract; the baseline
// the swarm planner is compared against. Discrete action spaces only.
struct UctParams {
    double exploration_c = 1.4142135623730951;  // sqrt(2)
    int rollout_horizon = 15;
    std::int64_t budget_samples = 300;
    std::uint64_t seed = 0;
};

inline void validate(const UctParams& p) {
    if (p.budget_samples < 1) throw ConfigError("UctParams: budget_samples must be >= 1");
    if (p.exploration_c < 0.0) throw ConfigError("UctParams: exploration_c must be >= 0");
    if (p.rollout_horizon < 1) throw ConfigError("UctParams: rollout_horizon must be >= 1");
}

struct UctDecision {
    Action action;
    std::int64_t samples_used = 0;
    std::vector<int> root_visits;  // per action index
    int iterations = 0;
};

// UCB1 tree policy: selection by argmax of mean value + c * sqrt(ln N / n),
// expansion of one untried action, uniform random rollout to
// rollout_horizon, backup of the undiscounted summed reward from the root
// (the same objective the swarm planner's cum_reward tracks). States are
// values, so selection replays cached states and every env.step call -
// expansion and rollout - counts as one sample. Dead states terminate
// rollouts; the reward stream simply stops. Returns the root child with the
// highest visit count, ties to the lowest action index.
template <Environment E>
UctDecision uct_plan_step(const E& env, const typename E::State& root_state, const UctParams& params) {
    validate(params);
    const ActionSpace& space = env.descriptor().action_space;
    if (!space.is_discrete()) {
        throw UnsupportedSpaceError("uct_plan_step: discrete action spaces only");
    }
    const std::size_t n_actions = space.num_actions();
    Rng rng(params.seed);

    struct Node {
        typename E::State state;
        int depth = 0;
        double reward_from_root = 0.0;
        bool dead = false;
        int visits = 0;
        double total_value = 0.0;
        std::vector<int> child;    // node index per action, -1 until expanded
        std::vector<int> untried;  // action indices not expanded yet
    };

    std::vector<Node> nodes;
    nodes.push_back({root_state, 0, 0.0, false, 0, 0.0, std::vector<int>(n_actions, -1), {}});
    for (std::size_t a = 0; a < n_actions; ++a) nodes[0].untried.push_back(static_cast<int>(a));

    std::int64_t samples = 0;
    int iterations = 0;
    std::vector<int> path;
    // Selection-only passes through an exhausted tree consume no samples, so
    // the iteration cap keeps degenerate instances from spinning forever.
    while (samples < params.budget_samples && iterations < params.budget_samples) {
        ++iterations;
        path.clear();
        int cur = 0;
        path.push_back(cur);

        // Selection.
        while (!nodes[cur].dead && nodes[cur].depth < params.rollout_horizon && nodes[cur].untried.empty()) {
            const double log_n = std::log(static_cast<double>(nodes[cur].visits));
            int best_action = -1;
            double best_score = 0.0;
            for (std::size_t a = 0; a < n_actions; ++a) {
                const int c = nodes[cur].child[a];
                const auto& child = nodes[static_cast<std::size_t>(c)];
                const double mean = child.total_value / child.visits;
                const double score = mean + params.exploration_c * std::sqrt(log_n / child.visits);
                if (best_action < 0 || score > best_score) {
                    best_action = static_cast<int>(a);
                    best_score = score;
                }
            }
            cur = nodes[cur].child[static_cast<std::size_t>(best_action)];
            path.push_back(cur);
        }

        double trajectory_return = nodes[cur].reward_from_root;

        // Expansion of one untried action.
        if (!nodes[cur].dead && nodes[cur].depth < params.rollout_horizon) {
            auto& untried = nodes[cur].untried;
            const std::size_t pick = rng.uniform_index(untried.size());
            const int action_index = untried[pick];
            untried.erase(untried.begin() + static_cast<std::ptrdiff_t>(pick));

            auto outcome = env.step(nodes[cur].state, space.action(action_index));
            ++samples;
            Node child;
            child.state = std::move(outcome.state);
            child.depth = nodes[cur].depth + 1;
            child.reward_from_root = nodes[cur].reward_from_root + outcome.reward;
            child.dead = outcome.dead;
            child.child.assign(n_actions, -1);
            if (!child.dead) {
                for (std::size_t a = 0; a < n_actions; ++a) child.untried.push_back(static_cast<int>(a));
            }
            const int child_index = static_cast<int>(nodes.size());
            nodes[static_cast<std::size_t>(cur)].child[static_cast<std::size_t>(action_index)] = child_index;
            nodes.push_back(std::move(child));
            cur = child_index;
            path.push_back(cur);

            // Uniform random rollout from the new leaf.
            auto state = nodes[static_cast<std::size_t>(cur)].state;
            int depth = nodes[static_cast<std::size_t>(cur)].depth;
            bool dead = nodes[static_cast<std::size_t>(cur)].dead;
            trajectory_return = nodes[static_cast<std::size_t>(cur)].reward_from_root;
            while (!dead && depth < params.rollout_horizon) {
                auto rollout = env.step(state, space.sample(rng));
                ++samples;
                trajectory_return += rollout.reward;
                state = std::move(rollout.state);
                dead = rollout.dead;
                ++depth;
            }
        }

        // Backup.
        for (int idx : path) {
            auto& node = nodes[static_cast<std::size_t>(idx)];
            node.visits += 1;
            node.total_value += trajectory_return;
        }
    }

    UctDecision decision;
    decision.samples_used = samples;
    decision.iterations = iterations;
    decision.root_visits.assign(n_actions, 0);
    int best_action = -1;
    int best_visits = -1;
    for (std::size_t a = 0; a < n_actions; ++a) {
        const int c = nodes[0].child[a];
        const int visits = c >= 0 ? nodes[static_cast<std::size_t>(c)].visits : 0;
        decision.root_visits[a] = visits;
        if (c >= 0 && visits > best_visits) {
            best_visits = visits;
            best_action = static_cast<int>(a);
        }
    }
    if (best_action < 0) {
        // No child was created; return a uniformly random action.
        decision.action = space.sample(rng);
        return decision;
    }
    decision.action = space.action(best_action);
    return decision;
}

}  // namespace fmc
