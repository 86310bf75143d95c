#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fmc/env.hpp"
#include "fmc/error.hpp"
#include "fmc/rng.hpp"
#include "fmc/stats.hpp"

namespace fmc {

// Planner parameters.
//   time_horizon : how far ahead (in environment time) walkers project
//   dt           : environment steps each decision is held for ("repeat
//                  actions"); walkers advance dt steps per sweep
//   max_samples  : budget of env.step calls per planning call
struct FmcParams {
    int n_walkers = 30;
    double time_horizon = 15.0;
    int dt = 1;
    std::int64_t max_samples = 300;
    std::uint64_t seed = 0;
};

inline void validate(const FmcParams& p) {
    if (p.n_walkers < 1) throw ConfigError("FmcParams: n_walkers must be >= 1");
    if (p.dt < 1) throw ConfigError("FmcParams: dt must be >= 1");
    if (!(p.time_horizon > 0.0)) throw ConfigError("FmcParams: time_horizon must be > 0");
    if (p.time_horizon / p.dt < 1.0) throw ConfigError("FmcParams: time_horizon / dt must be >= 1");
    if (p.max_samples < p.n_walkers) throw ConfigError("FmcParams: max_samples must be >= n_walkers");
}

// Walker depth limit in environment steps: ceil(time_horizon / dt) * dt.
inline int horizon_steps(const FmcParams& p) {
    return static_cast<int>(std::ceil(p.time_horizon / p.dt)) * p.dt;
}

// One leaf of the search tree.
template <typename StateT>
struct Walker {
    int id = 0;
    StateT state;
    std::vector<double> observation;
    double cum_reward = 0.0;
    bool alive = true;
    Action root_action;             // action taken from the root; meaningful
    bool has_root_action = false;   // only once the walker has acted
    int depth = 0;                  // environment steps since the root
};

// Fixed-size population of walkers plus the sample counter and RNG stream.
// Cloning moves walkers between leaves; it never grows or shrinks the swarm.
template <typename StateT>
struct Swarm {
    std::vector<Walker<StateT>> walkers;
    std::int64_t samples_used = 0;
    Rng rng{0};

    std::size_t size() const { return walkers.size(); }

    int alive_count() const {
        int n = 0;
        for (const auto& w : walkers) n += w.alive ? 1 : 0;
        return n;
    }
};

// The action chosen at the root, plus how the swarm voted.
// `walker_counts` has one entry per discrete action index, or one entry per
// distinct root action for continuous spaces; `utilities` is its
// normalization. Counts cover alive walkers, or all walkers when none are
// alive.
struct Decision {
    Action action;
    Distribution utilities{std::vector<double>{1.0}};
    std::int64_t samples_used = 0;
    std::vector<int> walker_counts;
};

// Swarm snapshot emitted once per engine iteration (after evaluate).
struct IterationTrace {
    int iteration = 0;
    std::int64_t samples_used = 0;
    int alive = 0;
    std::vector<int> depths;
    std::vector<double> virtual_rewards;
};

using TraceSink = std::function<void(const IterationTrace&)>;

namespace detail {

inline double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

}  // namespace detail

// All walkers placed on the root state, alive, at depth 0.
template <typename StateT>
Swarm<StateT> init_swarm(const StateT& root_state, const std::vector<double>& root_observation,
                         const FmcParams& params) {
    validate(params);
    Swarm<StateT> swarm;
    swarm.rng = Rng(params.seed);
    swarm.walkers.resize(static_cast<std::size_t>(params.n_walkers));
    for (int i = 0; i < params.n_walkers; ++i) {
        auto& w = swarm.walkers[static_cast<std::size_t>(i)];
        w.id = i;
        w.state = root_state;
        w.observation = root_observation;
    }
    return swarm;
}

// Perturb sweep: every alive walker below the horizon samples one uniform
// random action and holds it for dt environment steps, stopping early on
// death. Each env.step call counts as one sample. Actions are drawn from the
// swarm's RNG in walker-index order, so parallelizing the stepping must not
// reorder the draws.
template <Environment E>
void perturb(Swarm<typename E::State>& swarm, const E& env, const FmcParams& params) {
    const int max_depth = horizon_steps(params);
    const ActionSpace& space = env.descriptor().action_space;
    for (auto& w : swarm.walkers) {
        if (!w.alive || w.depth >= max_depth) continue;
        const Action action = space.sample(swarm.rng);
        if (!w.has_root_action && w.depth == 0) {
            w.root_action = action;
            w.has_root_action = true;
        }
        for (int k = 0; k < params.dt; ++k) {
            auto outcome = env.step(w.state, action);
            ++swarm.samples_used;
            w.state = std::move(outcome.state);
            w.observation = std::move(outcome.observation);
            w.cum_reward += outcome.reward;
            ++w.depth;
            if (outcome.dead) {
                w.alive = false;
                break;
            }
        }
    }
}

// Virtual reward of every walker: relativized cumulative reward times
// relativized distance to a random alive companion. Dead walkers contribute
// to the relativize statistics but end with VR = 0. Requires at least one
// alive walker.
template <typename StateT>
std::vector<double> evaluate(Swarm<StateT>& swarm) {
    const std::size_t n = swarm.size();
    std::vector<std::size_t> alive;
    std::vector<std::ptrdiff_t> alive_pos(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (swarm.walkers[i].alive) {
            alive_pos[i] = static_cast<std::ptrdiff_t>(alive.size());
            alive.push_back(i);
        }
    }
    if (alive.empty()) {
        throw ContractViolation("evaluate: all walkers are dead");
    }

    std::vector<double> rewards(n);
    std::vector<double> distances(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Companion: uniform over alive walkers, excluding self unless it is
        // the only alive walker. One draw per walker keeps the stream fixed.
        std::size_t companion;
        if (alive.size() == 1) {
            companion = alive.front();
        } else if (swarm.walkers[i].alive) {
            std::size_t k = swarm.rng.uniform_index(alive.size() - 1);
            if (k >= static_cast<std::size_t>(alive_pos[i])) ++k;
            companion = alive[k];
        } else {
            companion = alive[swarm.rng.uniform_index(alive.size())];
        }
        rewards[i] = swarm.walkers[i].cum_reward;
        distances[i] = detail::euclidean(swarm.walkers[i].observation, swarm.walkers[companion].observation);
    }

    auto vr = stats::virtual_reward(stats::relativize(rewards), stats::relativize(distances));
    for (std::size_t i = 0; i < n; ++i) {
        if (!swarm.walkers[i].alive) vr[i] = 0.0;
    }
    return vr;
}

// Probability that a walker transplants onto its drawn companion:
//   0                                        target dead
//   1                                        self dead, target alive
//   clamp((vr_target - vr_self) / max(vr_self, eps), 0, 1)  otherwise
inline double clone_probability(double vr_self, double vr_target, bool self_alive, bool target_alive) {
    if (!target_alive) return 0.0;
    if (!self_alive) return 1.0;
    constexpr double kEps = 1e-8;
    const double p = (vr_target - vr_self) / std::max(vr_self, kEps);
    return std::clamp(p, 0.0, 1.0);
}

// Cloning sweep. Every walker draws one uniform companion and clones onto it
// with clone_probability. Decisions are made against a snapshot of the
// pre-recycle swarm and applied simultaneously, so the outcome does not
// depend on walker order.
template <typename StateT>
void recycle(Swarm<StateT>& swarm, const std::vector<double>& virtual_rewards) {
    const std::size_t n = swarm.size();
    if (virtual_rewards.size() != n) {
        throw ContractViolation("recycle: virtual reward vector length mismatch");
    }
    const std::vector<Walker<StateT>> snapshot = swarm.walkers;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = swarm.rng.uniform_index(n);
        const double u = swarm.rng.uniform01();
        const double p =
            clone_probability(virtual_rewards[i], virtual_rewards[c], snapshot[i].alive, snapshot[c].alive);
        if (u < p) {
            auto& w = swarm.walkers[i];
            w.state = snapshot[c].state;
            w.observation = snapshot[c].observation;
            w.cum_reward = snapshot[c].cum_reward;
            w.depth = snapshot[c].depth;
            w.root_action = snapshot[c].root_action;
            w.has_root_action = snapshot[c].has_root_action;
            w.alive = snapshot[c].alive;
        }
    }
}

// Root-action vote. Utilities are walker counts per root action over alive
// walkers (all walkers when none are alive), normalized. Continuous spaces
// return the utility-weighted mean of the root actions; discrete spaces
// return the action whose embedding is nearest (Euclidean) to the
// utility-weighted mean embedding, ties broken by lowest index.
template <typename StateT>
Decision choose(const Swarm<StateT>& swarm, const ActionSpace& space) {
    const bool any_alive = swarm.alive_count() > 0;
    std::vector<const Walker<StateT>*> counted;
    for (const auto& w : swarm.walkers) {
        if ((w.alive || !any_alive) && w.has_root_action) counted.push_back(&w);
    }
    if (counted.empty()) {
        throw ContractViolation("choose: no walker has acted");
    }

    Decision decision;
    decision.samples_used = swarm.samples_used;

    if (space.is_discrete()) {
        const std::size_t n_actions = space.num_actions();
        std::vector<int> counts(n_actions, 0);
        for (const auto* w : counted) {
            counts[static_cast<std::size_t>(w->root_action.index)] += 1;
        }
        std::vector<double> weights(counts.begin(), counts.end());
        decision.utilities = stats::reward_density(weights);
        decision.walker_counts = std::move(counts);

        const std::size_t dim = space.dimension();
        std::vector<double> mean(dim, 0.0);
        for (std::size_t a = 0; a < n_actions; ++a) {
            const auto& emb = space.embeddings()[a];
            for (std::size_t d = 0; d < dim; ++d) mean[d] += decision.utilities[a] * emb[d];
        }
        std::size_t best = 0;
        double best_sq = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < n_actions; ++a) {
            const auto& emb = space.embeddings()[a];
            double sq = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = emb[d] - mean[d];
                sq += diff * diff;
            }
            if (sq < best_sq) {
                best_sq = sq;
                best = a;
            }
        }
        decision.action = space.action(static_cast<int>(best));
        return decision;
    }

    // Continuous: group identical root actions (clones share them exactly).
    std::vector<Action> actions;
    std::vector<int> counts;
    for (const auto* w : counted) {
        auto it = std::find(actions.begin(), actions.end(), w->root_action);
        if (it == actions.end()) {
            actions.push_back(w->root_action);
            counts.push_back(1);
        } else {
            counts[static_cast<std::size_t>(it - actions.begin())] += 1;
        }
    }
    std::vector<double> weights(counts.begin(), counts.end());
    decision.utilities = stats::reward_density(weights);
    decision.walker_counts = std::move(counts);

    std::vector<double> mean(space.dimension(), 0.0);
    for (std::size_t g = 0; g < actions.size(); ++g) {
        for (std::size_t d = 0; d < mean.size(); ++d) {
            mean[d] += decision.utilities[g] * actions[g].value[d];
        }
    }
    decision.action = Action{-1, std::move(mean)};
    return decision;
}

// One full planning call: initialize the swarm, then iterate
// perturb -> evaluate -> recycle until the horizon is met, the sample budget
// is exhausted, or every walker is dead; finish with choose. max_samples is
// a hard upper bound: a sweep that could not complete within it is never
// started (sweeps are not interrupted mid-walker), so samples_used <=
// max_samples always. If no perturbation ever completed (dead root before
// any sweep), falls back to a uniformly random action with uniform
// utilities.
template <Environment E>
Decision plan_step(const E& env, const typename E::State& root_state,
                   const std::vector<double>& root_observation, const FmcParams& params,
                   const TraceSink& sink = {}) {
    auto swarm = init_swarm(root_state, root_observation, params);
    const int max_depth = horizon_steps(params);
    const ActionSpace& space = env.descriptor().action_space;

    int iteration = 0;
    for (;;) {
        if (swarm.alive_count() == 0) break;
        std::int64_t next_sweep_cost = 0;  // upper bound; deaths only shrink it
        for (const auto& w : swarm.walkers) {
            if (w.alive && w.depth < max_depth) next_sweep_cost += params.dt;
        }
        if (next_sweep_cost == 0) break;  // every alive walker is at the horizon
        if (swarm.samples_used + next_sweep_cost > params.max_samples) break;

        perturb(swarm, env, params);
        ++iteration;
        if (swarm.alive_count() == 0) break;

        const auto vr = evaluate(swarm);
        if (sink) {
            IterationTrace t;
            t.iteration = iteration;
            t.samples_used = swarm.samples_used;
            t.alive = swarm.alive_count();
            t.depths.reserve(swarm.size());
            for (const auto& w : swarm.walkers) t.depths.push_back(w.depth);
            t.virtual_rewards = vr;
            sink(t);
        }
        recycle(swarm, vr);
    }

    bool anyone_acted = false;
    for (const auto& w : swarm.walkers) anyone_acted = anyone_acted || w.has_root_action;
    if (!anyone_acted) {
        Decision decision;
        decision.action = space.sample(swarm.rng);
        decision.samples_used = swarm.samples_used;
        if (space.is_discrete()) {
            decision.utilities = Distribution::uniform(space.num_actions());
            decision.walker_counts.assign(space.num_actions(), 0);
        } else {
            decision.utilities = Distribution(std::vector<double>{1.0});
            decision.walker_counts = {0};
        }
        return decision;
    }
    return choose(swarm, space);
}

struct TrajectoryEntry {
    std::vector<double> observation;  // before the step
    Action action;
    double reward = 0.0;
};

struct EpisodeResult {
    double total_score = 0.0;
    int steps = 0;      // environment steps taken
    int decisions = 0;  // planning calls made
    std::int64_t total_samples = 0;
    double samples_per_step = 0.0;
    std::vector<TrajectoryEntry> trajectory;
};

using DecisionSink = std::function<void(int decision_index, const Decision&)>;

// Runs a full episode: plan from the current true state, hold the decision
// for dt environment steps, repeat. Stops on death, terminal state,
// max_steps decisions, or the environment's episode step limit. Per-decision
// planner seeds are derived from `seed`; params.seed is ignored here.
template <Environment E>
EpisodeResult run_episode(const E& env, const FmcParams& params, int max_steps, std::uint64_t seed,
                          const TraceSink& sink = {}, const DecisionSink& decision_sink = {}) {
    if (max_steps < 1) {
        throw ContractViolation("run_episode: max_steps must be >= 1");
    }
    validate(params);

    auto start = env.reset(seed);
    auto state = start.state;
    auto observation = start.observation;
    const int env_step_limit = env.descriptor().max_episode_steps;

    EpisodeResult result;
    bool done = env.is_terminal(state);
    while (!done && result.decisions < max_steps && result.steps < env_step_limit) {
        FmcParams step_params = params;
        step_params.seed = mix_seed(seed, static_cast<std::uint64_t>(result.decisions));
        const Decision decision = plan_step(env, state, observation, step_params, sink);
        if (decision_sink) decision_sink(result.decisions, decision);
        ++result.decisions;
        result.total_samples += decision.samples_used;

        for (int k = 0; k < params.dt; ++k) {
            auto outcome = env.step(state, decision.action);
            result.trajectory.push_back({observation, decision.action, outcome.reward});
            result.total_score += outcome.reward;
            ++result.steps;
            state = std::move(outcome.state);
            observation = std::move(outcome.observation);
            if (outcome.dead || env.is_terminal(state) || result.steps >= env_step_limit) {
                done = outcome.dead || env.is_terminal(state);
                break;
            }
        }
    }
    result.samples_per_step =
        result.decisions > 0 ? static_cast<double>(result.total_samples) / result.decisions : 0.0;
    return result;
}

}  // namespace fmc
