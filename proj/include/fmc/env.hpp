#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmc/action_space.hpp"

namespace fmc {

// Result of one environment transition. `state` has value semantics: copying
// it is how walkers are cloned and how search trees save/restore positions.
// `dead == true` marks states inside the environment's excluded region.
template <typename StateT>
struct Step {
    StateT state;
    std::vector<double> observation;
    double reward = 0.0;
    bool dead = false;
};

struct EnvironmentDescriptor {
    std::string name;
    ActionSpace action_space = ActionSpace::discrete(1);
    int observation_dim = 1;
    int max_episode_steps = 1;
};

inline void to_json(nlohmann::json& j, const EnvironmentDescriptor& d) {
    j = nlohmann::json{{"name", d.name},
                       {"action_space", d.action_space},
                       {"observation_dim", d.observation_dim},
                       {"max_episode_steps", d.max_episode_steps}};
}

inline void from_json(const nlohmann::json& j, EnvironmentDescriptor& d) {
    j.at("name").get_to(d.name);
    j.at("action_space").get_to(d.action_space);
    j.at("observation_dim").get_to(d.observation_dim);
    j.at("max_episode_steps").get_to(d.max_episode_steps);
}

// The clonable-environment contract.
//
//   reset(seed)        -> Step with the root state and observation
//   step(state, a)     -> pure function of (state, action); stepping a dead
//                         state returns it unchanged with reward 0, dead=true
//   is_terminal(state) -> episode-over marker for runners (goal reached or
//                         dead); planners ignore it, terminal states simply
//                         absorb further steps with zero reward
//   descriptor()       -> static metadata
//
// step() must not mutate the environment object; any number of walkers may
// step distinct state values concurrently.
template <typename E>
concept Environment =
    std::copyable<typename E::State> &&
    requires(const E& env, const typename E::State& s, const Action& a, std::uint64_t seed) {
        { env.reset(seed) } -> std::same_as<Step<typename E::State>>;
        { env.step(s, a) } -> std::same_as<Step<typename E::State>>;
        { env.is_terminal(s) } -> std::same_as<bool>;
        { env.descriptor() } -> std::convertible_to<const EnvironmentDescriptor&>;
    };

}  // namespace fmc
