#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmc/engine.hpp"
#include "fmc/error.hpp"
#include "fmc/uct.hpp"

namespace fmc::bench {

enum class AgentKind { fmc, uct, random_agent, oracle };

inline std::string to_string(AgentKind a) {
    switch (a) {
        case AgentKind::fmc: return "fmc";
        case AgentKind::uct: return "uct";
        case AgentKind::random_agent: return "random";
        case AgentKind::oracle: return "oracle";
    }
    return "unknown";
}

inline AgentKind agent_from_string(const std::string& s) {
    if (s == "fmc") return AgentKind::fmc;
    if (s == "uct") return AgentKind::uct;
    if (s == "random") return AgentKind::random_agent;
    if (s == "oracle") return AgentKind::oracle;
    throw ConfigError("unknown agent '" + s + "'");
}

// One benchmark run: an agent, an environment (built-in name or bridge
// endpoint), and a seeded batch of episodes.
struct RunConfig {
    std::string environment = "chain_trap";
    AgentKind agent = AgentKind::fmc;
    FmcParams fmc;
    UctParams uct;
    int oracle_horizon = 6;
    int episodes = 1;
    std::vector<std::uint64_t> seeds;  // explicit; otherwise base_seed + index
    std::uint64_t base_seed = 0;
    int max_steps = 300;
    std::string out_dir = ".";
};

inline std::vector<std::uint64_t> resolve_seeds(const RunConfig& config) {
    if (config.episodes < 1) {
        throw ConfigError("config: episodes must be >= 1");
    }
    if (!config.seeds.empty()) {
        if (static_cast<int>(config.seeds.size()) != config.episodes) {
            throw ConfigError("config: episodes must equal the number of seeds");
        }
        return config.seeds;
    }
    std::vector<std::uint64_t> seeds;
    seeds.reserve(static_cast<std::size_t>(config.episodes));
    for (int i = 0; i < config.episodes; ++i) {
        seeds.push_back(config.base_seed + static_cast<std::uint64_t>(i));
    }
    return seeds;
}

inline void from_json(const nlohmann::json& j, RunConfig& config) {
    config = RunConfig{};
    config.environment = j.value("environment", config.environment);
    if (j.contains("agent")) config.agent = agent_from_string(j.at("agent").get<std::string>());
    config.episodes = j.value("episodes", config.episodes);
    if (j.contains("seeds")) config.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    config.base_seed = j.value("base_seed", config.base_seed);
    config.max_steps = j.value("max_steps", config.max_steps);
    config.out_dir = j.value("out", config.out_dir);
    if (j.contains("fmc")) {
        const auto& f = j.at("fmc");
        config.fmc.n_walkers = f.value("walkers", config.fmc.n_walkers);
        config.fmc.time_horizon = f.value("horizon", config.fmc.time_horizon);
        config.fmc.dt = f.value("dt", config.fmc.dt);
        config.fmc.max_samples = f.value("max_samples", config.fmc.max_samples);
    }
    if (j.contains("uct")) {
        const auto& u = j.at("uct");
        config.uct.exploration_c = u.value("exploration_c", config.uct.exploration_c);
        config.uct.rollout_horizon = u.value("rollout_horizon", config.uct.rollout_horizon);
        config.uct.budget_samples = u.value("budget_samples", config.uct.budget_samples);
    }
    config.oracle_horizon = j.value("oracle_horizon", config.oracle_horizon);
}

inline void to_json(nlohmann::json& j, const RunConfig& config) {
    j = nlohmann::json{
        {"environment", config.environment},
        {"agent", to_string(config.agent)},
        {"episodes", config.episodes},
        {"base_seed", config.base_seed},
        {"max_steps", config.max_steps},
        {"out", config.out_dir},
        {"fmc",
         {{"walkers", config.fmc.n_walkers},
          {"horizon", config.fmc.time_horizon},
          {"dt", config.fmc.dt},
          {"max_samples", config.fmc.max_samples}}},
        {"uct",
         {{"exploration_c", config.uct.exploration_c},
          {"rollout_horizon", config.uct.rollout_horizon},
          {"budget_samples", config.uct.budget_samples}}},
        {"oracle_horizon", config.oracle_horizon},
    };
    if (!config.seeds.empty()) j["seeds"] = config.seeds;
}

}  // namespace fmc::bench
