// Benchmark harness CLI: seeded episode runs, agent comparisons, decision
// traces, and environment listings. Exit codes: 0 success, 2 config error,
// 3 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fmc/bench/config.hpp"
#include "fmc/bench/harness.hpp"

namespace bench = fmc::bench;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string env;
    std::string agent;
    int walkers = 0;
    double horizon = 0.0;
    std::int64_t max_samples = 0;
    int dt = 0;
    std::vector<std::uint64_t> seeds;
    int episodes = 0;
    std::uint64_t base_seed = 0;
    int max_steps = 0;
    std::string out;
    std::int64_t uct_budget = 0;
    int uct_rollout = 0;
    double uct_c = -1.0;
    int oracle_horizon = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file; flags override its fields");
    cmd->add_option("--env", f.env, "Environment name or bridge endpoint (tcp:HOST:PORT, exec:CMD...)");
    cmd->add_option("--agent", f.agent, "Agent: fmc | uct | random | oracle");
    cmd->add_option("--walkers", f.walkers, "FMC: number of walkers");
    cmd->add_option("--horizon", f.horizon, "FMC: time horizon");
    cmd->add_option("--max-samples", f.max_samples, "FMC: sample budget per planning call");
    cmd->add_option("--dt", f.dt, "FMC: environment steps per decision (repeat actions)");
    cmd->add_option("--seeds", f.seeds, "Explicit seed list")->delimiter(',');
    cmd->add_option("--episodes", f.episodes, "Number of episodes");
    cmd->add_option("--base-seed", f.base_seed, "First seed when --seeds is not given");
    cmd->add_option("--max-steps", f.max_steps, "Decision limit per episode");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--uct-budget", f.uct_budget, "UCT: sample budget per planning call");
    cmd->add_option("--uct-rollout", f.uct_rollout, "UCT: rollout horizon");
    cmd->add_option("--uct-c", f.uct_c, "UCT: exploration constant");
    cmd->add_option("--oracle-horizon", f.oracle_horizon, "Oracle agent: enumeration horizon");
}

bench::RunConfig load_config(const CLI::App* cmd, const CommonFlags& f) {
    bench::RunConfig config;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw fmc::ConfigError("cannot open config file '" + f.config_path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw fmc::ConfigError("bad config file '" + f.config_path + "': " + e.what());
        }
        config = j.get<bench::RunConfig>();
    }
    const auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--env")) config.environment = f.env;
    if (passed("--agent")) config.agent = bench::agent_from_string(f.agent);
    if (passed("--walkers")) config.fmc.n_walkers = f.walkers;
    if (passed("--horizon")) config.fmc.time_horizon = f.horizon;
    if (passed("--max-samples")) config.fmc.max_samples = f.max_samples;
    if (passed("--dt")) config.fmc.dt = f.dt;
    if (passed("--seeds")) {
        config.seeds = f.seeds;
        if (!passed("--episodes") && config.episodes != static_cast<int>(f.seeds.size())) {
            config.episodes = static_cast<int>(f.seeds.size());
        }
    }
    if (passed("--episodes")) config.episodes = f.episodes;
    if (passed("--base-seed")) config.base_seed = f.base_seed;
    if (passed("--max-steps")) config.max_steps = f.max_steps;
    if (passed("--out")) config.out_dir = f.out;
    if (passed("--uct-budget")) config.uct.budget_samples = f.uct_budget;
    if (passed("--uct-rollout")) config.uct.rollout_horizon = f.uct_rollout;
    if (passed("--uct-c")) config.uct.exploration_c = f.uct_c;
    if (passed("--oracle-horizon")) config.oracle_horizon = f.oracle_horizon;
    return config;
}

std::filesystem::path ensure_out_dir(const bench::RunConfig& config) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

int run_command(const CLI::App* cmd, const CommonFlags& flags) {
    const auto config = load_config(cmd, flags);
    const auto rows = bench::run(config);
    const auto dir = ensure_out_dir(config);
    bench::write_file((dir / "results.csv").string(),
                      [&](std::ostream& out) { bench::write_results_csv(out, rows); });
    bench::write_file((dir / "results.json").string(),
                      [&](std::ostream& out) { bench::write_results_json(out, rows); });
    const auto summary = bench::summarize(rows);
    std::cout << summary.agent << " on " << summary.environment << ": " << summary.episodes
              << " episodes, mean score " << summary.mean_score << ", mean samples/step "
              << summary.mean_samples_per_step << "\n"
              << "wrote " << (dir / "results.csv").string() << " and " << (dir / "results.json").string()
              << "\n";
    return 0;
}

int trace_command(const CLI::App* cmd, const CommonFlags& flags) {
    const auto config = load_config(cmd, flags);
    bench::TraceRecorder recorder;
    const auto rows = bench::run(config, &recorder);
    const auto dir = ensure_out_dir(config);
    bench::write_file((dir / "trace.jsonl").string(),
                      [&](std::ostream& out) { bench::emit_trace(out, recorder); });
    std::cout << "traced " << rows.size() << " episode(s) to " << (dir / "trace.jsonl").string() << "\n";
    return 0;
}

int compare_command(const CLI::App* cmd, const CommonFlags& flags, const std::string& config_a_path,
                    const std::string& config_b_path, const std::string& agent_a,
                    const std::string& agent_b) {
    CommonFlags flags_a = flags;
    flags_a.config_path = config_a_path;
    CommonFlags flags_b = flags;
    flags_b.config_path = config_b_path;
    auto config_a = load_config(cmd, flags_a);
    auto config_b = load_config(cmd, flags_b);
    if (cmd->count("--agent-a") > 0 || config_a_path.empty()) {
        config_a.agent = bench::agent_from_string(agent_a);
    }
    if (cmd->count("--agent-b") > 0 || config_b_path.empty()) {
        config_b.agent = bench::agent_from_string(agent_b);
    }

    const auto comparison = bench::compare(config_a, config_b);
    const auto dir = ensure_out_dir(config_a);
    bench::write_file((dir / "comparison.csv").string(),
                      [&](std::ostream& out) { bench::write_comparison_csv(out, comparison); });
    bench::write_comparison_table(std::cout, comparison);
    std::cout << "wrote " << (dir / "comparison.csv").string() << "\n";
    return 0;
}

int list_envs_command() {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& name : bench::list_environments()) {
        bench::with_environment(name, [&](const auto& env) {
            out.push_back(env.descriptor());
            return 0;
        });
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Swarm-planner benchmark harness"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run_cmd = app.add_subcommand("run", "Run seeded episodes and write results.csv/results.json");
    add_common_flags(run_cmd, run_flags);

    CommonFlags compare_flags;
    std::string config_a_path;
    std::string config_b_path;
    std::string agent_a = "uct";
    std::string agent_b = "fmc";
    auto* compare_cmd =
        app.add_subcommand("compare", "Run two agents on the same seeds and write a comparison table");
    add_common_flags(compare_cmd, compare_flags);
    compare_cmd->add_option("--config-a", config_a_path, "Config file for the baseline agent");
    compare_cmd->add_option("--config-b", config_b_path, "Config file for the subject agent");
    compare_cmd->add_option("--agent-a", agent_a, "Baseline agent")->capture_default_str();
    compare_cmd->add_option("--agent-b", agent_b, "Subject agent")->capture_default_str();

    CommonFlags trace_flags;
    auto* trace_cmd = app.add_subcommand("trace", "Run episodes and write the decision trace (trace.jsonl)");
    add_common_flags(trace_cmd, trace_flags);

    auto* list_cmd = app.add_subcommand("list-envs", "Print the built-in environment descriptors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (run_cmd->parsed()) return run_command(run_cmd, run_flags);
        if (compare_cmd->parsed())
            return compare_command(compare_cmd, compare_flags, config_a_path, config_b_path, agent_a,
                                   agent_b);
        if (trace_cmd->parsed()) return trace_command(trace_cmd, trace_flags);
        if (list_cmd->parsed()) return list_envs_command();
    } catch (const fmc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
