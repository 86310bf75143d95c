#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fmc/bench/config.hpp"
#include "fmc/bridge/client.hpp"
#include "fmc/engine.hpp"
#include "fmc/envs/chain_trap.hpp"
#include "fmc/envs/point_navigator.hpp"
#include "fmc/envs/trap_gridworld.hpp"
#include "fmc/error.hpp"
#include "fmc/oracle.hpp"
#include "fmc/stats.hpp"
#include "fmc/uct.hpp"

namespace fmc::bench {

struct ResultRow {
    std::string agent;
    std::string environment;
    std::uint64_t seed = 0;
    double total_score = 0.0;
    int steps = 0;
    double samples_per_step = 0.0;
    double wall_time_ms = 0.0;
};

inline void to_json(nlohmann::json& j, const ResultRow& r) {
    j = nlohmann::json{{"agent", r.agent},
                       {"environment", r.environment},
                       {"seed", r.seed},
                       {"total_score", r.total_score},
                       {"steps", r.steps},
                       {"samples_per_step", r.samples_per_step},
                       {"wall_time_ms", r.wall_time_ms}};
}

// Table 3 arithmetic: baseline samples per step / subject samples per step.
inline double efficiency(double baseline_samples_per_step, double fmc_samples_per_step) {
    if (!(baseline_samples_per_step > 0.0) || !(fmc_samples_per_step > 0.0)) {
        throw ContractViolation("efficiency: inputs must be > 0");
    }
    return baseline_samples_per_step / fmc_samples_per_step;
}

// The "x N" form the comparison table prints.
inline long long efficiency_multiple(double ratio) { return std::llround(ratio); }

inline std::vector<std::string> list_environments() {
    return {"chain_trap", "trap_gridworld", "point_navigator"};
}

// Resolves an environment spec - a built-in name, "tcp:HOST:PORT", or
// "exec:CMD ARGS..." - and invokes fn with the concrete environment.
template <typename F>
auto with_environment(const std::string& spec, F&& fn) {
    if (spec == "chain_trap") return fn(envs::ChainTrap{});
    if (spec == "trap_gridworld") return fn(envs::TrapGridworld{});
    if (spec == "point_navigator") return fn(envs::PointNavigator{});
    if (spec.rfind("tcp:", 0) == 0) {
        const auto rest = spec.substr(4);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos) {
            throw ConfigError("bridge endpoint must be tcp:HOST:PORT, got '" + spec + "'");
        }
        auto session =
            bridge::bridge_connect(bridge::connect_tcp(rest.substr(0, colon), rest.substr(colon + 1)));
        return fn(bridge::RemoteEnvironment{std::move(session)});
    }
    if (spec.rfind("exec:", 0) == 0) {
        std::vector<std::string> argv;
        std::istringstream words(spec.substr(5));
        for (std::string w; words >> w;) argv.push_back(w);
        auto session = bridge::bridge_connect(std::make_unique<bridge::ProcessTransport>(argv));
        return fn(bridge::RemoteEnvironment{std::move(session)});
    }
    throw ConfigError("unknown environment '" + spec + "'");
}

// Collects the per-iteration / per-decision / summary objects of the trace
// stream (see docs/trace_format.md).
class TraceRecorder {
public:
    TraceSink iteration_sink() {
        return [this](const IterationTrace& t) {
            records_.push_back(nlohmann::json{{"type", "iteration"},
                                              {"iteration", t.iteration},
                                              {"samples_used", t.samples_used},
                                              {"alive", t.alive},
                                              {"depths", t.depths},
                                              {"virtual_rewards", t.virtual_rewards}});
        };
    }

    void record_decision(int decision_index, const Action& action, const Distribution& utilities,
                         const std::vector<int>& walker_counts, std::int64_t samples_used) {
        const double divergence =
            stats::entropic_divergence(utilities, Distribution::uniform(utilities.size()));
        records_.push_back(nlohmann::json{{"type", "decision"},
                                          {"decision_index", decision_index},
                                          {"action", action},
                                          {"utilities", utilities.weights()},
                                          {"walker_counts", walker_counts},
                                          {"samples_used", samples_used},
                                          {"divergence_vs_uniform", divergence}});
    }

    void record_summary(const ResultRow& row, int decisions, std::int64_t total_samples) {
        records_.push_back(nlohmann::json{{"type", "summary"},
                                          {"agent", row.agent},
                                          {"environment", row.environment},
                                          {"seed", row.seed},
                                          {"decisions", decisions},
                                          {"total_samples", total_samples},
                                          {"total_score", row.total_score},
                                          {"steps", row.steps}});
    }

    const std::vector<nlohmann::json>& records() const { return records_; }
    bool empty() const { return records_.empty(); }

private:
    std::vector<nlohmann::json> records_;
};

namespace detail {

// Episode loop shared by the single-step agents (uct / random / oracle).
// `policy(state, observation, decision_index)` returns the action and how
// many environment samples planning it consumed.
template <Environment E, typename Policy>
EpisodeResult run_policy_episode(const E& env, int max_steps, std::uint64_t seed, Policy&& policy) {
    auto start = env.reset(seed);
    auto state = start.state;
    auto observation = start.observation;
    const int env_step_limit = env.descriptor().max_episode_steps;

    EpisodeResult result;
    bool done = env.is_terminal(state);
    while (!done && result.decisions < max_steps && result.steps < env_step_limit) {
        auto [action, samples] = policy(state, observation, result.decisions);
        ++result.decisions;
        result.total_samples += samples;
        auto outcome = env.step(state, action);
        result.trajectory.push_back({observation, action, outcome.reward});
        result.total_score += outcome.reward;
        ++result.steps;
        state = std::move(outcome.state);
        observation = std::move(outcome.observation);
        done = outcome.dead || env.is_terminal(state);
    }
    result.samples_per_step =
        result.decisions > 0 ? static_cast<double>(result.total_samples) / result.decisions : 0.0;
    return result;
}

template <Environment E>
EpisodeResult run_agent_episode(const E& env, const RunConfig& config, std::uint64_t seed,
                                TraceRecorder* recorder) {
    switch (config.agent) {
        case AgentKind::fmc: {
            TraceSink sink = recorder ? recorder->iteration_sink() : TraceSink{};
            DecisionSink decision_sink;
            if (recorder) {
                decision_sink = [recorder](int k, const Decision& d) {
                    recorder->record_decision(k, d.action, d.utilities, d.walker_counts, d.samples_used);
                };
            }
            return run_episode(env, config.fmc, config.max_steps, seed, sink, decision_sink);
        }
        case AgentKind::uct:
            return run_policy_episode(
                env, config.max_steps, seed,
                [&](const typename E::State& s, const std::vector<double>&, int k) {
                    UctParams p = config.uct;
                    p.seed = mix_seed(seed, static_cast<std::uint64_t>(k));
                    auto decision = uct_plan_step(env, s, p);
                    if (recorder) {
                        std::vector<double> visits(decision.root_visits.begin(), decision.root_visits.end());
                        double total = 0.0;
                        for (double v : visits) total += v;
                        const auto utilities = total > 0.0 ? stats::reward_density(visits)
                                                           : Distribution::uniform(visits.size());
                        recorder->record_decision(k, decision.action, utilities, decision.root_visits,
                                                  decision.samples_used);
                    }
                    return std::pair<Action, std::int64_t>{decision.action, decision.samples_used};
                });
        case AgentKind::random_agent: {
            auto rng = std::make_shared<Rng>(seed);
            const ActionSpace& space = env.descriptor().action_space;
            return run_policy_episode(env, config.max_steps, seed,
                                      [rng, &space](const typename E::State&, const std::vector<double>&,
                                                    int) {
                                          return std::pair<Action, std::int64_t>{space.sample(*rng), 0};
                                      });
        }
        case AgentKind::oracle:
            return run_policy_episode(
                env, config.max_steps, seed,
                [&](const typename E::State& s, const std::vector<double>&, int k) {
                    const auto table = exhaustive_values(env, s, config.oracle_horizon);
                    const int best = oracle_best_action(table);
                    if (recorder) {
                        std::vector<double> w;
                        for (const auto& e : table.entries) w.push_back(e.optimal_return);
                        recorder->record_decision(k, env.descriptor().action_space.action(best),
                                                  Distribution::uniform(table.entries.size()),
                                                  std::vector<int>(table.entries.size(), 0),
                                                  table.nodes_expanded);
                    }
                    return std::pair<Action, std::int64_t>{env.descriptor().action_space.action(best),
                                                           table.nodes_expanded};
                });
    }
    throw ConfigError("unknown agent");
}

}  // namespace detail

// Runs every seeded episode of the config and returns one row per episode.
// Unknown environments/agents and agent-space mismatches fail before any
// episode runs. Deterministic per seed except wall_time_ms.
inline std::vector<ResultRow> run(const RunConfig& config, TraceRecorder* recorder = nullptr) {
    const auto seeds = resolve_seeds(config);
    return with_environment(config.environment, [&](const auto& env) {
        if ((config.agent == AgentKind::uct || config.agent == AgentKind::oracle) &&
            !env.descriptor().action_space.is_discrete()) {
            throw ConfigError(to_string(config.agent) + " agent supports discrete action spaces only");
        }
        if (config.agent == AgentKind::fmc) validate(config.fmc);
        if (config.agent == AgentKind::uct) validate(config.uct);

        std::vector<ResultRow> rows;
        rows.reserve(seeds.size());
        for (const auto seed : seeds) {
            const auto t0 = std::chrono::steady_clock::now();
            const auto episode = detail::run_agent_episode(env, config, seed, recorder);
            const auto t1 = std::chrono::steady_clock::now();

            ResultRow row;
            row.agent = to_string(config.agent);
            row.environment = env.descriptor().name;
            row.seed = seed;
            row.total_score = episode.total_score;
            row.steps = episode.steps;
            row.samples_per_step = episode.samples_per_step;
            row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (recorder) {
                recorder->record_summary(row, episode.decisions, episode.total_samples);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

struct AgentSummary {
    std::string agent;
    std::string environment;
    int episodes = 0;
    double mean_score = 0.0;
    double mean_samples_per_step = 0.0;
};

struct Comparison {
    AgentSummary baseline;  // config_a
    AgentSummary subject;   // config_b
    double efficiency = 1.0;  // baseline samples per step / subject samples per step
    std::vector<ResultRow> baseline_rows;
    std::vector<ResultRow> subject_rows;
};

inline AgentSummary summarize(const std::vector<ResultRow>& rows) {
    AgentSummary s;
    if (rows.empty()) return s;
    s.agent = rows.front().agent;
    s.environment = rows.front().environment;
    s.episodes = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        s.mean_score += r.total_score;
        s.mean_samples_per_step += r.samples_per_step;
    }
    s.mean_score /= s.episodes;
    s.mean_samples_per_step /= s.episodes;
    return s;
}

// Runs both configs on the same environment and seeds and reports per-agent
// mean score, mean samples per step, and the efficiency ratio of the
// baseline (config_a) against the subject (config_b).
inline Comparison compare(const RunConfig& config_a, const RunConfig& config_b) {
    if (config_a.environment != config_b.environment) {
        throw ConfigError("compare: environments differ");
    }
    if (resolve_seeds(config_a) != resolve_seeds(config_b)) {
        throw ConfigError("compare: seed lists differ");
    }
    Comparison c;
    c.baseline_rows = run(config_a);
    c.subject_rows = run(config_b);
    c.baseline = summarize(c.baseline_rows);
    c.subject = summarize(c.subject_rows);
    c.efficiency = efficiency(c.baseline.mean_samples_per_step, c.subject.mean_samples_per_step);
    return c;
}

// --- output helpers ------------------------------------------------------

namespace detail {
// One textual form for numbers in CSV and JSON output, so the two files
// agree byte-for-byte on every field.
inline std::string number_text(double v) { return nlohmann::json(v).dump(); }
}  // namespace detail

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "agent,environment,seed,total_score,steps,samples_per_step,wall_time_ms\n";
    for (const auto& r : rows) {
        out << r.agent << ',' << r.environment << ',' << r.seed << ',' << detail::number_text(r.total_score)
            << ',' << r.steps << ',' << detail::number_text(r.samples_per_step) << ','
            << detail::number_text(r.wall_time_ms) << '\n';
    }
}

inline void write_results_json(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << nlohmann::json(rows).dump(2) << '\n';
}

inline void write_comparison_csv(std::ostream& out, const Comparison& c) {
    out << "agent,environment,episodes,mean_score,mean_samples_per_step,efficiency\n";
    out << c.baseline.agent << ',' << c.baseline.environment << ',' << c.baseline.episodes << ','
        << detail::number_text(c.baseline.mean_score) << ','
        << detail::number_text(c.baseline.mean_samples_per_step) << ",\n";
    out << c.subject.agent << ',' << c.subject.environment << ',' << c.subject.episodes << ','
        << detail::number_text(c.subject.mean_score) << ','
        << detail::number_text(c.subject.mean_samples_per_step) << ','
        << detail::number_text(c.efficiency) << '\n';
}

inline void write_comparison_table(std::ostream& out, const Comparison& c) {
    const auto line = [&](const AgentSummary& s, const std::string& eff) {
        out << std::left << std::setw(10) << s.agent << std::right << std::setw(14) << s.environment
            << std::setw(10) << s.episodes << std::setw(14) << s.mean_score << std::setw(20)
            << s.mean_samples_per_step << std::setw(12) << eff << '\n';
    };
    out << std::left << std::setw(10) << "agent" << std::right << std::setw(14) << "environment"
        << std::setw(10) << "episodes" << std::setw(14) << "mean_score" << std::setw(20)
        << "mean_samples/step" << std::setw(12) << "efficiency" << '\n';
    line(c.baseline, "-");
    line(c.subject, "x " + std::to_string(efficiency_multiple(c.efficiency)));
}

// Writes the trace stream: every recorded object, then a closing summary of
// the stream itself. An empty recorder yields the summary line only.
inline void emit_trace(std::ostream& out, const TraceRecorder& recorder) {
    std::int64_t iterations = 0;
    std::int64_t decisions = 0;
    for (const auto& record : recorder.records()) {
        const auto type = record.value("type", "");
        if (type == "iteration") ++iterations;
        if (type == "decision") ++decisions;
        out << record.dump() << '\n';
    }
    out << nlohmann::json{{"type", "stream_summary"},
                          {"records", recorder.records().size()},
                          {"iterations", iterations},
                          {"decisions", decisions}}
               .dump()
        << '\n';
}

inline void write_file(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open output file: " + path);
    }
    writer(out);
    if (!out) {
        throw Error("write failed: " + path);
    }
}

}  // namespace fmc::bench
