#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fmc/error.hpp"
#include "fmc/rng.hpp"

namespace fmc {

// One action. For a discrete space `index` identifies the action and `value`
// carries its numeric embedding; for a continuous space `index` is -1 and
// `value` is the control vector.
struct Action {
    int index = -1;
    std::vector<double> value;

    bool operator==(const Action& other) const = default;
};

enum class SpaceKind { discrete, continuous };

class ActionSpace {
public:
    // Discrete space with explicit per-action numeric embeddings.
    static ActionSpace discrete(std::vector<std::vector<double>> embeddings) {
        if (embeddings.empty()) {
            throw ContractViolation("ActionSpace: discrete space needs at least one action");
        }
        const std::size_t dim = embeddings.front().size();
        if (dim == 0) {
            throw ContractViolation("ActionSpace: empty embedding");
        }
        for (const auto& e : embeddings) {
            if (e.size() != dim) {
                throw ContractViolation("ActionSpace: embeddings must share one dimension");
            }
        }
        ActionSpace s;
        s.kind_ = SpaceKind::discrete;
        s.embeddings_ = std::move(embeddings);
        return s;
    }

    // Discrete space with one-hot embeddings (the default encoding).
    static ActionSpace discrete(std::size_t n_actions) {
        std::vector<std::vector<double>> embeddings(n_actions);
        for (std::size_t i = 0; i < n_actions; ++i) {
            embeddings[i].assign(n_actions, 0.0);
            embeddings[i][i] = 1.0;
        }
        return discrete(std::move(embeddings));
    }

    // Continuous box with per-dimension bounds, low_i < high_i.
    static ActionSpace continuous(std::vector<double> low, std::vector<double> high) {
        if (low.empty() || low.size() != high.size()) {
            throw ContractViolation("ActionSpace: bad box bounds");
        }
        for (std::size_t i = 0; i < low.size(); ++i) {
            if (!(low[i] < high[i])) {
                throw ContractViolation("ActionSpace: low must be < high in every dimension");
            }
        }
        ActionSpace s;
        s.kind_ = SpaceKind::continuous;
        s.low_ = std::move(low);
        s.high_ = std::move(high);
        return s;
    }

    SpaceKind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == SpaceKind::discrete; }

    std::size_t num_actions() const {
        if (!is_discrete()) {
            throw UnsupportedSpaceError("ActionSpace: num_actions on a continuous space");
        }
        return embeddings_.size();
    }

    std::size_t dimension() const {
        return is_discrete() ? embeddings_.front().size() : low_.size();
    }

    const std::vector<std::vector<double>>& embeddings() const { return embeddings_; }
    const std::vector<double>& low() const { return low_; }
    const std::vector<double>& high() const { return high_; }

    Action action(int index) const {
        if (!is_discrete() || index < 0 || static_cast<std::size_t>(index) >= embeddings_.size()) {
            throw ContractViolation("ActionSpace: bad action index");
        }
        return Action{index, embeddings_[static_cast<std::size_t>(index)]};
    }

    bool contains(const Action& a) const {
        if (is_discrete()) {
            return a.index >= 0 && static_cast<std::size_t>(a.index) < embeddings_.size();
        }
        if (a.value.size() != low_.size()) return false;
        for (std::size_t i = 0; i < low_.size(); ++i) {
            if (a.value[i] < low_[i] || a.value[i] > high_[i]) return false;
        }
        return true;
    }

    // Uniform random action: uniform over indices or uniform in the box.
    Action sample(Rng& rng) const {
        if (is_discrete()) {
            return action(static_cast<int>(rng.uniform_index(embeddings_.size())));
        }
        Action a;
        a.value.reserve(low_.size());
        for (std::size_t i = 0; i < low_.size(); ++i) {
            a.value.push_back(rng.uniform_real(low_[i], high_[i]));
        }
        return a;
    }

    bool operator==(const ActionSpace& other) const = default;

private:
    ActionSpace() = default;

    SpaceKind kind_ = SpaceKind::discrete;
    std::vector<std::vector<double>> embeddings_;  // discrete only
    std::vector<double> low_;                      // continuous only
    std::vector<double> high_;
};

inline void to_json(nlohmann::json& j, const Action& a) {
    if (a.index >= 0) {
        j = nlohmann::json{{"index", a.index}};
    } else {
        j = nlohmann::json{{"values", a.value}};
    }
}

inline void from_json(const nlohmann::json& j, Action& a) {
    a = Action{};
    if (j.contains("index")) {
        a.index = j.at("index").get<int>();
    } else {
        a.value = j.at("values").get<std::vector<double>>();
    }
}

inline void to_json(nlohmann::json& j, const ActionSpace& s) {
    if (s.is_discrete()) {
        j = nlohmann::json{{"kind", "discrete"}, {"actions", s.embeddings()}};
    } else {
        j = nlohmann::json{{"kind", "continuous"}, {"low", s.low()}, {"high", s.high()}};
    }
}

inline void from_json(const nlohmann::json& j, ActionSpace& s) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
        s = ActionSpace::discrete(j.at("actions").get<std::vector<std::vector<double>>>());
    } else if (kind == "continuous") {
        s = ActionSpace::continuous(j.at("low").get<std::vector<double>>(),
                                    j.at("high").get<std::vector<double>>());
    } else {
        throw ContractViolation("ActionSpace: unknown kind '" + kind + "'");
    }
}

}  // namespace fmc
