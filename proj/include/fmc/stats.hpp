#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fmc/error.hpp"

namespace fmc {

// A finite probability distribution. Weights are non-negative and sum to 1
// within 1e-9; both are checked at construction.
class Distribution {
public:
    explicit Distribution(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) {
            throw ContractViolation("Distribution: no weights");
        }
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0)) {
                throw ContractViolation("Distribution: negative weight " + std::to_string(w));
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ContractViolation("Distribution: weights sum to " + std::to_string(sum));
        }
    }

    static Distribution uniform(std::size_t n) {
        if (n == 0) {
            throw ContractViolation("Distribution::uniform: empty support");
        }
        return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }

private:
    std::vector<double> weights_;
};

namespace stats {

// Normalizes raw scores to strictly positive values:
//   1. standardize with the mean and the population standard deviation,
//   2. squash with exp(z) for z <= 0 and 1 + ln(1 + z) for z > 0.
// Both branches equal 1 at z = 0, so the map is continuous, and each branch
// is strictly increasing, so rank order (including ties) is preserved.
// A zero-deviation input (all values equal) standardizes to all zeros and
// maps to all ones.
inline std::vector<double> relativize(std::span<const double> values) {
    if (values.empty()) {
        throw ContractViolation("relativize: empty input");
    }
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double stddev = std::sqrt(var / n);

    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        const double z = stddev == 0.0 ? 0.0 : (v - mean) / stddev;
        out.push_back(z <= 0.0 ? std::exp(z) : 1.0 + std::log1p(z));
    }
    return out;
}

inline std::vector<double> relativize(const std::vector<double>& values) {
    return relativize(std::span<const double>(values));
}

// VR_i = R_i * D_i, elementwise over relativized rewards and distances.
inline std::vector<double> virtual_reward(std::span<const double> relativized_rewards,
                                          std::span<const double> relativized_distances) {
    if (relativized_rewards.size() != relativized_distances.size()) {
        throw ContractViolation("virtual_reward: length mismatch");
    }
    std::vector<double> out;
    out.reserve(relativized_rewards.size());
    for (std::size_t i = 0; i < relativized_rewards.size(); ++i) {
        out.push_back(relativized_rewards[i] * relativized_distances[i]);
    }
    return out;
}

inline std::vector<double> virtual_reward(const std::vector<double>& r, const std::vector<double>& d) {
    return virtual_reward(std::span<const double>(r), std::span<const double>(d));
}

// Converts non-negative rewards into the probability each one contributes to
// the slice total: weights_i = rewards_i / sum(rewards).
inline Distribution reward_density(std::span<const double> rewards) {
    if (rewards.empty()) {
        throw ContractViolation("reward_density: empty input");
    }
    double sum = 0.0;
    for (double r : rewards) {
        if (r < 0.0) {
            throw ContractViolation("reward_density: negative reward");
        }
        sum += r;
    }
    if (sum <= 0.0) {
        throw DegenerateSliceError("reward_density: all rewards are zero");
    }
    std::vector<double> weights;
    weights.reserve(rewards.size());
    for (double r : rewards) weights.push_back(r / sum);
    return Distribution(std::move(weights));
}

inline Distribution reward_density(const std::vector<double>& rewards) {
    return reward_density(std::span<const double>(rewards));
}

namespace detail {
// x^e with the convention 0^0 = 1.
inline double pow_conv(double x, double e) {
    if (e == 0.0) return 1.0;
    return std::pow(x, e);
}
}  // namespace detail

// ln( prod_i(2 - p_i^p_i) / prod_i(2 - q_i^p_i) ).
// Every factor lies in [1, 2] for weights in [0, 1], so the result is finite
// for all distribution pairs on the same support, including q_i = 0 with
// p_i > 0. Computed as a difference of log sums; identical p and q give
// exactly 0.
inline double entropic_divergence(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) {
        throw ContractViolation("entropic_divergence: support size mismatch");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        num += std::log(2.0 - detail::pow_conv(p[i], p[i]));
        den += std::log(2.0 - detail::pow_conv(q[i], p[i]));
    }
    return num - den;
}

}  // namespace stats
}  // namespace fmc
