#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fmc/rng.hpp"
#include "fmc/stats.hpp"

using fmc::Distribution;
using fmc::Rng;
namespace stats = fmc::stats;

TEST_CASE("relativize maps zero-deviation vectors to all ones") {
    CHECK(stats::relativize({2.0, 2.0, 2.0}) == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(stats::relativize({5.0}) == std::vector<double>{1.0});
}

TEST_CASE("relativize matches independently computed standardization") {
    // Frozen from a direct computation: population std of [0,1,2] is
    // sqrt(2/3), standardized values are -+sqrt(3/2) and 0.
    const auto out = stats::relativize({0.0, 1.0, 2.0});
    REQUIRE(out.size() == 3);
    CHECK_THAT(out[0], Catch::Matchers::WithinAbs(0.293832655878, 1e-9));
    CHECK_THAT(out[1], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(out[2], Catch::Matchers::WithinAbs(1.799642244501, 1e-9));
}

TEST_CASE("relativize rejects empty input") {
    CHECK_THROWS_AS(stats::relativize(std::vector<double>{}), fmc::ContractViolation);
}

TEST_CASE("relativize branch formulas agree at the branch point") {
    CHECK(std::exp(0.0) == 1.0);
    CHECK(1.0 + std::log1p(0.0) == 1.0);
    // The mean of a symmetric vector standardizes to exactly 0.
    const auto out = stats::relativize({-3.5, 0.0, 3.5});
    CHECK(out[1] == 1.0);
}

TEST_CASE("relativize preserves rank order and stays positive and finite") {
    Rng rng(20240501);
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(48);
        std::vector<double> values(n);
        for (auto& v : values) v = rng.uniform_real(-100.0, 100.0);
        if (trial % 7 == 0) {
            // exercise ties
            for (std::size_t i = 1; i < n; i += 2) values[i] = values[i - 1];
        }

        const auto out = stats::relativize(values);
        REQUIRE(out.size() == n);
        for (double o : out) {
            REQUIRE(o > 0.0);
            REQUIRE(std::isfinite(o));
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (values[i] < values[j]) {
                    REQUIRE(out[i] < out[j]);
                } else if (values[i] == values[j]) {
                    REQUIRE(out[i] == out[j]);
                }
            }
        }
    }
}

TEST_CASE("virtual_reward is the elementwise product") {
    CHECK(stats::virtual_reward({2.0}, {3.0}) == std::vector<double>{6.0});
    CHECK(stats::virtual_reward({1.0, 1.0}, {1.0, 1.0}) == std::vector<double>{1.0, 1.0});
    CHECK(stats::virtual_reward({0.5, 2.0}, {2.0, 0.5}) == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(stats::virtual_reward({1.0}, {1.0, 2.0}), fmc::ContractViolation);
}

TEST_CASE("reward_density normalizes proportionally") {
    CHECK(stats::reward_density({1.0, 1.0, 2.0}).weights() == std::vector<double>{0.25, 0.25, 0.5});
    CHECK(stats::reward_density({7.0}).weights() == std::vector<double>{1.0});
    CHECK(stats::reward_density({0.0, 3.0}).weights() == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(stats::reward_density({0.0, 0.0}), fmc::DegenerateSliceError);
    CHECK_THROWS_AS(stats::reward_density({-1.0, 2.0}), fmc::ContractViolation);
}

TEST_CASE("reward_density sums to one within 1e-9") {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(32);
        std::vector<double> rewards(n);
        for (auto& r : rewards) r = rng.uniform_real(0.0, 50.0);
        rewards[rng.uniform_index(n)] += 1.0;  // keep at least one positive
        const auto density = stats::reward_density(rewards);
        double sum = 0.0;
        for (double w : density.weights()) sum += w;
        REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("entropic_divergence of identical distributions is exactly zero") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(8);
        std::vector<double> raw(n);
        for (auto& r : raw) r = rng.uniform_real(0.0, 1.0);
        raw[rng.uniform_index(n)] += 0.1;
        const auto p = stats::reward_density(raw);
        REQUIRE(stats::entropic_divergence(p, p) == 0.0);
    }
    const Distribution half({0.5, 0.5});
    CHECK(stats::entropic_divergence(half, half) == 0.0);
}

TEST_CASE("entropic_divergence matches hand-computed values") {
    const Distribution p10({1.0, 0.0});
    const Distribution half({0.5, 0.5});
    // (2-1^1)(2-0^0) / ((2-0.5^1)(2-0.5^0)) = 1/1.5
    CHECK_THAT(stats::entropic_divergence(p10, half), Catch::Matchers::WithinAbs(-0.405465108108, 1e-9));
    // ln((2-sqrt(0.5))^2 / ((2-1)(2-0))) -- finite despite q_2 = 0
    CHECK_THAT(stats::entropic_divergence(half, p10), Catch::Matchers::WithinAbs(-0.179382155916, 1e-9));
}

TEST_CASE("entropic_divergence is finite on the full small-support grid") {
    for (int a = 0; a <= 10; ++a) {
        for (int b = 0; b <= 10; ++b) {
            const Distribution p({a / 10.0, 1.0 - a / 10.0});
            const Distribution q({b / 10.0, 1.0 - b / 10.0});
            const double d = stats::entropic_divergence(p, q);
            REQUIRE(std::isfinite(d));
        }
    }
}

TEST_CASE("entropic_divergence rejects mismatched supports") {
    CHECK_THROWS_AS(stats::entropic_divergence(Distribution({1.0}), Distribution({0.5, 0.5})),
                    fmc::ContractViolation);
}

TEST_CASE("Distribution validates its invariants") {
    CHECK_THROWS_AS(Distribution({0.5, 0.6}), fmc::ContractViolation);
    CHECK_THROWS_AS(Distribution({1.5, -0.5}), fmc::ContractViolation);
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), fmc::ContractViolation);
    const auto u = Distribution::uniform(4);
    CHECK(u.weights() == std::vector<double>(4, 0.25));
}
