// Copyright 2026 The VarTODD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "vartodd/policy.hpp"

using namespace vartodd;
using nlohmann::json;

namespace {

// Value index for rho: the number of thresholds strictly above rho.
std::size_t bracket(const std::vector<std::size_t>& thresholds, std::size_t rho) {
  std::size_t k = 0;
  for (std::size_t t : thresholds) k += rho < t ? 1 : 0;
  return k;
}

FeatureVector features(std::initializer_list<double> xs) {
  FeatureVector f;
  std::size_t i = 0;
  for (double x : xs) f[i++] = x;
  return f;
}

}  // namespace

TEST_CASE("schedule brackets across every threshold boundary") {
  const std::vector<std::vector<std::size_t>> tables{{}, {10}, {30, 20, 10}, {5, 4, 3, 2, 1}, {100, 0}};
  for (const auto& th : tables) {
    std::vector<int> values;
    for (std::size_t i = 0; i <= th.size(); ++i) values.push_back(static_cast<int>(100 + i));
    const Schedule<int> s(th, values);
    for (std::size_t rho = 0; rho <= 110; ++rho) {
      CHECK(s(rho) == values[bracket(th, rho)]);
    }
    for (std::size_t t : th) {
      CHECK(s(t) == values[bracket(th, t)]);
      if (t > 0) CHECK(s(t - 1) == values[bracket(th, t - 1)]);
    }
  }
}

TEST_CASE("schedule rejects malformed thresholds") {
  CHECK_THROWS_AS(Schedule<int>({10, 10}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Schedule<int>({5, 10}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Schedule<int>({5}, {1}), std::invalid_argument);
  CHECK(Schedule<int>(7).is_constant());
}

TEST_CASE("softmax probabilities") {
  const std::vector<double> s{0.0, std::log(3.0)};
  const auto p = softmax_probabilities(s, 1.0);
  CHECK(p[0] == doctest::Approx(0.25));
  CHECK(p[1] == doctest::Approx(0.75));

  // Large scores do not overflow.
  const auto q = softmax_probabilities(std::vector<double>{1000.0, 1000.0}, 1e-3);
  CHECK(q[0] == doctest::Approx(0.5));

  const auto argmax = softmax_probabilities(std::vector<double>{1.0, 3.0, 3.0}, kTauFloor);
  CHECK(argmax == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("softmax sampling") {
  Rng rng(12);
  const std::vector<double> s{0.0, std::log(3.0)};
  std::size_t ones = 0;
  const std::size_t draws = 20000;
  for (std::size_t i : softmax_select(s, 1.0, draws, rng)) ones += i;
  CHECK(static_cast<double>(ones) / draws == doctest::Approx(0.75).epsilon(0.03));
  CHECK_THROWS_AS(softmax_select(std::vector<double>{}, 1.0, 1, rng), std::invalid_argument);
  for (std::size_t i : softmax_select(std::vector<double>{2.0, 5.0, 5.0}, kTauFloor, 50, rng)) CHECK(i == 1);
}

TEST_CASE("pool and final scores") {
  Policy pol = default_policy();
  pol.pool_weights = {1.0, 2.0, 0.0, 0.0, -1.0};
  pol.pool_centers = {0.5, 0.0, 0.0, 0.0, 0.25};
  pol.pool_exponent = 2.0;
  const FeatureVector f = features({0.25, 0.5, 0.9, 0.9, 0.75});
  CHECK(pool_score(f, pol, 10) == doctest::Approx(0.0625 + 2 * 0.25 - 0.25));

  pol.final_weights = {0.0, 0.0, 0.0, 0.0, 0.0, 3.0};
  pol.final_centers = {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  pol.final_exponent = 1.0;
  const FeatureVector g = features({0.1, 0.1, 0.1, 0.1, 0.1, 0.6});
  CHECK(final_score(g, pol, 10) == doctest::Approx(1.2));
}

TEST_CASE("scores follow the schedules") {
  Policy pol = default_policy();
  pol.pool_weights[0] = Schedule<double>({20}, {1.0, -1.0});
  const FeatureVector f = features({0.5, 0, 0, 0, 0});
  CHECK(pool_score(f, pol, 25) == doctest::Approx(0.5));
  CHECK(pool_score(f, pol, 19) == doctest::Approx(-0.5));
}

TEST_CASE("greedy presets rank by immediate reduction") {
  const std::vector<double> reductions{2, 1, 4, 3};
  const double m = 10;
  for (auto kind : {GreedyKind::kMax, GreedyKind::kMin}) {
    const Policy pol = greedy_preset(kind);
    std::vector<double> scores;
    for (double r : reductions) scores.push_back(final_score(features({r / m, 0, 0, 0, 0, 0}), pol, 10));
    Rng rng(1);
    const auto pick = softmax_select(scores, pol.temperature(10), 1, rng).front();
    CHECK(pick == (kind == GreedyKind::kMax ? 2U : 1U));
    CHECK(pol.min_reduction(10) == 1);
  }
}

TEST_CASE("json round trip and digest") {
  Policy pol = default_policy();
  pol.temperature = Schedule<double>({40, 20}, {0.5, 0.1, 0.01});
  pol.try_only_tohpe = true;
  pol.final_weights[5] = -0.5;
  const Policy back = policy_from_json(to_json(pol));
  CHECK(back == pol);
  CHECK(policy_digest(back) == policy_digest(pol));
  CHECK(policy_digest(pol) != policy_digest(default_policy()));
  CHECK(policy_digest(pol).size() == 16);
}

TEST_CASE("json overrides and rejects unknown keys") {
  const Policy p = policy_from_json(json::parse(R"({"num_samples": 5, "temperature": {"thresholds": [10], "values": [1.0, 0.1]}})"));
  CHECK(p.num_samples(100) == 5);
  CHECK(p.temperature(10) == 1.0);
  CHECK(p.temperature(9) == 0.1);
  CHECK(p.max_tohpe == default_policy().max_tohpe);
  CHECK_THROWS(policy_from_json(json::parse(R"({"no_such_control": 1})")));
  CHECK_THROWS(policy_from_json(json::parse(R"({"temperature": -1})")));
  CHECK_THROWS(policy_from_json(json::parse(R"({"min_reduction": 5, "max_reduction": 2})")));
  CHECK_THROWS(policy_from_json(json::parse(R"({"pool_weights": [1, 2]})")));
}

TEST_CASE("set_control by name") {
  Policy pol = default_policy();
  set_control(pol, "num_samples", 12.6);
  CHECK(pol.num_samples(1) == 13);
  set_control(pol, "try_only_tohpe", 0.7);
  CHECK(pol.try_only_tohpe(1));
  set_control(pol, "final_weights.5", Schedule<double>({30}, {0.0, 2.0}));
  CHECK(pol.final_weights[5](30) == 0.0);
  CHECK(pol.final_weights[5](29) == 2.0);
  set_control(pol, "min_reduction", -1.0);
  CHECK(pol.min_reduction(5) == -1);
  CHECK_THROWS_AS(set_control(pol, "bogus", 1.0), std::invalid_argument);
  for (const auto& name : policy_control_names()) CHECK_NOTHROW(set_control(pol, name, 1.0));
}
