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

#include "vartodd/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <type_traits>

namespace vartodd {

using nlohmann::json;

namespace {

template <class T>
json value_to_json(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return json(static_cast<bool>(v));
  } else {
    return json(v);
  }
}

template <class T>
json schedule_to_json(const Schedule<T>& s) {
  if (s.is_constant()) return value_to_json<T>(s.values().front());
  json values = json::array();
  for (const T& v : s.values()) values.push_back(value_to_json<T>(v));
  return json{{"thresholds", s.thresholds()}, {"values", values}};
}

template <class T>
T value_from_json(const json& j, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) throw std::invalid_argument(key + ": expected a boolean");
    return j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::size_t>) {
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      throw std::invalid_argument(key + ": expected a non-negative integer");
    }
    return j.get<std::size_t>();
  } else if constexpr (std::is_same_v<T, long>) {
    if (!j.is_number_integer()) throw std::invalid_argument(key + ": expected an integer");
    return j.get<long>();
  } else {
    if (!j.is_number()) throw std::invalid_argument(key + ": expected a number");
    return j.get<double>();
  }
}

template <class T>
Schedule<T> schedule_from_json(const json& j, const std::string& key) {
  if (!j.is_object()) return Schedule<T>(value_from_json<T>(j, key));
  for (const auto& [k, _] : j.items()) {
    if (k != "thresholds" && k != "values") {
      throw std::invalid_argument(key + ": unknown schedule field '" + k + "'");
    }
  }
  if (!j.contains("thresholds") || !j.contains("values")) {
    throw std::invalid_argument(key + ": schedule needs 'thresholds' and 'values'");
  }
  std::vector<std::size_t> thresholds;
  for (const auto& t : j.at("thresholds")) {
    thresholds.push_back(value_from_json<std::size_t>(t, key + ".thresholds"));
  }
  std::vector<T> values;
  for (const auto& v : j.at("values")) values.push_back(value_from_json<T>(v, key));
  return Schedule<T>(std::move(thresholds), std::move(values));
}

template <class T>
Schedule<T> convert_schedule(const Schedule<double>& s) {
  std::vector<T> values;
  for (double v : s.values()) {
    if constexpr (std::is_same_v<T, bool>) {
      values.push_back(v > 0.5);
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      values.push_back(static_cast<std::size_t>(std::max(0.0, std::round(v))));
    } else if constexpr (std::is_same_v<T, long>) {
      values.push_back(static_cast<long>(std::round(v)));
    } else {
      values.push_back(v);
    }
  }
  return Schedule<T>(s.thresholds(), std::move(values));
}

// Visits every scalar control of the policy by name.
template <class PolicyT, class F>
void for_each_scalar_control(PolicyT& pol, F&& f) {
  f("min_z_to_research", pol.min_z_to_research);
  f("gen_part", pol.gen_part);
  f("num_samples", pol.num_samples);
  f("max_tohpe", pol.max_tohpe);
  f("tohpe_num_best", pol.tohpe_num_best);
  f("try_only_tohpe", pol.try_only_tohpe);
  f("min_pool_size", pol.min_pool_size);
  f("max_pool_size", pol.max_pool_size);
  f("max_from_single_ns", pol.max_from_single_ns);
  f("min_reduction", pol.min_reduction);
  f("max_reduction", pol.max_reduction);
  f("beamsearch_width", pol.beamsearch_width);
  f("todd_width", pol.todd_width);
  f("pool_exponent", pol.pool_exponent);
  f("final_exponent", pol.final_exponent);
  f("temperature", pol.temperature);
}

template <class PolicyT, class F>
void for_each_vector_control(PolicyT& pol, F&& f) {
  f("pool_weights", std::span(pol.pool_weights));
  f("pool_centers", std::span(pol.pool_centers));
  f("final_weights", std::span(pol.final_weights));
  f("final_centers", std::span(pol.final_centers));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Policy default_policy() {
  return Policy{};
}

void validate(const Policy& pol) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("policy: ") + what);
  };
  require(pol.gen_part.all_values([](double v) { return v >= 0.0 && v <= 1.0; }),
          "gen_part must lie in [0, 1]");
  require(pol.temperature.all_values([](double v) { return v > 0.0; }),
          "temperature must be positive");
  require(pol.pool_exponent.all_values([](double v) { return v > 0.0; }),
          "pool_exponent must be positive");
  require(pol.final_exponent.all_values([](double v) { return v > 0.0; }),
          "final_exponent must be positive");
  require(pol.beamsearch_width.all_values([](std::size_t v) { return v >= 1; }),
          "beamsearch_width must be at least 1");
  require(pol.todd_width.all_values([](std::size_t v) { return v >= 1; }),
          "todd_width must be at least 1");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (const auto& c : pol.pool_centers) require(c.all_values(in_unit), "pool centers must lie in [0, 1]");
  for (const auto& c : pol.final_centers) require(c.all_values(in_unit), "final centers must lie in [0, 1]");

  // min_reduction <= max_reduction on every piece of either schedule.
  std::vector<std::size_t> probes{0};
  for (std::size_t t : pol.min_reduction.thresholds()) probes.push_back(t);
  for (std::size_t t : pol.max_reduction.thresholds()) probes.push_back(t);
  for (std::size_t rho : probes) {
    require(pol.min_reduction(rho) <= pol.max_reduction(rho),
            "min_reduction must not exceed max_reduction");
  }
}

json to_json(const Policy& pol) {
  json j = json::object();
  for_each_scalar_control(pol, [&](const char* name, const auto& s) { j[name] = schedule_to_json(s); });
  for_each_vector_control(pol, [&](const char* name, auto span) {
    json arr = json::array();
    for (const auto& s : span) arr.push_back(schedule_to_json(s));
    j[name] = arr;
  });
  return j;
}

Policy policy_from_json(const json& j, const Policy& base) {
  if (!j.is_object()) throw std::invalid_argument("policy config must be a JSON object");
  Policy pol = base;
  std::vector<std::string> known;
  for_each_scalar_control(pol, [&](const char* name, auto& s) {
    known.emplace_back(name);
    if (j.contains(name)) {
      using T = std::decay_t<decltype(s(0))>;
      s = schedule_from_json<T>(j.at(name), name);
    }
  });
  for_each_vector_control(pol, [&](const char* name, auto span) {
    known.emplace_back(name);
    if (!j.contains(name)) return;
    const auto& arr = j.at(name);
    if (!arr.is_array() || arr.size() != span.size()) {
      throw std::invalid_argument(std::string(name) + ": expected an array of " +
                                  std::to_string(span.size()) + " entries");
    }
    for (std::size_t i = 0; i < span.size(); ++i) {
      span[i] = schedule_from_json<double>(arr[i], std::string(name));
    }
  });
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("policy config: unknown key '" + key + "'");
    }
  }
  validate(pol);
  return pol;
}

Policy load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return policy_from_json(json::parse(in));
}

std::string policy_digest(const Policy& pol) {
  const std::string text = to_json(pol).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return hex64(h);
}

const std::vector<std::string>& policy_control_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    Policy pol;
    for_each_scalar_control(pol, [&](const char* name, auto&) { out.emplace_back(name); });
    for_each_vector_control(pol, [&](const char* name, auto span) {
      for (std::size_t i = 0; i < span.size(); ++i) {
        out.push_back(std::string(name) + "." + std::to_string(i));
      }
    });
    return out;
  }();
  return names;
}

void set_control(Policy& pol, const std::string& name, const Schedule<double>& value) {
  bool found = false;
  for_each_scalar_control(pol, [&](const char* n, auto& s) {
    if (name != n) return;
    using T = std::decay_t<decltype(s(0))>;
    s = convert_schedule<T>(value);
    found = true;
  });
  for_each_vector_control(pol, [&](const char* n, auto span) {
    for (std::size_t i = 0; i < span.size(); ++i) {
      if (name == std::string(n) + "." + std::to_string(i)) {
        span[i] = value;
        found = true;
      }
    }
  });
  if (!found) throw std::invalid_argument("unknown policy control '" + name + "'");
}

double clamp01(double x) {
  if (!(x > 0.0)) return 0.0;  // also maps NaN to 0
  return std::min(x, 1.0);
}

namespace {

template <std::size_t N>
double weighted_distance(const FeatureVector& x, const std::array<Schedule<double>, N>& weights,
                         const std::array<Schedule<double>, N>& centers, double exponent,
                         std::size_t rho) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double w = weights[i](rho);
    if (w == 0.0) continue;
    s += w * std::pow(std::abs(x[i] - centers[i](rho)), exponent);
  }
  return s;
}

}  // namespace

double pool_score(const FeatureVector& x, const Policy& pol, std::size_t rho) {
  return weighted_distance(x, pol.pool_weights, pol.pool_centers, pol.pool_exponent(rho), rho);
}

double final_score(const FeatureVector& x, const Policy& pol, std::size_t rho) {
  return weighted_distance(x, pol.final_weights, pol.final_centers, pol.final_exponent(rho), rho);
}

std::vector<double> softmax_probabilities(std::span<const double> scores, double tau) {
  if (scores.empty()) throw std::invalid_argument("softmax: empty score list");
  std::vector<double> probs(scores.size(), 0.0);
  const auto top = std::max_element(scores.begin(), scores.end());
  if (tau <= kTauFloor) {
    probs[static_cast<std::size_t>(top - scores.begin())] = 1.0;
    return probs;
  }
  const double shift = *top;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    probs[i] = std::exp((scores[i] - shift) / tau);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

std::vector<std::size_t> softmax_select(std::span<const double> scores, double tau,
                                        std::size_t k, Rng& rng) {
  const auto probs = softmax_probabilities(scores, tau);
  std::vector<std::size_t> picks;
  picks.reserve(k);
  for (std::size_t draw = 0; draw < k; ++draw) {
    const double u = uniform01(rng);
    double cumulative = 0.0;
    std::size_t chosen = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      cumulative += probs[i];
      if (u < cumulative) {
        chosen = i;
        break;
      }
    }
    // Rounding can leave u above the final cumulative sum; fall back to the
    // last index that carries mass.
    while (probs[chosen] == 0.0 && chosen > 0) --chosen;
    picks.push_back(chosen);
  }
  return picks;
}

Policy greedy_preset(GreedyKind kind) {
  Policy pol = default_policy();
  for (auto& w : pol.pool_weights) w = 0.0;
  for (auto& w : pol.final_weights) w = 0.0;
  for (auto& c : pol.pool_centers) c = 0.0;
  for (auto& c : pol.final_centers) c = 0.0;
  pol.pool_exponent = 1.0;
  pol.final_exponent = 1.0;
  pol.temperature = kTauFloor;
  pol.todd_width = 1;
  pol.min_reduction = 1;
  if (kind == GreedyKind::kMax) {
    pol.pool_weights[0] = 1.0;
    pol.final_weights[0] = 1.0;
  } else {
    // Just above zero: with min_reduction = 1 every feature exceeds the
    // center, so the smallest positive reduction is closest to it.
    pol.pool_weights[0] = -1.0;
    pol.final_weights[0] = -1.0;
    pol.pool_centers[0] = 1e-9;
    pol.final_centers[0] = 1e-9;
  }
  return pol;
}

}  // namespace vartodd
