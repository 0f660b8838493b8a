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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vartodd {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits, so draws are
/// identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

/// Piecewise-constant value indexed by the current column count rho.
///
/// With thresholds r_1 > ... > r_k >= 0 and values v_1..v_{k+1}:
/// v_1 for rho >= r_1, v_i for r_i <= rho < r_{i-1}, v_{k+1} for rho < r_k.
template <class T>
class Schedule {
 public:
  Schedule() : values_{T{}} {}
  Schedule(T value) : values_{value} {}  // NOLINT: scalars are constant schedules
  Schedule(std::vector<std::size_t> thresholds, std::vector<T> values)
      : thresholds_(std::move(thresholds)), values_(std::move(values)) {
    if (values_.size() != thresholds_.size() + 1) {
      throw std::invalid_argument("Schedule: need exactly one more value than thresholds");
    }
    for (std::size_t i = 1; i < thresholds_.size(); ++i) {
      if (thresholds_[i] >= thresholds_[i - 1]) {
        throw std::invalid_argument("Schedule: thresholds must be strictly decreasing");
      }
    }
  }

  T operator()(std::size_t rho) const {
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
      if (rho >= thresholds_[i]) return values_[i];
    }
    return values_.back();
  }

  bool is_constant() const { return thresholds_.empty(); }
  const std::vector<std::size_t>& thresholds() const { return thresholds_; }
  const std::vector<T>& values() const { return values_; }

  template <class Pred>
  bool all_values(Pred pred) const {
    for (const T& v : values_) {
      if (!pred(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::vector<std::size_t> thresholds_;
  std::vector<T> values_;
};

inline constexpr std::size_t kPoolFeatures = 5;
inline constexpr std::size_t kFinalFeatures = 6;
inline constexpr double kTauFloor = 1e-6;

/// Every tunable control of the search and choice stages.
struct Policy {
  // search stage
  Schedule<std::size_t> min_z_to_research{256};
  Schedule<double> gen_part{1.0};
  Schedule<std::size_t> num_samples{32};
  Schedule<std::size_t> max_tohpe{64};
  Schedule<std::size_t> tohpe_num_best{4};
  Schedule<bool> try_only_tohpe{false};
  Schedule<std::size_t> min_pool_size{256};
  Schedule<std::size_t> max_pool_size{256};
  Schedule<std::size_t> max_from_single_ns{64};
  Schedule<long> min_reduction{1};
  Schedule<long> max_reduction{1000000};
  Schedule<std::size_t> beamsearch_width{1};
  Schedule<std::size_t> todd_width{1};

  // choice stage
  std::array<Schedule<double>, kPoolFeatures> pool_weights{-1.0, 0.0, 0.0, 0.0, 0.0};
  std::array<Schedule<double>, kPoolFeatures> pool_centers{0.0, 0.0, 0.0, 0.0, 0.0};
  Schedule<double> pool_exponent{1.0};
  std::array<Schedule<double>, kFinalFeatures> final_weights{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  std::array<Schedule<double>, kFinalFeatures> final_centers{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  Schedule<double> final_exponent{1.0};
  Schedule<double> temperature{0.01};

  friend bool operator==(const Policy&, const Policy&) = default;
};

/// The hand-designed policy used when no config is given.
Policy default_policy();

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const Policy& pol);

nlohmann::json to_json(const Policy& pol);
/// Keys missing from `j` keep the values of `base`; unknown keys throw.
Policy policy_from_json(const nlohmann::json& j, const Policy& base = default_policy());
Policy load_policy(const std::string& path);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string policy_digest(const Policy& pol);

/// Names accepted by set_control: scalar controls plus "pool_weights.i",
/// "pool_centers.i", "final_weights.i", "final_centers.i".
const std::vector<std::string>& policy_control_names();

/// Assigns a real-valued schedule to a named control, rounding counts and
/// thresholding flags at 0.5. Throws on an unknown name.
void set_control(Policy& pol, const std::string& name, const Schedule<double>& value);

/// Normalized features in [0, 1]: reduction / m, dim N_z / m,
/// upper bound / m, |y| / m, |z| / n, and the next-step TOHPE proxy.
struct FeatureVector {
  std::array<double, kFinalFeatures> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

double clamp01(double x);

/// sum_i w_i |x_i - c_i|^p over the first five features.
double pool_score(const FeatureVector& x, const Policy& pol, std::size_t rho);
/// Six-feature analogue of pool_score with the final weights.
double final_score(const FeatureVector& x, const Policy& pol, std::size_t rho);

/// exp(s_a / tau) / sum exp(s / tau), max-shifted. For tau <= kTauFloor
/// the distribution is a point mass on the lowest-index argmax.
std::vector<double> softmax_probabilities(std::span<const double> scores, double tau);

/// k i.i.d. draws from softmax_probabilities. Throws on empty scores.
std::vector<std::size_t> softmax_select(std::span<const double> scores, double tau,
                                        std::size_t k, Rng& rng);

enum class GreedyKind { kMax, kMin };

/// Greedy Max: argmax immediate reduction. Greedy Min: smallest positive
/// immediate reduction.
Policy greedy_preset(GreedyKind kind);

}  // namespace vartodd
