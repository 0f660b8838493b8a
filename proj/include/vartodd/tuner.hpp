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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "vartodd/parity.hpp"
#include "vartodd/policy.hpp"
#include "vartodd/search.hpp"

namespace vartodd {

/// Latent parameters live in the box [-kLatentBound, kLatentBound]^d.
inline constexpr double kLatentBound = 2.0;
using LatentVector = Eigen::VectorXd;

enum class TransformKind { kAffine, kExpScale, kLogistic, kRoundToInt, kGate };

/// Maps one latent coordinate to a control value.
struct Transform {
  TransformKind kind = TransformKind::kAffine;
  double lo = 0.0;
  double hi = 1.0;
  double threshold = 0.0;  // gate only

  double apply(double theta) const;
};

struct MappingEntry {
  std::string control;
  Transform transform;
  /// Stage threshold: the value applies once the column count drops below
  /// it. Unset means the value applies from the start.
  std::optional<std::size_t> rank_thr;
};

struct MappingSpec {
  std::vector<MappingEntry> entries;
  std::size_t dimension() const { return entries.size(); }
};

MappingSpec mapping_from_json(const nlohmann::json& j);

/// Consumes one coordinate per entry, in order, and writes the resulting
/// schedules over `base`. Throws std::invalid_argument on a dimension
/// mismatch, an out-of-box coordinate or repeated thresholds for one control.
Policy policy_mapping(const MappingSpec& spec, const LatentVector& theta,
                      const Policy& base = default_policy());

inline constexpr double kStorePenalty = 1.0;

struct FitnessReport {
  std::size_t rho = 0;
  double density = 0.0;
  double penalty = 0.0;
  double fitness = std::numeric_limits<double>::infinity();
  bool valid = false;
};

/// rho + ones / (n m) + penalty for tensor-verified matrices; invalid ones
/// report fitness = +inf. The penalty applies to store restarts that end at
/// or above their starting column count.
FitnessReport fitness(const ParityMatrix& final_state, bool started_from_store,
                      std::size_t start_rho, const SignatureTensor& reference);

/// Numbered trajectories that all share the benchmark tensor.
class PathStore {
 public:
  explicit PathStore(SignatureTensor reference, std::string directory = {});

  /// Throws std::invalid_argument if any state breaks the shared tensor.
  std::size_t insert(Trajectory t);

  std::size_t size() const { return paths_.size(); }
  bool empty() const { return paths_.empty(); }
  const Trajectory& path(std::size_t id) const;
  /// Path whose final state has the lowest (rho, density).
  std::optional<std::size_t> best_path() const;
  const SignatureTensor& reference() const { return reference_; }
  const std::string& directory() const { return directory_; }

  /// Writes path_<id>.traj files plus index.json.
  void save() const;
  static PathStore load(const std::string& directory, SignatureTensor reference);

 private:
  SignatureTensor reference_;
  std::string directory_;
  std::vector<Trajectory> paths_;
};

/// Index of the last state on the path with rho > rank_thr, or 0 when no
/// state qualifies.
std::size_t restart_index(const Trajectory& path, std::size_t rank_thr);

/// Throws std::out_of_range for an unknown path id.
ParityMatrix set_up_new_init(const PathStore& store, std::size_t path_num, std::size_t rank_thr);

struct PsoOptions {
  std::size_t swarm = 20;
  std::size_t iterations = 100;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  std::uint64_t seed = 0;
  /// Checked before each iteration; returning true stops the search.
  std::function<bool()> should_stop;
};

struct PsoResult {
  LatentVector best;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
};

/// Evaluates one swarm iteration; results are in particle order.
using BatchObjective = std::function<std::vector<double>(const std::vector<LatentVector>&)>;

/// Global-best PSO on [-2, 2]^d. Positions are clamped to the box before
/// every evaluation.
PsoResult pso_optimize_batch(const BatchObjective& objective, std::size_t d,
                             const PsoOptions& options);

PsoResult pso_optimize(const std::function<double(const LatentVector&)>& objective, std::size_t d,
                       std::size_t swarm, std::size_t iterations, std::uint64_t seed);

inline PsoOptions small_swarm() {
  PsoOptions o;
  o.swarm = 8;
  o.iterations = 10;
  return o;
}

struct TunerConfig {
  MappingSpec mapping;
  Policy base_policy = default_policy();
  PsoOptions pso = small_swarm();
  /// Objective = min fitness over this many seeded runs.
  std::size_t repetitions = 3;
  /// Once the store is non-empty, every fresh_every-th evaluation starts
  /// from the benchmark; the others restart from the best stored path.
  std::size_t fresh_every = 4;
  SearchBudget eval_budget = SearchBudget::iterations(1000);
  std::optional<double> wall_clock_seconds;
  std::string store_path;
  unsigned threads = 1;
  SearchOptions search;
};

TunerConfig tuner_config_from_json(const nlohmann::json& j);
TunerConfig load_tuner_config(const std::string& path);

struct EvaluationRecord {
  std::size_t index = 0;
  bool from_store = false;
  std::size_t start_rho = 0;
  std::vector<std::size_t> repetition_rhos;
  FitnessReport report;
  LatentVector theta;
};

struct TuneResult {
  Policy best_policy;
  LatentVector best_theta;
  FitnessReport best_report;
  /// Valid evaluations sorted by fitness, then evaluation index.
  std::vector<EvaluationRecord> leaderboard;
  std::size_t evaluations = 0;
  std::size_t matrix_evals = 0;
};

/// PSO over the latent box; each evaluation optimizes from the benchmark or
/// a store restart and scores the result. Improving trajectories are added
/// to `store`. Results are identical for a given seed when no wall-clock
/// limit is set.
TuneResult tune(const ParityMatrix& benchmark, const TunerConfig& config, PathStore& store,
                std::uint64_t seed);

nlohmann::json leaderboard_to_json(const TuneResult& result);

}  // namespace vartodd
