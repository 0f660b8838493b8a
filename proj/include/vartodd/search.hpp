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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vartodd/engine.hpp"
#include "vartodd/parity.hpp"
#include "vartodd/policy.hpp"

namespace vartodd {

/// Resource limits for one optimization run. Unset fields are unlimited;
/// at least one must be set.
struct SearchBudget {
  std::optional<double> wall_clock_seconds;
  std::optional<std::size_t> max_matrix_evals;
  std::optional<std::size_t> max_iterations;

  bool has_limit() const {
    return wall_clock_seconds || max_matrix_evals || max_iterations;
  }
  static SearchBudget iterations(std::size_t n) { return {std::nullopt, std::nullopt, n}; }
  static SearchBudget seconds(double s) { return {s, std::nullopt, std::nullopt}; }
};

/// Engine knobs that are not part of the tunable policy.
struct SearchOptions {
  /// Consecutive non-improving iterations before stopping; 0 picks 1, or 5
  /// when the policy admits non-positive reductions.
  std::size_t patience = 0;
  /// Solve N_z on [P | z | z] so odd-weight moves become available.
  bool augment_z = false;
  /// Worker threads for per-z candidate generation. Results do not depend
  /// on this value.
  unsigned threads = 1;
};

/// A scored candidate action.
struct Candidate {
  Action action;
  FeatureVector features;
  double pool_score = 0.0;
  double final_score = 0.0;
  std::size_t index = 0;  // generation order
};

struct IterationDiagnostics {
  std::size_t tohpe_dimension = 0;
  std::size_t tohpe_candidates = 0;
  std::size_t expansion_candidates = 0;
  std::size_t z_explored = 0;
  bool expansion_skipped = false;
  std::size_t pool_size = 0;
  std::size_t matrix_evals = 0;
  long best_predicted_reduction = 0;
  /// nullspace_id of every pool member, in pool order.
  std::vector<std::size_t> pool_nullspace_ids;
};

/// One applied draw from the final pool.
struct Child {
  Action action;
  ParityMatrix result;
};

struct IterationResult {
  std::optional<Action> action;
  std::optional<ParityMatrix> next;
  /// Every applied draw, in draw order (todd_width entries, or none).
  std::vector<Child> children;
  IterationDiagnostics diagnostics;
};

/// One search iteration on a simplified matrix: TOHPE stage, FastTODD
/// expansion, pool construction, final rescoring, softmax draw of
/// todd_width actions. The committed action is the draw whose realized
/// result has the lowest (column count, density), earliest draw first.
/// Returns no action when the pool is empty.
IterationResult run_iteration(const ParityMatrix& p, const Policy& pol, Rng& rng,
                              const SearchOptions& opts = {});

enum class StopReason { kNoAction, kPatience, kBudget };

struct Trajectory {
  std::vector<ParityMatrix> states;
  std::vector<Action> actions;
  std::vector<std::size_t> column_counts;
  /// Cumulative matrix evaluations when each state was reached.
  std::vector<std::size_t> matrix_evals;
  std::uint64_t seed = 0;
  std::string policy_digest;
  StopReason stop_reason = StopReason::kNoAction;
  std::size_t iterations = 0;
  std::size_t total_matrix_evals = 0;

  const ParityMatrix& final_state() const { return states.back(); }
  std::size_t final_rho() const { return column_counts.back(); }
};

/// Repeats run_iteration from simplify(p) until no action, patience, or
/// budget. Throws std::invalid_argument if the budget has no limit.
Trajectory optimize(const ParityMatrix& p, const Policy& pol, const SearchBudget& budget,
                    std::uint64_t seed, const SearchOptions& opts = {});

/// Keeps up to beamsearch_width states; each step expands every state with
/// todd_width drawn actions and keeps the best children by
/// (column count, density). Width 1 is identical to optimize.
Trajectory optimize_beam(const ParityMatrix& p, const Policy& pol, const SearchBudget& budget,
                         std::uint64_t seed, const SearchOptions& opts = {});

/// Checks the consecutive-state relation and shared tensor. Returns an
/// empty string when valid, otherwise a description of the first problem.
std::string check_trajectory(const Trajectory& t);

/// Throws std::invalid_argument unless actions.size() + 1 == states.size().
void write_trajectory(std::ostream& out, const Trajectory& t);
Trajectory read_trajectory(std::istream& in);
void save_trajectory(const std::string& path, const Trajectory& t);
Trajectory load_trajectory(const std::string& path);

}  // namespace vartodd
