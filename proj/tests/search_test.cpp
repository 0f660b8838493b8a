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

#include <map>
#include <sstream>

#include "vartodd/benchmarks.hpp"
#include "vartodd/search.hpp"

using namespace vartodd;

namespace {

std::string to_text(const Trajectory& t) {
  std::ostringstream out;
  write_trajectory(out, t);
  return out.str();
}

ParityMatrix gf8() { return gen_gf2n({3, default_modulus(3)}).matrix; }

}  // namespace

TEST_CASE("one iteration on the GF(8) multiplier") {
  const ParityMatrix p = gf8();
  Rng rng(1);
  const IterationResult r = run_iteration(p, default_policy(), rng);
  REQUIRE(r.action.has_value());
  REQUIRE(r.next.has_value());
  CHECK(r.action->predicted_reduction >= 1);
  CHECK(r.next->column_count() == p.column_count() - static_cast<std::size_t>(r.action->predicted_reduction));
  CHECK(tensors_equal(signature_tensor(*r.next), signature_tensor(p)));
  CHECK(r.children.size() == 1);
}

TEST_CASE("pool respects its caps") {
  Policy pol = default_policy();
  pol.max_pool_size = 10;
  pol.max_from_single_ns = 3;
  pol.max_tohpe = 2;
  pol.min_pool_size = 100;
  pol.min_z_to_research = 100;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ParityMatrix p = gen_random(5, 40, seed);
    Rng rng(seed);
    const IterationResult r = run_iteration(p, pol, rng);
    const auto& d = r.diagnostics;
    CHECK(d.pool_size <= 10);
    CHECK(d.pool_nullspace_ids.size() == d.pool_size);
    std::map<std::size_t, std::size_t> per_ns;
    for (std::size_t id : d.pool_nullspace_ids) ++per_ns[id];
    for (const auto& [id, count] : per_ns) {
      CHECK(count <= 3);
      if (id == 0) CHECK(count <= 2);
    }
  }
}

TEST_CASE("reduction window filters the chosen action") {
  Policy pol = default_policy();
  pol.min_reduction = 2;
  pol.max_reduction = 2;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ParityMatrix p = gen_random(5, 30, seed);
    Rng rng(seed);
    const IterationResult r = run_iteration(p, pol, rng);
    if (r.action) CHECK(r.action->predicted_reduction == 2);
  }
}

TEST_CASE("TOHPE-only iterations skip expansion when the pool is full") {
  Policy pol = default_policy();
  pol.try_only_tohpe = true;
  pol.min_pool_size = 1;
  const ParityMatrix p = gf8();
  Rng rng(2);
  const IterationResult r = run_iteration(p, pol, rng);
  if (r.diagnostics.tohpe_candidates > 0 && r.diagnostics.expansion_skipped) {
    CHECK(r.diagnostics.expansion_candidates == 0);
    CHECK(r.action->origin == Origin::kTohpe);
  }
  CHECK(r.diagnostics.tohpe_dimension > 0);
}

TEST_CASE("width draws pick the best realized child") {
  Policy pol = default_policy();
  pol.todd_width = 4;
  pol.temperature = 1.0;
  const ParityMatrix p = gen_random(5, 40, 8);
  Rng rng(6);
  const IterationResult r = run_iteration(p, pol, rng);
  REQUIRE(r.children.size() == 4);
  for (const auto& c : r.children) CHECK(r.next->column_count() <= c.result.column_count());
}

TEST_CASE("optimize produces a valid, monotone trajectory") {
  const ParityMatrix p = gf8();
  const Trajectory t = optimize(p, default_policy(), SearchBudget::iterations(100), 5);
  CHECK(check_trajectory(t).empty());
  CHECK(t.states.size() == t.actions.size() + 1);
  CHECK(t.column_counts.size() == t.states.size());
  for (std::size_t i = 1; i < t.states.size(); ++i) {
    CHECK(t.column_counts[i] < t.column_counts[i - 1]);
    CHECK(t.matrix_evals[i] >= t.matrix_evals[i - 1]);
  }
  CHECK(t.final_rho() < p.column_count());
  CHECK(tensors_equal(signature_tensor(t.final_state()), signature_tensor(p)));
  CHECK(t.policy_digest == policy_digest(default_policy()));
}

TEST_CASE("optimize is deterministic and thread-count independent") {
  const ParityMatrix p = gf8();
  const auto budget = SearchBudget::iterations(50);
  const std::string a = to_text(optimize(p, default_policy(), budget, 11));
  CHECK(a == to_text(optimize(p, default_policy(), budget, 11)));
  SearchOptions threaded;
  threaded.threads = 3;
  CHECK(a == to_text(optimize(p, default_policy(), budget, 11, threaded)));
}

TEST_CASE("width-one beam equals optimize") {
  const ParityMatrix p = gf8();
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto budget = SearchBudget::iterations(40);
    CHECK(to_text(optimize(p, default_policy(), budget, seed)) ==
          to_text(optimize_beam(p, default_policy(), budget, seed)));
  }
}

TEST_CASE("beam search stays valid") {
  Policy pol = default_policy();
  pol.beamsearch_width = 3;
  pol.todd_width = 3;
  const Trajectory t = optimize_beam(gf8(), pol, SearchBudget::iterations(30), 2);
  CHECK(check_trajectory(t).empty());
}

TEST_CASE("budgets") {
  const ParityMatrix p = gf8();
  const Trajectory none = optimize(p, default_policy(), SearchBudget::iterations(0), 1);
  CHECK(none.stop_reason == StopReason::kBudget);
  CHECK(none.iterations == 0);
  CHECK(none.states.size() == 1);

  const Trajectory one = optimize(p, default_policy(), SearchBudget::iterations(1), 1);
  CHECK(one.iterations == 1);

  SearchBudget evals;
  evals.max_matrix_evals = 1;
  const Trajectory capped = optimize(p, default_policy(), evals, 1);
  CHECK(capped.iterations <= 1);

  CHECK_THROWS_AS(optimize(p, default_policy(), SearchBudget{}, 1), std::invalid_argument);
}

TEST_CASE("lateral moves stop on patience") {
  Policy pol = default_policy();
  pol.min_reduction = 0;
  pol.pool_weights[0] = 1.0;
  pol.final_weights[0] = 1.0;
  SearchOptions opts;
  opts.patience = 3;
  const Trajectory t = optimize(gf8(), pol, SearchBudget::iterations(500), 4, opts);
  CHECK(check_trajectory(t).empty());
  CHECK(t.stop_reason != StopReason::kBudget);
  // The recorded path ends at its best state.
  for (std::size_t rho : t.column_counts) CHECK(t.final_rho() <= rho);
}

TEST_CASE("augmented search keeps the tensor") {
  SearchOptions opts;
  opts.augment_z = true;
  const ParityMatrix p = gf8();
  const Trajectory t = optimize(p, default_policy(), SearchBudget::iterations(20), 3, opts);
  CHECK(check_trajectory(t).empty());
  CHECK(tensors_equal(signature_tensor(t.final_state()), signature_tensor(p)));
  std::istringstream in(to_text(t));
  CHECK(to_text(read_trajectory(in)) == to_text(t));
}

TEST_CASE("trajectory text round trip") {
  const Trajectory t = optimize(gf8(), default_policy(), SearchBudget::iterations(20), 9);
  const std::string text = to_text(t);
  std::istringstream in(text);
  const Trajectory back = read_trajectory(in);
  CHECK(to_text(back) == text);
  CHECK(back.seed == 9);
  CHECK(back.column_counts == t.column_counts);
  CHECK(back.matrix_evals == t.matrix_evals);
  CHECK(check_trajectory(back).empty());
}

TEST_CASE("tampered trajectories are rejected") {
  Trajectory t = optimize(gf8(), default_policy(), SearchBudget::iterations(5), 9);
  REQUIRE(t.states.size() >= 2);
  std::vector<BitVector> cols = t.states[1].columns();
  cols[0].flip(0);
  t.states[1] = ParityMatrix(t.states[1].qubits(), cols);
  CHECK_FALSE(check_trajectory(t).empty());

  std::istringstream bad("vartodd-trajectory v1\npolicy_digest x\nseed nope\n");
  CHECK_THROWS_AS(read_trajectory(bad), ParseError);
}
