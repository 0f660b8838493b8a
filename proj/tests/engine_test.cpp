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

#include <set>

#include "test_util.hpp"
#include "vartodd/engine.hpp"

using namespace vartodd;
using vartodd::testing::random_matrix;
using vartodd::testing::random_nonzero;

namespace {

// Every y in {0,1}^m whose update keeps the tensor.
std::set<BitVector> brute_force_kernel(const ParityMatrix& p, const BitVector& z) {
  const SignatureTensor ref = signature_tensor(p);
  const std::size_t m = p.column_count();
  std::set<BitVector> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    BitVector y(m);
    for (std::size_t j = 0; j < m; ++j) y.set(j, ((mask >> j) & 1U) != 0);
    if (signature_tensor(apply_update(p, z, y)) == ref) out.insert(y);
  }
  return out;
}

std::set<BitVector> span_of(const std::vector<BitVector>& basis, std::size_t m) {
  std::set<BitVector> out{BitVector(m)};
  for (const auto& b : basis) {
    std::vector<BitVector> next(out.begin(), out.end());
    for (auto v : next) out.insert(v ^= b);
  }
  return out;
}

ParityMatrix ccz7() { return ParityMatrix::all_nonzero(3); }

}  // namespace

TEST_CASE("z candidates are distinct, nonzero and columns-first") {
  const auto p = ParityMatrix::from_rows({"1100", "0110", "0011"});
  const auto zs = z_candidates(p);
  std::set<BitVector> uniq(zs.begin(), zs.end());
  CHECK(uniq.size() == zs.size());
  for (const auto& z : zs) CHECK(z.any());
  for (std::size_t j = 0; j < p.column_count(); ++j) CHECK(zs[j] == p.column(j));
}

TEST_CASE("upper bound on CCZ-7 for z = 111") {
  CHECK(reduction_upper_bound(ccz7(), BitVector::from_string("111")) == 7);
  ActionEngine eng(ccz7());
  CHECK(eng.upper_bound(BitVector::from_string("111")) == 7);
}

TEST_CASE("constraint kernel matches brute force on small matrices") {
  Rng rng(20260101);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 3;
    const std::size_t m = 1 + rng() % 6;
    const ParityMatrix p = random_matrix(n, m, rng, false);
    const BitVector z = random_nonzero(n, rng);
    const auto kernel = nullspace_for_z(p, z);
    CHECK(span_of(kernel, m) == brute_force_kernel(p, z));
  }
}

TEST_CASE("TOHPE subspace lies inside every N_z") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const ParityMatrix p = random_matrix(3 + rng() % 4, 4 + rng() % 9, rng, true);
    const auto tohpe = tohpe_subspace(p);
    for (int k = 0; k < 20; ++k) {
      const BitVector z = random_nonzero(p.qubits(), rng);
      SpanBasis nz(p.column_count());
      for (const auto& v : nullspace_for_z(p, z)) nz.insert(v);
      for (const auto& y : tohpe) CHECK(nz.contains(y));
    }
  }
}

TEST_CASE("admissible actions preserve the tensor") {
  Rng rng(4242);
  int applied = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const ParityMatrix p = simplify(random_matrix(2 + rng() % 5, 2 + rng() % 11, rng, true));
    if (p.empty()) continue;
    const bool aug = (trial % 3) == 0;
    ActionEngine eng(p, aug);
    const auto zs = eng.z_candidates();
    const BitVector& z = zs[rng() % zs.size()];
    const auto basis = eng.nullspace(z);
    if (basis.empty()) continue;
    BitVector y(basis.front().size());
    for (const auto& b : basis) {
      if (rng() & 1U) y ^= b;
    }
    Action a{z, y, 0, Origin::kFastTodd, 0, aug};
    const ParityMatrix next = apply_action(p, a);
    CHECK(tensors_equal(signature_tensor(next), signature_tensor(p)));
    CHECK(eng.reduction(z, y, aug) == realized_reduction(p, a));
    ++applied;
  }
  CHECK(applied > 100);
}

TEST_CASE("closed-form reduction agrees with simplification") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const ParityMatrix p = simplify(random_matrix(3 + rng() % 4, 3 + rng() % 10, rng, true));
    if (p.empty()) continue;
    ActionEngine eng(p);
    const BitVector z = random_nonzero(p.qubits(), rng);
    BitVector y(p.column_count());
    for (std::size_t j = 0; j < y.size(); ++j) y.set(j, (rng() & 1U) != 0);
    CHECK(eng.reduction(z, y, false) == realized_reduction(p, Action{z, y}));
  }
}

TEST_CASE("best_z_for matches exhaustive search over candidates") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const ParityMatrix p = simplify(random_matrix(4, 8 + rng() % 6, rng, true));
    ActionEngine eng(p);
    for (const auto& y : eng.tohpe_basis()) {
      const auto best = eng.best_z_for(y);
      REQUIRE(best.has_value());
      long brute = std::numeric_limits<long>::min();
      for (std::size_t i = 0; i < p.column_count(); ++i) {
        if (!y.get(i)) continue;
        brute = std::max(brute, eng.reduction(p.column(i), y, false));
        for (std::size_t j = 0; j < p.column_count(); ++j) {
          if (!y.get(j)) brute = std::max(brute, eng.reduction(p.column(i) ^ p.column(j), y, false));
        }
      }
      CHECK(best->second == brute);
      CHECK(eng.reduction(best->first, y, false) == best->second);
    }
  }
}

TEST_CASE("augmentation keeps the tensor") {
  const ParityMatrix p = ccz7();
  const BitVector z = BitVector::from_string("110");
  const ParityMatrix aug = augment_with_z(p, z);
  CHECK(aug.column_count() == p.column_count() + 2);
  CHECK(tensors_equal(signature_tensor(aug), signature_tensor(p)));
}
