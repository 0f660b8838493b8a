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
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "vartodd/gf2.hpp"
#include "vartodd/parity.hpp"

namespace vartodd {

enum class Origin { kTohpe, kFastTodd };

/// A TODD update P -> simplify(P xor z y^T).
///
/// When `augmented` is set, y indexes the columns of [P | z | z] (length
/// m + 2): the duplicated z pair leaves the tensor unchanged and lets one
/// copy take part in the update.
struct Action {
  BitVector z;
  BitVector y;
  long predicted_reduction = 0;
  Origin origin = Origin::kFastTodd;
  std::size_t nullspace_id = 0;
  bool augmented = false;
};

/// Linear system whose kernel is N_z for a fixed z and P.
struct ConstraintSystem {
  BitMatrix rows;
  BitVector source_z;
};

/// Distinct nonzero vectors among the columns and pairwise column sums.
/// Columns come first in index order, then pairs in lexicographic (i, j)
/// order; later repeats are dropped.
std::vector<BitVector> z_candidates(const ParityMatrix& p);

/// One row per sorted index triple (a <= b <= c) touching supp(z):
///   z_a (P_b & P_c) + z_b (P_a & P_c) + z_c (P_a & P_b)
///   + z_a z_b P_c + z_a z_c P_b + z_b z_c P_a + z_a z_b z_c 1.
/// Triples disjoint from supp(z) give an all-zero row and are skipped.
ConstraintSystem build_constraint_system(const ParityMatrix& p, const BitVector& z);

std::vector<BitVector> nullspace_for_z(const ParityMatrix& p, const BitVector& z);

/// Basis of {y : (P_b & P_c) y = 0 for all b <= c, 1 . y = 0}; the
/// intersection of every N_z.
std::vector<BitVector> tohpe_subspace(const ParityMatrix& p);

/// P xor z y^T without simplification.
ParityMatrix apply_update(const ParityMatrix& p, const BitVector& z, const BitVector& y);

/// [P | z | z]; same tensor as P.
ParityMatrix augment_with_z(const ParityMatrix& p, const BitVector& z);

/// simplify(P xor z y^T), using the augmented matrix when a.augmented.
ParityMatrix apply_action(const ParityMatrix& p, const Action& a);

/// 2 * #{i < j : col_i xor col_j = z} + #{i : col_i = z}.
std::size_t reduction_upper_bound(const ParityMatrix& p, const BitVector& z);

/// column_count(p) - column_count(simplify(update)), computed by simplifying.
long realized_reduction(const ParityMatrix& p, const Action& a);

/// Per-matrix precomputation shared by every candidate of one iteration:
/// row products, the z-candidate list with its upper bounds, and memoized
/// nullspaces. Valid for one P only.
class ActionEngine {
 public:
  explicit ActionEngine(ParityMatrix p, bool augment = false);

  const ParityMatrix& matrix() const { return p_; }
  bool augmented() const { return augment_; }

  const std::vector<BitVector>& z_candidates() const { return z_list_; }
  std::size_t upper_bound(const BitVector& z) const;

  /// Memoized N_z basis. Safe to call concurrently.
  std::vector<BitVector> nullspace(const BitVector& z);
  const std::vector<BitVector>& tohpe_basis();

  /// Reduction of (z, y) on this matrix. Uses a closed form when P is
  /// simplified and the action is not augmented; otherwise simplifies.
  long reduction(const BitVector& z, const BitVector& y, bool augmented) const;

  /// True when the update only reorders the columns of simplify(P), for
  /// example swapping each b_i with b_i xor z.
  bool is_permutation(const BitVector& z, const BitVector& y, bool augmented) const;

  /// For y in N_tohpe every z is admissible; returns the z in
  /// {b_i xor b_j : i in supp(y), j not in supp(y)} u {b_i : i in supp(y)}
  /// with the largest reduction, or nullopt if supp(y) is empty.
  std::optional<std::pair<BitVector, long>> best_z_for(const BitVector& y) const;

 private:
  BitMatrix constraint_rows(const ParityMatrix& p, const BitVector& z) const;

  ParityMatrix p_;
  bool augment_ = false;
  bool simplified_ = false;
  std::vector<BitVector> rows_;
  std::vector<BitVector> z_list_;
  std::unordered_map<BitVector, std::size_t, BitVectorHash> ub_;
  std::unordered_map<BitVector, std::size_t, BitVectorHash> column_index_;
  std::optional<std::vector<BitVector>> tohpe_;
  std::mutex memo_mutex_;
  std::map<BitVector, std::vector<BitVector>> memo_;
};

}  // namespace vartodd
