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

#include "vartodd/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace vartodd {

namespace {

BitMatrix constraint_rows_from(const std::vector<BitVector>& rows, std::size_t m,
                               const BitVector& z) {
  const std::size_t n = rows.size();
  if (z.size() != n) throw std::invalid_argument("constraint system: z length != qubits");
  BitMatrix system(0, m);
  const BitVector all_ones = BitVector::ones(m);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b <= c; ++b) {
      for (std::size_t a = 0; a <= b; ++a) {
        const bool za = z.get(a), zb = z.get(b), zc = z.get(c);
        if (!za && !zb && !zc) continue;
        BitVector row(m);
        if (za) row ^= rows[b] & rows[c];
        if (zb) row ^= rows[a] & rows[c];
        if (zc) row ^= rows[a] & rows[b];
        if (za && zb) row ^= rows[c];
        if (za && zc) row ^= rows[b];
        if (zb && zc) row ^= rows[a];
        if (za && zb && zc) row ^= all_ones;
        if (row.any()) system.append_row(std::move(row));
      }
    }
  }
  return system;
}

bool is_simplified(const ParityMatrix& p) {
  std::unordered_set<BitVector, BitVectorHash> seen;
  for (const auto& c : p.columns()) {
    if (c.none() || !seen.insert(c).second) return false;
  }
  return true;
}

}  // namespace

std::vector<BitVector> z_candidates(const ParityMatrix& p) {
  std::vector<BitVector> out;
  std::unordered_set<BitVector, BitVectorHash> seen;
  const auto& cols = p.columns();
  auto offer = [&](BitVector v) {
    if (v.any() && seen.insert(v).second) out.push_back(std::move(v));
  };
  for (const auto& c : cols) offer(c);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) offer(cols[i] ^ cols[j]);
  }
  return out;
}

ConstraintSystem build_constraint_system(const ParityMatrix& p, const BitVector& z) {
  return {constraint_rows_from(p.rows(), p.column_count(), z), z};
}

std::vector<BitVector> nullspace_for_z(const ParityMatrix& p, const BitVector& z) {
  return nullspace_basis(build_constraint_system(p, z).rows);
}

std::vector<BitVector> tohpe_subspace(const ParityMatrix& p) {
  const std::size_t m = p.column_count();
  const auto rows = p.rows();
  BitMatrix system(0, m);
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (std::size_t b = 0; b <= c; ++b) {
      BitVector r = rows[b] & rows[c];
      if (r.any()) system.append_row(std::move(r));
    }
  }
  if (m > 0) system.append_row(BitVector::ones(m));
  return nullspace_basis(system);
}

ParityMatrix apply_update(const ParityMatrix& p, const BitVector& z, const BitVector& y) {
  if (z.size() != p.qubits() || y.size() != p.column_count()) {
    throw std::invalid_argument("apply_update: dimension mismatch");
  }
  std::vector<BitVector> cols = p.columns();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (y.get(j)) cols[j] ^= z;
  }
  return ParityMatrix(p.qubits(), std::move(cols));
}

ParityMatrix augment_with_z(const ParityMatrix& p, const BitVector& z) {
  ParityMatrix out = p;
  out.append_column(z);
  out.append_column(z);
  return out;
}

ParityMatrix apply_action(const ParityMatrix& p, const Action& a) {
  if (a.z.size() != p.qubits()) throw std::invalid_argument("apply_action: z length mismatch");
  if (a.augmented) return simplify(apply_update(augment_with_z(p, a.z), a.z, a.y));
  return simplify(apply_update(p, a.z, a.y));
}

std::size_t reduction_upper_bound(const ParityMatrix& p, const BitVector& z) {
  const auto& cols = p.columns();
  std::size_t bound = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == z) ++bound;
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      if ((cols[i] ^ cols[j]) == z) bound += 2;
    }
  }
  return bound;
}

long realized_reduction(const ParityMatrix& p, const Action& a) {
  return static_cast<long>(p.column_count()) -
         static_cast<long>(apply_action(p, a).column_count());
}

ActionEngine::ActionEngine(ParityMatrix p, bool augment)
    : p_(std::move(p)), augment_(augment), simplified_(is_simplified(p_)), rows_(p_.rows()) {
  const auto& cols = p_.columns();
  for (std::size_t i = 0; i < cols.size(); ++i) column_index_.emplace(cols[i], i);

  auto offer = [&](BitVector v, std::size_t weight) {
    if (v.none()) return;
    auto [it, inserted] = ub_.try_emplace(v, 0);
    it->second += weight;
    if (inserted) z_list_.push_back(std::move(v));
  };
  for (const auto& c : cols) offer(c, 1);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) offer(cols[i] ^ cols[j], 2);
  }
}

std::size_t ActionEngine::upper_bound(const BitVector& z) const {
  const auto it = ub_.find(z);
  return it == ub_.end() ? 0 : it->second;
}

BitMatrix ActionEngine::constraint_rows(const ParityMatrix& p, const BitVector& z) const {
  if (&p == &p_) return constraint_rows_from(rows_, p_.column_count(), z);
  return constraint_rows_from(p.rows(), p.column_count(), z);
}

std::vector<BitVector> ActionEngine::nullspace(const BitVector& z) {
  {
    std::lock_guard lock(memo_mutex_);
    if (auto it = memo_.find(z); it != memo_.end()) return it->second;
  }
  std::vector<BitVector> basis;
  if (augment_) {
    const ParityMatrix aug = augment_with_z(p_, z);
    basis = nullspace_basis(constraint_rows(aug, z));
  } else {
    basis = nullspace_basis(constraint_rows(p_, z));
  }
  std::lock_guard lock(memo_mutex_);
  return memo_.try_emplace(z, std::move(basis)).first->second;
}

const std::vector<BitVector>& ActionEngine::tohpe_basis() {
  std::lock_guard lock(memo_mutex_);
  if (!tohpe_) tohpe_ = tohpe_subspace(p_);
  return *tohpe_;
}

long ActionEngine::reduction(const BitVector& z, const BitVector& y, bool augmented) const {
  if (augmented || !simplified_) {
    Action a{z, y, 0, Origin::kFastTodd, 0, augmented};
    return realized_reduction(p_, a);
  }
  if (y.size() != p_.column_count()) throw std::invalid_argument("reduction: y length mismatch");
  // Columns are distinct and nonzero, so a shifted column can only cancel
  // against its unshifted partner b_i xor z or vanish when b_i == z.
  const auto& cols = p_.columns();
  long red = 0;
  for (std::size_t i = y.find_first(); i < cols.size(); ++i) {
    if (!y.get(i)) continue;
    if (cols[i] == z) {
      ++red;
      continue;
    }
    const auto it = column_index_.find(cols[i] ^ z);
    if (it != column_index_.end() && !y.get(it->second)) red += 2;
  }
  return red;
}

bool ActionEngine::is_permutation(const BitVector& z, const BitVector& y, bool augmented) const {
  if (augmented || !simplified_) {
    auto sorted_columns = [](const ParityMatrix& m) {
      std::vector<BitVector> cols = m.columns();
      std::sort(cols.begin(), cols.end());
      return cols;
    };
    const ParityMatrix next = apply_action(p_, Action{z, y, 0, Origin::kFastTodd, 0, augmented});
    return sorted_columns(next) == sorted_columns(simplify(p_));
  }
  const auto& cols = p_.columns();
  for (std::size_t i = y.find_first(); i < cols.size(); ++i) {
    if (!y.get(i)) continue;
    const auto it = column_index_.find(cols[i] ^ z);
    if (it == column_index_.end() || !y.get(it->second)) return false;
  }
  return true;
}

std::optional<std::pair<BitVector, long>> ActionEngine::best_z_for(const BitVector& y) const {
  const auto& cols = p_.columns();
  if (y.size() != cols.size()) throw std::invalid_argument("best_z_for: y length mismatch");
  if (y.none()) return std::nullopt;

  std::unordered_map<BitVector, long, BitVectorHash> score;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (!y.get(i)) continue;
    score[cols[i]] += 1;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (!y.get(j)) score[cols[i] ^ cols[j]] += 2;
    }
  }
  const BitVector* best = nullptr;
  long best_score = -1;
  for (const auto& [z, s] : score) {
    if (z.none()) continue;
    if (s > best_score || (s == best_score && z < *best)) {
      best = &z;
      best_score = s;
    }
  }
  if (best == nullptr) return std::nullopt;
  if (!simplified_) return std::pair{*best, reduction(*best, y, false)};
  return std::pair{*best, best_score};
}

}  // namespace vartodd
