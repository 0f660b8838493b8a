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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vartodd/gf2.hpp"

namespace vartodd {

/// n x m matrix over F2 whose columns are the odd-coefficient parities of a
/// phase polynomial. The column count is the T-count.
class ParityMatrix {
 public:
  ParityMatrix() = default;
  explicit ParityMatrix(std::size_t qubits) : qubits_(qubits) {}
  ParityMatrix(std::size_t qubits, std::vector<BitVector> columns);

  /// Builds from row strings, one per qubit.
  static ParityMatrix from_rows(const std::vector<std::string>& rows);
  static ParityMatrix identity(std::size_t n);
  /// All 2^n - 1 nonzero parities on n qubits, in increasing integer order.
  static ParityMatrix all_nonzero(std::size_t n);

  std::size_t qubits() const { return qubits_; }
  std::size_t column_count() const { return columns_.size(); }
  bool empty() const { return columns_.empty(); }

  const BitVector& column(std::size_t j) const { return columns_[j]; }
  const std::vector<BitVector>& columns() const { return columns_; }
  bool get(std::size_t row, std::size_t col) const { return columns_[col].get(row); }

  void append_column(BitVector c);

  /// Row view: n vectors of length m.
  std::vector<BitVector> rows() const;
  std::size_t ones() const;

  friend bool operator==(const ParityMatrix&, const ParityMatrix&) = default;

 private:
  std::size_t qubits_ = 0;
  std::vector<BitVector> columns_;
};

/// Symmetric third-order tensor over F2, stored on sorted triples a <= b <= c.
class SignatureTensor {
 public:
  SignatureTensor() = default;
  explicit SignatureTensor(std::size_t n);

  std::size_t dimension() const { return n_; }
  /// Any index order; the tensor is symmetric.
  bool entry(std::size_t a, std::size_t b, std::size_t c) const;
  void set(std::size_t a, std::size_t b, std::size_t c, bool value);
  void flip(std::size_t a, std::size_t b, std::size_t c);
  std::size_t nonzeros() const { return bits_.popcount(); }
  const BitVector& packed() const { return bits_; }

  friend bool operator==(const SignatureTensor&, const SignatureTensor&) = default;

 private:
  std::size_t index(std::size_t a, std::size_t b, std::size_t c) const;

  std::size_t n_ = 0;
  BitVector bits_;
};

/// A(a,b,c) = sum_j P(a,j) P(b,j) P(c,j) mod 2.
SignatureTensor signature_tensor(const ParityMatrix& p);

/// Removes zero columns and cancels duplicate columns in pairs. Survivors
/// keep the position of their first occurrence.
ParityMatrix simplify(const ParityMatrix& p);

/// Exact equality. Throws std::invalid_argument on a dimension mismatch.
bool tensors_equal(const SignatureTensor& a, const SignatureTensor& b);

/// Fraction of one-bits among the n*m entries; 0 for an empty matrix.
double density(const ParityMatrix& p);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text format: optional '#' comment lines, a header "n m", then n rows of
/// exactly m characters from {0,1}. Trailing whitespace is rejected.
ParityMatrix read_parity_matrix(std::istream& in);
void write_parity_matrix(std::ostream& out, const ParityMatrix& p);

ParityMatrix load_parity_matrix(const std::string& path);
void save_parity_matrix(const std::string& path, const ParityMatrix& p,
                        const std::vector<std::string>& comments = {});

}  // namespace vartodd
