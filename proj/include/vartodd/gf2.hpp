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

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vartodd {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

/// Packed vector over F2.
///
/// Bit i lives in word i / 64 at position i % 64 (little-endian within the
/// word). Bits at positions >= size() are always zero, so word-wise
/// comparisons and hashes are well defined.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

  static BitVector unit(std::size_t size, std::size_t index);
  static BitVector ones(std::size_t size);
  /// Parses a string of '0'/'1' characters; character i is bit i.
  static BitVector from_string(std::string_view bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
  void set(std::size_t i, bool value = true) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

  std::size_t popcount() const;
  bool any() const;
  bool none() const { return !any(); }
  /// Index of the lowest set bit, or size() when the vector is zero.
  std::size_t find_first() const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  /// Appends one bit, growing the vector.
  void push_back(bool value);
  void resize(std::size_t size);

  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;
  /// Canonical ordering: by length, then packed words from the most
  /// significant word down.
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b);

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

BitVector operator^(BitVector a, const BitVector& b);
BitVector operator&(BitVector a, const BitVector& b);

/// a := a xor b. Throws std::invalid_argument on a length mismatch.
BitVector& xor_in_place(BitVector& a, const BitVector& b);

/// popcount(a & b) mod 2. Throws std::invalid_argument on a length mismatch.
bool and_popcount_parity(const BitVector& a, const BitVector& b);

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept;
};

/// Dense row-major matrix over F2.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  explicit BitMatrix(std::vector<BitVector> rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  /// One string per row, each of '0'/'1' characters.
  static BitMatrix from_strings(std::span<const std::string_view> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return row_data_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { row_data_[r].set(c, value); }

  const BitVector& row(std::size_t r) const { return row_data_[r]; }
  BitVector& row(std::size_t r) { return row_data_[r]; }
  std::span<const BitVector> row_span() const { return row_data_; }

  BitVector column(std::size_t c) const;
  void set_column(std::size_t c, const BitVector& v);

  void append_row(BitVector row);

  BitMatrix transpose() const;
  /// Matrix-vector product over F2.
  BitVector multiply(const BitVector& v) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> row_data_;
};

/// Reduced row echelon form produced by Gaussian elimination with row-swap
/// pivoting on the leftmost unseen column.
struct EchelonForm {
  std::vector<BitVector> rows;        // one per pivot, in pivot-column order
  std::vector<std::size_t> pivots;    // pivot column of each row
  std::size_t cols = 0;
};

EchelonForm reduced_echelon(const BitMatrix& m);

std::size_t rank(const BitMatrix& m);

/// Basis of {y : m y = 0}, one vector per free column in increasing
/// free-column order. Empty iff the kernel is trivial.
std::vector<BitVector> nullspace_basis(const BitMatrix& m);

/// Incremental row-space membership structure.
///
/// Keeps a reduced basis keyed by pivot bit. Used to test whether a vector
/// lies in the span of a set of vectors.
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t length) : length_(length) {}

  /// Adds v to the span; returns false if it was already dependent.
  bool insert(BitVector v);
  bool contains(BitVector v) const;
  std::size_t dimension() const { return basis_.size(); }

 private:
  BitVector reduce(BitVector v) const;

  std::size_t length_;
  std::vector<BitVector> basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace vartodd
