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

#include "vartodd/gf2.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vartodd {

namespace {

void require_same_length(const BitVector& a, const BitVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

Word tail_mask(std::size_t size) {
  const std::size_t rem = size % kWordBits;
  return rem == 0 ? ~Word{0} : (Word{1} << rem) - 1;
}

}  // namespace

BitVector BitVector::unit(std::size_t size, std::size_t index) {
  BitVector v(size);
  v.set(index);
  return v;
}

BitVector BitVector::ones(std::size_t size) {
  BitVector v(size);
  std::fill(v.words_.begin(), v.words_.end(), ~Word{0});
  if (!v.words_.empty()) v.words_.back() &= tail_mask(size);
  return v;
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("BitVector::from_string: invalid character '" +
                                  std::string(1, bits[i]) + "'");
    }
  }
  return v;
}

std::size_t BitVector::popcount() const {
  std::size_t total = 0;
  for (Word w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool BitVector::any() const {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

std::size_t BitVector::find_first() const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) {
      return k * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
  }
  return size_;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  require_same_length(*this, other, "xor");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  require_same_length(*this, other, "and");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

void BitVector::push_back(bool value) {
  resize(size_ + 1);
  set(size_ - 1, value);
}

void BitVector::resize(std::size_t size) {
  words_.resize(words_for(size), 0);
  size_ = size;
  if (!words_.empty()) words_.back() &= tail_mask(size);
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t k = a.words_.size(); k-- > 0;) {
    if (auto c = a.words_[k] <=> b.words_[k]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

BitVector operator^(BitVector a, const BitVector& b) {
  a ^= b;
  return a;
}

BitVector operator&(BitVector a, const BitVector& b) {
  a &= b;
  return a;
}

BitVector& xor_in_place(BitVector& a, const BitVector& b) {
  return a ^= b;
}

bool and_popcount_parity(const BitVector& a, const BitVector& b) {
  require_same_length(a, b, "and_popcount_parity");
  const auto wa = a.words();
  const auto wb = b.words();
  Word acc = 0;
  for (std::size_t k = 0; k < wa.size(); ++k) acc ^= wa[k] & wb[k];
  return (std::popcount(acc) & 1) != 0;
}

std::size_t BitVectorHash::operator()(const BitVector& v) const noexcept {
  // FNV-1a over the packed words, seeded with the length.
  std::uint64_t h = 1469598103934665603ULL ^ v.size();
  for (Word w : v.words()) {
    h ^= w;
    h *= 1099511628211ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_data_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows, std::size_t cols)
    : rows_(rows.size()), cols_(cols), row_data_(std::move(rows)) {
  for (const auto& r : row_data_) {
    if (r.size() != cols_) throw std::invalid_argument("BitMatrix: ragged rows");
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_strings(std::span<const std::string_view> rows) {
  std::vector<BitVector> data;
  data.reserve(rows.size());
  for (auto r : rows) data.push_back(BitVector::from_string(r));
  const std::size_t cols = data.empty() ? 0 : data.front().size();
  return BitMatrix(std::move(data), cols);
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_data_[r].get(c)) v.set(r);
  }
  return v;
}

void BitMatrix::set_column(std::size_t c, const BitVector& v) {
  if (v.size() != rows_) throw std::invalid_argument("BitMatrix::set_column: length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) row_data_[r].set(c, v.get(r));
}

void BitMatrix::append_row(BitVector row) {
  if (row.size() != cols_) throw std::invalid_argument("BitMatrix::append_row: length mismatch");
  row_data_.push_back(std::move(row));
  ++rows_;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto& row = row_data_[r];
    for (std::size_t c = row.find_first(); c < cols_; ++c) {
      if (row.get(c)) t.set(c, r);
    }
  }
  return t;
}

BitVector BitMatrix::multiply(const BitVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("BitMatrix::multiply: length mismatch");
  BitVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (and_popcount_parity(row_data_[r], v)) out.set(r);
  }
  return out;
}

EchelonForm reduced_echelon(const BitMatrix& m) {
  EchelonForm form;
  form.cols = m.cols();
  std::vector<BitVector> work(m.row_span().begin(), m.row_span().end());
  std::size_t next = 0;
  for (std::size_t c = 0; c < m.cols() && next < work.size(); ++c) {
    std::size_t pivot = next;
    while (pivot < work.size() && !work[pivot].get(c)) ++pivot;
    if (pivot == work.size()) continue;
    std::swap(work[next], work[pivot]);
    for (std::size_t r = 0; r < work.size(); ++r) {
      if (r != next && work[r].get(c)) work[r] ^= work[next];
    }
    form.pivots.push_back(c);
    ++next;
  }
  work.resize(next);
  form.rows = std::move(work);
  return form;
}

std::size_t rank(const BitMatrix& m) {
  return reduced_echelon(m).pivots.size();
}

std::vector<BitVector> nullspace_basis(const BitMatrix& m) {
  const EchelonForm form = reduced_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : form.pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  basis.reserve(m.cols() - form.pivots.size());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector v(m.cols());
    v.set(f);
    for (std::size_t r = 0; r < form.rows.size(); ++r) {
      if (form.rows[r].get(f)) v.set(form.pivots[r]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

BitVector SpanBasis::reduce(BitVector v) const {
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    if (v.get(pivots_[k])) v ^= basis_[k];
  }
  return v;
}

bool SpanBasis::insert(BitVector v) {
  if (v.size() != length_) throw std::invalid_argument("SpanBasis::insert: length mismatch");
  v = reduce(std::move(v));
  const std::size_t p = v.find_first();
  if (p == v.size()) return false;
  // Keep the basis fully reduced on pivots so reduce() is a single pass.
  for (auto& b : basis_) {
    if (b.get(p)) b ^= v;
  }
  basis_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

bool SpanBasis::contains(BitVector v) const {
  if (v.size() != length_) throw std::invalid_argument("SpanBasis::contains: length mismatch");
  return reduce(std::move(v)).none();
}

}  // namespace vartodd
