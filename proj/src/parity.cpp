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

#include "vartodd/parity.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

namespace vartodd {

ParityMatrix::ParityMatrix(std::size_t qubits, std::vector<BitVector> columns)
    : qubits_(qubits), columns_(std::move(columns)) {
  for (const auto& c : columns_) {
    if (c.size() != qubits_) throw std::invalid_argument("ParityMatrix: column length != qubits");
  }
}

ParityMatrix ParityMatrix::from_rows(const std::vector<std::string>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.front().size();
  std::vector<BitVector> cols(m, BitVector(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw std::invalid_argument("ParityMatrix::from_rows: ragged rows");
    for (std::size_t c = 0; c < m; ++c) {
      if (rows[r][c] == '1') {
        cols[c].set(r);
      } else if (rows[r][c] != '0') {
        throw std::invalid_argument("ParityMatrix::from_rows: invalid character");
      }
    }
  }
  return ParityMatrix(n, std::move(cols));
}

ParityMatrix ParityMatrix::identity(std::size_t n) {
  ParityMatrix p(n);
  for (std::size_t i = 0; i < n; ++i) p.append_column(BitVector::unit(n, i));
  return p;
}

ParityMatrix ParityMatrix::all_nonzero(std::size_t n) {
  if (n >= 20) throw std::invalid_argument("ParityMatrix::all_nonzero: n too large");
  ParityMatrix p(n);
  for (std::size_t v = 1; v < (std::size_t{1} << n); ++v) {
    BitVector c(n);
    for (std::size_t i = 0; i < n; ++i) c.set(i, (v >> i) & 1U);
    p.append_column(std::move(c));
  }
  return p;
}

void ParityMatrix::append_column(BitVector c) {
  if (c.size() != qubits_) throw std::invalid_argument("ParityMatrix::append_column: length mismatch");
  columns_.push_back(std::move(c));
}

std::vector<BitVector> ParityMatrix::rows() const {
  std::vector<BitVector> out(qubits_, BitVector(columns_.size()));
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    const auto& c = columns_[j];
    for (std::size_t i = c.find_first(); i < qubits_; ++i) {
      if (c.get(i)) out[i].set(j);
    }
  }
  return out;
}

std::size_t ParityMatrix::ones() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.popcount();
  return total;
}

SignatureTensor::SignatureTensor(std::size_t n) : n_(n), bits_(n * (n + 1) * (n + 2) / 6) {}

std::size_t SignatureTensor::index(std::size_t a, std::size_t b, std::size_t c) const {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  if (c >= n_) throw std::out_of_range("SignatureTensor: index out of range");
  // Combinatorial number system for multisets: triples with a smaller
  // largest index come first, then smaller middle index.
  return c * (c + 1) * (c + 2) / 6 + b * (b + 1) / 2 + a;
}

bool SignatureTensor::entry(std::size_t a, std::size_t b, std::size_t c) const {
  return bits_.get(index(a, b, c));
}

void SignatureTensor::set(std::size_t a, std::size_t b, std::size_t c, bool value) {
  bits_.set(index(a, b, c), value);
}

void SignatureTensor::flip(std::size_t a, std::size_t b, std::size_t c) {
  bits_.flip(index(a, b, c));
}

SignatureTensor signature_tensor(const ParityMatrix& p) {
  const std::size_t n = p.qubits();
  SignatureTensor t(n);
  if (p.empty()) return t;
  const auto rows = p.rows();
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t b = 0; b <= c; ++b) {
      const BitVector bc = rows[b] & rows[c];
      for (std::size_t a = 0; a <= b; ++a) {
        if (and_popcount_parity(bc, rows[a])) t.set(a, b, c, true);
      }
    }
  }
  return t;
}

ParityMatrix simplify(const ParityMatrix& p) {
  const auto& cols = p.columns();
  std::vector<std::size_t> order(cols.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return cols[i] < cols[j]; });

  std::vector<std::size_t> keep;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t h = g;
    while (h < order.size() && cols[order[h]] == cols[order[g]]) ++h;
    // order[g] is the first occurrence thanks to the stable sort.
    if ((h - g) % 2 == 1 && cols[order[g]].any()) keep.push_back(order[g]);
    g = h;
  }
  std::sort(keep.begin(), keep.end());

  std::vector<BitVector> out;
  out.reserve(keep.size());
  for (std::size_t j : keep) out.push_back(cols[j]);
  return ParityMatrix(p.qubits(), std::move(out));
}

bool tensors_equal(const SignatureTensor& a, const SignatureTensor& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("tensors_equal: dimension mismatch");
  }
  return a == b;
}

double density(const ParityMatrix& p) {
  if (p.empty() || p.qubits() == 0) return 0.0;
  return static_cast<double>(p.ones()) /
         static_cast<double>(p.qubits() * p.column_count());
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    return true;
  }
  return false;
}

void reject_trailing_whitespace(const std::string& line) {
  if (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
    throw ParseError("parity matrix: trailing whitespace");
  }
}

std::size_t parse_count(std::string_view s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("parity matrix: bad count '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

ParityMatrix read_parity_matrix(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw ParseError("parity matrix: missing header");
  reject_trailing_whitespace(line);
  const auto space = line.find(' ');
  if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
    throw ParseError("parity matrix: header must be \"n m\"");
  }
  const std::size_t n = parse_count(std::string_view(line).substr(0, space));
  const std::size_t m = parse_count(std::string_view(line).substr(space + 1));

  std::vector<std::string> rows;
  rows.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!next_content_line(in, line)) throw ParseError("parity matrix: missing rows");
    reject_trailing_whitespace(line);
    if (line.size() != m) {
      throw ParseError("parity matrix: row " + std::to_string(r) + " has " +
                       std::to_string(line.size()) + " characters, expected " +
                       std::to_string(m));
    }
    if (line.find_first_not_of("01") != std::string::npos) {
      throw ParseError("parity matrix: row " + std::to_string(r) + " has invalid characters");
    }
    rows.push_back(line);
  }
  if (n == 0) {
    if (m != 0) throw ParseError("parity matrix: columns without qubits");
    return ParityMatrix(0);
  }
  return ParityMatrix::from_rows(rows);
}

void write_parity_matrix(std::ostream& out, const ParityMatrix& p) {
  out << p.qubits() << ' ' << p.column_count() << '\n';
  const auto rows = p.rows();
  for (const auto& r : rows) out << r.to_string() << '\n';
}

ParityMatrix load_parity_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_parity_matrix(in);
}

void save_parity_matrix(const std::string& path, const ParityMatrix& p,
                        const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& c : comments) out << "# " << c << '\n';
  write_parity_matrix(out, p);
}

}  // namespace vartodd
