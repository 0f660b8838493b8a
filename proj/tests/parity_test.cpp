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

#include <algorithm>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "vartodd/parity.hpp"

using namespace vartodd;
using vartodd::testing::random_matrix;

namespace {

// Direct triple-loop evaluation of the tensor.
bool tensor_entry(const ParityMatrix& p, std::size_t a, std::size_t b, std::size_t c) {
  bool v = false;
  for (std::size_t j = 0; j < p.column_count(); ++j) v ^= p.get(a, j) && p.get(b, j) && p.get(c, j);
  return v;
}

ParityMatrix read(const std::string& text) {
  std::istringstream in(text);
  return read_parity_matrix(in);
}

}  // namespace

TEST_CASE("signature tensor matches the triple loop") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const ParityMatrix p = random_matrix(1 + rng() % 7, rng() % 15, rng, false);
    const SignatureTensor t = signature_tensor(p);
    const std::size_t n = p.qubits();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t c = 0; c < n; ++c) CHECK(t.entry(a, b, c) == tensor_entry(p, a, b, c));
      }
    }
  }
}

TEST_CASE("CCZ-7 tensor is the all-distinct indicator") {
  const ParityMatrix p = ParityMatrix::all_nonzero(3);
  CHECK(p.column_count() == 7);
  const SignatureTensor t = signature_tensor(p);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t c = 0; c < 3; ++c) CHECK(t.entry(a, b, c) == (a != b && b != c && a != c));
    }
  }
  CHECK(density(p) == doctest::Approx(12.0 / 21.0).epsilon(1e-15));
}

TEST_CASE("identity and CCZ-7 differ") {
  CHECK_FALSE(tensors_equal(signature_tensor(ParityMatrix::identity(3)),
                            signature_tensor(ParityMatrix::all_nonzero(3))));
  CHECK_THROWS_AS(tensors_equal(SignatureTensor(2), SignatureTensor(3)), std::invalid_argument);
}

TEST_CASE("simplify laws on random matrices") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const ParityMatrix p = random_matrix(1 + rng() % 5, rng() % 20, rng, false);
    const ParityMatrix s = simplify(p);
    CHECK(simplify(s) == s);
    CHECK(tensors_equal(signature_tensor(s), signature_tensor(p)));
    std::map<BitVector, std::size_t> count;
    for (const auto& c : p.columns()) ++count[c];
    std::size_t expected = 0;
    for (const auto& [c, k] : count) expected += (c.any() && k % 2 == 1) ? 1 : 0;
    CHECK(s.column_count() == expected);
    for (const auto& c : s.columns()) {
      CHECK(c.any());
      CHECK(count[c] % 2 == 1);
    }
  }
}

TEST_CASE("simplify keeps first-occurrence order") {
  const ParityMatrix p = ParityMatrix::from_rows({"10110", "01011"});
  // columns: 10, 01, 11, 10, 01 -> 10 and 01 cancel, 11 stays
  const ParityMatrix s = simplify(p);
  REQUIRE(s.column_count() == 1);
  CHECK(s.column(0).to_string() == "11");
  const ParityMatrix q = ParityMatrix::from_rows({"1010", "0110"});
  // columns: 10, 01, 11, 00
  const ParityMatrix t = simplify(q);
  REQUIRE(t.column_count() == 3);
  CHECK(t.column(0).to_string() == "10");
  CHECK(t.column(2).to_string() == "11");
}

TEST_CASE("density") {
  CHECK(density(ParityMatrix(4)) == 0.0);
  CHECK(density(ParityMatrix::identity(4)) == doctest::Approx(0.25));
}

TEST_CASE("text format round trip") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const ParityMatrix p = random_matrix(1 + rng() % 9, rng() % 30, rng, false);
    std::ostringstream out;
    write_parity_matrix(out, p);
    CHECK(read(out.str()) == p);
  }
}

TEST_CASE("text format accepts comments and rejects malformed input") {
  const ParityMatrix p = read("# comment\n2 3\n# inner\n101\n011\n");
  CHECK(p.qubits() == 2);
  CHECK(p.column_count() == 3);
  CHECK(p.column(2).to_string() == "11");
  CHECK_THROWS_AS(read("2 3\n101 \n011\n"), ParseError);
  CHECK_THROWS_AS(read("2 3\n101\r\n011\n"), ParseError);
  CHECK_THROWS_AS(read("2 3\n10\n011\n"), ParseError);
  CHECK_THROWS_AS(read("2 3\n101\n"), ParseError);
  CHECK_THROWS_AS(read("2 3\n102\n011\n"), ParseError);
  CHECK_THROWS_AS(read("two 3\n"), ParseError);
  CHECK_THROWS_AS(read(""), ParseError);
}
