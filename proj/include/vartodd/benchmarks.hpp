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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vartodd/parity.hpp"

namespace vartodd {

/// Polynomial over F2; bit k is the coefficient of x^k.
using Gf2Poly = std::uint64_t;

std::size_t degree(Gf2Poly p);
/// Trial division by every polynomial of degree 1..deg/2.
bool is_irreducible(Gf2Poly p);

/// Most-significant coefficient first: "1011" is x^3 + x + 1.
Gf2Poly parse_modulus(const std::string& bits);
std::string format_modulus(Gf2Poly p);

/// Irreducible modulus shipped for n = 2..16.
Gf2Poly default_modulus(std::size_t n);

struct MultiplicationSpec {
  std::size_t n = 0;
  Gf2Poly modulus = 0;
};

/// (i, j, k): a_i b_j contributes to c_k of a * b mod modulus.
struct TrilinearTerm {
  std::size_t i, j, k;
};

std::vector<TrilinearTerm> multiplication_terms(const MultiplicationSpec& spec);

/// 3n-qubit CCZ network of the multiplier before simplification: seven
/// parities on wires {i, n + j, 2n + k} per term.
ParityMatrix gf2n_ccz_network(const MultiplicationSpec& spec);

struct Gf2nBenchmark {
  ParityMatrix matrix;  // simplified
  SignatureTensor tensor;
  std::size_t terms = 0;
  std::size_t raw_columns = 0;
};

/// Throws std::invalid_argument for a modulus that is not irreducible of
/// degree n.
Gf2nBenchmark gen_gf2n(const MultiplicationSpec& spec);

/// m uniformly random nonzero columns on n qubits, simplified.
ParityMatrix gen_random(std::size_t n, std::size_t m, std::uint64_t seed);

struct VerifyReport {
  bool equivalent = false;
  std::size_t rho_a = 0, rho_b = 0;
  double density_a = 0.0, density_b = 0.0;
  /// (rho_b + density_b) - (rho_a + density_a).
  double fitness_delta = 0.0;
};

/// Throws std::invalid_argument on a qubit-count mismatch.
VerifyReport verify(const ParityMatrix& a, const ParityMatrix& b);

}  // namespace vartodd
