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

#include "vartodd/benchmarks.hpp"

#include <bit>
#include <random>
#include <stdexcept>

#include "vartodd/policy.hpp"

namespace vartodd {

namespace {

Gf2Poly poly_mod(Gf2Poly a, Gf2Poly m) {
  const std::size_t dm = degree(m);
  while (a != 0 && degree(a) >= dm) a ^= m << (degree(a) - dm);
  return a;
}

// x^e mod m.
Gf2Poly monomial_mod(std::size_t e, Gf2Poly m) {
  Gf2Poly r = 1;
  for (std::size_t k = 0; k < e; ++k) r = poly_mod(r << 1, m);
  return r;
}

}  // namespace

std::size_t degree(Gf2Poly p) {
  if (p == 0) throw std::invalid_argument("degree of the zero polynomial");
  return 63 - static_cast<std::size_t>(std::countl_zero(p));
}

bool is_irreducible(Gf2Poly p) {
  if (p < 2) return false;
  const std::size_t d = degree(p);
  for (Gf2Poly q = 2; q != 0 && degree(q) <= d / 2; ++q) {
    if (poly_mod(p, q) == 0) return false;
  }
  return true;
}

Gf2Poly parse_modulus(const std::string& bits) {
  if (bits.empty() || bits.size() > 33 || bits.front() != '1') {
    throw std::invalid_argument("modulus must be a bit string starting with 1 (at most degree 32)");
  }
  Gf2Poly p = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("modulus: invalid character");
    p = (p << 1) | static_cast<Gf2Poly>(c == '1');
  }
  return p;
}

std::string format_modulus(Gf2Poly p) {
  std::string out;
  for (std::size_t k = degree(p) + 1; k-- > 0;) out.push_back(((p >> k) & 1U) != 0 ? '1' : '0');
  return out;
}

Gf2Poly default_modulus(std::size_t n) {
  // Low-weight irreducible polynomials, x^n + (tail).
  static constexpr std::array<Gf2Poly, 17> kTails = {
      0, 0,
      0b11,          // x^2 + x + 1
      0b11,          // x^3 + x + 1
      0b11,          // x^4 + x + 1
      0b101,         // x^5 + x^2 + 1
      0b11,          // x^6 + x + 1
      0b11,          // x^7 + x + 1
      0b11011,       // x^8 + x^4 + x^3 + x + 1
      0b10001,       // x^9 + x^4 + 1
      0b1001,        // x^10 + x^3 + 1
      0b101,         // x^11 + x^2 + 1
      0b1001,        // x^12 + x^3 + 1
      0b11011,       // x^13 + x^4 + x^3 + x + 1
      0b100001,      // x^14 + x^5 + 1
      0b11,          // x^15 + x + 1
      0b101011,      // x^16 + x^5 + x^3 + x + 1
  };
  if (n < 2 || n > 16) throw std::invalid_argument("no default modulus for this degree");
  return (Gf2Poly{1} << n) | kTails[n];
}

std::vector<TrilinearTerm> multiplication_terms(const MultiplicationSpec& spec) {
  std::vector<TrilinearTerm> terms;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      const Gf2Poly r = monomial_mod(i + j, spec.modulus);
      for (std::size_t k = 0; k < spec.n; ++k) {
        if ((r >> k) & 1U) terms.push_back({i, j, k});
      }
    }
  }
  return terms;
}

ParityMatrix gf2n_ccz_network(const MultiplicationSpec& spec) {
  const std::size_t qubits = 3 * spec.n;
  ParityMatrix p(qubits);
  for (const auto& t : multiplication_terms(spec)) {
    const std::size_t wires[3] = {t.i, spec.n + t.j, 2 * spec.n + t.k};
    for (unsigned mask = 1; mask < 8; ++mask) {
      BitVector c(qubits);
      for (unsigned w = 0; w < 3; ++w) {
        if ((mask >> w) & 1U) c.set(wires[w]);
      }
      p.append_column(std::move(c));
    }
  }
  return p;
}

Gf2nBenchmark gen_gf2n(const MultiplicationSpec& spec) {
  if (spec.modulus == 0 || degree(spec.modulus) != spec.n) {
    throw std::invalid_argument("modulus degree must equal n");
  }
  if (!is_irreducible(spec.modulus)) throw std::invalid_argument("modulus is reducible");
  const ParityMatrix raw = gf2n_ccz_network(spec);
  Gf2nBenchmark out;
  out.raw_columns = raw.column_count();
  out.matrix = simplify(raw);
  out.tensor = signature_tensor(out.matrix);
  out.terms = out.raw_columns / 7;
  return out;
}

ParityMatrix gen_random(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw std::invalid_argument("gen_random: n and m must be positive");
  Rng rng(seed);
  ParityMatrix p(n);
  for (std::size_t j = 0; j < m; ++j) {
    BitVector c(n);
    do {
      for (std::size_t i = 0; i < n; ++i) c.set(i, (rng() >> 63) != 0);
    } while (c.none());
    p.append_column(std::move(c));
  }
  return simplify(p);
}

VerifyReport verify(const ParityMatrix& a, const ParityMatrix& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("verify: qubit counts differ");
  VerifyReport r;
  r.equivalent = tensors_equal(signature_tensor(a), signature_tensor(b));
  r.rho_a = a.column_count();
  r.rho_b = b.column_count();
  r.density_a = density(a);
  r.density_b = density(b);
  r.fitness_delta = (static_cast<double>(r.rho_b) + r.density_b) -
                    (static_cast<double>(r.rho_a) + r.density_a);
  return r;
}

}  // namespace vartodd
