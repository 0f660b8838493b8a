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

#include "vartodd/parity.hpp"
#include "vartodd/policy.hpp"

namespace vartodd::testing {

inline BitVector random_nonzero(std::size_t n, Rng& rng) {
  BitVector v(n);
  do {
    for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1U) != 0);
  } while (v.none());
  return v;
}

/// Random n x m matrix; zero columns are allowed unless `nonzero`.
inline ParityMatrix random_matrix(std::size_t n, std::size_t m, Rng& rng, bool nonzero) {
  ParityMatrix p(n);
  for (std::size_t j = 0; j < m; ++j) {
    if (nonzero) {
      p.append_column(random_nonzero(n, rng));
    } else {
      BitVector v(n);
      for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1U) != 0);
      p.append_column(std::move(v));
    }
  }
  return p;
}

}  // namespace vartodd::testing
