// Copyright 2026 The gsemit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSEMIT_TESTS_TEST_UTIL_HPP
#define GSEMIT_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "gsemit/noise.hpp"
#include "gsemit/qcore.hpp"

namespace gsemit::testing {

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

/// Ginibre-distributed mixed state of the given rank (full rank by default).
inline DensityMatrix random_state(int n, std::mt19937_64& rng, std::size_t rank = 0) {
  const std::size_t dim = std::size_t{1} << n;
  const CMatrix g = random_matrix(dim, rank == 0 ? dim : rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(n, rho);
}

inline CVector random_pure(int n, std::mt19937_64& rng) {
  const CMatrix g = random_matrix(std::size_t{1} << n, 1, rng);
  return g.col(0) / g.col(0).norm();
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Dense operator on n qubits from per-qubit 2x2 factors, qubit 0 first.
inline CMatrix single_qubit_op(int n, int q, const CMatrix& u) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? u : pauli::identity());
  return out;
}

}  // namespace gsemit::testing

#endif  // GSEMIT_TESTS_TEST_UTIL_HPP
