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

#ifndef GSEMIT_QCORE_HPP
#define GSEMIT_QCORE_HPP

#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gsemit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised for shape mismatches, non-Hermitian inputs and singular metrics.
class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full spectrum of a Hermitian matrix, eigenvalues ascending.
struct EigResult {
  RVector eigenvalues;
  CMatrix eigenvectors;  // column k belongs to eigenvalues[k]
};

/// Solution of the pencil H c = E S c after discarding small metric
/// directions. Index 0 is the selected (minimal) solution.
struct GenEigResult {
  std::vector<double> energies;
  std::vector<CVector> coefficients;  // unit Euclidean norm
  std::size_t rank_kept = 0;
  std::vector<double> s_eigenvalues;  // full metric spectrum, ascending
};

/// Qubit 0 is the most significant bit of a basis index, so kron(a, b)
/// places `a` on the lower-numbered qubits.
inline std::size_t qubit_mask(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// log2 of a power-of-two dimension; throws otherwise.
int dimension_to_qubits(std::size_t dim);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Kronecker product of a list, left to right.
CMatrix kron_all(std::span<const CMatrix> factors);

/// Reduced matrix on `keep` (order of `keep` is the qubit order of the
/// result, must be ascending and unique).
CMatrix partial_trace(const CMatrix& m, std::span<const int> keep, int n_qubits);

/// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const CMatrix& m);

/// Throws LinalgError when `m` is not square or deviates from its adjoint by
/// more than tol * max(1, ||m||_F).
void require_hermitian(const CMatrix& m, double tol, const char* what);

EigResult eigh(const CMatrix& m);

/// Canonical orthogonalization: drop metric eigendirections below
/// rel_threshold * max eigenvalue, solve the projected Hermitian problem,
/// map back. Degenerate minimal eigenvalues are tie-broken by the largest
/// c^dagger S c.
GenEigResult gen_eigh(const CMatrix& h, const CMatrix& s, double rel_threshold = 1e-10);

/// Operator-norm distance minimised over a global phase.
double phase_insensitive_distance(const CMatrix& a, const CMatrix& b);

namespace pauli {
CMatrix identity();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

/// Random Hermitian matrix with Gaussian entries.
template <typename Rng>
CMatrix random_hermitian(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix m(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t r = 0; r < dim; ++r) {
      m(r, c) = Complex(gauss(rng), gauss(rng));
    }
  }
  return (m + m.adjoint()) * 0.5;
}

}  // namespace gsemit

#endif  // GSEMIT_QCORE_HPP
