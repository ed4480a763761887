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

#ifndef GSEMIT_MITIGATE_HPP
#define GSEMIT_MITIGATE_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsemit/circuit.hpp"
#include "gsemit/noise.hpp"
#include "gsemit/qcore.hpp"

namespace gsemit {

class MitigationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which coupler bases span the subspace. The metric is always I / 2^N.
struct SubspaceSpec {
  enum class Kind { Fault, Power };

  Kind kind = Kind::Fault;
  std::vector<std::size_t> indices;  // Fault: members of the state family
  int max_power = 1;                 // Power: bases rho^0 .. rho^max_power

  static SubspaceSpec fault(std::vector<std::size_t> indices);
  static SubspaceSpec power(int max_power);

  void validate() const;
  std::size_t dimension() const;
};

struct MitigationResult {
  std::string method;
  double energy = 0.0;
  std::vector<Complex> coefficients;
  std::vector<double> metric_spectrum;
  std::size_t rank_kept = 0;
};

/// Two-copy moments Tr[rho_i rho_j] and Tr[rho_i rho_j H].
struct PairMoments {
  Complex overlap;
  Complex energy;
};

/// Source of two-copy moments. The default evaluates dense traces; the
/// entangled-measurement path in route supplies a measured one.
using PairEvaluator =
    std::function<PairMoments(const DensityMatrix& rho_i, const DensityMatrix& rho_j,
                              const PauliSum& h)>;

PairMoments direct_pair_moments(const DensityMatrix& rho_i, const DensityMatrix& rho_j,
                                const PauliSum& h);

MitigationResult raw_energy(const DensityMatrix& rho, const PauliSum& h);

/// Tr[rho^m H] / Tr[rho^m]. For m = 2 the moments come from `pairs` when given.
MitigationResult vd_energy(const DensityMatrix& rho, const PauliSum& h, int m,
                           const PairEvaluator& pairs = {});

/// Subspace matrices with the 1/2^N metric factor kept explicitly.
/// Fault: H_ij = Tr[rho_i rho_j H] / 2^N. Power: H_ij = Tr[rho^(i+j) H] / 2^N.
std::pair<CMatrix, CMatrix> build_gse_matrices(std::span<const DensityMatrix> family,
                                               const PauliSum& h, const SubspaceSpec& spec,
                                               const PairEvaluator& pairs = {});

/// Minimal kept generalized eigenvalue of the subspace pencil.
MitigationResult gse_energy(std::span<const DensityMatrix> family, const PauliSum& h,
                            const SubspaceSpec& spec, double rel_threshold = 1e-10,
                            const PairEvaluator& pairs = {});

}  // namespace gsemit

#endif  // GSEMIT_MITIGATE_HPP
