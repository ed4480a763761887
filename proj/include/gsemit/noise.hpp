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

#ifndef GSEMIT_NOISE_HPP
#define GSEMIT_NOISE_HPP

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gsemit/circuit.hpp"
#include "gsemit/profile.hpp"
#include "gsemit/qcore.hpp"

namespace gsemit {

class NoiseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense 2^n x 2^n state. Construction does not validate; call validate()
/// where the physicality contract matters.
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, CMatrix matrix);

  static DensityMatrix zero_state(int n_qubits);
  static DensityMatrix maximally_mixed(int n_qubits);
  static DensityMatrix from_pure(const CVector& psi);

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return matrix_; }
  CMatrix& mutable_matrix() { return matrix_; }

  double trace() const;
  double purity() const;
  double min_eigenvalue() const;
  /// <psi| rho |psi> for a normalised pure reference.
  double fidelity(const CVector& psi) const;

  /// Trace 1, Hermitian and PSD within `tol` (eigenvalue floor -1e-9).
  void validate(double tol = 1e-10) const;

 private:
  int n_qubits_;
  CMatrix matrix_;
};

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

using Kraus2 = std::array<Complex, 4>;  // row-major 2x2

// Kraus sets of the single-qubit channels, for completeness checks.
std::vector<Kraus2> depolarizing_kraus(double p);
std::vector<Kraus2> amplitude_damping_kraus(double t_ns, double t1_ns);
std::vector<Kraus2> dephasing_kraus(double t_ns, double t2_ns);

/// (1-p) rho + p/3 (X rho X + Y rho Y + Z rho Z) on `qubit`.
DensityMatrix depolarize(const DensityMatrix& rho, int qubit, double p);
/// gamma = 1 - exp(-t/T1); |1> relaxes to |0>.
DensityMatrix amplitude_damp(const DensityMatrix& rho, int qubit, double t_ns, double t1_ns);
/// Off-diagonals scaled by exp(-t/T2).
DensityMatrix dephase(const DensityMatrix& rho, int qubit, double t_ns, double t2_ns);
/// Unitary X/Y/Z mixture with the given probabilities (identity gets the rest).
DensityMatrix pauli_channel(const DensityMatrix& rho, int qubit, std::array<double, 3> pxyz);

/// Environment CX gates run alongside system CX gates. Keys and values are
/// gate indices into the simulated circuit.
struct CrosstalkSchedule {
  std::map<std::size_t, std::vector<std::size_t>> concurrent;
};

struct SimulationOptions {
  bool noisy = true;
  std::optional<CrosstalkSchedule> crosstalk;
  /// Extra Pauli insertions after each noisy gate at (stretch - 1) times the
  /// gate's depolarising rate. 1 means none.
  double pauli_stretch = 1.0;
};

/// Per-Pauli insertion probabilities (X, Y, Z) for a base depolarising rate
/// under the stretch; throws when the total exceeds 1.
std::array<double, 3> stretched_pauli_probs(double base_p, double stretch);

/// Runs a bound, native circuit from `initial`. When noisy, SX/CX are
/// followed by single-qubit depolarising on their operands, then T1/T2 on
/// every qubit for the gate duration. DELAY decoheres its own qubit only.
DensityMatrix evolve(const DensityMatrix& initial, const Circuit& c, const DeviceProfile& profile,
                     const SimulationOptions& options = {});

/// evolve() from |0...0>.
DensityMatrix simulate(const Circuit& c, const DeviceProfile& profile,
                       const SimulationOptions& options = {});

/// Tr[rho O]; throws when the imaginary part exceeds 1e-8.
double expectation(const DensityMatrix& rho, const PauliSum& o);

/// Tr[rho O] without the reality check (O need not be Hermitian-paired).
Complex trace_with_pauli(const CMatrix& rho, const PauliSum& o);

}  // namespace gsemit

#endif  // GSEMIT_NOISE_HPP
