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

#ifndef GSEMIT_CIRCUIT_HPP
#define GSEMIT_CIRCUIT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsemit/profile.hpp"
#include "gsemit/qcore.hpp"

namespace gsemit {

class CircuitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// SX, RZ and CX are the hardware-native set. CZ only exists before
// transpilation. RZ is virtual and takes no time.
enum class GateKind { SX, RZ, CX, CZ, Barrier, Delay };

std::string_view gate_name(GateKind kind);

struct Gate {
  GateKind kind = GateKind::Barrier;
  std::vector<int> qubits;
  // RZ angle in radians. With `param` set the bound angle is
  // angle + params[*param].
  double angle = 0.0;
  std::optional<std::size_t> param;
  double duration_ns = 0.0;

  static Gate sx(int q);
  static Gate rz(int q, double angle);
  static Gate rz_param(int q, std::size_t slot, double offset = 0.0);
  static Gate cx(int control, int target);
  static Gate cz(int a, int b);
  static Gate delay(int q, double duration_ns);
  static Gate barrier(std::vector<int> qubits);
};

/// Ordered gate list over a fixed register, with named parameter slots that
/// feed RZ angles.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t num_params() const { return param_names_.size(); }
  const std::vector<std::string>& param_names() const { return param_names_; }

  /// Validates arity, qubit range and parameter slot, then appends.
  void append(Gate gate);
  void append(const Circuit& other);
  std::size_t add_parameter(std::string name);

  std::size_t count(GateKind kind) const;
  std::size_t cx_count() const { return count(GateKind::CX); }

  /// Copy with every parameterised RZ resolved to a fixed angle.
  Circuit bind(std::span<const double> params) const;

  /// Same gates on a register of `n_qubits`, qubit q relabelled to map[q].
  Circuit remapped(std::span<const int> map, int n_qubits) const;

  /// Adjoint circuit of a bound circuit, built from SX/RZ/CX only. Timing
  /// and noise data are not meaningful on the result.
  Circuit inverse() const;

  bool is_native() const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::string> param_names_;
};

/// 2x2 or 4x4 unitary of a bound gate. SX and RZ follow the hardware
/// convention RZ(t) = diag(1, e^{-it}). CZ and CX act on (qubits[0], qubits[1]).
CMatrix gate_unitary(const Gate& gate);

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

struct PauliTerm {
  double coeff = 0.0;
  std::string paulis;  // one of I, X, Y, Z per qubit, qubit 0 first
};

class PauliSum {
 public:
  explicit PauliSum(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  void add(double coeff, std::string paulis);

  /// Dense 2^n x 2^n realisation.
  CMatrix to_matrix() const;

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Action of a Pauli string on a basis state: P|x> = phase(x) |x ^ flip>.
struct PauliAction {
  std::size_t flip = 0;
  std::size_t y_mask = 0;
  std::size_t z_mask = 0;

  explicit PauliAction(const std::string& paulis);
  Complex phase(std::size_t x) const;
};

/// Transverse-field Ising ring -sum Z_r Z_{r+1} + h sum X_r with site n
/// wrapping to site 0. Two sites share a single bond.
PauliSum build_tfi(int n, double h);

/// Hardware-efficient ansatz with 2n(depth+1) parameters: a rotation layer,
/// then `depth` blocks of CZ on every pair followed by a rotation layer.
/// Each rotation is RY(a) then RZ(b), written as SX, RZ(pi+a), SX, RZ(pi+b).
Circuit build_ansatz(int n, int depth);

/// Lowers to {SX, RZ, CX, DELAY, BARRIER} and stamps gate durations from
/// the profile. CZ(a,b) becomes H(b) CX(a,b) H(b) with H = RZ(-pi/2) SX RZ(-pi/2).
Circuit transpile(const Circuit& c, const DeviceProfile& profile);

// ---------------------------------------------------------------------------
// Noiseless statevector path
// ---------------------------------------------------------------------------

/// Applies a bound circuit to |0...0>. Timing gates are ignored.
CVector run_statevector(const Circuit& c, std::span<const double> params);

/// Dense unitary of the circuit with the given parameters.
CMatrix circuit_unitary(const Circuit& c, std::span<const double> params = {});

/// <psi(theta)| H |psi(theta)>.
double statevector_energy(const Circuit& c, const PauliSum& h, std::span<const double> params);

/// Lowest eigenvalue of the dense Hamiltonian.
double exact_ground_energy(const PauliSum& h);

// ---------------------------------------------------------------------------
// Parameter optimisation
// ---------------------------------------------------------------------------

struct OptimizeOptions {
  int restarts = 12;
  int max_iterations = 2000;
  double gradient_tol = 1e-8;
  /// Accept once within target_rel_error * |E_exact| of the ground energy.
  double target_rel_error = 1e-3;
  /// Throw OptimizeError when the target is missed after all restarts.
  bool require_target = true;
};

struct OptimizeResult {
  std::vector<double> params;
  double energy = 0.0;
  double exact = 0.0;
  int restarts_used = 0;
  bool reached_target = false;
};

class OptimizeError : public std::runtime_error {
 public:
  OptimizeError(const std::string& what, OptimizeResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const OptimizeResult& best() const { return best_; }

 private:
  OptimizeResult best_;
};

/// Seeded multi-start BFGS on the noiseless energy. Gradients use the
/// parameter-shift rule, exact because every parameter feeds a single RZ.
OptimizeResult optimize(const Circuit& c, const PauliSum& h, std::uint64_t seed,
                        const OptimizeOptions& options = {});

struct ParameterRecord {
  int n_qubits = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  double energy = 0.0;
  std::vector<double> parameters;
};

void save_parameters(const std::filesystem::path& path, const ParameterRecord& record);
ParameterRecord load_parameters(const std::filesystem::path& path);
std::string parameters_to_json(const ParameterRecord& record);

}  // namespace gsemit

#endif  // GSEMIT_CIRCUIT_HPP
