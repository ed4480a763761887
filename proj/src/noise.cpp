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

#include "gsemit/noise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

#include "kernels.hpp"

namespace gsemit {

DensityMatrix::DensityMatrix(int n_qubits, CMatrix matrix)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (n_qubits <= 0 || matrix_.rows() != dim || matrix_.cols() != dim) {
    throw NoiseError(fmt::format("density matrix for {} qubits must be {}x{}, got {}x{}", n_qubits,
                                 dim, dim, matrix_.rows(), matrix_.cols()));
  }
}

DensityMatrix DensityMatrix::zero_state(int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  CMatrix m = CMatrix::Zero(dim, dim);
  m(0, 0) = 1.0;
  return DensityMatrix(n_qubits, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  return DensityMatrix(n_qubits, CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
  const int n = dimension_to_qubits(static_cast<std::size_t>(psi.size()));
  const CVector unit = psi / psi.norm();
  return DensityMatrix(n, unit * unit.adjoint());
}

double DensityMatrix::trace() const { return matrix_.trace().real(); }

double DensityMatrix::purity() const {
  // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
  return matrix_.squaredNorm();
}

double DensityMatrix::min_eigenvalue() const { return eigh(matrix_).eigenvalues(0); }

double DensityMatrix::fidelity(const CVector& psi) const {
  if (psi.size() != matrix_.rows()) {
    throw NoiseError("fidelity: reference state has the wrong dimension");
  }
  return (psi.adjoint() * matrix_ * psi)(0, 0).real();
}

void DensityMatrix::validate(double tol) const {
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
    throw NoiseError(fmt::format("density matrix trace {:.3e} differs from 1",
                                 std::abs(matrix_.trace())));
  }
  if (hermiticity_defect(matrix_) > tol) {
    throw NoiseError("density matrix is not Hermitian");
  }
  if (min_eigenvalue() < -1e-9) {
    throw NoiseError("density matrix has a negative eigenvalue");
  }
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw NoiseError("trace_distance: qubit counts differ");
  }
  const EigResult e = eigh(a.matrix() - b.matrix());
  return 0.5 * e.eigenvalues.cwiseAbs().sum();
}

// ---------------------------------------------------------------------------

namespace {

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw NoiseError(fmt::format("{}: probability {} outside [0, 1]", what, p));
  }
}

void require_time(double t_ns, double tau_ns, const char* what) {
  if (!(t_ns >= 0.0)) {
    throw NoiseError(fmt::format("{}: duration must be nonnegative", what));
  }
  if (!(tau_ns > 0.0)) {
    throw NoiseError(fmt::format("{}: coherence time must be positive", what));
  }
}

void require_qubit(const DensityMatrix& rho, int q) {
  if (q < 0 || q >= rho.n_qubits()) {
    throw NoiseError(fmt::format("qubit {} outside register of {}", q, rho.n_qubits()));
  }
}

detail::Superop superop(const std::vector<Kraus2>& kraus) {
  return detail::superop_from_kraus(std::span<const detail::Mat2>(kraus.data(), kraus.size()));
}

DensityMatrix apply_channel(const DensityMatrix& rho, int q, const std::vector<Kraus2>& kraus) {
  require_qubit(rho, q);
  DensityMatrix out = rho;
  detail::apply_superop(out.mutable_matrix(), qubit_mask(rho.n_qubits(), q), superop(kraus));
  return out;
}

}  // namespace

std::vector<Kraus2> depolarizing_kraus(double p) {
  require_probability(p, "depolarize");
  const double a = std::sqrt(1.0 - p);
  const double b = std::sqrt(p / 3.0);
  const Complex i(0.0, 1.0);
  return {Kraus2{a, 0.0, 0.0, a}, Kraus2{0.0, b, b, 0.0}, Kraus2{0.0, -i * b, i * b, 0.0},
          Kraus2{b, 0.0, 0.0, -b}};
}

std::vector<Kraus2> amplitude_damping_kraus(double t_ns, double t1_ns) {
  require_time(t_ns, t1_ns, "amplitude_damp");
  const double survive = std::exp(-t_ns / t1_ns);
  return {Kraus2{1.0, 0.0, 0.0, std::sqrt(survive)}, Kraus2{0.0, std::sqrt(1.0 - survive), 0.0, 0.0}};
}

std::vector<Kraus2> dephasing_kraus(double t_ns, double t2_ns) {
  require_time(t_ns, t2_ns, "dephase");
  const double coherence = std::exp(-t_ns / t2_ns);
  const double a = std::sqrt((1.0 + coherence) / 2.0);
  const double b = std::sqrt((1.0 - coherence) / 2.0);
  return {Kraus2{a, 0.0, 0.0, a}, Kraus2{b, 0.0, 0.0, -b}};
}

DensityMatrix depolarize(const DensityMatrix& rho, int qubit, double p) {
  return apply_channel(rho, qubit, depolarizing_kraus(p));
}

DensityMatrix amplitude_damp(const DensityMatrix& rho, int qubit, double t_ns, double t1_ns) {
  return apply_channel(rho, qubit, amplitude_damping_kraus(t_ns, t1_ns));
}

DensityMatrix dephase(const DensityMatrix& rho, int qubit, double t_ns, double t2_ns) {
  return apply_channel(rho, qubit, dephasing_kraus(t_ns, t2_ns));
}

namespace {

std::vector<Kraus2> pauli_kraus(std::array<double, 3> pxyz) {
  double total = 0.0;
  for (double p : pxyz) {
    require_probability(p, "pauli_channel");
    total += p;
  }
  if (total > 1.0 + 1e-15) {
    throw NoiseError(fmt::format("pauli_channel: probabilities sum to {} > 1", total));
  }
  const Complex i(0.0, 1.0);
  const double a = std::sqrt(std::max(0.0, 1.0 - total));
  const double x = std::sqrt(pxyz[0]), y = std::sqrt(pxyz[1]), z = std::sqrt(pxyz[2]);
  return {Kraus2{a, 0.0, 0.0, a}, Kraus2{0.0, x, x, 0.0}, Kraus2{0.0, -i * y, i * y, 0.0},
          Kraus2{z, 0.0, 0.0, -z}};
}

}  // namespace

DensityMatrix pauli_channel(const DensityMatrix& rho, int qubit, std::array<double, 3> pxyz) {
  return apply_channel(rho, qubit, pauli_kraus(pxyz));
}

std::array<double, 3> stretched_pauli_probs(double base_p, double stretch) {
  if (!(stretch >= 1.0)) {
    throw NoiseError(fmt::format("pauli stretch {} must be >= 1", stretch));
  }
  const double extra = (stretch - 1.0) * base_p;
  if (extra > 1.0) {
    throw NoiseError(fmt::format("stretched Pauli probability {} exceeds 1", extra));
  }
  return {extra / 3.0, extra / 3.0, extra / 3.0};
}

// ---------------------------------------------------------------------------

namespace {

class NoisyRunner {
 public:
  NoisyRunner(CMatrix& rho, int n, const DeviceProfile& profile, const SimulationOptions& options)
      : rho_(rho), n_(n), profile_(profile), options_(options) {}

  void depolarize_qubit(int q, double p) {
    if (p <= 0.0) return;
    detail::apply_superop(rho_, qubit_mask(n_, q), superop(depolarizing_kraus(p)));
  }

  void stretch_qubit(int q, double base_p) {
    if (options_.pauli_stretch == 1.0 || base_p <= 0.0) return;
    const auto probs = stretched_pauli_probs(base_p, options_.pauli_stretch);
    detail::apply_superop(rho_, qubit_mask(n_, q), superop(pauli_kraus(probs)));
  }

  void decohere(int q, double t_ns) {
    if (t_ns <= 0.0) return;
    detail::apply_superop(rho_, qubit_mask(n_, q), decoherence(q, t_ns));
  }

  void decohere_all(double t_ns) {
    for (int q = 0; q < n_; ++q) decohere(q, t_ns);
  }

 private:
  // T1 then T2, cached per (qubit, duration).
  const detail::Superop& decoherence(int q, double t_ns) {
    auto key = std::make_pair(q, t_ns);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const auto t1 = superop(amplitude_damping_kraus(t_ns, profile_.t1_ns[q]));
      const auto t2 = superop(dephasing_kraus(t_ns, profile_.t2_ns[q]));
      it = cache_.emplace(key, detail::compose(t2, t1)).first;
    }
    return it->second;
  }

  CMatrix& rho_;
  int n_;
  const DeviceProfile& profile_;
  const SimulationOptions& options_;
  std::map<std::pair<int, double>, detail::Superop> cache_;
};

double crosstalk_factor(const DeviceProfile& profile, const Edge& system, const Edge& env) {
  for (const auto& x : profile.crosstalk) {
    if (x.system == system && x.environment == env) return x.factor;
  }
  throw NoiseError(fmt::format("crosstalk schedule pairs ({}, {}) with ({}, {}) but the profile "
                               "has no such entry",
                               system.a, system.b, env.a, env.b));
}

void apply_unitary(CMatrix& rho, int n, const Gate& g) {
  const CMatrix u = gate_unitary(g);
  if (g.qubits.size() == 1) {
    detail::conjugate1(rho, qubit_mask(n, g.qubits[0]), detail::to_mat2(u));
  } else {
    detail::conjugate2(rho, qubit_mask(n, g.qubits[0]), qubit_mask(n, g.qubits[1]),
                       detail::to_mat4(u));
  }
}

}  // namespace

DensityMatrix evolve(const DensityMatrix& initial, const Circuit& c, const DeviceProfile& profile,
                     const SimulationOptions& options) {
  const int n = c.n_qubits();
  if (initial.n_qubits() != n) {
    throw NoiseError(fmt::format("evolve: state has {} qubits, circuit {}", initial.n_qubits(), n));
  }
  if (c.num_params() != 0) {
    throw NoiseError("evolve: circuit has unbound parameters");
  }
  if (n > profile.n_qubits) {
    throw NoiseError(fmt::format("evolve: circuit needs {} qubits, profile has {}", n,
                                 profile.n_qubits));
  }
  if (!(options.pauli_stretch >= 1.0)) {
    throw NoiseError("evolve: pauli_stretch must be >= 1");
  }

  const auto& gates = c.gates();
  std::set<std::size_t> environment_gates;
  if (options.crosstalk) {
    for (const auto& [sys, envs] : options.crosstalk->concurrent) {
      if (sys >= gates.size() || gates[sys].kind != GateKind::CX) {
        throw NoiseError(fmt::format("crosstalk schedule: gate {} is not a CX", sys));
      }
      for (std::size_t e : envs) {
        if (e >= gates.size() || gates[e].kind != GateKind::CX || e == sys) {
          throw NoiseError(fmt::format("crosstalk schedule: environment gate {} is not a CX", e));
        }
        environment_gates.insert(e);
      }
    }
  }

  CMatrix rho = initial.matrix();
  NoisyRunner runner(rho, n, profile, options);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    if (environment_gates.count(i)) continue;  // run with its system gate
    switch (g.kind) {
      case GateKind::CZ:
        throw NoiseError("evolve: circuit contains CZ; transpile it first");
      case GateKind::Barrier:
        break;
      case GateKind::RZ:
        apply_unitary(rho, n, g);
        break;
      case GateKind::SX: {
        apply_unitary(rho, n, g);
        if (options.noisy) {
          const int q = g.qubits[0];
          runner.depolarize_qubit(q, profile.sx_depol[q]);
          runner.stretch_qubit(q, profile.sx_depol[q]);
          runner.decohere_all(g.duration_ns);
        }
        break;
      }
      case GateKind::CX: {
        const int a = g.qubits[0], b = g.qubits[1];
        const double base = profile.cx_depol_for(a, b);
        double p = base;
        std::vector<const Gate*> env;
        if (options.crosstalk) {
          auto it = options.crosstalk->concurrent.find(i);
          if (it != options.crosstalk->concurrent.end()) {
            for (std::size_t e : it->second) {
              const Gate& eg = gates[e];
              p *= crosstalk_factor(profile, Edge(a, b), Edge(eg.qubits[0], eg.qubits[1]));
              env.push_back(&eg);
            }
          }
        }
        if (p > 1.0) {
          throw NoiseError(fmt::format("boosted CX error {} on ({}, {}) exceeds 1", p, a, b));
        }
        apply_unitary(rho, n, g);
        if (options.noisy) {
          runner.depolarize_qubit(a, p);
          runner.depolarize_qubit(b, p);
          runner.stretch_qubit(a, base);
          runner.stretch_qubit(b, base);
        }
        for (const Gate* eg : env) {
          apply_unitary(rho, n, *eg);
          if (options.noisy) {
            const double pe = profile.cx_depol_for(eg->qubits[0], eg->qubits[1]);
            runner.depolarize_qubit(eg->qubits[0], pe);
            runner.depolarize_qubit(eg->qubits[1], pe);
          }
        }
        if (options.noisy) {
          runner.decohere_all(g.duration_ns);
        }
        break;
      }
      case GateKind::Delay:
        if (options.noisy) {
          runner.decohere(g.qubits[0], g.duration_ns);
        }
        break;
    }
  }
  return DensityMatrix(n, std::move(rho));
}

DensityMatrix simulate(const Circuit& c, const DeviceProfile& profile,
                       const SimulationOptions& options) {
  return evolve(DensityMatrix::zero_state(c.n_qubits()), c, profile, options);
}

Complex trace_with_pauli(const CMatrix& rho, const PauliSum& o) {
  const std::size_t dim = std::size_t{1} << o.n_qubits();
  if (static_cast<std::size_t>(rho.rows()) != dim) {
    throw NoiseError("expectation: observable and state sizes differ");
  }
  // Tr[P rho] = sum_y phase(y) rho(y, y ^ flip).
  Complex total = 0.0;
  for (const auto& t : o.terms()) {
    const PauliAction act(t.paulis);
    Complex acc = 0.0;
    for (std::size_t y = 0; y < dim; ++y) {
      acc += act.phase(y) * rho(y, y ^ act.flip);
    }
    total += t.coeff * acc;
  }
  return total;
}

double expectation(const DensityMatrix& rho, const PauliSum& o) {
  if (rho.n_qubits() != o.n_qubits()) {
    throw NoiseError("expectation: observable and state sizes differ");
  }
  const Complex v = trace_with_pauli(rho.matrix(), o);
  if (std::abs(v.imag()) > 1e-8) {
    throw NoiseError(fmt::format("expectation: imaginary part {:.3e}", v.imag()));
  }
  return v.real();
}

}  // namespace gsemit
