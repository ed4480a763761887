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

#include "gsemit/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "kernels.hpp"

namespace gsemit {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::SX: return "sx";
    case GateKind::RZ: return "rz";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::Barrier: return "barrier";
    case GateKind::Delay: return "delay";
  }
  return "?";
}

namespace {

Gate make_gate(GateKind kind, std::vector<int> qubits) {
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  return g;
}

}  // namespace

Gate Gate::sx(int q) { return make_gate(GateKind::SX, {q}); }

Gate Gate::rz(int q, double angle) {
  Gate g = make_gate(GateKind::RZ, {q});
  g.angle = angle;
  return g;
}

Gate Gate::rz_param(int q, std::size_t slot, double offset) {
  Gate g = rz(q, offset);
  g.param = slot;
  return g;
}

Gate Gate::cx(int control, int target) { return make_gate(GateKind::CX, {control, target}); }
Gate Gate::cz(int a, int b) { return make_gate(GateKind::CZ, {a, b}); }

Gate Gate::delay(int q, double duration_ns) {
  Gate g = make_gate(GateKind::Delay, {q});
  g.duration_ns = duration_ns;
  return g;
}

Gate Gate::barrier(std::vector<int> qubits) { return make_gate(GateKind::Barrier, std::move(qubits)); }

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) {
    throw CircuitError("circuit: n_qubits must be positive");
  }
}

void Circuit::append(Gate gate) {
  std::size_t arity = 0;
  switch (gate.kind) {
    case GateKind::SX:
    case GateKind::RZ:
    case GateKind::Delay: arity = 1; break;
    case GateKind::CX:
    case GateKind::CZ: arity = 2; break;
    case GateKind::Barrier: arity = gate.qubits.size(); break;
  }
  if (gate.qubits.size() != arity) {
    throw CircuitError(fmt::format("{} expects {} qubit(s), got {}", gate_name(gate.kind), arity,
                                   gate.qubits.size()));
  }
  for (int q : gate.qubits) {
    if (q < 0 || q >= n_qubits_) {
      throw CircuitError(fmt::format("{} on qubit {} outside register of {}", gate_name(gate.kind),
                                     q, n_qubits_));
    }
  }
  if (arity == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw CircuitError(fmt::format("{} needs two distinct qubits", gate_name(gate.kind)));
  }
  if (!(gate.duration_ns >= 0.0)) {
    throw CircuitError("gate duration must be nonnegative");
  }
  if (gate.kind == GateKind::RZ) {
    gate.duration_ns = 0.0;
  }
  if (gate.param && (gate.kind != GateKind::RZ || *gate.param >= param_names_.size())) {
    throw CircuitError("parameter slot must reference an existing parameter on an RZ gate");
  }
  gates_.push_back(std::move(gate));
}

void Circuit::append(const Circuit& other) {
  if (other.n_qubits_ > n_qubits_ || other.num_params() != 0) {
    throw CircuitError("append: incompatible circuit");
  }
  for (const auto& g : other.gates_) {
    append(g);
  }
}

std::size_t Circuit::add_parameter(std::string name) {
  param_names_.push_back(std::move(name));
  return param_names_.size() - 1;
}

std::size_t Circuit::count(GateKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

Circuit Circuit::bind(std::span<const double> params) const {
  if (params.size() != param_names_.size()) {
    throw CircuitError(fmt::format("bind: circuit has {} parameters, got {}", param_names_.size(),
                                   params.size()));
  }
  Circuit out(n_qubits_);
  out.gates_.reserve(gates_.size());
  for (Gate g : gates_) {
    if (g.param) {
      g.angle += params[*g.param];
      g.param.reset();
    }
    out.gates_.push_back(std::move(g));
  }
  return out;
}

Circuit Circuit::remapped(std::span<const int> map, int n_qubits) const {
  if (map.size() != static_cast<std::size_t>(n_qubits_)) {
    throw CircuitError("remapped: map size must equal the register size");
  }
  Circuit out(n_qubits);
  out.param_names_ = param_names_;
  for (Gate g : gates_) {
    for (int& q : g.qubits) q = map[q];
    out.append(std::move(g));
  }
  return out;
}

Circuit Circuit::inverse() const {
  if (num_params() != 0) {
    throw CircuitError("inverse: circuit must be bound");
  }
  Circuit out(n_qubits_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    const Gate& g = *it;
    switch (g.kind) {
      case GateKind::SX: {
        // SX^dagger = Z SX Z up to phase.
        const int q = g.qubits[0];
        out.append(Gate::rz(q, kPi));
        out.append(Gate::sx(q));
        out.append(Gate::rz(q, kPi));
        break;
      }
      case GateKind::RZ: out.append(Gate::rz(g.qubits[0], -g.angle)); break;
      case GateKind::CX:
      case GateKind::CZ: out.append(make_gate(g.kind, g.qubits)); break;
      case GateKind::Barrier:
      case GateKind::Delay: break;
    }
  }
  return out;
}

bool Circuit::is_native() const {
  return std::none_of(gates_.begin(), gates_.end(),
                      [](const Gate& g) { return g.kind == GateKind::CZ; });
}

CMatrix gate_unitary(const Gate& gate) {
  if (gate.param) {
    throw CircuitError("gate_unitary: gate has an unbound parameter");
  }
  switch (gate.kind) {
    case GateKind::SX: {
      CMatrix m(2, 2);
      const Complex p(0.5, 0.5), q(0.5, -0.5);
      m << p, q, q, p;
      return m;
    }
    case GateKind::RZ: {
      CMatrix m = CMatrix::Identity(2, 2);
      m(1, 1) = std::polar(1.0, -gate.angle);
      return m;
    }
    case GateKind::CX: {
      CMatrix m = CMatrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::CZ: {
      CMatrix m = CMatrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::Barrier:
    case GateKind::Delay: break;
  }
  throw CircuitError(fmt::format("gate_unitary: {} has no unitary", gate_name(gate.kind)));
}

// ---------------------------------------------------------------------------

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) {
    throw CircuitError("PauliSum: n_qubits must be positive");
  }
}

void PauliSum::add(double coeff, std::string paulis) {
  if (static_cast<int>(paulis.size()) != n_qubits_) {
    throw CircuitError(fmt::format("Pauli string '{}' does not have {} letters", paulis, n_qubits_));
  }
  for (char c : paulis) {
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
      throw CircuitError(fmt::format("Pauli string '{}' contains '{}'", paulis, c));
    }
  }
  terms_.push_back({coeff, std::move(paulis)});
}

CMatrix PauliSum::to_matrix() const {
  const std::size_t dim = std::size_t{1} << n_qubits_;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& t : terms_) {
    const PauliAction act(t.paulis);
    for (std::size_t x = 0; x < dim; ++x) {
      out(x ^ act.flip, x) += t.coeff * act.phase(x);
    }
  }
  return out;
}

PauliAction::PauliAction(const std::string& paulis) {
  const int n = static_cast<int>(paulis.size());
  for (int q = 0; q < n; ++q) {
    const std::size_t m = qubit_mask(n, q);
    switch (paulis[q]) {
      case 'X': flip |= m; break;
      case 'Y':
        flip |= m;
        y_mask |= m;
        break;
      case 'Z': z_mask |= m; break;
      default: break;
    }
  }
}

Complex PauliAction::phase(std::size_t x) const {
  // Y|0> = i|1>, Y|1> = -i|0>, Z|b> = (-1)^b |b>.
  static const Complex kIPow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  const int ys = std::popcount(y_mask);
  const int sign = std::popcount(x & (y_mask | z_mask)) & 1;
  const Complex p = kIPow[ys & 3];
  return sign ? -p : p;
}

PauliSum build_tfi(int n, double h) {
  if (n < 2) {
    throw CircuitError("build_tfi: need at least two sites");
  }
  PauliSum out(n);
  // Closed ring; for two sites the wrap bond is the same bond, so it is not doubled.
  const int bonds = n == 2 ? 1 : n;
  for (int r = 0; r < bonds; ++r) {
    std::string s(n, 'I');
    s[r] = s[(r + 1) % n] = 'Z';
    out.add(-1.0, s);
  }
  for (int r = 0; r < n; ++r) {
    std::string s(n, 'I');
    s[r] = 'X';
    out.add(h, s);
  }
  return out;
}

namespace {

void rotation_layer(Circuit& c, int layer) {
  for (int q = 0; q < c.n_qubits(); ++q) {
    const std::size_t a = c.add_parameter(fmt::format("ry[{}][{}]", layer, q));
    const std::size_t b = c.add_parameter(fmt::format("rz[{}][{}]", layer, q));
    c.append(Gate::sx(q));
    c.append(Gate::rz_param(q, a, kPi));
    c.append(Gate::sx(q));
    c.append(Gate::rz_param(q, b, kPi));
  }
}

void append_hadamard(Circuit& c, int q, double duration) {
  Gate s = Gate::sx(q);
  s.duration_ns = duration;
  c.append(Gate::rz(q, -kPi / 2));
  c.append(std::move(s));
  c.append(Gate::rz(q, -kPi / 2));
}

}  // namespace

Circuit build_ansatz(int n, int depth) {
  if (n < 2 || depth < 1) {
    throw CircuitError("build_ansatz: need n >= 2 and depth >= 1");
  }
  Circuit c(n);
  rotation_layer(c, 0);
  for (int d = 1; d <= depth; ++d) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        c.append(Gate::cz(a, b));
      }
    }
    rotation_layer(c, d);
  }
  return c;
}

Circuit transpile(const Circuit& c, const DeviceProfile& profile) {
  if (c.n_qubits() > profile.n_qubits) {
    throw CircuitError(fmt::format("transpile: circuit uses {} qubits, profile has {}",
                                   c.n_qubits(), profile.n_qubits));
  }
  Circuit out(c.n_qubits());
  for (const auto& name : c.param_names()) {
    out.add_parameter(name);
  }
  for (Gate g : c.gates()) {
    switch (g.kind) {
      case GateKind::SX:
        g.duration_ns = profile.sx_duration_ns;
        out.append(std::move(g));
        break;
      case GateKind::CX:
        g.duration_ns = profile.cx_duration_for(g.qubits[0], g.qubits[1]);
        out.append(std::move(g));
        break;
      case GateKind::CZ: {
        const int a = g.qubits[0], b = g.qubits[1];
        Gate cx = Gate::cx(a, b);
        cx.duration_ns = profile.cx_duration_for(a, b);
        append_hadamard(out, b, profile.sx_duration_ns);
        out.append(std::move(cx));
        append_hadamard(out, b, profile.sx_duration_ns);
        break;
      }
      case GateKind::RZ:
      case GateKind::Barrier:
      case GateKind::Delay: out.append(std::move(g)); break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Applies every unitary gate of a bound circuit to the columns of `m`.
void apply_circuit_columns(const Circuit& c, CMatrix& m) {
  const int n = c.n_qubits();
  const std::size_t dim = static_cast<std::size_t>(m.rows());
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Barrier || g.kind == GateKind::Delay) continue;
    const CMatrix u = gate_unitary(g);
    if (g.qubits.size() == 1) {
      const auto u2 = detail::to_mat2(u);
      const std::size_t mask = qubit_mask(n, g.qubits[0]);
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        detail::apply_vec1(m.data() + col * dim, 1, dim, mask, u2);
      }
    } else {
      const auto u4 = detail::to_mat4(u);
      const std::size_t hi = qubit_mask(n, g.qubits[0]);
      const std::size_t lo = qubit_mask(n, g.qubits[1]);
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        detail::apply_vec2(m.data() + col * dim, 1, dim, hi, lo, u4);
      }
    }
  }
}

}  // namespace

CVector run_statevector(const Circuit& c, std::span<const double> params) {
  const Circuit bound = c.bind(params);
  const std::size_t dim = std::size_t{1} << c.n_qubits();
  CMatrix psi = CMatrix::Zero(dim, 1);
  psi(0, 0) = 1.0;
  apply_circuit_columns(bound, psi);
  return psi.col(0);
}

CMatrix circuit_unitary(const Circuit& c, std::span<const double> params) {
  const Circuit bound = c.bind(params);
  const std::size_t dim = std::size_t{1} << c.n_qubits();
  CMatrix u = CMatrix::Identity(dim, dim);
  apply_circuit_columns(bound, u);
  return u;
}

double statevector_energy(const Circuit& c, const PauliSum& h, std::span<const double> params) {
  if (h.n_qubits() != c.n_qubits()) {
    throw CircuitError("statevector_energy: observable and circuit sizes differ");
  }
  const CVector psi = run_statevector(c, params);
  double e = 0.0;
  for (const auto& t : h.terms()) {
    const PauliAction act(t.paulis);
    Complex acc = 0.0;
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
      const std::size_t ux = static_cast<std::size_t>(x);
      acc += std::conj(psi(ux ^ act.flip)) * act.phase(ux) * psi(x);
    }
    e += t.coeff * acc.real();
  }
  return e;
}

double exact_ground_energy(const PauliSum& h) { return eigh(h.to_matrix()).eigenvalues(0); }

}  // namespace gsemit
