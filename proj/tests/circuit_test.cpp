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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "gsemit/profile.hpp"
#include "test_util.hpp"

using namespace gsemit;
using gsemit::testing::max_abs;
using gsemit::testing::single_qubit_op;

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix sx_matrix() {
  CMatrix m(2, 2);
  m << Complex(1, 1), Complex(1, -1), Complex(1, -1), Complex(1, 1);
  return m / 2.0;
}

CMatrix rz_matrix(double t) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = std::polar(1.0, -t);
  return m;
}

CMatrix cz_dense(int n, int a, int b) {
  const std::size_t dim = std::size_t{1} << n;
  CMatrix m = CMatrix::Identity(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    if ((x & qubit_mask(n, a)) && (x & qubit_mask(n, b))) m(x, x) = -1.0;
  }
  return m;
}

// Independent dense oracle for circuits over {SX, RZ, CZ}.
CMatrix dense_unitary(const Circuit& c, const std::vector<double>& params) {
  const int n = c.n_qubits();
  const std::size_t dim = std::size_t{1} << n;
  CMatrix u = CMatrix::Identity(dim, dim);
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::SX: u = single_qubit_op(n, g.qubits[0], sx_matrix()) * u; break;
      case GateKind::RZ: {
        const double t = g.angle + (g.param ? params[*g.param] : 0.0);
        u = single_qubit_op(n, g.qubits[0], rz_matrix(t)) * u;
        break;
      }
      case GateKind::CZ: u = cz_dense(n, g.qubits[0], g.qubits[1]) * u; break;
      default: ADD_FAILURE() << "oracle does not handle " << gate_name(g.kind);
    }
  }
  return u;
}

// Term-by-term Kronecker realisation of a Pauli sum.
CMatrix kron_terms(const PauliSum& o) {
  const std::size_t dim = std::size_t{1} << o.n_qubits();
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& t : o.terms()) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (char ch : t.paulis) {
      m = kron(m, ch == 'X'   ? pauli::x()
                  : ch == 'Y' ? pauli::y()
                  : ch == 'Z' ? pauli::z()
                              : pauli::identity());
    }
    out += t.coeff * m;
  }
  return out;
}

std::vector<double> random_params(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> p(count);
  for (auto& v : p) v = u(rng);
  return p;
}

}  // namespace

TEST(Gates, SxSquaredIsX) {
  Circuit c(1);
  c.append(Gate::sx(0));
  c.append(Gate::sx(0));
  EXPECT_LT(phase_insensitive_distance(circuit_unitary(c), pauli::x()), 1e-12);
  EXPECT_LT(max_abs(gate_unitary(Gate::sx(0)) - sx_matrix()), 1e-15);
}

TEST(Gates, RzUsesHardwareConvention) {
  EXPECT_LT(max_abs(gate_unitary(Gate::rz(0, 0.3)) - rz_matrix(0.3)), 1e-15);
}

TEST(Gates, CxMatrixAsPrinted) {
  const CMatrix cx = gate_unitary(Gate::cx(0, 1));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = expected(2, 3) = expected(3, 2) = 1.0;
  EXPECT_LT(max_abs(cx - expected), 1e-15);
}

TEST(Gates, ValidationErrors) {
  Circuit c(2);
  EXPECT_THROW(c.append(Gate::cx(0, 0)), CircuitError);
  EXPECT_THROW(c.append(Gate::sx(2)), CircuitError);
  EXPECT_THROW(c.append(Gate::delay(0, -1.0)), CircuitError);
  Gate bad = Gate::sx(0);
  bad.qubits.push_back(1);
  EXPECT_THROW(c.append(bad), CircuitError);
  EXPECT_THROW(c.append(Gate::rz_param(0, 3)), CircuitError);
  Gate rz = Gate::rz(0, 1.0);
  rz.duration_ns = 50.0;
  c.append(rz);
  EXPECT_EQ(c.gates().back().duration_ns, 0.0);
}

TEST(BuildTfi, RingGroundEnergies) {
  EXPECT_NEAR(exact_ground_energy(build_tfi(3, 1.0)), -4.0, 1e-9);
  EXPECT_NEAR(exact_ground_energy(build_tfi(5, 1.0)), -6.47, 0.005);
}

TEST(BuildTfi, TwoSitesMatchesAnalyticValue) {
  EXPECT_NEAR(exact_ground_energy(build_tfi(2, 1.0)), -std::sqrt(5.0), 1e-12);
}

TEST(BuildTfi, TermStructure) {
  const PauliSum h = build_tfi(4, 0.7);
  int zz = 0, x = 0;
  for (const auto& t : h.terms()) {
    if (t.paulis.find('X') != std::string::npos) {
      ++x;
      EXPECT_DOUBLE_EQ(t.coeff, 0.7);
    } else {
      ++zz;
      EXPECT_DOUBLE_EQ(t.coeff, -1.0);
    }
  }
  EXPECT_EQ(zz, 4);  // ring bonds
  EXPECT_EQ(x, 4);
  EXPECT_EQ(build_tfi(2, 1.0).terms().size(), 3u);
}

TEST(BuildTfi, RejectsSingleSite) { EXPECT_THROW(build_tfi(1, 1.0), CircuitError); }

TEST(PauliSum, DenseMatchesKroneckerTerms) {
  PauliSum o(3);
  o.add(0.5, "XYZ");
  o.add(-1.25, "IZI");
  o.add(2.0, "YYI");
  EXPECT_LT(max_abs(o.to_matrix() - kron_terms(o)), 1e-12);
  const PauliSum h = build_tfi(4, 1.3);
  EXPECT_LT(max_abs(h.to_matrix() - kron_terms(h)), 1e-12);
  EXPECT_LT(hermiticity_defect(o.to_matrix()), 1e-15);
}

TEST(PauliSum, RejectsBadStrings) {
  PauliSum o(2);
  EXPECT_THROW(o.add(1.0, "X"), CircuitError);
  EXPECT_THROW(o.add(1.0, "XQ"), CircuitError);
}

TEST(BuildAnsatz, ParameterCount) {
  EXPECT_EQ(build_ansatz(3, 1).num_params(), 12u);
  EXPECT_EQ(build_ansatz(3, 10).num_params(), 66u);
  for (int n = 2; n <= 5; ++n)
    for (int d = 1; d <= 10; ++d)
      EXPECT_EQ(build_ansatz(n, d).num_params(), static_cast<std::size_t>(2 * n * (d + 1)));
}

TEST(BuildAnsatz, CzOnEveryPairPerBlock) {
  const Circuit c = build_ansatz(4, 3);
  EXPECT_EQ(c.count(GateKind::CZ), 3u * 6u);
  std::vector<std::pair<int, int>> first_block;
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::CZ && first_block.size() < 6) first_block.emplace_back(g.qubits[0], g.qubits[1]);
  }
  const std::vector<std::pair<int, int>> expected{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  EXPECT_EQ(first_block, expected);
}

TEST(Transpile, CzLoweringIsEquivalent) {
  Circuit c(2);
  c.append(Gate::cz(0, 1));
  const Circuit t = transpile(c, DeviceProfile::noiseless(2));
  EXPECT_TRUE(t.is_native());
  EXPECT_EQ(t.cx_count(), 1u);
  EXPECT_LT(phase_insensitive_distance(circuit_unitary(t), cz_dense(2, 0, 1)), 1e-10);
}

TEST(Transpile, NativeCircuitIsFixedPoint) {
  Circuit c(2);
  c.append(Gate::sx(0));
  c.append(Gate::rz(1, 0.4));
  c.append(Gate::cx(1, 0));
  c.append(Gate::delay(0, 10.0));
  const Circuit t = transpile(c, DeviceProfile::noiseless(2));
  EXPECT_EQ(t.gates().size(), c.gates().size());
}

TEST(Transpile, AnsatzUsesNativeKindsAndStampsDurations) {
  const DeviceProfile p = DeviceProfile::uniform(3, 1e5, 1e5, 2.5e-4, 1e-2);
  const Circuit t = transpile(build_ansatz(3, 1), p);
  for (const Gate& g : t.gates()) {
    EXPECT_TRUE(g.kind == GateKind::SX || g.kind == GateKind::RZ || g.kind == GateKind::CX ||
                g.kind == GateKind::Delay);
    if (g.kind == GateKind::CX) EXPECT_DOUBLE_EQ(g.duration_ns, 366.2);
    if (g.kind == GateKind::SX) EXPECT_DOUBLE_EQ(g.duration_ns, 35.6);
    if (g.kind == GateKind::RZ) EXPECT_DOUBLE_EQ(g.duration_ns, 0.0);
  }
}

TEST(Transpile, CxCountScalesWithDepth) {
  const DeviceProfile p = DeviceProfile::noiseless(5);
  const double ratio = static_cast<double>(transpile(build_ansatz(5, 5), p).cx_count()) /
                       static_cast<double>(transpile(build_ansatz(5, 1), p).cx_count());
  EXPECT_NEAR(ratio, 5.0, 1.0);
}

TEST(Transpile, UnitaryEquivalenceOnRandomBindings) {
  std::mt19937_64 rng(21);
  for (const auto [n, d] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{4, 1}}) {
    const Circuit c = build_ansatz(n, d);
    const Circuit t = transpile(c, DeviceProfile::noiseless(n));
    const int trials = n == 4 ? 10 : 20;
    for (int trial = 0; trial < trials; ++trial) {
      const auto p = random_params(c.num_params(), rng);
      EXPECT_LT(phase_insensitive_distance(circuit_unitary(t, p), dense_unitary(c, p)), 1e-10);
    }
  }
}

TEST(Transpile, RejectsOversizedCircuit) {
  EXPECT_THROW(transpile(build_ansatz(3, 1), DeviceProfile::noiseless(2)), CircuitError);
}

TEST(Inverse, ComposesToIdentity) {
  std::mt19937_64 rng(4);
  const Circuit c = transpile(build_ansatz(3, 2), DeviceProfile::noiseless(3));
  const Circuit bound = c.bind(random_params(c.num_params(), rng));
  Circuit both = bound;
  both.append(bound.inverse());
  EXPECT_LT(phase_insensitive_distance(circuit_unitary(both), CMatrix::Identity(8, 8)), 1e-10);
  EXPECT_THROW(c.inverse(), CircuitError);
}

TEST(StatevectorEnergy, ZeroParametersMatchDenseOracle) {
  const Circuit c = build_ansatz(3, 1);
  const PauliSum h = build_tfi(3, 1.0);
  const std::vector<double> zeros(c.num_params(), 0.0);
  CVector psi0 = CVector::Zero(8);
  psi0(0) = 1.0;
  const CVector psi = dense_unitary(c, zeros) * psi0;
  const double expected = (psi.adjoint() * h.to_matrix() * psi)(0, 0).real();
  EXPECT_NEAR(statevector_energy(c, h, zeros), expected, 1e-12);
}

TEST(StatevectorEnergy, RandomParametersMatchDenseOracle) {
  std::mt19937_64 rng(8);
  const Circuit c = build_ansatz(3, 2);
  const PauliSum h = build_tfi(3, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_params(c.num_params(), rng);
    CVector psi0 = CVector::Zero(8);
    psi0(0) = 1.0;
    const CVector psi = dense_unitary(c, p) * psi0;
    EXPECT_NEAR(statevector_energy(c, h, p), (psi.adjoint() * h.to_matrix() * psi)(0, 0).real(),
                1e-12);
  }
}

TEST(StatevectorEnergy, VariationalBound) {
  std::mt19937_64 rng(13);
  const Circuit c = build_ansatz(4, 2);
  const PauliSum h = build_tfi(4, 1.0);
  const double e0 = exact_ground_energy(h);
  for (int trial = 0; trial < 50; ++trial) {
    EXPECT_GE(statevector_energy(c, h, random_params(c.num_params(), rng)), e0 - 1e-9);
  }
}

TEST(StatevectorEnergy, TimingGatesAreIgnored) {
  std::mt19937_64 rng(14);
  const Circuit c = build_ansatz(3, 1);
  Circuit padded = c;
  padded.append(Gate::barrier({0, 1, 2}));
  padded.append(Gate::delay(1, 1000.0));
  const PauliSum h = build_tfi(3, 1.0);
  const auto p = random_params(c.num_params(), rng);
  EXPECT_DOUBLE_EQ(statevector_energy(padded, h, p), statevector_energy(c, h, p));
}

TEST(StatevectorEnergy, ParameterCountMismatch) {
  const std::vector<double> few(3, 0.0);
  EXPECT_THROW(statevector_energy(build_ansatz(3, 1), build_tfi(3, 1.0), few), CircuitError);
}

TEST(Optimize, ThreeQubitsDepthTwo) {
  const OptimizeResult r = optimize(build_ansatz(3, 2), build_tfi(3, 1.0), 0);
  EXPECT_GE(r.energy, -4.0 - 1e-9);
  EXPECT_LE(r.energy, -3.996);
  EXPECT_TRUE(r.reached_target);
}

TEST(Optimize, TwoQubitsDepthTwo) {
  const OptimizeResult r = optimize(build_ansatz(2, 2), build_tfi(2, 1.0), 0);
  EXPECT_GE(r.energy, -std::sqrt(5.0) - 1e-9);
  EXPECT_LE(r.energy, -std::sqrt(5.0) + 1e-3);
}

TEST(Optimize, DeterministicForSeed) {
  const Circuit c = build_ansatz(3, 2);
  const PauliSum h = build_tfi(3, 1.0);
  EXPECT_EQ(optimize(c, h, 42).params, optimize(c, h, 42).params);
}

TEST(Optimize, MissedTargetCarriesBestValue) {
  OptimizeOptions options;
  options.restarts = 1;
  try {
    optimize(build_ansatz(4, 2), build_tfi(4, 1.0), 0, options);
    FAIL() << "expected OptimizeError";
  } catch (const OptimizeError& e) {
    EXPECT_FALSE(e.best().reached_target);
    EXPECT_GT(e.best().energy, e.best().exact);
    EXPECT_EQ(e.best().params.size(), build_ansatz(4, 2).num_params());
  }
}

TEST(ParameterFile, RoundTripIsBitExact) {
  ParameterRecord r{3, 2, 17, -3.9999999123456789, {0.1, -2.718281828459045, 1e-300, kPi}};
  const auto path = std::filesystem::temp_directory_path() / "gsemit_params_roundtrip.json";
  save_parameters(path, r);
  const ParameterRecord back = load_parameters(path);
  EXPECT_EQ(back.n_qubits, 3);
  EXPECT_EQ(back.depth, 2);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.energy, r.energy);
  EXPECT_EQ(back.parameters, r.parameters);
  std::filesystem::remove(path);
}

TEST(ParameterFile, RejectsUnknownKeys) {
  const auto path = std::filesystem::temp_directory_path() / "gsemit_params_bad.json";
  std::ofstream(path) << R"({"n_qubits": 2, "depth": 1, "seed": 0, "energy": 0, "parameters": [], "extra": 1})";
  EXPECT_THROW(load_parameters(path), CircuitError);
  std::filesystem::remove(path);
}
