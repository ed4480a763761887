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

#ifndef GSEMIT_ROUTE_HPP
#define GSEMIT_ROUTE_HPP

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsemit/circuit.hpp"
#include "gsemit/mitigate.hpp"
#include "gsemit/noise.hpp"
#include "gsemit/profile.hpp"

namespace gsemit {

class RouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Two-copy swap measurement
// ---------------------------------------------------------------------------

struct SwapBasis {
  CMatrix b_sigma;  // rows as printed: |00>, (|01>-|10>)/sqrt2 ... basis change
  CMatrix d;        // diag(1, -1, 1, 1)
};

/// B_sigma^dagger D B_sigma equals the two-qubit SWAP.
SwapBasis swap_diag();
CMatrix swap_matrix();

/// Tr[Lambda (rho1 (x) rho2)] = Tr[rho1 rho2] from the explicit 2N-qubit
/// register swap.
double derangement_trace(const DensityMatrix& rho1, const DensityMatrix& rho2);

/// Tr[(O (x) I) Lambda (rho1 (x) rho2)] = Tr[O rho2 rho1].
Complex derangement_trace(const DensityMatrix& rho1, const DensityMatrix& rho2,
                          const PauliSum& o);

/// Tr[(O (x) I) Lambda sigma] for a 2N-qubit sigma whose first N qubits are
/// the copy O acts on. Contracts indices without forming Lambda.
Complex swap_weighted_trace(const CMatrix& sigma, const PauliSum& o);

/// Sum_x d(x) sigma(x, x) where d is the product of D signs over `pairs`.
/// After B_sigma on every pair this is the swap expectation.
double diagonal_overlap(const CMatrix& sigma, std::span<const std::pair<int, int>> pairs,
                        int n_qubits);

/// Appends a native realisation of B_sigma on (a, b): two CX plus SX/RZ.
void append_b_sigma(Circuit& c, int a, int b);

struct MeasurementCircuit {
  Circuit circuit;  // 2n qubits, B_sigma on (k, n + k)
  bool noisy = false;
};

MeasurementCircuit build_measurement_circuit(int n, bool noisy_bs);

// ---------------------------------------------------------------------------
// Connectivity and routing
// ---------------------------------------------------------------------------

class CouplingGraph {
 public:
  CouplingGraph(int n_qubits, std::vector<Edge> edges, std::vector<std::string> labels = {});

  static CouplingGraph linear(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& neighbors(int q) const { return adjacency_.at(q); }

  bool adjacent(int a, int b) const;
  bool connected() const;
  /// Breadth-first shortest path from a to b inclusive, neighbours in
  /// ascending order. Empty when unreachable.
  std::vector<int> shortest_path(int a, int b) const;
  int distance(int a, int b) const;

 private:
  int n_qubits_;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::vector<int>> adjacency_;
};

CouplingGraph parse_graph(const std::string& json_text);
CouplingGraph load_graph(const std::filesystem::path& path);

/// CX counts of an entangled-measurement workload.
struct GateLedger {
  std::size_t g_vqe = 0;         // state preparation of both copies
  std::size_t g_swap_total = 0;  // 3 CX per inserted SWAP
  std::size_t g_derange = 0;     // CX of the measured workload itself
  std::size_t g_tot = 0;

  static GateLedger make(std::size_t g_vqe, std::size_t g_swap_total, std::size_t g_derange);
  bool consistent() const { return g_tot == g_vqe + g_swap_total + g_derange; }
};

inline constexpr std::size_t kCxPerSwap = 3;

/// A simple path of `length` nodes; isometric paths are preferred.
std::vector<int> find_layout_path(const CouplingGraph& graph, int length);

/// A routed workload on physical qubits. Layouts map logical -> physical.
struct RoutedCircuit {
  Circuit circuit;
  std::vector<int> initial_layout;
  std::vector<int> final_layout;
  std::vector<std::pair<int, int>> swaps;  // physical pairs, in order
  GateLedger ledger;
};

/// Alternating-SWAP interleaving of a_1..a_N b_1..b_N along a path into
/// a_1 b_1 ... a_N b_N, then B_sigma on each adjacent pair. Logical a_k is
/// qubit k, b_k is qubit N + k.
struct AlternatingRoute {
  RoutedCircuit routed;
  std::vector<int> path;
  std::size_t formula_swaps = 0;  // closed form N(N+1)/2
};

AlternatingRoute alternating_swap_route(int n, const CouplingGraph& graph, std::size_t g_vqe = 0);

/// Gate-by-gate legalisation: the first operand of each non-adjacent CX
/// walks a shortest path until it neighbours the second. The default
/// layout is the identity.
RoutedCircuit greedy_baseline_route(const Circuit& c, const CouplingGraph& graph,
                                    std::span<const int> initial_layout = {},
                                    std::size_t g_vqe = 0);

/// Block-layout measurement circuit of the greedy baseline, placed along
/// the same path the alternating route uses.
RoutedCircuit greedy_measurement_route(int n, const CouplingGraph& graph, std::size_t g_vqe = 0);

/// Permutation unitary taking logical basis states to physical ones.
CMatrix layout_permutation(std::span<const int> logical_to_physical, int n_qubits);

// ---------------------------------------------------------------------------
// Measured two-copy moments
// ---------------------------------------------------------------------------

enum class Routing { None, Alternating, Greedy };

std::string_view routing_name(Routing r);
Routing parse_routing(std::string_view name);

/// Measurement stage on a 2n-qubit line. Logical qubit l starts on qubit l.
struct MeasurementSetup {
  int n = 0;
  Circuit stage{1};
  Circuit ideal_inverse{1};
  bool noisy = false;
  DeviceProfile profile;
};

MeasurementSetup make_measurement_setup(int n, Routing routing, const DeviceProfile& profile,
                                        bool noisy);

/// Evaluates Tr[rho_i rho_j] and Tr[rho_i rho_j H] by running rho_j (x) rho_i
/// through the stage, undoing it ideally, and taking the swap-weighted
/// traces. Noise in the stage is what remains.
PairEvaluator measured_pair_evaluator(std::shared_ptr<const MeasurementSetup> setup);

}  // namespace gsemit

#endif  // GSEMIT_ROUTE_HPP
