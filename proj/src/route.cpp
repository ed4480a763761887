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

#include "gsemit/route.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"

namespace gsemit {

namespace {

constexpr double kPi = std::numbers::pi;

void require_pair(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.n_qubits() != rho2.n_qubits()) {
    throw RouteError(fmt::format("derangement: copies have {} and {} qubits", rho1.n_qubits(),
                                 rho2.n_qubits()));
  }
}

// Lambda sigma with Lambda |u, v> = |v, u> on two n-qubit registers.
CMatrix register_swapped(const CMatrix& sigma, int n) {
  const std::size_t half = std::size_t{1} << n;
  const std::size_t mask = half - 1;
  CMatrix out(sigma.rows(), sigma.cols());
  for (std::size_t r = 0; r < static_cast<std::size_t>(sigma.rows()); ++r) {
    const std::size_t swapped = ((r & mask) << n) | (r >> n);
    out.row(r) = sigma.row(swapped);
  }
  return out;
}

PauliSum pad_identity(const PauliSum& o, int extra) {
  PauliSum out(o.n_qubits() + extra);
  for (const auto& t : o.terms()) out.add(t.coeff, t.paulis + std::string(extra, 'I'));
  return out;
}

}  // namespace

SwapBasis swap_diag() {
  const double r = 1.0 / std::sqrt(2.0);
  CMatrix b = CMatrix::Zero(4, 4);
  b(0, 0) = 1.0;
  b(1, 1) = r;
  b(1, 2) = -r;
  b(2, 1) = r;
  b(2, 2) = r;
  b(3, 3) = 1.0;
  CMatrix d = CMatrix::Identity(4, 4);
  d(1, 1) = -1.0;
  return {b, d};
}

CMatrix swap_matrix() {
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

double derangement_trace(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_pair(rho1, rho2);
  const CMatrix lambda_sigma = register_swapped(kron(rho1.matrix(), rho2.matrix()), rho1.n_qubits());
  return lambda_sigma.trace().real();
}

Complex derangement_trace(const DensityMatrix& rho1, const DensityMatrix& rho2,
                          const PauliSum& o) {
  require_pair(rho1, rho2);
  if (o.n_qubits() != rho1.n_qubits()) {
    throw RouteError("derangement: observable and copy sizes differ");
  }
  const int n = rho1.n_qubits();
  const CMatrix lambda_sigma = register_swapped(kron(rho1.matrix(), rho2.matrix()), n);
  return trace_with_pauli(lambda_sigma, pad_identity(o, n));
}

Complex swap_weighted_trace(const CMatrix& sigma, const PauliSum& o) {
  const int n = o.n_qubits();
  const std::size_t half = std::size_t{1} << n;
  if (static_cast<std::size_t>(sigma.rows()) != half * half || sigma.cols() != sigma.rows()) {
    throw RouteError("swap_weighted_trace: state must span two copies of the observable");
  }
  // Tr[(O x I) Lambda sigma] = sum_{u, v} phase(u) sigma((v, u), (u ^ flip, v)).
  Complex total = 0.0;
  for (const auto& t : o.terms()) {
    const PauliAction act(t.paulis);
    Complex acc = 0.0;
    for (std::size_t u = 0; u < half; ++u) {
      const Complex ph = act.phase(u);
      const std::size_t col_hi = (u ^ act.flip) << n;
      for (std::size_t v = 0; v < half; ++v) {
        acc += ph * sigma((v << n) | u, col_hi | v);
      }
    }
    total += t.coeff * acc;
  }
  return total;
}

double diagonal_overlap(const CMatrix& sigma, std::span<const std::pair<int, int>> pairs,
                        int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (static_cast<std::size_t>(sigma.rows()) != dim) {
    throw RouteError("diagonal_overlap: state size does not match the register");
  }
  double total = 0.0;
  for (std::size_t x = 0; x < dim; ++x) {
    double sign = 1.0;
    for (const auto& [a, b] : pairs) {
      const bool bit_a = x & qubit_mask(n_qubits, a);
      const bool bit_b = x & qubit_mask(n_qubits, b);
      if (!bit_a && bit_b) sign = -sign;  // D = diag(1, -1, 1, 1)
    }
    total += sign * sigma(x, x).real();
  }
  return total;
}

void append_b_sigma(Circuit& c, int a, int b) {
  c.append(Gate::rz(a, -kPi / 2));
  c.append(Gate::sx(a));
  c.append(Gate::rz(a, -kPi));
  c.append(Gate::sx(b));
  c.append(Gate::cx(a, b));
  c.append(Gate::rz(a, -kPi / 2));
  c.append(Gate::sx(a));
  c.append(Gate::rz(a, -5 * kPi / 4));
  c.append(Gate::sx(a));
  c.append(Gate::rz(a, -kPi / 2));
  c.append(Gate::rz(b, kPi / 4));
  c.append(Gate::cx(a, b));
  c.append(Gate::sx(a));
  c.append(Gate::rz(a, -kPi / 2));
  c.append(Gate::rz(b, kPi));
  c.append(Gate::sx(b));
  c.append(Gate::rz(b, kPi));
}

MeasurementCircuit build_measurement_circuit(int n, bool noisy_bs) {
  if (n < 1) {
    throw RouteError("measurement circuit needs at least one qubit per copy");
  }
  MeasurementCircuit m{Circuit(2 * n), noisy_bs};
  for (int k = 0; k < n; ++k) append_b_sigma(m.circuit, k, n + k);
  return m;
}

// ---------------------------------------------------------------------------

CouplingGraph::CouplingGraph(int n_qubits, std::vector<Edge> edges, std::vector<std::string> labels)
    : n_qubits_(n_qubits), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (n_qubits <= 0) {
    throw RouteError("coupling graph needs at least one node");
  }
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n_qubits)) {
    throw RouteError("coupling graph labels must name every node");
  }
  adjacency_.assign(n_qubits, {});
  std::set<Edge> seen;
  for (const Edge& e : edges_) {
    if (e.a == e.b) throw RouteError(fmt::format("self loop on node {}", e.a));
    if (e.a < 0 || e.b >= n_qubits) {
      throw RouteError(fmt::format("edge ({}, {}) outside graph of {}", e.a, e.b, n_qubits));
    }
    if (!seen.insert(e).second) {
      throw RouteError(fmt::format("duplicate edge ({}, {})", e.a, e.b));
    }
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

CouplingGraph CouplingGraph::linear(int n_qubits) {
  std::vector<Edge> edges;
  for (int q = 0; q + 1 < n_qubits; ++q) edges.emplace_back(q, q + 1);
  return CouplingGraph(n_qubits, std::move(edges));
}

bool CouplingGraph::adjacent(int a, int b) const {
  const auto& nb = adjacency_.at(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<int> CouplingGraph::shortest_path(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_qubits_ || b >= n_qubits_) {
    throw RouteError(fmt::format("path endpoints ({}, {}) outside graph", a, b));
  }
  std::vector<int> parent(n_qubits_, -1);
  parent[a] = a;
  std::deque<int> queue{a};
  while (!queue.empty()) {
    const int q = queue.front();
    queue.pop_front();
    if (q == b) break;
    for (int nb : adjacency_[q]) {
      if (parent[nb] < 0) {
        parent[nb] = q;
        queue.push_back(nb);
      }
    }
  }
  if (parent[b] < 0) return {};
  std::vector<int> path{b};
  while (path.back() != a) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

int CouplingGraph::distance(int a, int b) const {
  const auto p = shortest_path(a, b);
  return p.empty() ? -1 : static_cast<int>(p.size()) - 1;
}

bool CouplingGraph::connected() const {
  for (int q = 1; q < n_qubits_; ++q) {
    if (shortest_path(0, q).empty()) return false;
  }
  return true;
}

CouplingGraph parse_graph(const std::string& json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& [key, value] : j.items()) {
      if (key != "n_qubits" && key != "edges" && key != "labels" && key != "name") {
        throw RouteError(fmt::format("graph file: unknown key '{}'", key));
      }
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) {
        throw RouteError("graph file: each edge must be a pair");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return CouplingGraph(j.at("n_qubits").get<int>(), std::move(edges), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw RouteError(fmt::format("graph file: {}", e.what()));
  }
}

CouplingGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw RouteError(fmt::format("cannot open graph file '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

GateLedger GateLedger::make(std::size_t g_vqe, std::size_t g_swap_total, std::size_t g_derange) {
  return {g_vqe, g_swap_total, g_derange, g_vqe + g_swap_total + g_derange};
}

// ---------------------------------------------------------------------------

namespace {

struct PathSearch {
  const CouplingGraph& graph;
  int length;
  std::vector<std::vector<int>> dist;
  std::vector<int> path;
  std::vector<bool> used;
  std::vector<int> first_found;
  std::size_t budget = 2'000'000;

  bool isometric() const {
    for (std::size_t i = 0; i < path.size(); ++i)
      for (std::size_t j = i + 1; j < path.size(); ++j)
        if (dist[path[i]][path[j]] != static_cast<int>(j - i)) return false;
    return true;
  }

  // True once an isometric path sits in `path`.
  bool extend() {
    if (budget == 0) return false;
    --budget;
    if (static_cast<int>(path.size()) == length) {
      if (first_found.empty()) first_found = path;
      return isometric();
    }
    for (int nb : graph.neighbors(path.back())) {
      if (used[nb]) continue;
      used[nb] = true;
      path.push_back(nb);
      if (extend()) return true;
      path.pop_back();
      used[nb] = false;
    }
    return false;
  }
};

}  // namespace

std::vector<int> find_layout_path(const CouplingGraph& graph, int length) {
  if (length < 1 || length > graph.n_qubits()) {
    throw RouteError(fmt::format("no path of {} nodes in a graph of {}", length, graph.n_qubits()));
  }
  PathSearch s{graph, length, {}, {}, std::vector<bool>(graph.n_qubits(), false), {}};
  s.dist.assign(graph.n_qubits(), std::vector<int>(graph.n_qubits(), -1));
  for (int a = 0; a < graph.n_qubits(); ++a)
    for (int b = 0; b < graph.n_qubits(); ++b) s.dist[a][b] = graph.distance(a, b);
  for (int start = 0; start < graph.n_qubits(); ++start) {
    s.path = {start};
    std::fill(s.used.begin(), s.used.end(), false);
    s.used[start] = true;
    if (s.extend()) return s.path;
  }
  if (s.first_found.empty()) {
    throw RouteError(fmt::format("graph has no simple path of {} nodes", length));
  }
  return s.first_found;
}

namespace {

void append_swap(Circuit& c, int p, int q) {
  c.append(Gate::cx(p, q));
  c.append(Gate::cx(q, p));
  c.append(Gate::cx(p, q));
}

}  // namespace

AlternatingRoute alternating_swap_route(int n, const CouplingGraph& graph, std::size_t g_vqe) {
  if (n < 1) {
    throw RouteError("alternating route needs at least one qubit per copy");
  }
  AlternatingRoute out{{Circuit(graph.n_qubits()), {}, {}, {}, {}}, {}, 0};
  out.path = find_layout_path(graph, 2 * n);
  out.formula_swaps = static_cast<std::size_t>(n) * (n + 1) / 2;

  // order[p] is the logical qubit on path position p.
  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  RoutedCircuit& r = out.routed;
  r.initial_layout.resize(2 * n);
  for (int l = 0; l < 2 * n; ++l) r.initial_layout[l] = out.path[l];

  for (int k = 0; k < n; ++k) {
    // b_k walks left until it sits right of a_k.
    int pos = static_cast<int>(std::find(order.begin(), order.end(), n + k) - order.begin());
    while (pos > 2 * k + 1) {
      const int p = out.path[pos - 1], q = out.path[pos];
      append_swap(r.circuit, p, q);
      r.swaps.emplace_back(p, q);
      std::swap(order[pos - 1], order[pos]);
      --pos;
    }
  }
  for (int p = 0; p < 2 * n; ++p) {
    const int expected = p % 2 == 0 ? p / 2 : n + p / 2;
    if (order[p] != expected) {
      throw RouteError("alternating route failed to interleave the copies");
    }
  }
  r.final_layout.resize(2 * n);
  for (int p = 0; p < 2 * n; ++p) r.final_layout[order[p]] = out.path[p];
  for (int k = 0; k < n; ++k) append_b_sigma(r.circuit, out.path[2 * k], out.path[2 * k + 1]);

  const std::size_t derange = static_cast<std::size_t>(r.circuit.cx_count()) -
                              kCxPerSwap * r.swaps.size();
  r.ledger = GateLedger::make(g_vqe, kCxPerSwap * r.swaps.size(), derange);
  return out;
}

RoutedCircuit greedy_baseline_route(const Circuit& c, const CouplingGraph& graph,
                                    std::span<const int> initial_layout, std::size_t g_vqe) {
  const int n = c.n_qubits();
  if (n > graph.n_qubits()) {
    throw RouteError(fmt::format("circuit of {} qubits exceeds graph of {}", n, graph.n_qubits()));
  }
  if (!graph.connected()) {
    throw RouteError("greedy routing needs a connected graph");
  }
  std::vector<int> layout(initial_layout.begin(), initial_layout.end());
  if (layout.empty()) {
    layout.resize(n);
    std::iota(layout.begin(), layout.end(), 0);
  }
  if (static_cast<int>(layout.size()) != n ||
      std::set<int>(layout.begin(), layout.end()).size() != layout.size() ||
      *std::min_element(layout.begin(), layout.end()) < 0 ||
      *std::max_element(layout.begin(), layout.end()) >= graph.n_qubits()) {
    throw RouteError("greedy routing: initial layout must place every qubit on a distinct node");
  }

  RoutedCircuit r{Circuit(graph.n_qubits()), layout, {}, {}, {}};
  // occupant[p] is the logical qubit on node p, or -1.
  std::vector<int> occupant(graph.n_qubits(), -1);
  for (int l = 0; l < n; ++l) occupant[layout[l]] = l;

  for (const Gate& g : c.gates()) {
    if (g.qubits.size() == 2 && g.kind != GateKind::Barrier) {
      const int target = layout[g.qubits[1]];
      const std::vector<int> path = graph.shortest_path(layout[g.qubits[0]], target);
      for (std::size_t i = 0; i + 2 < path.size(); ++i) {
        const int p = path[i], q = path[i + 1];
        append_swap(r.circuit, p, q);
        r.swaps.emplace_back(p, q);
        std::swap(occupant[p], occupant[q]);
        if (occupant[p] >= 0) layout[occupant[p]] = p;
        if (occupant[q] >= 0) layout[occupant[q]] = q;
      }
    }
    Gate mapped = g;
    for (int& q : mapped.qubits) q = layout[q];
    r.circuit.append(std::move(mapped));
  }
  r.final_layout = layout;
  r.ledger = GateLedger::make(g_vqe, kCxPerSwap * r.swaps.size(), c.cx_count());
  return r;
}

RoutedCircuit greedy_measurement_route(int n, const CouplingGraph& graph, std::size_t g_vqe) {
  const std::vector<int> path = find_layout_path(graph, 2 * n);
  const MeasurementCircuit m = build_measurement_circuit(n, false);
  return greedy_baseline_route(m.circuit, graph, path, g_vqe);
}

CMatrix layout_permutation(std::span<const int> logical_to_physical, int n_qubits) {
  if (static_cast<int>(logical_to_physical.size()) != n_qubits) {
    throw RouteError("layout_permutation needs a full permutation of the register");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t y = 0;
    for (int l = 0; l < n_qubits; ++l) {
      if (x & qubit_mask(n_qubits, l)) y |= qubit_mask(n_qubits, logical_to_physical[l]);
    }
    p(y, x) = 1.0;
  }
  return p;
}

// ---------------------------------------------------------------------------

std::string_view routing_name(Routing r) {
  switch (r) {
    case Routing::None: return "none";
    case Routing::Alternating: return "alternating";
    case Routing::Greedy: return "greedy";
  }
  return "?";
}

Routing parse_routing(std::string_view name) {
  for (Routing r : {Routing::None, Routing::Alternating, Routing::Greedy}) {
    if (routing_name(r) == name) return r;
  }
  throw RouteError(fmt::format("unknown routing '{}'", name));
}

MeasurementSetup make_measurement_setup(int n, Routing routing, const DeviceProfile& profile,
                                        bool noisy) {
  Circuit stage(2 * n);
  const CouplingGraph line = CouplingGraph::linear(2 * n);
  switch (routing) {
    case Routing::None:
      stage = build_measurement_circuit(n, noisy).circuit;
      break;
    case Routing::Alternating:
      stage = alternating_swap_route(n, line).routed.circuit;
      break;
    case Routing::Greedy:
      stage = greedy_measurement_route(n, line).circuit;
      break;
  }
  MeasurementSetup s;
  s.n = n;
  s.stage = transpile(stage, profile);
  s.ideal_inverse = s.stage.inverse();
  s.noisy = noisy;
  s.profile = profile;
  return s;
}

PairEvaluator measured_pair_evaluator(std::shared_ptr<const MeasurementSetup> setup) {
  return [setup](const DensityMatrix& rho_i, const DensityMatrix& rho_j,
                 const PauliSum& h) -> PairMoments {
    require_pair(rho_i, rho_j);
    const int n = setup->n;
    if (rho_i.n_qubits() != n || h.n_qubits() != n) {
      throw RouteError("measured moments: copy size does not match the measurement setup");
    }
    // Register A (where H acts) holds rho_j, so the traces give Tr[H rho_i rho_j].
    DensityMatrix sigma(2 * n, kron(rho_j.matrix(), rho_i.matrix()));
    SimulationOptions forward;
    forward.noisy = setup->noisy;
    sigma = evolve(sigma, setup->stage, setup->profile, forward);
    SimulationOptions ideal;
    ideal.noisy = false;
    sigma = evolve(sigma, setup->ideal_inverse, setup->profile, ideal);

    PauliSum identity(n);
    identity.add(1.0, std::string(n, 'I'));
    return {swap_weighted_trace(sigma.matrix(), identity), swap_weighted_trace(sigma.matrix(), h)};
  };
}

}  // namespace gsemit
