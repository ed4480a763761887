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

// Command-line front end: oracle, optimize, run, route, report.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "gsemit/bench.hpp"
#include "gsemit/circuit.hpp"
#include "gsemit/route.hpp"

namespace {

using namespace gsemit;

int cmd_oracle(int n, double h) {
  fmt::print("{:.9f}\n", oracle_energy(n, h));
  return 0;
}

int cmd_optimize(int n, int depth, std::uint64_t seed, int restarts, const std::string& out) {
  const Circuit ansatz = build_ansatz(n, depth);
  const PauliSum hamiltonian = build_tfi(n, 1.0);
  OptimizeOptions options;
  options.require_target = depth >= 2;
  options.restarts = restarts;
  const OptimizeResult r = optimize(ansatz, hamiltonian, seed, options);
  const ParameterRecord record{n, depth, seed, r.energy, r.params};
  if (out.empty()) {
    fmt::print("{}", parameters_to_json(record));
  } else {
    save_parameters(out, record);
  }
  fmt::print(stderr, "energy {:.10f}  exact {:.10f}  restarts {}\n", r.energy, r.exact,
             r.restarts_used);
  return 0;
}

int cmd_run(const std::string& config, const std::string& out) {
  const ExperimentConfig cfg = load_config(config);
  const auto rows = run_sweep(cfg, [](const std::string& msg) { fmt::print(stderr, "{}\n", msg); });
  if (out.empty()) {
    fmt::print("{}", rows_to_csv(rows));
  } else {
    write_csv(out, rows);
  }
  fmt::print(stderr, "{}", report(rows));
  return 0;
}

int cmd_route(int n, const std::string& graph_path, int depth) {
  const CouplingGraph graph =
      graph_path.empty() ? CouplingGraph::linear(2 * n) : load_graph(graph_path);
  const std::size_t g_vqe = 2 * transpile(build_ansatz(n, depth).bind(std::vector<double>(
                                              2 * n * (depth + 1), 0.0)),
                                          DeviceProfile::noiseless(n))
                                    .cx_count();
  const AlternatingRoute alt = alternating_swap_route(n, graph, g_vqe);
  const RoutedCircuit greedy = greedy_measurement_route(n, graph, g_vqe);

  fmt::print("{:<12} {:>6} {:>8} {:>12} {:>9} {:>6}\n", "method", "swaps", "g_vqe", "g_swap_total",
             "g_derange", "g_tot");
  auto row = [](const char* name, std::size_t swaps, const GateLedger& l) {
    fmt::print("{:<12} {:>6} {:>8} {:>12} {:>9} {:>6}\n", name, swaps, l.g_vqe, l.g_swap_total,
               l.g_derange, l.g_tot);
  };
  row("alternating", alt.routed.swaps.size(), alt.routed.ledger);
  row("greedy", greedy.swaps.size(), greedy.ledger);
  const GateLedger formula =
      GateLedger::make(g_vqe, kCxPerSwap * alt.formula_swaps, alt.routed.ledger.g_derange);
  row("formula", alt.formula_swaps, formula);
  return 0;
}

int cmd_report(const std::string& in) {
  fmt::print("{}", report(read_csv(in)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gsemit: noisy density-matrix simulation and subspace error mitigation"};
  app.require_subcommand(1);

  int n = 3;
  double h = 1.0;
  auto* oracle = app.add_subcommand("oracle", "Exact TFI ground energy");
  oracle->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  oracle->add_option("n,--n", n, "Number of spins")->required()->check(CLI::Range(2, 10));
  oracle->add_option("h,--h", h, "Transverse field");

  int depth = 2;
  std::uint64_t seed = 0;
  std::string out;
  auto* opt = app.add_subcommand("optimize", "Optimise ansatz parameters noiselessly");
  opt->add_option("--n", n, "Number of spins")->required()->check(CLI::Range(2, 5));
  opt->add_option("--depth", depth, "Ansatz depth")->required()->check(CLI::Range(1, 20));
  opt->add_option("--seed", seed, "Random seed");
  int restarts = OptimizeOptions{}.restarts;
  opt->add_option("--restarts", restarts, "Random starts before giving up")->check(CLI::Range(1, 10000));
  opt->add_option("--out", out, "Parameter file to write");

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment sweep");
  run->add_option("--config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "CSV output path");

  std::string graph;
  int route_depth = 1;
  auto* route = app.add_subcommand("route", "Print the CX ledger of both routers");
  route->add_option("--n", n, "Qubits per copy")->required()->check(CLI::Range(1, 13));
  route->add_option("--graph", graph, "Coupling graph file (default: a line)");
  route->add_option("--depth", route_depth, "Ansatz depth for g_vqe")->check(CLI::Range(1, 50));

  std::string in;
  auto* rep = app.add_subcommand("report", "Summarise a result CSV");
  rep->add_option("--in", in, "Result CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) return cmd_oracle(n, h);
    if (opt->parsed()) return cmd_optimize(n, depth, seed, restarts, out);
    if (run->parsed()) return cmd_run(config, out);
    if (route->parsed()) return cmd_route(n, graph, route_depth);
    if (rep->parsed()) return cmd_report(in);
  } catch (const OptimizeError& e) {
    fmt::print(stderr, "error: {} (best energy {:.10f})\n", e.what(), e.best().energy);
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
