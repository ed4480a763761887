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

#include "gsemit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "gsemit/mitigate.hpp"
#include "gsemit/noise.hpp"
#include "gsemit/profile.hpp"
#include "json.hpp"

namespace gsemit {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
}

Solver parse_solver(const std::string& s) {
  if (s == "raw") return Solver::Raw;
  if (s == "vd") return Solver::Vd;
  if (s == "gse_power") return Solver::GsePower;
  if (s == "gse_fault") return Solver::GseFault;
  throw ConfigError(fmt::format("unknown solver '{}'", s));
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_qubits < 2 || n_qubits > 5) {
    throw ConfigError(fmt::format("n_qubits must lie in [2, 5], got {}", n_qubits));
  }
  if (depths.empty()) throw ConfigError("depths must not be empty");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw ConfigError("depths must be >= 1");
    if (i > 0 && depths[i] <= depths[i - 1]) {
      throw ConfigError("depths must be strictly ascending");
    }
  }
  if (methods.empty()) throw ConfigError("methods must not be empty");
  std::set<std::string> labels;
  for (const auto& m : methods) {
    if (m.label.empty() || m.label.find_first_of(",\"\n") != std::string::npos) {
      throw ConfigError(fmt::format("method label '{}' is empty or not CSV-safe", m.label));
    }
    if (!labels.insert(m.label).second) {
      throw ConfigError(fmt::format("duplicate method label '{}'", m.label));
    }
    if (m.solver == Solver::Vd && m.copies < 2) {
      throw ConfigError(fmt::format("method '{}': copies must be >= 2", m.label));
    }
    if (m.solver == Solver::GsePower && m.power < 1) {
      throw ConfigError(fmt::format("method '{}': power must be >= 1", m.label));
    }
    for (const auto& b : m.boosts) b.validate();
  }
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0, 1)");
  }
}

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    const json j = json::parse(json_text);
    reject_unknown(j,
                   {"n_qubits", "h", "depths", "seed", "profile", "methods", "noisy_measurement",
                    "routing", "graph", "param_cache", "threshold", "record_timing"},
                   "config");
    cfg.n_qubits = j.at("n_qubits").get<int>();
    cfg.h = j.value("h", 1.0);
    cfg.depths = j.at("depths").get<std::vector<int>>();
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.profile_path = resolve(base_dir, j.at("profile").get<std::string>());
    cfg.noisy_measurement = j.value("noisy_measurement", false);
    cfg.routing = parse_routing(j.value("routing", std::string("none")));
    if (j.contains("graph")) cfg.graph_path = resolve(base_dir, j.at("graph").get<std::string>());
    if (j.contains("param_cache")) {
      cfg.param_cache = resolve(base_dir, j.at("param_cache").get<std::string>());
    }
    cfg.threshold = j.value("threshold", 1e-10);
    cfg.record_timing = j.value("record_timing", false);
    for (const auto& m : j.at("methods")) {
      reject_unknown(m, {"label", "solver", "copies", "power", "boosts"}, "method");
      MethodSpec spec;
      spec.label = m.at("label").get<std::string>();
      spec.solver = parse_solver(m.at("solver").get<std::string>());
      spec.copies = m.value("copies", 2);
      spec.power = m.value("power", 1);
      if (m.contains("boosts")) {
        if (spec.solver != Solver::GseFault) {
          throw ConfigError(fmt::format("method '{}': boosts only apply to gse_fault", spec.label));
        }
        for (const auto& b : m.at("boosts")) {
          reject_unknown(b, {"flavor", "magnitude"}, "boost");
          spec.boosts.push_back(
              {parse_flavor(b.at("flavor").get<std::string>()), b.at("magnitude").get<double>()});
        }
      }
      cfg.methods.push_back(std::move(spec));
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  } catch (const RouteError& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  } catch (const BoostError& e) {
    throw ConfigError(fmt::format("config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

double oracle_energy(int n, double h) { return exact_ground_energy(build_tfi(n, h)); }

ParameterRecord ansatz_parameters(int n, double h, int depth, std::uint64_t seed,
                                  const std::optional<std::filesystem::path>& cache) {
  const Circuit ansatz = build_ansatz(n, depth);
  std::filesystem::path file;
  if (cache) {
    file = *cache / fmt::format("tfi_n{}_h{:g}_d{}_s{}.json", n, h, depth, seed);
    if (std::filesystem::exists(file)) {
      ParameterRecord r = load_parameters(file);
      if (r.n_qubits != n || r.depth != depth || r.seed != seed ||
          r.parameters.size() != ansatz.num_params()) {
        throw ConfigError(fmt::format("cached parameters '{}' do not match the request",
                                      file.string()));
      }
      return r;
    }
  }
  // The sweep keeps the best-found point; run_sweep reports a missed target.
  OptimizeOptions options;
  options.require_target = false;
  const OptimizeResult opt = optimize(ansatz, build_tfi(n, h), seed, options);
  ParameterRecord r{n, depth, seed, opt.energy, opt.params};
  if (cache) {
    std::filesystem::create_directories(*cache);
    save_parameters(file, r);
  }
  return r;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const DeviceProfile profile = load_profile(cfg.profile_path);
  const int n = cfg.n_qubits;
  const PauliSum h = build_tfi(n, cfg.h);
  const double exact = exact_ground_energy(h);

  bool two_copy = false;
  for (const auto& m : cfg.methods) two_copy |= m.solver != Solver::Raw;

  PairEvaluator pairs;
  if (two_copy && (cfg.noisy_measurement || cfg.routing != Routing::None)) {
    auto setup = std::make_shared<const MeasurementSetup>(
        make_measurement_setup(n, cfg.routing, profile, cfg.noisy_measurement));
    pairs = measured_pair_evaluator(setup);
  }
  const CouplingGraph graph =
      cfg.graph_path ? load_graph(*cfg.graph_path) : CouplingGraph::linear(2 * n);

  std::vector<ResultRow> rows;
  for (int depth : cfg.depths) {
    if (progress) progress(fmt::format("depth {}: preparing parameters", depth));
    const ParameterRecord params = ansatz_parameters(n, cfg.h, depth, cfg.seed, cfg.param_cache);
    if (progress && params.energy - exact > 1e-3 * std::abs(exact)) {
      progress(fmt::format("depth {}: ansatz energy {:.8f} misses exact {:.8f}; using best found",
                           depth, params.energy, exact));
    }
    const Circuit circuit = transpile(build_ansatz(n, depth).bind(params.parameters), profile);
    const std::size_t cx = circuit.cx_count();

    std::size_t swap_cx = 0;
    std::size_t derange_cx = 0;
    if (two_copy) {
      if (cfg.routing == Routing::Alternating) {
        swap_cx = alternating_swap_route(n, graph).routed.ledger.g_swap_total;
      } else if (cfg.routing == Routing::Greedy) {
        swap_cx = greedy_measurement_route(n, graph).ledger.g_swap_total;
      }
      derange_cx = build_measurement_circuit(n, false).circuit.cx_count();
    }
    const GateLedger single = GateLedger::make(cx, 0, 0);
    const GateLedger paired = GateLedger::make(2 * cx, swap_cx, derange_cx);

    std::map<std::string, DensityMatrix> states;
    auto state_for = [&](const BoostSpec& spec) -> const DensityMatrix& {
      auto it = states.find(spec.label());
      if (it == states.end()) {
        it = states.emplace(spec.label(), simulate_boosted(prepare_boost(circuit, spec, profile),
                                                           profile))
                 .first;
      }
      return it->second;
    };
    const DensityMatrix& base = state_for(BoostSpec::base());
    const double purity = base.purity();

    for (const MethodSpec& m : cfg.methods) {
      if (progress) progress(fmt::format("depth {}: {}", depth, m.label));
      const auto start = std::chrono::steady_clock::now();
      MitigationResult res;
      GateLedger ledger = paired;
      switch (m.solver) {
        case Solver::Raw:
          res = raw_energy(base, h);
          ledger = single;
          break;
        case Solver::Vd:
          res = vd_energy(base, h, m.copies, pairs);
          break;
        case Solver::GsePower: {
          const std::vector<DensityMatrix> family{base};
          res = gse_energy(family, h, SubspaceSpec::power(m.power), cfg.threshold, pairs);
          break;
        }
        case Solver::GseFault: {
          std::vector<DensityMatrix> family{base};
          for (const auto& b : m.boosts) family.push_back(state_for(b));
          std::vector<std::size_t> idx(family.size());
          for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
          res = gse_energy(family, h, SubspaceSpec::fault(idx), cfg.threshold, pairs);
          break;
        }
      }
      ResultRow row;
      row.method = m.label;
      row.depth = depth;
      row.energy = res.energy;
      row.exact = exact;
      row.abs_error = std::abs(res.energy - exact);
      row.purity = purity;
      row.rank_kept = res.rank_kept;
      row.g_tot = ledger.g_tot;
      row.wall_ms = cfg.record_timing ? elapsed_ms(start) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return a.method != b.method ? a.method < b.method : a.depth < b.depth;
  });
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.12g},{:.12g},{:.12g},{:.12g},{},{},{:.12g}\n", r.method, r.depth,
                       r.energy, r.exact, r.abs_error, r.purity, r.rank_kept, r.g_tot, r.wall_ms);
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << rows_to_csv(rows);
}

std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path.string()));
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ConfigError(fmt::format("'{}' does not start with the result header", path.string()));
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) {
      throw ConfigError(fmt::format("{}:{}: expected 9 fields, got {}", path.string(), line_no,
                                    f.size()));
    }
    try {
      ResultRow r;
      r.method = f[0];
      r.depth = std::stoi(f[1]);
      r.energy = std::stod(f[2]);
      r.exact = std::stod(f[3]);
      r.abs_error = std::stod(f[4]);
      r.purity = std::stod(f[5]);
      r.rank_kept = std::stoul(f[6]);
      r.g_tot = std::stoul(f[7]);
      r.wall_ms = std::stod(f[8]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError(fmt::format("{}:{}: malformed number", path.string(), line_no));
    }
  }
  return rows;
}

std::string report(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw ConfigError("report: no rows");
  struct Stat {
    std::string method;
    double min = INFINITY;
    double sum = 0.0;
    int count = 0;
  };
  std::map<std::string, Stat> by_method;
  for (const auto& r : rows) {
    Stat& s = by_method[r.method];
    s.method = r.method;
    s.min = std::min(s.min, r.abs_error);
    s.sum += r.abs_error;
    ++s.count;
  }
  std::vector<Stat> stats;
  for (auto& [k, s] : by_method) stats.push_back(s);
  std::stable_sort(stats.begin(), stats.end(), [](const Stat& a, const Stat& b) {
    return a.sum / a.count < b.sum / b.count;
  });
  std::string out = fmt::format("{:<24} {:>6} {:>14} {:>14}\n", "method", "rows", "min_abs_err",
                                "mean_abs_err");
  for (const auto& s : stats) {
    out += fmt::format("{:<24} {:>6} {:>14.6e} {:>14.6e}\n", s.method, s.count, s.min,
                       s.sum / s.count);
  }
  return out;
}

}  // namespace gsemit
