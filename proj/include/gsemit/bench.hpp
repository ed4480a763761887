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

#ifndef GSEMIT_BENCH_HPP
#define GSEMIT_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsemit/boost.hpp"
#include "gsemit/circuit.hpp"
#include "gsemit/route.hpp"

namespace gsemit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Solver { Raw, Vd, GsePower, GseFault };

struct MethodSpec {
  std::string label;
  Solver solver = Solver::Raw;
  int copies = 2;  // vd
  int power = 1;   // gse_power
  /// gse_fault: boosted members added after the unboosted base state.
  std::vector<BoostSpec> boosts;
};

struct ExperimentConfig {
  int n_qubits = 3;
  double h = 1.0;
  std::vector<int> depths;
  std::uint64_t seed = 0;
  std::filesystem::path profile_path;
  std::vector<MethodSpec> methods;
  bool noisy_measurement = false;
  Routing routing = Routing::None;
  std::optional<std::filesystem::path> graph_path;  // ledger only; default a line
  std::optional<std::filesystem::path> param_cache;
  double threshold = 1e-10;
  bool record_timing = false;

  void validate() const;
};

/// Relative paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string method;
  int depth = 0;
  double energy = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  double purity = 0.0;
  std::size_t rank_kept = 0;
  std::size_t g_tot = 0;
  double wall_ms = 0.0;
};

/// Lowest eigenvalue of the TFI ring Hamiltonian.
double oracle_energy(int n, double h);

/// Optimised ansatz parameters for one depth, read from or written to the
/// cache directory when one is configured. The best point found is kept
/// even when it misses the accuracy target.
ParameterRecord ansatz_parameters(int n, double h, int depth, std::uint64_t seed,
                                  const std::optional<std::filesystem::path>& cache);

using ProgressFn = std::function<void(const std::string&)>;

/// One row per (method, depth), sorted by method label then depth.
std::vector<ResultRow> run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {});

inline constexpr const char* kCsvHeader =
    "method,depth,energy,exact,abs_error,purity,rank_kept,g_tot,wall_ms";

std::string rows_to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(const std::filesystem::path& path);

/// Per-method min/mean absolute error, best mean first.
std::string report(const std::vector<ResultRow>& rows);

}  // namespace gsemit

#endif  // GSEMIT_BENCH_HPP
