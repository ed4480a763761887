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

#ifndef GSEMIT_PROFILE_HPP
#define GSEMIT_PROFILE_HPP

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsemit {

/// Undirected qubit pair stored as (min, max).
struct Edge {
  int a = 0;
  int b = 0;

  Edge() = default;
  Edge(int x, int y) : a(x < y ? x : y), b(x < y ? y : x) {}

  bool touches(int q) const { return a == q || b == q; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Extra CX error on `system` while a CX runs on `environment`.
struct CrosstalkEntry {
  Edge system;
  Edge environment;
  double factor = 1.0;  // multiplies the system pair's cx_depol, >= 1
};

/// Per-pair CX calibration that differs from the profile defaults.
struct CxOverride {
  double duration_ns = 0.0;
  double depol = 0.0;
};

/// Hardware calibration consumed by the transpiler and the noisy simulator.
/// Durations are in nanoseconds, error rates are probabilities.
struct DeviceProfile {
  int n_qubits = 0;
  std::vector<double> t1_ns;
  std::vector<double> t2_ns;
  double sx_duration_ns = 35.6;
  std::vector<double> sx_depol;
  double cx_duration_ns = 366.2;
  double cx_depol = 1e-2;
  std::map<Edge, CxOverride> cx_overrides;
  std::vector<Edge> coupling_edges;
  std::vector<CrosstalkEntry> crosstalk;

  double cx_duration_for(int a, int b) const;
  double cx_depol_for(int a, int b) const;

  /// Throws ProfileError when any invariant is violated.
  void validate() const;

  /// Same calibration on every qubit, no overrides or crosstalk.
  static DeviceProfile uniform(int n_qubits, double t1_ns, double t2_ns, double sx_depol,
                               double cx_depol);

  /// Every rate zero and every coherence time infinite.
  static DeviceProfile noiseless(int n_qubits);
};

DeviceProfile load_profile(const std::filesystem::path& path);
DeviceProfile parse_profile(const std::string& json_text);
std::string profile_to_json(const DeviceProfile& profile);

}  // namespace gsemit

#endif  // GSEMIT_PROFILE_HPP
