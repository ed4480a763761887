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

#include "gsemit/profile.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/core.h>

#include "json.hpp"

namespace gsemit {

using json = nlohmann::json;

double DeviceProfile::cx_duration_for(int a, int b) const {
  auto it = cx_overrides.find(Edge(a, b));
  return it == cx_overrides.end() ? cx_duration_ns : it->second.duration_ns;
}

double DeviceProfile::cx_depol_for(int a, int b) const {
  auto it = cx_overrides.find(Edge(a, b));
  return it == cx_overrides.end() ? cx_depol : it->second.depol;
}

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_edge(const Edge& e, int n, const char* what) {
  if (e.a == e.b) {
    throw ProfileError(fmt::format("{}: self-loop on qubit {}", what, e.a));
  }
  if (e.a < 0 || e.b >= n) {
    throw ProfileError(fmt::format("{}: edge ({}, {}) outside [0, {})", what, e.a, e.b, n));
  }
}

}  // namespace

void DeviceProfile::validate() const {
  if (n_qubits <= 0) {
    throw ProfileError("profile: n_qubits must be positive");
  }
  const auto n = static_cast<std::size_t>(n_qubits);
  if (t1_ns.size() != n || t2_ns.size() != n || sx_depol.size() != n) {
    throw ProfileError(fmt::format("profile: per-qubit lists must have {} entries", n));
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!(t1_ns[q] > 0.0) || !(t2_ns[q] > 0.0)) {
      throw ProfileError(fmt::format("profile: qubit {} has nonpositive T1/T2", q));
    }
    // Infinite T1 with finite T2 is allowed; the bound only binds finite T1.
    if (std::isfinite(t1_ns[q]) && t2_ns[q] > 2.0 * t1_ns[q]) {
      throw ProfileError(fmt::format("profile: qubit {} violates T2 <= 2 T1", q));
    }
    if (!is_probability(sx_depol[q])) {
      throw ProfileError(fmt::format("profile: sx_depol[{}] outside [0, 1]", q));
    }
  }
  if (!(sx_duration_ns >= 0.0) || !(cx_duration_ns >= 0.0)) {
    throw ProfileError("profile: durations must be nonnegative");
  }
  if (!is_probability(cx_depol)) {
    throw ProfileError("profile: cx_depol outside [0, 1]");
  }
  for (const auto& [edge, o] : cx_overrides) {
    check_edge(edge, n_qubits, "cx_overrides");
    if (!(o.duration_ns >= 0.0) || !is_probability(o.depol)) {
      throw ProfileError(fmt::format("cx_overrides: invalid entry on ({}, {})", edge.a, edge.b));
    }
  }
  std::set<Edge> seen;
  for (const auto& e : coupling_edges) {
    check_edge(e, n_qubits, "coupling_edges");
    if (!seen.insert(e).second) {
      throw ProfileError(fmt::format("coupling_edges: duplicate edge ({}, {})", e.a, e.b));
    }
  }
  for (const auto& x : crosstalk) {
    check_edge(x.system, n_qubits, "crosstalk.system");
    check_edge(x.environment, n_qubits, "crosstalk.environment");
    if (!(x.factor >= 1.0)) {
      throw ProfileError("crosstalk: factor must be >= 1");
    }
  }
}

DeviceProfile DeviceProfile::uniform(int n_qubits, double t1_ns, double t2_ns, double sx_depol,
                                     double cx_depol) {
  DeviceProfile p;
  p.n_qubits = n_qubits;
  p.t1_ns.assign(n_qubits, t1_ns);
  p.t2_ns.assign(n_qubits, t2_ns);
  p.sx_depol.assign(n_qubits, sx_depol);
  p.cx_depol = cx_depol;
  for (int q = 0; q + 1 < n_qubits; ++q) {
    p.coupling_edges.emplace_back(q, q + 1);
  }
  p.validate();
  return p;
}

DeviceProfile DeviceProfile::noiseless(int n_qubits) {
  const double inf = std::numeric_limits<double>::infinity();
  return uniform(n_qubits, inf, inf, 0.0, 0.0);
}

namespace {

const std::set<std::string> kProfileKeys = {
    "n_qubits", "t1_ns",     "t2_ns",          "sx_duration_ns", "sx_depol",  "cx_duration_ns",
    "cx_depol", "cx_overrides", "coupling_edges", "crosstalk"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ProfileError(fmt::format("{}: unknown key '{}'", where, key));
    }
  }
}

// Accepts either a list with one entry per qubit or a scalar broadcast to all.
std::vector<double> per_qubit(const json& j, int n, const char* key) {
  if (j.is_number()) {
    return std::vector<double>(n, j.get<double>());
  }
  auto v = j.get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n) {
    throw ProfileError(fmt::format("profile: '{}' has {} entries, expected {}", key, v.size(), n));
  }
  return v;
}

Edge edge_from(const json& j) {
  auto v = j.get<std::vector<int>>();
  if (v.size() != 2) {
    throw ProfileError("profile: an edge must have exactly two qubits");
  }
  return Edge(v[0], v[1]);
}

// JSON has no infinity; null stands for an infinite coherence time.
std::vector<double> coherence_times(const json& j, int n, const char* key) {
  if (j.is_null()) {
    return std::vector<double>(n, std::numeric_limits<double>::infinity());
  }
  if (j.is_array()) {
    std::vector<double> v;
    for (const auto& x : j) {
      v.push_back(x.is_null() ? std::numeric_limits<double>::infinity() : x.get<double>());
    }
    if (static_cast<int>(v.size()) != n) {
      throw ProfileError(fmt::format("profile: '{}' has {} entries, expected {}", key, v.size(), n));
    }
    return v;
  }
  return per_qubit(j, n, key);
}

json coherence_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) {
    arr.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  }
  return arr;
}

}  // namespace

DeviceProfile parse_profile(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ProfileError(fmt::format("profile: malformed JSON ({})", e.what()));
  }
  if (!j.is_object()) {
    throw ProfileError("profile: top level must be an object");
  }
  reject_unknown(j, kProfileKeys, "profile");
  DeviceProfile p;
  try {
    p.n_qubits = j.at("n_qubits").get<int>();
    p.t1_ns = coherence_times(j.at("t1_ns"), p.n_qubits, "t1_ns");
    p.t2_ns = coherence_times(j.at("t2_ns"), p.n_qubits, "t2_ns");
    p.sx_depol = per_qubit(j.at("sx_depol"), p.n_qubits, "sx_depol");
    if (j.contains("sx_duration_ns")) p.sx_duration_ns = j["sx_duration_ns"].get<double>();
    if (j.contains("cx_duration_ns")) p.cx_duration_ns = j["cx_duration_ns"].get<double>();
    if (j.contains("cx_depol")) p.cx_depol = j["cx_depol"].get<double>();
    if (j.contains("cx_overrides")) {
      for (const auto& o : j["cx_overrides"]) {
        reject_unknown(o, {"edge", "duration_ns", "depol"}, "cx_overrides");
        p.cx_overrides[edge_from(o.at("edge"))] =
            CxOverride{o.value("duration_ns", p.cx_duration_ns), o.value("depol", p.cx_depol)};
      }
    }
    if (j.contains("coupling_edges")) {
      for (const auto& e : j["coupling_edges"]) {
        p.coupling_edges.push_back(edge_from(e));
      }
    }
    if (j.contains("crosstalk")) {
      for (const auto& x : j["crosstalk"]) {
        reject_unknown(x, {"system", "environment", "factor"}, "crosstalk");
        p.crosstalk.push_back(CrosstalkEntry{edge_from(x.at("system")),
                                             edge_from(x.at("environment")),
                                             x.at("factor").get<double>()});
      }
    }
  } catch (const json::exception& e) {
    throw ProfileError(fmt::format("profile: {}", e.what()));
  }
  p.validate();
  return p;
}

DeviceProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ProfileError(fmt::format("profile: cannot open '{}'", path.string()));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str());
}

std::string profile_to_json(const DeviceProfile& p) {
  json j;
  j["n_qubits"] = p.n_qubits;
  j["t1_ns"] = coherence_json(p.t1_ns);
  j["t2_ns"] = coherence_json(p.t2_ns);
  j["sx_duration_ns"] = p.sx_duration_ns;
  j["sx_depol"] = p.sx_depol;
  j["cx_duration_ns"] = p.cx_duration_ns;
  j["cx_depol"] = p.cx_depol;
  j["cx_overrides"] = json::array();
  for (const auto& [e, o] : p.cx_overrides) {
    j["cx_overrides"].push_back({{"edge", {e.a, e.b}}, {"duration_ns", o.duration_ns}, {"depol", o.depol}});
  }
  j["coupling_edges"] = json::array();
  for (const auto& e : p.coupling_edges) {
    j["coupling_edges"].push_back({e.a, e.b});
  }
  j["crosstalk"] = json::array();
  for (const auto& x : p.crosstalk) {
    j["crosstalk"].push_back({{"system", {x.system.a, x.system.b}},
                              {"environment", {x.environment.a, x.environment.b}},
                              {"factor", x.factor}});
  }
  return j.dump(2);
}

}  // namespace gsemit
