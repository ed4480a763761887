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

#include "gsemit/boost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace gsemit {

std::string_view flavor_name(BoostFlavor flavor) {
  switch (flavor) {
    case BoostFlavor::None: return "none";
    case BoostFlavor::Decoherence: return "decoherence";
    case BoostFlavor::GateRepetition: return "gate_repetition";
    case BoostFlavor::Crosstalk: return "crosstalk";
    case BoostFlavor::Probabilistic: return "probabilistic";
  }
  return "?";
}

BoostFlavor parse_flavor(std::string_view name) {
  for (BoostFlavor f : {BoostFlavor::None, BoostFlavor::Decoherence, BoostFlavor::GateRepetition,
                        BoostFlavor::Crosstalk, BoostFlavor::Probabilistic}) {
    if (flavor_name(f) == name) return f;
  }
  throw BoostError(fmt::format("unknown boost flavor '{}'", name));
}

void BoostSpec::validate() const {
  if (!std::isfinite(magnitude) || magnitude < 0.0) {
    throw BoostError(fmt::format("boost magnitude must be finite and >= 0, got {}", magnitude));
  }
  switch (flavor) {
    case BoostFlavor::GateRepetition:
    case BoostFlavor::Crosstalk:
      if (magnitude != std::floor(magnitude)) {
        throw BoostError(fmt::format("{} magnitude must be an integer, got {}",
                                     flavor_name(flavor), magnitude));
      }
      break;
    case BoostFlavor::Probabilistic:
      if (magnitude < 1.0) {
        throw BoostError(fmt::format("probabilistic stretch must be >= 1, got {}", magnitude));
      }
      break;
    case BoostFlavor::None:
    case BoostFlavor::Decoherence:
      break;
  }
}

std::string BoostSpec::label() const {
  if (flavor == BoostFlavor::None) return "none";
  return fmt::format("{}:{:g}", flavor_name(flavor), magnitude);
}

Circuit boost_decoherence(const Circuit& c, double buffer_ns) {
  if (!(buffer_ns >= 0.0)) {
    throw BoostError(fmt::format("decoherence buffer must be >= 0, got {}", buffer_ns));
  }
  Circuit out = c;
  if (buffer_ns == 0.0) return out;
  for (int q = 0; q < c.n_qubits(); ++q) out.append(Gate::delay(q, buffer_ns));
  return out;
}

Circuit boost_gate_repetition(const Circuit& c, int k) {
  if (k < 0) {
    throw BoostError(fmt::format("gate repetition K must be >= 0, got {}", k));
  }
  Circuit out(c.n_qubits());
  for (const auto& name : c.param_names()) out.add_parameter(name);
  for (const Gate& g : c.gates()) {
    const int copies = g.kind == GateKind::CX ? 2 * k + 1 : 1;
    for (int i = 0; i < copies; ++i) out.append(g);
  }
  return out;
}

CrosstalkBoost boost_crosstalk(const Circuit& c, const DeviceProfile& profile, int level) {
  if (level < 0) {
    throw BoostError(fmt::format("crosstalk level must be >= 0, got {}", level));
  }
  const int n = c.n_qubits();
  int width = n;
  if (level > 0) {
    if (profile.crosstalk.empty()) {
      throw BoostError("crosstalk boost requested but the profile has no crosstalk entries");
    }
    for (const auto& x : profile.crosstalk) {
      if (x.environment.a < n || x.environment.b < n) {
        throw BoostError(fmt::format("environment edge ({}, {}) overlaps the {} system qubits",
                                     x.environment.a, x.environment.b, n));
      }
      width = std::max(width, x.environment.b + 1);
    }
  }

  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  const Circuit widened = c.remapped(identity, width);

  CrosstalkBoost out{Circuit(width), {}};
  for (const auto& name : widened.param_names()) out.circuit.add_parameter(name);
  for (const Gate& g : widened.gates()) {
    out.circuit.append(g);
    if (level == 0 || g.kind != GateKind::CX) continue;
    const std::size_t system_index = out.circuit.gates().size() - 1;
    const Edge system(g.qubits[0], g.qubits[1]);
    std::vector<std::size_t> env;
    for (const auto& x : profile.crosstalk) {
      if (static_cast<int>(env.size()) == level) break;
      if (x.system != system) continue;
      Gate eg = Gate::cx(x.environment.a, x.environment.b);
      eg.duration_ns = profile.cx_duration_for(x.environment.a, x.environment.b);
      out.circuit.append(eg);
      env.push_back(out.circuit.gates().size() - 1);
    }
    if (static_cast<int>(env.size()) < level) {
      throw BoostError(fmt::format("crosstalk level {} exceeds the {} environment edges paired "
                                   "with system edge ({}, {})",
                                   level, env.size(), system.a, system.b));
    }
    out.schedule.concurrent.emplace(system_index, std::move(env));
  }
  return out;
}

SimulationOptions boost_probabilistic(double stretch) {
  if (!(stretch >= 1.0)) {
    throw BoostError(fmt::format("probabilistic stretch must be >= 1, got {}", stretch));
  }
  SimulationOptions options;
  options.pauli_stretch = stretch;
  return options;
}

BoostedRun prepare_boost(const Circuit& c, const BoostSpec& spec, const DeviceProfile& profile) {
  spec.validate();
  BoostedRun run{c, {}, c.n_qubits()};
  switch (spec.flavor) {
    case BoostFlavor::None:
      break;
    case BoostFlavor::Decoherence:
      run.circuit = boost_decoherence(c, spec.magnitude);
      break;
    case BoostFlavor::GateRepetition:
      run.circuit = boost_gate_repetition(c, static_cast<int>(spec.magnitude));
      break;
    case BoostFlavor::Crosstalk: {
      auto boosted = boost_crosstalk(c, profile, static_cast<int>(spec.magnitude));
      run.circuit = std::move(boosted.circuit);
      run.options.crosstalk = std::move(boosted.schedule);
      break;
    }
    case BoostFlavor::Probabilistic:
      run.options = boost_probabilistic(spec.magnitude);
      break;
  }
  return run;
}

DensityMatrix simulate_boosted(const BoostedRun& run, const DeviceProfile& profile) {
  DensityMatrix full = simulate(run.circuit, profile, run.options);
  if (run.circuit.n_qubits() == run.system_qubits) return full;
  std::vector<int> keep(run.system_qubits);
  std::iota(keep.begin(), keep.end(), 0);
  return DensityMatrix(run.system_qubits,
                       partial_trace(full.matrix(), keep, run.circuit.n_qubits()));
}

std::vector<DensityMatrix> make_fault_family(const Circuit& c, std::span<const BoostSpec> specs,
                                             const DeviceProfile& profile) {
  if (specs.empty()) {
    throw BoostError("make_fault_family: no boost specs given");
  }
  std::vector<DensityMatrix> family;
  family.reserve(specs.size());
  for (const BoostSpec& spec : specs) {
    family.push_back(simulate_boosted(prepare_boost(c, spec, profile), profile));
  }
  return family;
}

}  // namespace gsemit
