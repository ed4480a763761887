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

#ifndef GSEMIT_BOOST_HPP
#define GSEMIT_BOOST_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gsemit/circuit.hpp"
#include "gsemit/noise.hpp"
#include "gsemit/profile.hpp"

namespace gsemit {

class BoostError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// None is the unboosted base state.
enum class BoostFlavor { None, Decoherence, GateRepetition, Crosstalk, Probabilistic };

std::string_view flavor_name(BoostFlavor flavor);
BoostFlavor parse_flavor(std::string_view name);

/// Magnitude units: buffer ns, repetition K, crosstalk level, Pauli stretch.
struct BoostSpec {
  BoostFlavor flavor = BoostFlavor::None;
  double magnitude = 0.0;

  static BoostSpec base() { return {}; }

  void validate() const;
  /// Short stable label, e.g. "decoherence:10000".
  std::string label() const;
};

/// DELAY(buffer_ns) on every qubit after the last gate.
Circuit boost_decoherence(const Circuit& c, double buffer_ns);

/// Every CX becomes 2k+1 consecutive copies of itself.
Circuit boost_gate_repetition(const Circuit& c, int k);

struct CrosstalkBoost {
  Circuit circuit;  // register widened to cover the environment qubits
  CrosstalkSchedule schedule;
};

/// After each system CX, emits the first `level` environment CX gates the
/// profile pairs with that edge, and records them as concurrent.
CrosstalkBoost boost_crosstalk(const Circuit& c, const DeviceProfile& profile, int level);

/// Simulator options realising the Pauli stretch exactly.
SimulationOptions boost_probabilistic(double stretch);

/// A boosted circuit and how to simulate it. System qubits are 0..n-1.
struct BoostedRun {
  Circuit circuit;
  SimulationOptions options;
  int system_qubits = 0;
};

BoostedRun prepare_boost(const Circuit& c, const BoostSpec& spec, const DeviceProfile& profile);

/// Noisy simulation of a prepared run, reduced to the system qubits.
DensityMatrix simulate_boosted(const BoostedRun& run, const DeviceProfile& profile);

/// One noisy state per spec, in order.
std::vector<DensityMatrix> make_fault_family(const Circuit& c, std::span<const BoostSpec> specs,
                                             const DeviceProfile& profile);

}  // namespace gsemit

#endif  // GSEMIT_BOOST_HPP
