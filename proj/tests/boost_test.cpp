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

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "gsemit/circuit.hpp"
#include "gsemit/noise.hpp"
#include "gsemit/profile.hpp"
#include "test_util.hpp"

using namespace gsemit;
using gsemit::testing::max_abs;

namespace {

struct Fixture {
  Circuit native;
  CVector ideal;
};

// Optimised three-qubit, depth-2 ansatz lowered against `profile`.
Fixture ansatz_fixture(const DeviceProfile& profile) {
  static const OptimizeResult opt = optimize(build_ansatz(3, 2), build_tfi(3, 1.0), 0);
  return {transpile(build_ansatz(3, 2), profile).bind(opt.params),
          run_statevector(build_ansatz(3, 2), opt.params)};
}

// Every system edge of a three-qubit register paired with two environment
// edges on qubits 3..6.
DeviceProfile crosstalk_profile(double factor) {
  DeviceProfile p = DeviceProfile::uniform(7, 1e5, 1e5, 2.5e-4, 1e-2);
  for (const Edge& sys : {Edge(0, 1), Edge(0, 2), Edge(1, 2)}) {
    p.crosstalk.push_back({sys, Edge(3, 4), factor});
    p.crosstalk.push_back({sys, Edge(5, 6), 1.5});
  }
  return p;
}

DensityMatrix run(const Circuit& c, const BoostSpec& spec, const DeviceProfile& profile) {
  return simulate_boosted(prepare_boost(c, spec, profile), profile);
}

}  // namespace

TEST(BoostSpecs, LabelsAndParsing) {
  EXPECT_EQ((BoostSpec{BoostFlavor::Decoherence, 10000}).label(), "decoherence:10000");
  EXPECT_EQ((BoostSpec{BoostFlavor::GateRepetition, 1}).label(), "gate_repetition:1");
  EXPECT_EQ(BoostSpec::base().label(), "none");
  for (BoostFlavor f : {BoostFlavor::None, BoostFlavor::Decoherence, BoostFlavor::GateRepetition,
                        BoostFlavor::Crosstalk, BoostFlavor::Probabilistic}) {
    EXPECT_EQ(parse_flavor(flavor_name(f)), f);
  }
  EXPECT_THROW(parse_flavor("teleport"), BoostError);
}

TEST(BoostSpecs, ValidationRejectsBadMagnitudes) {
  EXPECT_THROW((BoostSpec{BoostFlavor::GateRepetition, 1.5}).validate(), BoostError);
  EXPECT_THROW((BoostSpec{BoostFlavor::Crosstalk, 0.5}).validate(), BoostError);
  EXPECT_THROW((BoostSpec{BoostFlavor::Probabilistic, 0.9}).validate(), BoostError);
  EXPECT_THROW((BoostSpec{BoostFlavor::Decoherence, -1.0}).validate(), BoostError);
  EXPECT_THROW((BoostSpec{BoostFlavor::Decoherence, std::nan("")}).validate(), BoostError);
  EXPECT_NO_THROW((BoostSpec{BoostFlavor::Probabilistic, 1.0}).validate());
}

TEST(Boosts, PreserveTheIdealUnitary) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const DeviceProfile quiet = [&] {
    DeviceProfile p = DeviceProfile::noiseless(7);
    p.crosstalk = profile.crosstalk;
    return p;
  }();
  for (const BoostSpec& spec :
       {BoostSpec{BoostFlavor::Decoherence, 1e4}, BoostSpec{BoostFlavor::GateRepetition, 2},
        BoostSpec{BoostFlavor::Crosstalk, 2}, BoostSpec{BoostFlavor::Probabilistic, 3}}) {
    EXPECT_GE(run(f.native, spec, quiet).fidelity(f.ideal), 1.0 - 1e-10) << spec.label();
  }
}

TEST(Boosts, DecoherenceBufferZeroIsUnchanged) {
  const DeviceProfile profile = DeviceProfile::uniform(3, 1e5, 1e5, 2.5e-4, 1e-2);
  const Fixture f = ansatz_fixture(profile);
  EXPECT_EQ(boost_decoherence(f.native, 0.0).gates().size(), f.native.gates().size());
  EXPECT_EQ(boost_decoherence(f.native, 5.0).gates().size(), f.native.gates().size() + 3);
  EXPECT_THROW(boost_decoherence(f.native, -1.0), BoostError);
}

TEST(Boosts, RepetitionMultipliesCxCount) {
  const DeviceProfile profile = DeviceProfile::uniform(3, 1e5, 1e5, 2.5e-4, 1e-2);
  const Fixture f = ansatz_fixture(profile);
  for (int k = 0; k <= 3; ++k) {
    const Circuit c = boost_gate_repetition(f.native, k);
    EXPECT_EQ(c.cx_count(), static_cast<std::size_t>(2 * k + 1) * f.native.cx_count());
    EXPECT_EQ(c.gates().size() - c.cx_count(), f.native.gates().size() - f.native.cx_count());
  }
  EXPECT_THROW(boost_gate_repetition(f.native, -1), BoostError);
}

TEST(Boosts, FidelityNonIncreasingOnGrids) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const std::vector<std::vector<BoostSpec>> grids = {
      {{BoostFlavor::Decoherence, 0}, {BoostFlavor::Decoherence, 1e2},
       {BoostFlavor::Decoherence, 1e3}, {BoostFlavor::Decoherence, 1e4},
       {BoostFlavor::Decoherence, 1e5}},
      {{BoostFlavor::GateRepetition, 0}, {BoostFlavor::GateRepetition, 1},
       {BoostFlavor::GateRepetition, 2}, {BoostFlavor::GateRepetition, 3}},
      {{BoostFlavor::Crosstalk, 0}, {BoostFlavor::Crosstalk, 1}, {BoostFlavor::Crosstalk, 2}},
      {{BoostFlavor::Probabilistic, 1}, {BoostFlavor::Probabilistic, 1.5},
       {BoostFlavor::Probabilistic, 2}, {BoostFlavor::Probabilistic, 3}},
  };
  for (const auto& grid : grids) {
    double previous = 2.0;
    for (const BoostSpec& spec : grid) {
      const double fid = run(f.native, spec, profile).fidelity(f.ideal);
      EXPECT_LE(fid, previous + 1e-12) << spec.label();
      previous = fid;
    }
  }
}

TEST(Boosts, PurityNonIncreasingUnderUnitalBoosts) {
  // Depolarising-only noise is unital, so extra noise can only lower purity.
  DeviceProfile profile = crosstalk_profile(2.0);
  profile.t1_ns.assign(7, std::numeric_limits<double>::infinity());
  profile.t2_ns.assign(7, std::numeric_limits<double>::infinity());
  const Fixture f = ansatz_fixture(profile);
  for (BoostFlavor flavor : {BoostFlavor::GateRepetition, BoostFlavor::Crosstalk}) {
    double previous = 2.0;
    for (int m = 0; m <= 2; ++m) {
      const double p = run(f.native, {flavor, static_cast<double>(m)}, profile).purity();
      EXPECT_LE(p, previous + 1e-12);
      previous = p;
    }
  }
}

TEST(Boosts, CrosstalkLevelZeroIsBase) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const DensityMatrix base = run(f.native, BoostSpec::base(), profile);
  const DensityMatrix zero = run(f.native, {BoostFlavor::Crosstalk, 0}, profile);
  EXPECT_LT(max_abs(base.matrix() - zero.matrix()), 1e-14);
}

TEST(Boosts, CrosstalkLevelOneMatchesDoubledCxError) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const DensityMatrix boosted = run(f.native, {BoostFlavor::Crosstalk, 1}, profile);

  DeviceProfile doubled = DeviceProfile::uniform(3, 1e5, 1e5, 2.5e-4, 2e-2);
  const DensityMatrix manual = simulate(transpile(build_ansatz(3, 2), doubled)
                                            .bind(optimize(build_ansatz(3, 2), build_tfi(3, 1.0), 0)
                                                      .params),
                                        doubled);
  EXPECT_LT(max_abs(boosted.matrix() - manual.matrix()), 1e-12);
}

TEST(Boosts, CrosstalkRejectsBadProfiles) {
  const Fixture f = ansatz_fixture(crosstalk_profile(2.0));
  EXPECT_THROW(boost_crosstalk(f.native, crosstalk_profile(2.0), 3), BoostError);
  EXPECT_THROW(boost_crosstalk(f.native, DeviceProfile::uniform(7, 1e5, 1e5, 0, 0), 1),
               BoostError);
  DeviceProfile overlap = crosstalk_profile(2.0);
  overlap.crosstalk.push_back({Edge(0, 1), Edge(2, 3), 2.0});
  EXPECT_THROW(boost_crosstalk(f.native, overlap, 1), BoostError);
}

TEST(Boosts, CrosstalkScheduleAndWidth) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const CrosstalkBoost b = boost_crosstalk(f.native, profile, 2);
  EXPECT_EQ(b.circuit.n_qubits(), 7);
  EXPECT_EQ(b.circuit.cx_count(), 3 * f.native.cx_count());
  EXPECT_EQ(b.schedule.concurrent.size(), f.native.cx_count());
  for (const auto& [sys, envs] : b.schedule.concurrent) {
    EXPECT_EQ(envs.size(), 2u);
    EXPECT_EQ(b.circuit.gates()[sys].kind, GateKind::CX);
  }
}

TEST(Boosts, StretchTwoEqualsOneExtraDepolarisingLayer) {
  const double sx = 2.5e-4;
  const double cx = 1e-2;
  const DeviceProfile profile = DeviceProfile::uniform(3, 1e5, 1e5, sx, cx);
  const Fixture f = ansatz_fixture(profile);
  const DensityMatrix stretched = run(f.native, {BoostFlavor::Probabilistic, 2.0}, profile);
  // Two depolarising channels compose to one with 1 - 4p'/3 = (1 - 4p/3)^2.
  auto twice = [](double p) { return 0.75 * (1.0 - std::pow(1.0 - 4.0 * p / 3.0, 2)); };
  const DeviceProfile composed = DeviceProfile::uniform(3, 1e5, 1e5, twice(sx), twice(cx));
  EXPECT_LT(max_abs(stretched.matrix() - simulate(f.native, composed).matrix()), 1e-12);
}

TEST(Boosts, ProbabilisticOptions) {
  EXPECT_DOUBLE_EQ(boost_probabilistic(2.5).pauli_stretch, 2.5);
  EXPECT_TRUE(boost_probabilistic(1.0).noisy);
  EXPECT_THROW(boost_probabilistic(0.5), BoostError);
}

TEST(FaultFamily, OrderAndBaseState) {
  const DeviceProfile profile = crosstalk_profile(2.0);
  const Fixture f = ansatz_fixture(profile);
  const std::vector<BoostSpec> specs = {BoostSpec::base(), {BoostFlavor::Decoherence, 1e4},
                                        {BoostFlavor::GateRepetition, 1}};
  const auto family = make_fault_family(f.native, specs, profile);
  ASSERT_EQ(family.size(), 3u);
  EXPECT_LT(max_abs(family[0].matrix() - simulate(f.native, profile).matrix()), 1e-14);
  for (std::size_t i = 0; i < family.size(); ++i) {
    EXPECT_EQ(family[i].n_qubits(), 3);
    EXPECT_NO_THROW(family[i].validate());
    EXPECT_LT(max_abs(family[i].matrix() - run(f.native, specs[i], profile).matrix()), 1e-14);
  }
  EXPECT_THROW(make_fault_family(f.native, {}, profile), BoostError);
}
