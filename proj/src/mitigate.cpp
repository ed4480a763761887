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

#include "gsemit/mitigate.hpp"

#include <cmath>
#include <set>

#include <fmt/core.h>

namespace gsemit {

SubspaceSpec SubspaceSpec::fault(std::vector<std::size_t> indices) {
  SubspaceSpec s;
  s.kind = Kind::Fault;
  s.indices = std::move(indices);
  return s;
}

SubspaceSpec SubspaceSpec::power(int max_power) {
  SubspaceSpec s;
  s.kind = Kind::Power;
  s.max_power = max_power;
  return s;
}

void SubspaceSpec::validate() const {
  if (kind == Kind::Fault) {
    if (indices.empty()) {
      throw MitigationError("fault subspace needs at least one basis");
    }
    if (std::set<std::size_t>(indices.begin(), indices.end()).size() != indices.size()) {
      throw MitigationError("fault subspace indices must be unique");
    }
  } else if (max_power < 1) {
    throw MitigationError(fmt::format("power subspace exponent must be >= 1, got {}", max_power));
  }
}

std::size_t SubspaceSpec::dimension() const {
  return kind == Kind::Fault ? indices.size() : static_cast<std::size_t>(max_power) + 1;
}

PairMoments direct_pair_moments(const DensityMatrix& rho_i, const DensityMatrix& rho_j,
                                const PauliSum& h) {
  if (rho_i.n_qubits() != rho_j.n_qubits() || rho_i.n_qubits() != h.n_qubits()) {
    throw MitigationError("pair moments: qubit counts differ");
  }
  const CMatrix product = rho_i.matrix() * rho_j.matrix();
  return {product.trace(), trace_with_pauli(product, h)};
}

namespace {

void require_size(const DensityMatrix& rho, const PauliSum& h) {
  if (rho.n_qubits() != h.n_qubits()) {
    throw MitigationError(fmt::format("state has {} qubits, observable {}", rho.n_qubits(),
                                      h.n_qubits()));
  }
}

CMatrix matrix_power(const CMatrix& m, int k) {
  CMatrix out = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

// (Tr[rho^k], Tr[rho^k H]).
PairMoments power_moment(const DensityMatrix& rho, const PauliSum& h, int k,
                         const PairEvaluator& pairs) {
  if (k == 2 && pairs) return pairs(rho, rho, h);
  if (k == 2) return direct_pair_moments(rho, rho, h);
  const CMatrix p = matrix_power(rho.matrix(), k);
  return {p.trace(), trace_with_pauli(p, h)};
}

}  // namespace

MitigationResult raw_energy(const DensityMatrix& rho, const PauliSum& h) {
  require_size(rho, h);
  MitigationResult r;
  r.method = "raw";
  r.energy = expectation(rho, h);
  return r;
}

MitigationResult vd_energy(const DensityMatrix& rho, const PauliSum& h, int m,
                           const PairEvaluator& pairs) {
  require_size(rho, h);
  if (m < 2) {
    throw MitigationError(fmt::format("virtual distillation needs m >= 2, got {}", m));
  }
  const PairMoments mom = power_moment(rho, h, m, pairs);
  if (std::abs(mom.overlap) < 1e-14) {
    throw MitigationError("virtual distillation: Tr[rho^m] is numerically zero");
  }
  MitigationResult r;
  r.method = fmt::format("vd{}", m);
  r.energy = mom.energy.real() / mom.overlap.real();
  return r;
}

std::pair<CMatrix, CMatrix> build_gse_matrices(std::span<const DensityMatrix> family,
                                               const PauliSum& h, const SubspaceSpec& spec,
                                               const PairEvaluator& pairs) {
  spec.validate();
  if (family.empty()) {
    throw MitigationError("empty state family");
  }
  for (const auto& rho : family) require_size(rho, h);

  const std::size_t k = spec.dimension();
  const double scale = 1.0 / std::ldexp(1.0, h.n_qubits());
  CMatrix hm = CMatrix::Zero(k, k);
  CMatrix sm = CMatrix::Zero(k, k);

  auto store = [&](std::size_t i, std::size_t j, const PairMoments& mom) {
    if (i == j) {
      hm(i, i) = mom.energy.real() * scale;
      sm(i, i) = mom.overlap.real() * scale;
    } else {
      hm(i, j) = mom.energy * scale;
      sm(i, j) = mom.overlap * scale;
      hm(j, i) = std::conj(hm(i, j));
      sm(j, i) = std::conj(sm(i, j));
    }
  };

  if (spec.kind == SubspaceSpec::Kind::Fault) {
    for (std::size_t idx : spec.indices) {
      if (idx >= family.size()) {
        throw MitigationError(fmt::format("fault index {} outside family of {}", idx,
                                          family.size()));
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) {
        const DensityMatrix& a = family[spec.indices[i]];
        const DensityMatrix& b = family[spec.indices[j]];
        store(i, j, pairs ? pairs(a, b, h) : direct_pair_moments(a, b, h));
      }
    }
  } else {
    if (family.size() != 1) {
      throw MitigationError("power subspace takes exactly one base state");
    }
    std::vector<PairMoments> moments;
    for (int p = 0; p <= 2 * spec.max_power; ++p) {
      moments.push_back(power_moment(family[0], h, p, pairs));
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i; j < k; ++j) store(i, j, moments[i + j]);
    }
  }
  return {hm, sm};
}

MitigationResult gse_energy(std::span<const DensityMatrix> family, const PauliSum& h,
                            const SubspaceSpec& spec, double rel_threshold,
                            const PairEvaluator& pairs) {
  const auto [hm, sm] = build_gse_matrices(family, h, spec, pairs);
  GenEigResult sol;
  try {
    sol = gen_eigh(hm, sm, rel_threshold);
  } catch (const LinalgError& e) {
    throw MitigationError(fmt::format("subspace solve failed: {}", e.what()));
  }
  MitigationResult r;
  r.method = spec.kind == SubspaceSpec::Kind::Fault
                 ? "gse_fault"
                 : fmt::format("gse_power{}", spec.max_power);
  r.energy = sol.energies.front();
  const CVector& c = sol.coefficients.front();
  r.coefficients.assign(c.data(), c.data() + c.size());
  r.metric_spectrum = sol.s_eigenvalues;
  r.rank_kept = sol.rank_kept;
  return r;
}

}  // namespace gsemit
