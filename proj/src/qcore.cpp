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

#include "gsemit/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/core.h>

namespace gsemit {

int dimension_to_qubits(std::size_t dim) {
  if (!is_power_of_two(dim)) {
    throw LinalgError(fmt::format("dimension {} is not a power of two", dim));
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) {
    ++n;
  }
  return n;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) {
    out = kron(out, f);
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::span<const int> keep, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (m.rows() != static_cast<Eigen::Index>(dim) || m.cols() != static_cast<Eigen::Index>(dim)) {
    throw LinalgError(fmt::format("partial_trace: matrix is {}x{}, expected {}x{}", m.rows(),
                                  m.cols(), dim, dim));
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_qubits) {
      throw LinalgError(fmt::format("partial_trace: qubit {} out of range [0, {})", keep[i], n_qubits));
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw LinalgError("partial_trace: keep list must be strictly ascending");
    }
  }
  std::vector<int> traced;
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
      traced.push_back(q);
    }
  }
  const int nk = static_cast<int>(keep.size());
  const int nt = static_cast<int>(traced.size());

  // Scatter a kept index and an environment index into a full basis index.
  auto compose = [&](std::size_t kept_bits, std::size_t env_bits) {
    std::size_t idx = 0;
    for (int i = 0; i < nk; ++i) {
      if (kept_bits & qubit_mask(nk, i)) idx |= qubit_mask(n_qubits, keep[i]);
    }
    for (int i = 0; i < nt; ++i) {
      if (env_bits & qubit_mask(nt, i)) idx |= qubit_mask(n_qubits, traced[i]);
    }
    return idx;
  };

  const std::size_t dk = std::size_t{1} << nk;
  const std::size_t de = std::size_t{1} << nt;
  CMatrix out = CMatrix::Zero(dk, dk);
  for (std::size_t c = 0; c < dk; ++c) {
    for (std::size_t r = 0; r < dk; ++r) {
      Complex acc = 0.0;
      for (std::size_t e = 0; e < de; ++e) {
        acc += m(compose(r, e), compose(c, e));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw LinalgError("hermiticity_defect: matrix is not square");
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_hermitian(const CMatrix& m, double tol, const char* what) {
  if (m.rows() != m.cols()) {
    throw LinalgError(fmt::format("{}: matrix is {}x{}, not square", what, m.rows(), m.cols()));
  }
  if (m.size() == 0) {
    throw LinalgError(fmt::format("{}: empty matrix", what));
  }
  const double defect = hermiticity_defect(m);
  if (defect > tol * std::max(1.0, m.norm())) {
    throw LinalgError(fmt::format("{}: not Hermitian (defect {:.3e})", what, defect));
  }
}

EigResult eigh(const CMatrix& m) {
  require_hermitian(m, 1e-10, "eigh");
  const CMatrix sym = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw LinalgError("eigh: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Fixes the global phase so the largest-magnitude component is real positive.
void normalize_phase(CVector& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (std::abs(v(arg)) > 0.0) {
    v *= std::conj(v(arg)) / std::abs(v(arg));
  }
}

}  // namespace

GenEigResult gen_eigh(const CMatrix& h, const CMatrix& s, double rel_threshold) {
  require_hermitian(h, 1e-10, "gen_eigh(h)");
  require_hermitian(s, 1e-10, "gen_eigh(s)");
  if (h.rows() != s.rows()) {
    throw LinalgError(fmt::format("gen_eigh: h is {}x{} but s is {}x{}", h.rows(), h.cols(),
                                  s.rows(), s.cols()));
  }
  if (!(rel_threshold >= 0.0)) {
    throw LinalgError("gen_eigh: rel_threshold must be nonnegative");
  }

  const EigResult metric = eigh(s);
  GenEigResult out;
  out.s_eigenvalues.assign(metric.eigenvalues.data(),
                           metric.eigenvalues.data() + metric.eigenvalues.size());
  const double s_max = metric.eigenvalues.maxCoeff();
  if (!(s_max > 0.0) || s_max <= 1e-300) {
    throw LinalgError("gen_eigh: metric is numerically zero");
  }

  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < metric.eigenvalues.size(); ++k) {
    if (metric.eigenvalues(k) >= rel_threshold * s_max && metric.eigenvalues(k) > 0.0) {
      kept.push_back(k);
    }
  }
  if (kept.empty()) {
    throw LinalgError("gen_eigh: all metric directions discarded");
  }

  // X = V_kept diag(1/sqrt(lambda)) whitens the kept part of the metric.
  CMatrix x(s.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    x.col(static_cast<Eigen::Index>(i)) =
        metric.eigenvectors.col(kept[i]) / std::sqrt(metric.eigenvalues(kept[i]));
  }
  // Whitening by tiny eigenvalues amplifies roundoff; restore exact symmetry.
  const CMatrix h_raw = x.adjoint() * h * x;
  const CMatrix h_proj = 0.5 * (h_raw + h_raw.adjoint());
  const EigResult projected = eigh(h_proj);

  out.rank_kept = kept.size();
  for (Eigen::Index k = 0; k < projected.eigenvalues.size(); ++k) {
    CVector c = x * projected.eigenvectors.col(k);
    c /= c.norm();
    normalize_phase(c);
    out.energies.push_back(projected.eigenvalues(k));
    out.coefficients.push_back(std::move(c));
  }

  // Degenerate minimum: keep the best-conditioned representative first.
  const double e0 = out.energies.front();
  const double tie_tol = 1e-10 * std::max(1.0, std::abs(e0));
  std::size_t best = 0;
  double best_weight = -1.0;
  for (std::size_t k = 0; k < out.energies.size() && out.energies[k] - e0 <= tie_tol; ++k) {
    const double w = (out.coefficients[k].adjoint() * s * out.coefficients[k])(0, 0).real();
    if (w > best_weight) {
      best_weight = w;
      best = k;
    }
  }
  if (best != 0) {
    std::swap(out.energies[0], out.energies[best]);
    std::swap(out.coefficients[0], out.coefficients[best]);
  }
  return out;
}

double phase_insensitive_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw LinalgError("phase_insensitive_distance: shape mismatch");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  const CMatrix diff = a - phase * b;
  Eigen::JacobiSVD<CMatrix> svd(diff);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

namespace pauli {

CMatrix identity() { return CMatrix::Identity(2, 2); }

CMatrix x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix y() {
  CMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

CMatrix z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace pauli

}  // namespace gsemit
