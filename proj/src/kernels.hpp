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

// In-place kernels shared by the statevector and density-matrix paths.
// Eigen matrices are column-major: entry (r, c) lives at data[r + c * dim].

#ifndef GSEMIT_SRC_KERNELS_HPP
#define GSEMIT_SRC_KERNELS_HPP

#include <array>
#include <cstddef>
#include <span>

#include "gsemit/qcore.hpp"

namespace gsemit::detail {

using Mat2 = std::array<Complex, 4>;    // row-major
using Mat4 = std::array<Complex, 16>;   // row-major

inline Mat2 to_mat2(const CMatrix& m) { return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

inline Mat4 to_mat4(const CMatrix& m) {
  Mat4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[4 * r + c] = m(r, c);
  return out;
}

template <typename M>
M conj_of(const M& m) {
  M out{};
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::conj(m[i]);
  return out;
}

// Applies a 2x2 matrix on the bit `mask` of a strided vector of length dim.
inline void apply_vec1(Complex* v, std::size_t stride, std::size_t dim, std::size_t mask,
                       const Mat2& u) {
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    Complex& a = v[i * stride];
    Complex& b = v[(i | mask) * stride];
    const Complex a0 = a;
    const Complex b0 = b;
    a = u[0] * a0 + u[1] * b0;
    b = u[2] * a0 + u[3] * b0;
  }
}

// Applies a 4x4 matrix; mask_hi is the first qubit of the pair.
inline void apply_vec2(Complex* v, std::size_t stride, std::size_t dim, std::size_t mask_hi,
                       std::size_t mask_lo, const Mat4& u) {
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & (mask_hi | mask_lo)) continue;
    const std::size_t idx[4] = {i, i | mask_lo, i | mask_hi, i | mask_hi | mask_lo};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = v[idx[k] * stride];
    for (int r = 0; r < 4; ++r) {
      v[idx[r] * stride] =
          u[4 * r] * in[0] + u[4 * r + 1] * in[1] + u[4 * r + 2] * in[2] + u[4 * r + 3] * in[3];
    }
  }
}

// rho <- U rho U^dagger for a single-qubit U.
inline void conjugate1(CMatrix& rho, std::size_t mask, const Mat2& u) {
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  Complex* d = rho.data();
  for (std::size_t c = 0; c < dim; ++c) apply_vec1(d + c * dim, 1, dim, mask, u);
  const Mat2 uc = conj_of(u);
  for (std::size_t r = 0; r < dim; ++r) apply_vec1(d + r, dim, dim, mask, uc);
}

inline void conjugate2(CMatrix& rho, std::size_t mask_hi, std::size_t mask_lo, const Mat4& u) {
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  Complex* d = rho.data();
  for (std::size_t c = 0; c < dim; ++c) apply_vec2(d + c * dim, 1, dim, mask_hi, mask_lo, u);
  const Mat4 uc = conj_of(u);
  for (std::size_t r = 0; r < dim; ++r) apply_vec2(d + r, dim, dim, mask_hi, mask_lo, uc);
}

// Superoperator of a single-qubit channel acting on vec(block) ordered
// (00, 01, 10, 11), i.e. S[(i,j),(a,b)] = sum_k K(i,a) conj(K(j,b)).
using Superop = std::array<Complex, 16>;

inline Superop superop_from_kraus(std::span<const Mat2> kraus) {
  Superop s{};
  for (const auto& k : kraus) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            s[4 * (2 * i + j) + (2 * a + b)] += k[2 * i + a] * std::conj(k[2 * j + b]);
  }
  return s;
}

// Channel composition: `second` after `first`.
inline Superop compose(const Superop& second, const Superop& first) {
  Superop out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k) out[4 * r + c] += second[4 * r + k] * first[4 * k + c];
  return out;
}

inline void apply_superop(CMatrix& rho, std::size_t mask, const Superop& s) {
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  for (std::size_t c = 0; c < dim; ++c) {
    if (c & mask) continue;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r & mask) continue;
      Complex& b00 = rho(r, c);
      Complex& b01 = rho(r, c | mask);
      Complex& b10 = rho(r | mask, c);
      Complex& b11 = rho(r | mask, c | mask);
      const Complex in[4] = {b00, b01, b10, b11};
      Complex out[4];
      for (int i = 0; i < 4; ++i) {
        out[i] = s[4 * i] * in[0] + s[4 * i + 1] * in[1] + s[4 * i + 2] * in[2] + s[4 * i + 3] * in[3];
      }
      b00 = out[0];
      b01 = out[1];
      b10 = out[2];
      b11 = out[3];
    }
  }
}

}  // namespace gsemit::detail

#endif  // GSEMIT_SRC_KERNELS_HPP
