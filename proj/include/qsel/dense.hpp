// Copyright 2026 The qsel Authors
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

// Small dense-matrix toolkit. Deliberately naive: explicit tensor products
// and full matrix-vector products, used as an independent route to check the
// bit-indexed implementations against.

#pragma once

#include <cstddef>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/hilbert.hpp"

namespace qsel::dense {

struct Matrix {
  std::size_t dim = 0;
  std::vector<cdouble> a;  // row major, dim x dim

  Matrix() = default;
  explicit Matrix(std::size_t d) : dim(d), a(d * d, 0.0) {}

  cdouble &at(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  const cdouble &at(std::size_t r, std::size_t c) const {
    return a[r * dim + c];
  }

  static Matrix identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static Matrix from_mat2(const Mat2 &u) {
    Matrix m(2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m.at(r, c) = u.at(r, c);
    return m;
  }
};

inline Matrix kron(const Matrix &x, const Matrix &y) {
  Matrix m(x.dim * y.dim);
  for (std::size_t rx = 0; rx < x.dim; ++rx)
    for (std::size_t cx = 0; cx < x.dim; ++cx)
      for (std::size_t ry = 0; ry < y.dim; ++ry)
        for (std::size_t cy = 0; cy < y.dim; ++cy)
          m.at(rx * y.dim + ry, cx * y.dim + cy) = x.at(rx, cx) * y.at(ry, cy);
  return m;
}

inline Matrix operator*(const Matrix &x, const Matrix &y) {
  Matrix m(x.dim);
  for (std::size_t r = 0; r < x.dim; ++r)
    for (std::size_t k = 0; k < x.dim; ++k) {
      const cdouble v = x.at(r, k);
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < x.dim; ++c) m.at(r, c) += v * y.at(k, c);
    }
  return m;
}

inline Matrix operator+(const Matrix &x, const Matrix &y) {
  Matrix m = x;
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] += y.a[i];
  return m;
}

inline Matrix operator-(const Matrix &x, const Matrix &y) {
  Matrix m = x;
  for (std::size_t i = 0; i < m.a.size(); ++i) m.a[i] -= y.a[i];
  return m;
}

inline Matrix operator*(cdouble s, const Matrix &x) {
  Matrix m = x;
  for (auto &v : m.a) v *= s;
  return m;
}

inline std::vector<cdouble> apply(const Matrix &m,
                                  const std::vector<cdouble> &v) {
  std::vector<cdouble> out(m.dim, 0.0);
  for (std::size_t r = 0; r < m.dim; ++r) {
    cdouble s = 0.0;
    for (std::size_t c = 0; c < m.dim; ++c) s += m.at(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

inline QuantumState apply(const Matrix &m, const QuantumState &state,
                          bool renormalize = false) {
  return QuantumState(state.num_qubits(), apply(m, state.amplitudes()),
                      renormalize);
}

// u acting on qubit q of an n-qubit register: I x ... x u x ... x I.
inline Matrix embed(const Mat2 &u, int n, int q) {
  Matrix m = Matrix::identity(1);
  for (int k = 1; k <= n; ++k)
    m = kron(m, k == q ? Matrix::from_mat2(u) : Matrix::identity(2));
  return m;
}

inline Matrix hadamard_all(int n) {
  Matrix m = Matrix::identity(std::size_t{1} << n);
  for (int q = 1; q <= n; ++q) m = m * embed(kGateH, n, q);
  return m;
}

// Projector onto the span of the given computational basis indices.
inline Matrix basis_projector(int n, const std::vector<std::uint64_t> &kept) {
  Matrix m(std::size_t{1} << n);
  for (auto idx : kept) m.at(idx, idx) = 1.0;
  return m;
}

// CNOT with the given control and target lines of an n-qubit register.
inline Matrix cnot(int n, int control, int target) {
  const std::size_t d = std::size_t{1} << n;
  const std::uint64_t cm = qubit_mask(n, control);
  const std::uint64_t tm = qubit_mask(n, target);
  Matrix m(d);
  for (std::uint64_t i = 0; i < d; ++i)
    m.at((i & cm) ? (i ^ tm) : i, i) = 1.0;
  return m;
}

}  // namespace qsel::dense
