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

#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qsel/common.hpp"

namespace qsel {

// Circuit parameters for one large readout junction ("junction 0") shunted by
// n parallel charge qubits. Currents are in arbitrary consistent units;
// fluxes are region fluxes in units of the flux quantum, entry j (1-based)
// giving the flux threading region s_{j-1,j}.
struct DeviceConfig {
  int n_qubits = 0;
  std::vector<double> i_c;   // per-qubit junction critical currents
  double i_c0 = 0.0;         // critical current of junction 0
  double i_t0 = 0.0;         // switching threshold of junction 0
  std::vector<double> fluxes;

  double max_qubit_current() const {
    double m = 0.0;
    for (double v : i_c) m = std::max(m, v);
    return m;
  }

  // Throws ConfigError on hard violations; returns soft warnings, e.g. when
  // the large-junction regime i_c0 >> i_c is not actually satisfied.
  std::vector<std::string> validate() const {
    if (n_qubits < 1) throw ConfigError("n_qubits must be at least 1");
    if (static_cast<int>(i_c.size()) != n_qubits)
      throw ConfigError("i_c must list one critical current per qubit");
    if (static_cast<int>(fluxes.size()) != n_qubits)
      throw ConfigError("fluxes must list one region flux per qubit");
    for (double v : i_c)
      if (!(v > 0.0)) throw ConfigError("all qubit critical currents must be positive");
    if (!(i_c0 > 0.0)) throw ConfigError("i_c0 must be positive");
    if (!(i_t0 > 0.0) || i_t0 > i_c0)
      throw ConfigError("i_t0 must satisfy 0 < i_t0 <= i_c0");
    std::vector<std::string> warnings;
    if (i_c0 < 10.0 * max_qubit_current())
      warnings.push_back(
          "i_c0 is less than 10x the largest qubit critical current; the "
          "large-junction expansion is marginal");
    return warnings;
  }

  DeviceConfig with_fluxes(std::vector<double> f) const {
    DeviceConfig c = *this;
    c.fluxes = std::move(f);
    return c;
  }
};

// Cumulative flux F_j (in flux quanta) threading the loop through junction 0
// and qubit j: the partial sum of region fluxes up to region s_{j-1,j}.
inline double cumulative_flux(const DeviceConfig &config, int j) {
  if (j < 1 || j > config.n_qubits)
    throw ArgumentError("cumulative_flux: qubit index out of range");
  double f = 0.0;
  for (int m = 1; m <= j; ++m) f += config.fluxes[m - 1];
  return f;
}

// Coefficients of the total current operator through junction 0, which is
// diagonal in the +/- product basis:
//
//   I(s) = sum_j a_j s_j - C - sum_{j>i} b_ij s_i s_j
//
// with a_j = sin(pi F_j) I_cj, C = (1/4 I_c0) sum_j sin(2 pi F_j) I_cj^2 and
// b_ij = (1/2 I_c0) sin(pi (F_i + F_j)) I_ci I_cj.
struct CurrentCoefficients {
  int n = 0;
  std::vector<double> linear;  // a_j, index j-1
  double offset = 0.0;         // C
  std::vector<double> pair;    // b_ij for j > i, flattened (see pair_term)
  double current_scale = 0.0;  // max_j I_cj, used by coupled_set

  double pair_term(int i, int j) const {
    if (i == j) throw ArgumentError("pair term is undefined on the diagonal");
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n) throw ArgumentError("pair term index out of range");
    // Row-packed upper triangle: (i,j) with 1 <= i < j <= n.
    const int row_start = (i - 1) * n - (i - 1) * i / 2;
    return pair[row_start + (j - i - 1)];
  }
};

inline CurrentCoefficients coefficients(const DeviceConfig &config) {
  config.validate();
  const int n = config.n_qubits;
  CurrentCoefficients c;
  c.n = n;
  c.current_scale = config.max_qubit_current();
  std::vector<double> cum(n);
  for (int j = 1; j <= n; ++j) cum[j - 1] = cumulative_flux(config, j);

  c.linear.resize(n);
  for (int j = 1; j <= n; ++j)
    c.linear[j - 1] =
        std::sin(std::numbers::pi * cum[j - 1]) * config.i_c[j - 1];

  c.offset = 0.0;
  for (int j = 1; j <= n; ++j)
    c.offset += std::sin(2.0 * std::numbers::pi * cum[j - 1]) *
                config.i_c[j - 1] * config.i_c[j - 1];
  c.offset /= 4.0 * config.i_c0;

  c.pair.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      c.pair.push_back(std::sin(std::numbers::pi * (cum[i - 1] + cum[j - 1])) *
                       config.i_c[i - 1] * config.i_c[j - 1] /
                       (2.0 * config.i_c0));
  return c;
}

// Eigenvalue of the current operator on the product eigenstate labeled by
// the sign values s_j in {+1, -1}.
inline double eigenvalue(const CurrentCoefficients &c,
                         std::span<const int> signs) {
  if (static_cast<int>(signs.size()) != c.n)
    throw ArgumentError("sign string length does not match qubit count");
  double v = 0.0;
  for (int j = 0; j < c.n; ++j) v += c.linear[j] * signs[j];
  v -= c.offset;
  std::size_t k = 0;
  for (int i = 0; i < c.n; ++i)
    for (int j = i + 1; j < c.n; ++j, ++k) v -= c.pair[k] * signs[i] * signs[j];
  return v;
}

inline double eigenvalue(const CurrentCoefficients &c, const std::string &s) {
  std::vector<int> signs;
  signs.reserve(s.size());
  for (char ch : s) {
    if (ch == '+')
      signs.push_back(+1);
    else if (ch == '-')
      signs.push_back(-1);
    else
      throw ArgumentError("sign string must contain only '+' and '-'");
  }
  return eigenvalue(c, signs);
}

// Same, with the sign string packed into a basis index (bit 1 = '-').
inline double eigenvalue_at(const CurrentCoefficients &c, std::uint64_t s) {
  double v = 0.0;
  for (int j = 1; j <= c.n; ++j) v += c.linear[j - 1] * sign_at(s, c.n, j);
  v -= c.offset;
  std::size_t k = 0;
  for (int i = 1; i <= c.n; ++i)
    for (int j = i + 1; j <= c.n; ++j, ++k)
      v -= c.pair[k] * sign_at(s, c.n, i) * sign_at(s, c.n, j);
  return v;
}

// Qubits whose linear coefficient is significant on the scale of the qubit
// critical currents. Qubits outside the set may still enter pair terms of
// order I_c^2/I_c0; the ideal coupling model drops those.
inline std::vector<int> coupled_set(const CurrentCoefficients &c,
                                    double tol = kCoupledSetTol) {
  if (tol < 0.0) throw ArgumentError("coupled_set: tol must be nonnegative");
  std::vector<int> out;
  for (int j = 1; j <= c.n; ++j)
    if (std::abs(c.linear[j - 1]) > tol * c.current_scale) out.push_back(j);
  return out;
}

}  // namespace qsel
