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

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/hilbert.hpp"

namespace qsel {

namespace detail {

// Phase-canonical form: the first entry with significant magnitude is made
// real and positive, so matrices equal up to global phase collide.
inline Mat2 phase_canonical(Mat2 u) {
  for (const auto &e : u.m) {
    const double mag = std::abs(e);
    if (mag > 1e-6) {
      const cdouble ph = std::conj(e) / mag;
      for (auto &x : u.m) x *= ph;
      break;
    }
  }
  return u;
}

inline std::string mat2_key(const Mat2 &u) {
  char buf[128];
  std::string key;
  auto grid = [](double v) {
    return std::round(v * 1e6) / 1e6 + 0.0;  // snap and clear negative zero
  };
  for (const auto &e : u.m) {
    std::snprintf(buf, sizeof buf, "%+.6f%+.6f;", grid(e.real()),
                  grid(e.imag()));
    key += buf;
  }
  return key;
}

}  // namespace detail

// The 24 single-qubit Clifford unitaries (up to global phase), generated as
// the closure of {H, S}. The first four entries are I, X, Y, Z.
inline const std::vector<Mat2> &single_qubit_cliffords() {
  static const std::vector<Mat2> group = [] {
    std::vector<Mat2> seed{kGateI, kGateX, kGateY, kGateZ};
    std::vector<Mat2> out;
    std::vector<std::string> keys;
    auto push = [&](const Mat2 &candidate) {
      const Mat2 canon = detail::phase_canonical(candidate);
      const std::string key = detail::mat2_key(canon);
      for (const auto &k : keys)
        if (k == key) return false;
      keys.push_back(key);
      out.push_back(canon);
      return true;
    };
    for (const auto &g : seed) push(g);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Mat2 g = out[i];
      push(detail::phase_canonical(g * kGateH));
      push(detail::phase_canonical(g * kGateS));
      push(detail::phase_canonical(kGateH * g));
      push(detail::phase_canonical(kGateS * g));
    }
    if (out.size() != 24)
      throw Error("single-qubit Clifford closure has unexpected size");
    return out;
  }();
  return group;
}

inline const std::array<Mat2, 4> &pauli_group() {
  static const std::array<Mat2, 4> paulis{kGateI, kGateX, kGateY, kGateZ};
  return paulis;
}

namespace detail {

// Depth-first search over per-qubit unitaries from `pool`, applying choices
// incrementally so the prefix work is shared.
inline bool local_search(const QuantumState &current, const QuantumState &b,
                         const std::vector<Mat2> &pool, int q,
                         std::vector<int> &choice, double tol) {
  const int n = b.num_qubits();
  if (q > n) return fidelity(current, b) >= 1.0 - tol;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    choice[q - 1] = static_cast<int>(k);
    if (local_search(apply_gate(current, q, pool[k]), b, pool, q + 1, choice,
                     tol))
      return true;
  }
  return false;
}

inline std::optional<std::vector<Mat2>> local_equivalent(
    const QuantumState &a, const QuantumState &b, const std::vector<Mat2> &pool,
    double tol) {
  if (a.num_qubits() != b.num_qubits())
    throw ArgumentError("states have different qubit counts");
  const int n = a.num_qubits();
  if (n > 6)
    throw CapabilityError("exhaustive local search is bounded at 6 qubits");
  std::vector<int> choice(static_cast<std::size_t>(n), 0);
  if (!local_search(a, b, pool, 1, choice, tol)) return std::nullopt;
  std::vector<Mat2> witness;
  witness.reserve(choice.size());
  for (int k : choice) witness.push_back(pool[static_cast<std::size_t>(k)]);
  return witness;
}

}  // namespace detail

// Exhaustive search for U1 x ... x Un with Uq single-qubit Clifford mapping
// a to b up to global phase. Returns the witness list or nullopt.
inline std::optional<std::vector<Mat2>> local_clifford_equivalent(
    const QuantumState &a, const QuantumState &b, double tol = 1e-9) {
  return detail::local_equivalent(a, b, single_qubit_cliffords(), tol);
}

// Same search restricted to the Pauli group {I, X, Y, Z}.
inline std::optional<std::vector<Mat2>> local_pauli_equivalent(
    const QuantumState &a, const QuantumState &b, double tol = 1e-9) {
  const auto &paulis = pauli_group();
  return detail::local_equivalent(
      a, b, std::vector<Mat2>(paulis.begin(), paulis.end()), tol);
}

// Human-readable name for a witness entry if it is (phase-equivalent to) a
// Pauli or another named gate; "U" otherwise.
inline std::string gate_name_of(const Mat2 &u) {
  static const std::vector<std::pair<const Mat2 *, const char *>> named = {
      {&kGateI, "I"}, {&kGateX, "X"}, {&kGateY, "Y"},
      {&kGateZ, "Z"}, {&kGateH, "H"}, {&kGateS, "S"}};
  const std::string key = detail::mat2_key(detail::phase_canonical(u));
  for (const auto &[mat, name] : named)
    if (detail::mat2_key(detail::phase_canonical(*mat)) == key) return name;
  return "U";
}

}  // namespace qsel
