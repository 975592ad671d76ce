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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsel/common.hpp"

namespace qsel {

using cdouble = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

enum class Basis { computational, plus_minus };

enum class Ket { zero, one, plus, minus };

inline Ket ket_from_label(const std::string &label) {
  if (label == "|0>") return Ket::zero;
  if (label == "|1>") return Ket::one;
  if (label == "|+>") return Ket::plus;
  if (label == "|->") return Ket::minus;
  throw ArgumentError("unknown ket label: " + label);
}

inline const char *ket_label(Ket k) {
  switch (k) {
    case Ket::zero: return "|0>";
    case Ket::one: return "|1>";
    case Ket::plus: return "|+>";
    case Ket::minus: return "|->";
  }
  return "?";
}

inline std::array<cdouble, 2> ket_amplitudes(Ket k) {
  switch (k) {
    case Ket::zero: return {1.0, 0.0};
    case Ket::one: return {0.0, 1.0};
    case Ket::plus: return {kInvSqrt2, kInvSqrt2};
    case Ket::minus: return {kInvSqrt2, -kInvSqrt2};
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// 2x2 complex matrix, row major.
// ---------------------------------------------------------------------------

struct Mat2 {
  std::array<cdouble, 4> m{};

  cdouble &at(int r, int c) { return m[r * 2 + c]; }
  const cdouble &at(int r, int c) const { return m[r * 2 + c]; }

  static Mat2 identity() { return Mat2{{1.0, 0.0, 0.0, 1.0}}; }

  Mat2 adjoint() const {
    return Mat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
                 std::conj(m[3])}};
  }

  friend Mat2 operator*(const Mat2 &a, const Mat2 &b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
    return r;
  }
};

inline bool is_unitary(const Mat2 &u, double tol = kNormTol) {
  Mat2 p = u * u.adjoint();
  return std::abs(p.m[0] - 1.0) <= tol && std::abs(p.m[3] - 1.0) <= tol &&
         std::abs(p.m[1]) <= tol && std::abs(p.m[2]) <= tol;
}

inline const Mat2 kGateI = Mat2::identity();
inline const Mat2 kGateX{{0.0, 1.0, 1.0, 0.0}};
inline const Mat2 kGateY{{0.0, cdouble(0.0, -1.0), cdouble(0.0, 1.0), 0.0}};
inline const Mat2 kGateZ{{1.0, 0.0, 0.0, -1.0}};
inline const Mat2 kGateH{{kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}};
inline const Mat2 kGateS{{1.0, 0.0, 0.0, cdouble(0.0, 1.0)}};

inline const Mat2 &gate_by_name(char name) {
  switch (name) {
    case 'I': return kGateI;
    case 'X': return kGateX;
    case 'Y': return kGateY;
    case 'Z': return kGateZ;
    case 'H': return kGateH;
    case 'S': return kGateS;
  }
  throw ArgumentError(std::string("unknown gate name: ") + name);
}

// In-place Hadamard on every qubit (self-inverse). This is the change of
// basis between the computational and the +/- product basis.
inline void hadamard_all(std::vector<cdouble> &amps) {
  const std::size_t n = amps.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t base = 0; base < n; base += h << 1) {
      for (std::size_t i = base; i < base + h; ++i) {
        const cdouble a = amps[i];
        const cdouble b = amps[i + h];
        amps[i] = (a + b) * kInvSqrt2;
        amps[i + h] = (a - b) * kInvSqrt2;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Dense n-qubit register. Qubit 1 is the most significant index bit, so kets
// read left to right exactly as the basis index reads in binary.
// ---------------------------------------------------------------------------

class QuantumState {
 public:
  static constexpr int kMaxQubits = 20;

  explicit QuantumState(int n) : n_(check_width(n)), amps_(std::size_t{1} << n) {
    amps_[0] = 1.0;
  }

  QuantumState(int n, std::vector<cdouble> amps, bool renormalize = false)
      : n_(check_width(n)), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << n_))
      throw ArgumentError("amplitude count does not match qubit count");
    const double nrm = norm();
    if (renormalize) {
      if (nrm < kBranchPruneTol)
        throw ArgumentError("cannot normalize a zero vector");
      const double inv = 1.0 / std::sqrt(nrm);
      for (auto &a : amps_) a *= inv;
    } else if (std::abs(nrm - 1.0) > 1e-9) {
      throw ArgumentError("state vector is not normalized");
    }
  }

  // Sum of weighted product-basis terms written as pattern strings over the
  // alphabet {0,1,+,-}, one character per qubit. Normalizes the result.
  static QuantumState from_terms(
      int n, const std::vector<std::pair<cdouble, std::string>> &terms) {
    if (terms.empty()) throw ArgumentError("no terms given");
    std::vector<cdouble> amps(std::size_t{1} << check_width(n), 0.0);
    for (const auto &[coef, pattern] : terms) {
      if (static_cast<int>(pattern.size()) != n)
        throw ArgumentError("pattern width does not match qubit count");
      // Expand the product of single-qubit kets into the dense vector.
      std::vector<std::pair<std::uint64_t, cdouble>> partial{{0, coef}};
      for (char c : pattern) {
        Ket k;
        switch (c) {
          case '0': k = Ket::zero; break;
          case '1': k = Ket::one; break;
          case '+': k = Ket::plus; break;
          case '-': k = Ket::minus; break;
          default: throw ArgumentError("pattern must use 0, 1, + or -");
        }
        const auto kamps = ket_amplitudes(k);
        std::vector<std::pair<std::uint64_t, cdouble>> next;
        next.reserve(partial.size() * 2);
        for (const auto &[idx, amp] : partial)
          for (int bit = 0; bit < 2; ++bit)
            if (kamps[bit] != 0.0)
              next.emplace_back((idx << 1) | static_cast<unsigned>(bit),
                                amp * kamps[bit]);
        partial = std::move(next);
      }
      for (const auto &[idx, amp] : partial) amps[idx] += amp;
    }
    return QuantumState(n, std::move(amps), /*renormalize=*/true);
  }

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<cdouble> &amplitudes() const { return amps_; }

  cdouble amplitude(std::uint64_t index) const { return amps_.at(index); }

  double norm() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
  }

  // Global-phase canonical form: the first amplitude above threshold is made
  // real and positive.
  QuantumState canonical() const {
    QuantumState out = *this;
    for (const auto &a : out.amps_) {
      const double mag = std::abs(a);
      if (mag > 1e-12) {
        const cdouble phase = std::conj(a) / mag;
        for (auto &b : out.amps_) b *= phase;
        break;
      }
    }
    return out;
  }

  friend bool approx_equal(const QuantumState &a, const QuantumState &b,
                           double tol) {
    if (a.n_ != b.n_) return false;
    for (std::size_t i = 0; i < a.amps_.size(); ++i)
      if (std::abs(a.amps_[i] - b.amps_[i]) > tol) return false;
    return true;
  }

  std::vector<cdouble> &mutable_amplitudes() { return amps_; }

 private:
  static int check_width(int n) {
    if (n < 1) throw ArgumentError("qubit count must be at least 1");
    if (n > kMaxQubits)
      throw CapabilityError("dense representation capped at 20 qubits");
    return n;
  }

  int n_;
  std::vector<cdouble> amps_;
};

struct MeasurementOutcome {
  std::string label;
  double probability = 0.0;
  // Absent for branches below the prune threshold (impossible outcomes keep
  // their probability entry but no state) and for destroyed registers.
  std::optional<QuantumState> post_state;

  const QuantumState &state() const {
    if (!post_state)
      throw BranchImpossibleError("no post-state for outcome '" + label +
                                  "' (probability " +
                                  format_double(probability) + ")");
    return *post_state;
  }
};

inline QuantumState prepare_product(const std::vector<Ket> &kets) {
  if (kets.empty()) throw ArgumentError("prepare_product: empty ket list");
  const int n = static_cast<int>(kets.size());
  std::string pattern;
  for (Ket k : kets) {
    switch (k) {
      case Ket::zero: pattern += '0'; break;
      case Ket::one: pattern += '1'; break;
      case Ket::plus: pattern += '+'; break;
      case Ket::minus: pattern += '-'; break;
    }
  }
  return QuantumState::from_terms(n, {{1.0, pattern}});
}

inline QuantumState apply_gate(const QuantumState &state, int q,
                               const Mat2 &u) {
  if (!is_unitary(u)) throw ArgumentError("apply_gate: matrix is not unitary");
  const int n = state.num_qubits();
  const std::uint64_t mask = qubit_mask(n, q);
  QuantumState out = state;
  auto &amps = out.mutable_amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const cdouble a0 = amps[i];
    const cdouble a1 = amps[i | mask];
    amps[i] = u.at(0, 0) * a0 + u.at(0, 1) * a1;
    amps[i | mask] = u.at(1, 0) * a0 + u.at(1, 1) * a1;
  }
  return out;
}

inline std::vector<MeasurementOutcome> measure_qubit(const QuantumState &state,
                                                     int q, Basis basis) {
  const int n = state.num_qubits();
  const std::uint64_t mask = qubit_mask(n, q);
  const auto &amps = state.amplitudes();

  // Outcome amplitudes in the requested basis: for the computational basis
  // these are (a0, a1) directly; for |+->, ((a0+a1)/sqrt2, (a0-a1)/sqrt2).
  std::array<std::vector<cdouble>, 2> proj;
  proj[0].assign(amps.size(), 0.0);
  proj[1].assign(amps.size(), 0.0);
  double p0 = 0.0, p1 = 0.0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const cdouble a0 = amps[i];
    const cdouble a1 = amps[i | mask];
    cdouble c0, c1;
    if (basis == Basis::computational) {
      c0 = a0;
      c1 = a1;
    } else {
      c0 = (a0 + a1) * kInvSqrt2;
      c1 = (a0 - a1) * kInvSqrt2;
    }
    p0 += std::norm(c0);
    p1 += std::norm(c1);
    if (basis == Basis::computational) {
      proj[0][i] = c0;
      proj[1][i | mask] = c1;
    } else {
      proj[0][i] = c0 * kInvSqrt2;
      proj[0][i | mask] = c0 * kInvSqrt2;
      proj[1][i] = c1 * kInvSqrt2;
      proj[1][i | mask] = -c1 * kInvSqrt2;
    }
  }

  const std::array<std::string, 2> labels =
      basis == Basis::computational ? std::array<std::string, 2>{"0", "1"}
                                    : std::array<std::string, 2>{"+", "-"};
  std::vector<MeasurementOutcome> outcomes;
  const std::array<double, 2> probs{p0, p1};
  for (int k = 0; k < 2; ++k) {
    MeasurementOutcome o;
    o.label = labels[k];
    o.probability = probs[k];
    if (probs[k] >= kBranchPruneTol)
      o.post_state = QuantumState(n, std::move(proj[k]), /*renormalize=*/true)
                         .canonical();
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

inline double fidelity(const QuantumState &a, const QuantumState &b) {
  if (a.num_qubits() != b.num_qubits())
    throw ArgumentError("fidelity: qubit counts differ");
  cdouble ip = 0.0;
  const auto &aa = a.amplitudes();
  const auto &bb = b.amplitudes();
  for (std::size_t i = 0; i < aa.size(); ++i) ip += std::conj(aa[i]) * bb[i];
  return std::norm(ip);
}

// ---------------------------------------------------------------------------
// Schmidt spectrum across a cut, via the Gram matrix of the reshaped
// amplitude matrix and a cyclic Jacobi diagonalization.
// ---------------------------------------------------------------------------

namespace detail {

// Eigenvalues of a Hermitian matrix (row-major, dim x dim). Plain cyclic
// Jacobi; fine for the small Gram matrices that show up here.
inline std::vector<double> hermitian_eigenvalues(std::vector<cdouble> a,
                                                 std::size_t dim) {
  if (dim == 0) return {};
  if (dim == 1) return {a[0].real()};
  auto at = [&](std::size_t r, std::size_t c) -> cdouble & {
    return a[r * dim + c];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < dim; ++p)
      for (std::size_t q = p + 1; q < dim; ++q) off += std::norm(at(p, q));
    if (off < 1e-28) break;
    for (std::size_t p = 0; p < dim; ++p) {
      for (std::size_t q = p + 1; q < dim; ++q) {
        const cdouble apq = at(p, q);
        const double g = std::abs(apq);
        if (g < 1e-18) continue;
        const cdouble phase = apq / g;  // a_pq = g * phase
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        // Columns p and q of the rotation: U[p][p]=c, U[p][q]=-s*phase,
        // U[q][p]=s*conj(phase), U[q][q]=c.
        for (std::size_t k = 0; k < dim; ++k) {
          if (k == p || k == q) continue;
          const cdouble akp = at(k, p);
          const cdouble akq = at(k, q);
          at(k, p) = akp * c + akq * s * std::conj(phase);
          at(k, q) = -akp * s * phase + akq * c;
          at(p, k) = std::conj(at(k, p));
          at(q, k) = std::conj(at(k, q));
        }
        const double bpp = app * c * c + 2.0 * g * c * s + aqq * s * s;
        const double bqq = app * s * s - 2.0 * g * c * s + aqq * c * c;
        at(p, p) = bpp;
        at(q, q) = bqq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(dim);
  for (std::size_t i = 0; i < dim; ++i) eig[i] = at(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace detail

inline std::vector<double> schmidt_spectrum(const QuantumState &state,
                                            const std::vector<int> &cut) {
  const int n = state.num_qubits();
  if (cut.empty() || static_cast<int>(cut.size()) >= n)
    throw ArgumentError("cut must be a proper nonempty subset of qubits");
  std::vector<bool> in_cut(static_cast<std::size_t>(n) + 1, false);
  for (int q : cut) {
    if (q < 1 || q > n) throw ArgumentError("cut qubit index out of range");
    if (in_cut[q]) throw ArgumentError("duplicate qubit in cut");
    in_cut[q] = true;
  }
  const int nc = static_cast<int>(cut.size());
  const int nr = n - nc;
  const std::size_t rows = std::size_t{1} << nc;
  const std::size_t cols = std::size_t{1} << nr;

  std::vector<cdouble> m(rows * cols, 0.0);
  const auto &amps = state.amplitudes();
  for (std::uint64_t idx = 0; idx < amps.size(); ++idx) {
    std::uint64_t r = 0, c = 0;
    for (int q = 1; q <= n; ++q) {
      const std::uint64_t bit = (idx >> (n - q)) & 1;
      if (in_cut[q])
        r = (r << 1) | bit;
      else
        c = (c << 1) | bit;
    }
    m[r * cols + c] = amps[idx];
  }

  // Gram matrix on the smaller side.
  const std::size_t dim = std::min(rows, cols);
  std::vector<cdouble> gram(dim * dim, 0.0);
  if (rows <= cols) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < rows; ++j) {
        cdouble s = 0.0;
        for (std::size_t k = 0; k < cols; ++k)
          s += m[i * cols + k] * std::conj(m[j * cols + k]);
        gram[i * dim + j] = s;
      }
  } else {
    for (std::size_t i = 0; i < cols; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        cdouble s = 0.0;
        for (std::size_t k = 0; k < rows; ++k)
          s += std::conj(m[k * cols + i]) * m[k * cols + j];
        gram[i * dim + j] = s;
      }
  }
  return detail::hermitian_eigenvalues(std::move(gram), dim);
}

// Von Neumann entropy (base 2) of the reduced state on `cut`.
inline double entanglement_entropy(const QuantumState &state,
                                   const std::vector<int> &cut) {
  double h = 0.0;
  for (double lambda : schmidt_spectrum(state, cut))
    if (lambda > 1e-12) h -= lambda * std::log2(lambda);
  return h;
}

// Resets qubit q to the given ket. Valid only while q is unentangled from
// the rest of the register.
inline QuantumState prepare_qubit(const QuantumState &state, int q, Ket k);

// If qubit q is unentangled from the rest, returns (rest-state, qubit ket);
// otherwise nullopt. The rest-state keeps the original qubit order minus q.
inline std::optional<std::pair<QuantumState, std::array<cdouble, 2>>>
factor_qubit(const QuantumState &state, int q) {
  const int n = state.num_qubits();
  if (n < 2) return std::nullopt;
  const std::uint64_t mask = qubit_mask(n, q);
  const auto &amps = state.amplitudes();
  const std::size_t half = amps.size() / 2;

  std::vector<cdouble> a0(half), a1(half);
  std::size_t k = 0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    a0[k] = amps[i];
    a1[k] = amps[i | mask];
    ++k;
  }
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    n0 += std::norm(a0[i]);
    n1 += std::norm(a1[i]);
  }
  const std::vector<cdouble> &lead = n0 >= n1 ? a0 : a1;
  const double lead_norm = std::sqrt(std::max(n0, n1));
  std::vector<cdouble> base(half);
  for (std::size_t i = 0; i < half; ++i) base[i] = lead[i] / lead_norm;

  cdouble alpha = 0.0, beta = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    alpha += std::conj(base[i]) * a0[i];
    beta += std::conj(base[i]) * a1[i];
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    residual += std::norm(a0[i] - alpha * base[i]);
    residual += std::norm(a1[i] - beta * base[i]);
  }
  if (residual > 1e-12) return std::nullopt;  // entangled with the rest
  QuantumState rest(n - 1, std::move(base));
  return std::make_pair(std::move(rest), std::array<cdouble, 2>{alpha, beta});
}

inline QuantumState prepare_qubit(const QuantumState &state, int q, Ket k) {
  const int n = state.num_qubits();
  const auto ket = ket_amplitudes(k);
  if (n == 1) {
    if (q != 1) throw ArgumentError("qubit index out of range");
    return QuantumState(1, {ket[0], ket[1]});
  }
  auto factored = factor_qubit(state, q);
  if (!factored)
    throw ArgumentError("prepare: qubit " + std::to_string(q) +
                        " is entangled with the rest of the register");
  const auto &rest = factored->first.amplitudes();
  const std::uint64_t mask = qubit_mask(n, q);
  std::vector<cdouble> amps(state.dimension(), 0.0);
  std::size_t r = 0;
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    amps[i] = ket[0] * rest[r];
    amps[i | mask] = ket[1] * rest[r];
    ++r;
  }
  return QuantumState(n, std::move(amps));
}

}  // namespace qsel
