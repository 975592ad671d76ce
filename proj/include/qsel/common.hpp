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

#include <charconv>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qsel {

inline constexpr const char *kVersion = "1.0.0";

// Tolerances used across the library.
inline constexpr double kNormTol = 1e-12;
inline constexpr double kThresholdTieTol = 1e-12;
inline constexpr double kBranchPruneTol = 1e-14;
inline constexpr double kCoupledSetTol = 1e-9;

// Every random draw in the library flows from an explicit seed; when a
// caller gives none, this one is used (never wall-clock time).
inline constexpr std::uint64_t kDefaultSeed = 271828;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad call-site input: index out of range, length mismatch, non-unitary gate.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed device description or physically invalid parameter set.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A sign string sits numerically on the switching threshold; the selector
// outcome would be undefined, so construction fails instead.
class DegenerateThresholdError : public Error {
 public:
  DegenerateThresholdError(const std::string &msg, std::string sign_string)
      : Error(msg), sign_string(std::move(sign_string)) {}
  std::string sign_string;
};

// A post-state was requested for an outcome whose probability is below the
// prune threshold.
class BranchImpossibleError : public Error {
 public:
  using Error::Error;
};

// The request is valid but outside what this implementation can compute
// (e.g. exhaustive searches past their size bound).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Bit conventions. Qubits are numbered 1..n; qubit 1 is the most significant
// bit of a basis index, so |q1 q2 ... qn> lands at index (q1<<n-1 | ... | qn).
// Sign strings over the +/- product basis use the same layout with bit 0
// meaning '+' and bit 1 meaning '-'.
// ---------------------------------------------------------------------------

inline std::uint64_t qubit_mask(int n, int q) {
  if (q < 1 || q > n) throw ArgumentError("qubit index out of range");
  return std::uint64_t{1} << (n - q);
}

inline int sign_at(std::uint64_t s, int n, int q) {
  return (s >> (n - q)) & 1 ? -1 : +1;
}

inline std::string sign_string(std::uint64_t s, int n) {
  std::string out(static_cast<std::size_t>(n), '+');
  for (int q = 1; q <= n; ++q)
    if (sign_at(s, n, q) < 0) out[q - 1] = '-';
  return out;
}

inline std::uint64_t sign_index(const std::string &s) {
  std::uint64_t idx = 0;
  for (char c : s) {
    idx <<= 1;
    if (c == '-')
      idx |= 1;
    else if (c != '+')
      throw ArgumentError("sign string must contain only '+' and '-'");
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Deterministic stream splitting. Each logical stream (shot, trial) gets its
// own generator derived from (seed, stream), so results do not depend on
// execution order.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 1)));
}

// Shortest text form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace qsel
