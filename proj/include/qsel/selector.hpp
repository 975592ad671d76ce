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
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/device.hpp"
#include "qsel/hilbert.hpp"

namespace qsel {

// exact keeps the full current operator; ideal drops the offset C and every
// pair term b_ij, leaving only the linear a_j couplings.
enum class CouplingModel { exact, ideal };

inline const char *to_string(CouplingModel m) {
  return m == CouplingModel::exact ? "exact" : "ideal";
}

// Classification of every +/- product eigenstate by the switching condition
// of junction 0 under a bias current: "switch" if |I_b + I(s)| > I_T0 (a
// voltage appears), "quiet" if |I_b + I(s)| < I_T0. Monitoring the voltage
// therefore projects onto the union of one of the two sets.
struct SwitchPartition {
  int n = 0;
  double bias = 0.0;
  double threshold = 0.0;
  CouplingModel model = CouplingModel::exact;
  std::vector<double> eigenvalues;  // I(s), indexed by sign index
  std::vector<char> switches;       // 1 = switch set, 0 = quiet set
  double margin = 0.0;              // min_s | |bias + I(s)| - threshold |

  std::size_t size() const { return switches.size(); }

  bool is_switch(std::uint64_t s) const { return switches[s] != 0; }

  std::size_t switch_count() const {
    std::size_t c = 0;
    for (char v : switches) c += v != 0;
    return c;
  }

  // A trivial selector performs no measurement: no state can switch.
  bool is_trivial() const { return switch_count() == 0; }
};

inline SwitchPartition partition(const DeviceConfig &config, double bias,
                                 CouplingModel model = CouplingModel::exact) {
  if (!std::isfinite(bias)) throw ArgumentError("bias must be finite");
  const CurrentCoefficients coeffs = coefficients(config);

  SwitchPartition p;
  p.n = config.n_qubits;
  p.bias = bias;
  p.threshold = config.i_t0;
  p.model = model;
  const std::size_t dim = std::size_t{1} << p.n;
  p.eigenvalues.resize(dim);
  p.switches.resize(dim);
  p.margin = std::numeric_limits<double>::infinity();

  CurrentCoefficients used = coeffs;
  if (model == CouplingModel::ideal) {
    used.offset = 0.0;
    for (auto &b : used.pair) b = 0.0;
  }

  for (std::uint64_t s = 0; s < dim; ++s) {
    const double ev = eigenvalue_at(used, s);
    p.eigenvalues[s] = ev;
    const double gap = std::abs(bias + ev) - p.threshold;
    if (std::abs(gap) < kThresholdTieTol)
      throw DegenerateThresholdError(
          "sign string " + sign_string(s, p.n) +
              " sits on the switching threshold (|I_b + I(s)| = I_T0)",
          sign_string(s, p.n));
    p.switches[s] = gap > 0.0 ? 1 : 0;
    p.margin = std::min(p.margin, std::abs(gap));
  }
  return p;
}

// Two-outcome projective measurement realized by the biased junction. The
// switch branch is destructive: the junction has gone resistive and the
// register is lost, so only the quiet branch carries a state.
struct SelectorOutcome {
  double quiet_probability = 0.0;
  double switch_probability = 0.0;
  std::optional<QuantumState> quiet_state_opt;

  const QuantumState &quiet_state() const {
    if (!quiet_state_opt)
      throw BranchImpossibleError(
          "quiet branch has probability below the prune threshold");
    return *quiet_state_opt;
  }
};

inline SelectorOutcome measure(const QuantumState &state,
                               const SwitchPartition &p) {
  if (state.num_qubits() != p.n)
    throw ArgumentError("state width does not match partition width");

  // Project in the +/- product basis: transform, zero the switch components,
  // transform back.
  std::vector<cdouble> plus_basis = state.amplitudes();
  hadamard_all(plus_basis);

  double quiet = 0.0;
  for (std::uint64_t s = 0; s < plus_basis.size(); ++s) {
    if (p.is_switch(s))
      plus_basis[s] = 0.0;
    else
      quiet += std::norm(plus_basis[s]);
  }

  SelectorOutcome out;
  out.quiet_probability = quiet;
  out.switch_probability = 1.0 - quiet;
  if (quiet >= kBranchPruneTol) {
    hadamard_all(plus_basis);
    out.quiet_state_opt =
        QuantumState(p.n, std::move(plus_basis), /*renormalize=*/true)
            .canonical();
  }
  return out;
}

// Sorted dump of the partition, one sign string per line:
// signs <TAB> I(s) <TAB> |bias+I(s)| <TAB> quiet|switch
inline std::string dump_tsv(const SwitchPartition &p) {
  std::string out = "sign\teigenvalue\tdrive\tclass\n";
  for (std::uint64_t s = 0; s < p.size(); ++s) {
    out += sign_string(s, p.n);
    out += '\t';
    out += format_double(p.eigenvalues[s]);
    out += '\t';
    out += format_double(std::abs(p.bias + p.eigenvalues[s]));
    out += '\t';
    out += p.is_switch(s) ? "switch" : "quiet";
    out += '\n';
  }
  return out;
}

// Samples uniform perturbations of every region flux (up to flux_eps) and of
// the bias (up to bias_eps) and checks that the quiet/switch classification
// never changes. Degenerate-threshold hits count as violations, not errors.
struct PerturbReport {
  bool invariant = true;
  int trials = 0;
  int violations = 0;
  int degenerate = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
};

inline PerturbReport perturb_invariance(const DeviceConfig &config,
                                        double bias, double flux_eps,
                                        double bias_eps, int trials,
                                        std::uint64_t seed,
                                        CouplingModel model =
                                            CouplingModel::exact) {
  if (flux_eps < 0.0 || bias_eps < 0.0)
    throw ArgumentError("perturbation bounds must be nonnegative");
  const SwitchPartition reference = partition(config, bias, model);
  PerturbReport report;
  report.trials = trials;
  report.worst_margin = reference.margin;

  for (int t = 0; t < trials; ++t) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(t));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DeviceConfig perturbed = config;
    for (auto &f : perturbed.fluxes) f += flux_eps * unit(rng);
    const double b = bias + bias_eps * unit(rng);
    try {
      const SwitchPartition p = partition(perturbed, b, model);
      report.worst_margin = std::min(report.worst_margin, p.margin);
      if (p.switches != reference.switches) ++report.violations;
    } catch (const DegenerateThresholdError &) {
      ++report.degenerate;
      ++report.violations;
      report.worst_margin = 0.0;
    }
  }
  report.invariant = report.violations == 0;
  return report;
}

}  // namespace qsel
