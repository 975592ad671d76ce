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

// Built-in protocols over the selector: two-round pair selection (Bell-pair
// production), both parity measurements, the ancilla-mediated CNOT, and the
// four-qubit cluster pipeline. Each protocol is constructed as a program in
// the protocol language and executed by the shared engine, so the shipped
// .qsp files and the built-ins run through identical semantics.

#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qsel/clifford.hpp"
#include "qsel/dense.hpp"
#include "qsel/dsl/ast.hpp"
#include "qsel/protocols/engine.hpp"

namespace qsel::protocols {

// Round-two retuning of the pair selection. Negating only the fluxes (or
// only the bias) flips every eigenvalue relative to the drive and removes
// the -- component; negating both leaves |I_b + I(s)| unchanged, which
// reproduces the round-one partition and removes nothing. flux_only is the
// default because it is the variant that actually yields a Bell pair.
enum class Reversal { flux_only, bias_only, both };

inline const char *to_string(Reversal r) {
  switch (r) {
    case Reversal::flux_only: return "flux_only";
    case Reversal::bias_only: return "bias_only";
    case Reversal::both: return "both";
  }
  return "?";
}

inline DeviceConfig fixture_device(int n) {
  DeviceConfig d;
  d.n_qubits = n;
  d.i_c.assign(static_cast<std::size_t>(n), 1.0);
  d.i_c0 = 100.0;
  d.i_t0 = 50.0;
  d.fluxes.assign(static_cast<std::size_t>(n), 0.0);
  return d;
}

inline DeviceConfig two_qubit_fixture() { return fixture_device(2); }
inline DeviceConfig three_qubit_fixture() { return fixture_device(3); }
inline DeviceConfig five_qubit_fixture() { return fixture_device(5); }

namespace detail {

using dsl::Expr;
using dsl::Statement;

inline std::shared_ptr<Expr> num(double v) { return Expr::make_number(v); }
inline std::shared_ptr<Expr> cst(const std::string &n) {
  return Expr::make_constant(n);
}

// Flux values in the pair recipes are 0 and +/- half a flux quantum; write
// halves as 1/2 so the program text stays exact.
inline std::shared_ptr<Expr> flux_expr(double v) {
  if (v == 0.5) return Expr::make_binary(Expr::Kind::div, num(1), num(2));
  if (v == -0.5)
    return Expr::make_unary(
        Expr::make_binary(Expr::Kind::div, num(1), num(2)));
  return num(v);
}

inline Statement flux_stmt(int region, std::shared_ptr<Expr> e) {
  Statement s;
  s.kind = Statement::Kind::set_flux;
  s.region = region;
  s.expr = std::move(e);
  return s;
}

inline Statement bias_stmt(std::shared_ptr<Expr> e) {
  Statement s;
  s.kind = Statement::Kind::set_bias;
  s.expr = std::move(e);
  return s;
}

inline Statement select_stmt(bool expect_quiet = true) {
  Statement s;
  s.kind = Statement::Kind::select;
  s.expect_quiet = expect_quiet;
  return s;
}

inline Statement gate_stmt(char g, int qubit) {
  Statement s;
  s.kind = Statement::Kind::gate;
  s.gate = g;
  s.qubit = qubit;
  return s;
}

inline Statement measure_stmt(int qubit, Basis basis,
                              const std::string &binding) {
  Statement s;
  s.kind = Statement::Kind::measure;
  s.qubit = qubit;
  s.basis = basis;
  s.binding = binding;
  return s;
}

inline Statement prepare_stmt(int qubit, Ket k) {
  Statement s;
  s.kind = Statement::Kind::prepare;
  s.qubit = qubit;
  s.ket = k;
  return s;
}

inline Statement branch_stmt(const std::string &binding,
                             const std::string &outcome, Statement inner) {
  Statement s;
  s.kind = Statement::Kind::branch;
  s.binding = binding;
  s.outcome = outcome;
  s.inner = std::make_shared<Statement>(std::move(inner));
  return s;
}

inline Statement assert_stmt(const std::string &ref, double tol) {
  Statement s;
  s.kind = Statement::Kind::assert_state;
  s.ref = ref;
  s.tol = tol;
  return s;
}

// Region fluxes driving only qubits i and j: cumulative flux 1/2 through
// both, zero everywhere else.
inline std::vector<double> pair_region_fluxes(int n, int i, int j) {
  if (i == j) throw ArgumentError("pair qubits must be distinct");
  if (i > j) std::swap(i, j);
  if (i < 1 || j > n) throw ConfigError("pair qubit outside the device");
  std::vector<double> target(static_cast<std::size_t>(n), 0.0);
  target[i - 1] = 0.5;
  target[j - 1] = 0.5;
  std::vector<double> regions(static_cast<std::size_t>(n), 0.0);
  double prev = 0.0;
  for (int m = 1; m <= n; ++m) {
    regions[m - 1] = target[m - 1] - prev;
    prev = target[m - 1];
  }
  return regions;
}

inline std::shared_ptr<Expr> pair_bias_expr(int i, int j) {
  // I_b = I_T0 - (I_ci + I_cj)/2 puts the ++ eigenvalue past the threshold
  // and every other sign pattern inside it.
  auto sum = Expr::make_binary(Expr::Kind::add, cst("Ic" + std::to_string(i)),
                               cst("Ic" + std::to_string(j)));
  auto half = Expr::make_binary(Expr::Kind::div, std::move(sum), num(2));
  return Expr::make_binary(Expr::Kind::sub, cst("IT0"), std::move(half));
}

// Two selection rounds that together project onto the odd +/- parity
// subspace of (i, j): round one removes ++, the retuned round two removes
// -- (for the flux_only and bias_only variants).
inline void append_pair_selection(std::vector<Statement> &out, int n, int i,
                                  int j, Reversal reversal) {
  const auto regions = pair_region_fluxes(n, i, j);
  for (int m = 1; m <= n; ++m)
    out.push_back(flux_stmt(m, flux_expr(regions[m - 1])));
  out.push_back(bias_stmt(pair_bias_expr(std::min(i, j), std::max(i, j))));
  out.push_back(select_stmt());

  if (reversal == Reversal::flux_only || reversal == Reversal::both) {
    for (int m = 1; m <= n; ++m)
      if (regions[m - 1] != 0.0)
        out.push_back(flux_stmt(m, flux_expr(-regions[m - 1])));
  }
  if (reversal == Reversal::bias_only || reversal == Reversal::both) {
    out.push_back(bias_stmt(Expr::make_unary(
        pair_bias_expr(std::min(i, j), std::max(i, j)))));
  }
  out.push_back(select_stmt());
}

inline void append_parity_01(std::vector<Statement> &out, int n, int control,
                             int ancilla) {
  out.push_back(gate_stmt('H', control));
  out.push_back(gate_stmt('H', ancilla));
  append_pair_selection(out, n, control, ancilla, Reversal::flux_only);
  out.push_back(gate_stmt('H', control));
  out.push_back(gate_stmt('H', ancilla));
}

inline void append_parity_pm(std::vector<Statement> &out, int n, int a,
                             int b) {
  append_pair_selection(out, n, a, b, Reversal::flux_only);
}

// Ancilla readout plus the corrections that turn the accepted leaves into an
// exact CNOT: X on the target when the ancilla reads '+', then Z on the
// control (derived once against the dense CNOT oracle; see run_cnot).
inline void append_cnot_readout(std::vector<Statement> &out, int control,
                                int ancilla, int target,
                                const std::string &binding) {
  out.push_back(gate_stmt('H', ancilla));
  out.push_back(measure_stmt(ancilla, Basis::plus_minus, binding));
  out.push_back(branch_stmt(binding, "+", gate_stmt('X', target)));
  out.push_back(gate_stmt('Z', control));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Program builders. The shipped .qsp files are the formatted output of these
// builders, which a test keeps in sync.
// ---------------------------------------------------------------------------

enum class BellInitial { zero_zero, zero_one };

inline dsl::ProtocolProgram bell_program(int n_qubits = 2, int i = 1,
                                         int j = 2,
                                         BellInitial initial =
                                             BellInitial::zero_zero,
                                         Reversal reversal =
                                             Reversal::flux_only,
                                         bool with_assert = true) {
  dsl::ProtocolProgram prog;
  prog.qubits = n_qubits;
  if (initial == BellInitial::zero_one)
    prog.statements.push_back(detail::prepare_stmt(j, Ket::one));
  detail::append_pair_selection(prog.statements, n_qubits, i, j, reversal);
  if (with_assert && n_qubits == 2 && i == 1 && j == 2) {
    if (reversal == Reversal::both)
      prog.statements.push_back(
          detail::assert_stmt(initial == BellInitial::zero_zero
                                  ? "collapse_three_term"
                                  : "bell_from_01",
                              1e-9));
    else
      prog.statements.push_back(
          detail::assert_stmt(initial == BellInitial::zero_zero
                                  ? "bell_from_00"
                                  : "bell_from_01",
                              1e-9));
  }
  return prog;
}

// Demo CNOT on (control, ancilla, target) = (1, 2, 3) with product input
// |+>|+>|0>, including per-outcome output assertions.
inline dsl::ProtocolProgram cnot_demo_program() {
  dsl::ProtocolProgram prog;
  prog.qubits = 3;
  auto &s = prog.statements;
  s.push_back(detail::prepare_stmt(1, Ket::plus));
  s.push_back(detail::prepare_stmt(2, Ket::plus));
  s.push_back(detail::prepare_stmt(3, Ket::zero));
  detail::append_parity_01(s, 3, 1, 2);
  detail::append_parity_pm(s, 3, 2, 3);
  detail::append_cnot_readout(s, 1, 2, 3, "m");
  s.push_back(detail::branch_stmt("m", "+",
                                  detail::assert_stmt("cnot_plus", 1e-9)));
  s.push_back(detail::branch_stmt("m", "-",
                                  detail::assert_stmt("cnot_minus", 1e-9)));
  return prog;
}

// CNOT pipeline without preparation or assertions, for arbitrary inputs.
inline dsl::ProtocolProgram cnot_program(int n_qubits, int control,
                                         int ancilla, int target) {
  dsl::ProtocolProgram prog;
  prog.qubits = n_qubits;
  auto &s = prog.statements;
  detail::append_parity_01(s, n_qubits, control, ancilla);
  detail::append_parity_pm(s, n_qubits, ancilla, target);
  detail::append_cnot_readout(s, control, ancilla, target, "m");
  return prog;
}

// Five-qubit cluster pipeline: pairs on (1,2) and (4,5), then the
// selector CNOT with control 2, ancilla 3, target 4.
inline dsl::ProtocolProgram cluster4_program(bool premeasure_only = false) {
  dsl::ProtocolProgram prog;
  prog.qubits = 5;
  auto &s = prog.statements;
  detail::append_pair_selection(s, 5, 1, 2, Reversal::flux_only);
  detail::append_pair_selection(s, 5, 4, 5, Reversal::flux_only);
  s.push_back(detail::gate_stmt('H', 3));  // ancilla to |+>
  detail::append_parity_01(s, 5, 2, 3);
  detail::append_parity_pm(s, 5, 3, 4);
  s.push_back(detail::gate_stmt('H', 3));
  s.push_back(detail::assert_stmt("cluster5_premeasure", 1e-9));
  if (premeasure_only) return prog;
  s.push_back(detail::measure_stmt(3, Basis::plus_minus, "m"));
  s.push_back(detail::branch_stmt("m", "+", detail::gate_stmt('X', 4)));
  s.push_back(detail::gate_stmt('Z', 2));
  s.push_back(detail::branch_stmt(
      "m", "+", detail::assert_stmt("cluster5_out_plus", 1e-9)));
  s.push_back(detail::branch_stmt(
      "m", "-", detail::assert_stmt("cluster5_out_minus", 1e-9)));
  return prog;
}

// ---------------------------------------------------------------------------
// Execution wrappers.
// ---------------------------------------------------------------------------

inline QuantumState apply_pauli_frame(const QuantumState &state,
                                      const std::string &frame) {
  if (static_cast<int>(frame.size()) != state.num_qubits())
    throw ArgumentError("frame width does not match state");
  QuantumState out = state;
  for (int q = 1; q <= state.num_qubits(); ++q) {
    const char letter = frame[q - 1];
    if (letter == 'I') continue;
    out = apply_gate(out, q, gate_by_name(letter));
  }
  return out;
}

inline ProtocolResult run_program(const dsl::ProtocolProgram &prog,
                                  const DeviceConfig &device,
                                  const QuantumState *initial = nullptr,
                                  EngineOptions opts = {}) {
  const LoweredProgram lowered = lower(prog, device);
  return summarize(lowered, enumerate(lowered, opts, initial));
}

// Two rounds of selection on the pair (i, j): the accepted branch is the
// odd +/- parity projection for the flux_only and bias_only variants, and
// the round-one projection alone for the literal "reverse both" variant.
inline ProtocolResult select_odd_pair(const QuantumState &state,
                                      const DeviceConfig &device, int i,
                                      int j,
                                      Reversal reversal = Reversal::flux_only,
                                      EngineOptions opts = {}) {
  dsl::ProtocolProgram prog;
  prog.qubits = device.n_qubits;
  detail::append_pair_selection(prog.statements, device.n_qubits, i, j,
                                reversal);
  return run_program(prog, device, &state, opts);
}

inline ProtocolResult run_bell_prep(BellInitial initial = BellInitial::zero_zero,
                                    Reversal reversal = Reversal::flux_only,
                                    const DeviceConfig &device =
                                        two_qubit_fixture(),
                                    EngineOptions opts = {}) {
  const auto prog = bell_program(device.n_qubits, 1, 2, initial, reversal,
                                 /*with_assert=*/device.n_qubits == 2);
  ProtocolResult result = run_program(prog, device, nullptr, opts);

  if (result.success_state) {
    const double entropy = entanglement_entropy(*result.success_state, {1});
    result.metrics["entropy_ebit"] = entropy;
    if (reversal != Reversal::both && std::abs(entropy - 1.0) > 1e-9)
      result.warnings.push_back(
          "pair output is not maximally entangled; expected 1 ebit");
    if (reversal != Reversal::both && device.n_qubits == 2) {
      const auto witness = local_pauli_equivalent(
          *result.success_state, reference_state("bell_from_01"));
      if (witness) {
        std::string letters;
        for (const auto &u : *witness) letters += gate_name_of(u);
        result.frames["pair_to_singlet"] = letters;
      } else {
        result.warnings.push_back(
            "no local Pauli witness to the singlet-form pair was found");
      }
    }
  }
  result.notes.push_back(
      "enumerated success probability " +
      format_double(result.success_probability) +
      "; counting only the odd-parity component of the three-term collapse "
      "would give 1/3");
  return result;
}

inline ProtocolResult run_parity_pm(const QuantumState &state, int a, int b,
                                    const DeviceConfig &device,
                                    EngineOptions opts = {}) {
  return select_odd_pair(state, device, a, b, Reversal::flux_only, opts);
}

inline ProtocolResult run_parity_01(const QuantumState &state, int control,
                                    int ancilla, const DeviceConfig &device,
                                    const std::vector<int> &decouple = {},
                                    EngineOptions opts = {}) {
  dsl::ProtocolProgram prog;
  prog.qubits = device.n_qubits;
  detail::append_parity_01(prog.statements, device.n_qubits, control, ancilla);
  ProtocolResult result = run_program(prog, device, &state, opts);

  // The recipe decouples every other qubit; cross-check any the caller
  // explicitly relies on.
  if (!decouple.empty()) {
    const auto fluxes =
        detail::pair_region_fluxes(device.n_qubits, control, ancilla);
    const auto coupled = coupled_set(coefficients(device.with_fluxes(fluxes)));
    for (int q : decouple) {
      if (q == control || q == ancilla)
        throw ArgumentError("cannot decouple a qubit that is being measured");
      for (int c : coupled)
        if (c == q)
          result.warnings.push_back("qubit " + std::to_string(q) +
                                    " is not decoupled by the parity recipe");
    }
  }
  return result;
}

// Ancilla-mediated CNOT. The accepted leaves equal the dense-matrix CNOT on
// (control, target) exactly, after the derived corrections: X on the target
// for ancilla outcome '+', then Z on the control on every accepted leaf.
inline ProtocolResult run_cnot(const QuantumState &state, int control,
                               int ancilla, int target,
                               const DeviceConfig &device,
                               EngineOptions opts = {}) {
  ProtocolResult result =
      run_program(cnot_program(device.n_qubits, control, ancilla, target),
                  device, &state, opts);

  const auto factored = factor_qubit(state, ancilla);
  bool ancilla_ok = false;
  if (factored) {
    const auto &ket = factored->second;
    const cdouble overlap = std::conj(kInvSqrt2) * ket[0] +
                            std::conj(kInvSqrt2) * ket[1];
    ancilla_ok = std::norm(overlap) >= 1.0 - 1e-9;
  }
  if (!ancilla_ok)
    result.warnings.push_back(
        "ancilla was not prepared in |+>; the CNOT postcondition is void");

  // Self-check against the dense CNOT oracle, leaf by leaf.
  if (result.tree && ancilla_ok) {
    const dense::Matrix oracle =
        dense::cnot(device.n_qubits, control, target);
    const QuantumState expected = dense::apply(oracle, state);
    const auto expected_rest = factor_qubit(expected, ancilla);
    double worst = 1.0;
    for (int leaf : result.tree->accepted_leaves()) {
      const auto &leaf_state = result.tree->nodes[leaf].state;
      if (!leaf_state) continue;
      const auto rest = factor_qubit(*leaf_state, ancilla);
      if (rest && expected_rest)
        worst = std::min(worst, fidelity(rest->first, expected_rest->first));
      else
        worst = 0.0;
    }
    result.metrics["cnot_fidelity_min"] = worst;
  }
  result.notes.push_back(
      "corrections: X on target for ancilla outcome '+', then Z on control");
  return result;
}

struct Cluster4Result {
  ProtocolResult result;
  QuantumState premeasure_state;       // five qubits, before the ancilla read
  double premeasure_fidelity = 0.0;    // vs cluster5_premeasure
  double premeasure_paired_fidelity = 0.0;  // framed, vs cluster5_paired_form
  double out_fidelity = 0.0;           // ancilla dropped, vs cluster4_out
  double out_paired_fidelity = 0.0;    // framed, vs cluster4_paired_form
  std::vector<double> stage_quiet_probabilities;
  std::optional<std::vector<Mat2>> standard_form_witness;
  double witness_seconds = 0.0;
};

inline Cluster4Result run_cluster4(const DeviceConfig &device =
                                       five_qubit_fixture(),
                                   EngineOptions opts = {},
                                   bool search_witness = true) {
  if (device.n_qubits != 5)
    throw ArgumentError("the cluster pipeline needs a five-qubit device");

  Cluster4Result out{
      run_program(cluster4_program(), device, nullptr, opts),
      QuantumState(5)};

  // State just before the ancilla measurement, from the prefix program.
  {
    ProtocolResult prefix = run_program(cluster4_program(/*premeasure_only=*/true),
                                        device, nullptr, opts);
    if (!prefix.success_state)
      throw Error("cluster pipeline has no surviving branch");
    out.premeasure_state = *prefix.success_state;
  }
  out.premeasure_fidelity =
      fidelity(out.premeasure_state, reference_state("cluster5_premeasure"));
  out.premeasure_paired_fidelity =
      fidelity(apply_pauli_frame(out.premeasure_state, "XIZXI"),
               reference_state("cluster5_paired_form"));
  out.result.frames["premeasure_paired"] = "XIZXI";

  // Accepted leaves with the ancilla dropped.
  double worst = 1.0, worst_paired = 1.0;
  for (int leaf : out.result.tree->accepted_leaves()) {
    const auto &state = out.result.tree->nodes[leaf].state;
    if (!state) continue;
    const auto rest = factor_qubit(*state, 3);
    if (!rest) {
      worst = worst_paired = 0.0;
      continue;
    }
    worst = std::min(worst, fidelity(rest->first,
                                     reference_state("cluster4_out")));
    worst_paired =
        std::min(worst_paired,
                 fidelity(apply_pauli_frame(rest->first, "YIXI"),
                          reference_state("cluster4_paired_form")));
  }
  out.out_fidelity = worst;
  out.out_paired_fidelity = worst_paired;
  out.result.frames["output_paired"] = "YIXI";  // on qubits 1, 2, 4, 5

  // Quiet probabilities along the accepted path, one entry per selection.
  {
    const BranchTree &tree = *out.result.tree;
    int node = 0;
    while (node >= 0 && !tree.nodes[node].leaf) {
      const auto &edges = tree.nodes[node].edges;
      if (edges.empty()) break;
      int next = -1;
      for (const auto &e : edges) {
        if (e.outcome == "quiet")
          out.stage_quiet_probabilities.push_back(e.conditional_probability);
        if (e.outcome.empty() || e.outcome == "quiet" || next < 0)
          next = e.child;
      }
      node = next;
    }
  }

  if (search_witness) {
    const auto start = std::chrono::steady_clock::now();
    out.standard_form_witness =
        local_clifford_equivalent(reference_state("cluster4_paired_form"),
                                  reference_state("cluster4_standard"));
    out.witness_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (out.standard_form_witness) {
      std::string letters;
      for (const auto &u : *out.standard_form_witness)
        letters += gate_name_of(u);
      out.result.notes.push_back("standard-form witness: " + letters);
    }
  }

  out.result.metrics["premeasure_fidelity"] = out.premeasure_fidelity;
  out.result.metrics["premeasure_paired_fidelity"] =
      out.premeasure_paired_fidelity;
  out.result.metrics["out_fidelity"] = out.out_fidelity;
  out.result.metrics["out_paired_fidelity"] = out.out_paired_fidelity;
  return out;
}

}  // namespace qsel::protocols
