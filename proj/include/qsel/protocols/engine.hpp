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

// Execution engine for protocol programs: lowering (expression evaluation
// against a device), exhaustive branch enumeration with exact joint
// probabilities, and seeded shot-by-shot sampling.

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/device.hpp"
#include "qsel/dsl/ast.hpp"
#include "qsel/dsl/format.hpp"
#include "qsel/hilbert.hpp"
#include "qsel/references.hpp"
#include "qsel/selector.hpp"

namespace qsel::protocols {

// Runtime protocol failure; statement_index points back into the source
// program so callers can attach a span.
class ProtocolError : public Error {
 public:
  ProtocolError(const std::string &msg, int statement_index)
      : Error(msg), statement_index(statement_index) {}
  int statement_index;
};

// A statement with its expressions evaluated against a concrete device.
struct Step {
  dsl::Statement::Kind kind = dsl::Statement::Kind::select;
  int statement_index = -1;
  std::string label;

  int region = 0;
  double value = 0.0;  // flux or bias value
  bool expect_quiet = true;
  char gate = 0;
  int qubit = 0;
  Basis basis = Basis::computational;
  std::string binding;
  std::string outcome;
  std::shared_ptr<Step> inner;
  Ket ket = Ket::zero;
  std::string ref;
  double tol = 0.0;
};

struct LoweredProgram {
  int qubits = 0;
  DeviceConfig device;
  std::vector<Step> steps;
};

namespace detail {

inline Step lower_statement(const dsl::Statement &s, const DeviceConfig &device,
                            int index) {
  const dsl::ConstantEnv env{&device};
  Step step;
  step.kind = s.kind;
  step.statement_index = index;
  switch (s.kind) {
    case dsl::Statement::Kind::set_flux:
      step.region = s.region;
      step.value = evaluate(*s.expr, env);
      step.label = "flux " + dsl::region_name(s.region) + " = " +
                   format_double(step.value);
      break;
    case dsl::Statement::Kind::set_bias:
      step.value = evaluate(*s.expr, env);
      step.label = "bias = " + format_double(step.value);
      break;
    case dsl::Statement::Kind::select:
      step.expect_quiet = s.expect_quiet;
      step.label =
          std::string("select expect ") + (s.expect_quiet ? "quiet" : "either");
      break;
    case dsl::Statement::Kind::gate:
      step.gate = s.gate;
      step.qubit = s.qubit;
      step.label = std::string("gate ") + s.gate + " " + std::to_string(s.qubit);
      break;
    case dsl::Statement::Kind::measure:
      step.qubit = s.qubit;
      step.basis = s.basis;
      step.binding = s.binding;
      step.label = "measure " + std::to_string(s.qubit) + " in " +
                   (s.basis == Basis::plus_minus ? "pm" : "comp") + " -> " +
                   s.binding;
      break;
    case dsl::Statement::Kind::branch:
      step.binding = s.binding;
      step.outcome = s.outcome;
      step.inner = std::make_shared<Step>(lower_statement(*s.inner, device, index));
      step.label = "if " + s.binding + " == " + s.outcome + " then " +
                   step.inner->label;
      break;
    case dsl::Statement::Kind::prepare:
      step.qubit = s.qubit;
      step.ket = s.ket;
      step.label =
          "prepare " + std::to_string(s.qubit) + " " + ket_label(s.ket);
      break;
    case dsl::Statement::Kind::assert_state:
      step.ref = s.ref;
      step.tol = s.tol;
      step.label = "assert_state \"" + s.ref + "\" tol " + format_double(s.tol);
      break;
  }
  return step;
}

}  // namespace detail

inline LoweredProgram lower(const dsl::ProtocolProgram &prog,
                            const DeviceConfig &device) {
  device.validate();
  LoweredProgram lowered;
  lowered.qubits = prog.qubits;
  lowered.device = device;
  lowered.steps.reserve(prog.statements.size());
  for (std::size_t i = 0; i < prog.statements.size(); ++i)
    lowered.steps.push_back(detail::lower_statement(
        prog.statements[i], device, static_cast<int>(i)));
  return lowered;
}

enum class LeafStatus { accepted, aborted, observed };

inline const char *to_string(LeafStatus s) {
  switch (s) {
    case LeafStatus::accepted: return "accepted";
    case LeafStatus::aborted: return "aborted";
    case LeafStatus::observed: return "observed";
  }
  return "?";
}

// Exhaustive outcome tree. Every statement contributes a node; selector and
// measurement nodes carry one edge per outcome above the prune threshold.
struct BranchTree {
  struct Edge {
    std::string outcome;  // empty for non-branching steps
    double conditional_probability = 1.0;
    int child = -1;
  };
  struct Node {
    std::string label;
    int statement_index = -1;
    std::vector<Edge> edges;
    bool leaf = false;
    LeafStatus status = LeafStatus::accepted;
    double joint_probability = 0.0;
    std::optional<QuantumState> state;  // absent on destroyed branches
    std::vector<std::string> path;      // branching outcomes along the way
    std::vector<std::string> assert_failures;
    std::string assert_ref;             // assert nodes only
    double assert_fidelity = -1.0;
  };

  std::vector<Node> nodes;

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].leaf) out.push_back(static_cast<int>(i));
    return out;
  }

  std::vector<int> accepted_leaves() const {
    std::vector<int> out;
    for (int i : leaves())
      if (nodes[i].status == LeafStatus::accepted) out.push_back(i);
    return out;
  }

  double total_leaf_probability() const {
    double p = 0.0;
    for (int i : leaves()) p += nodes[i].joint_probability;
    return p;
  }

  double accepted_probability() const {
    double p = 0.0;
    for (int i : accepted_leaves()) p += nodes[i].joint_probability;
    return p;
  }

  bool has_assert_failures() const {
    for (int i : leaves())
      if (!nodes[i].assert_failures.empty()) return true;
    return false;
  }
};

struct EngineOptions {
  CouplingModel model = CouplingModel::exact;
  double prune_threshold = kBranchPruneTol;
};

struct SampleTable {
  long long shots = 0;
  std::uint64_t seed = 0;
  std::map<std::string, long long> counts;  // outcome path -> occurrences

  static std::string key(const std::vector<std::string> &path) {
    if (path.empty()) return "-";
    std::string k = path[0];
    for (std::size_t i = 1; i < path.size(); ++i) k += "/" + path[i];
    return k;
  }
};

namespace detail {

struct Bundle {
  QuantumState psi;
  std::vector<double> fluxes;
  double bias = 0.0;
  std::map<std::string, std::string> bindings;
  double joint = 1.0;
  std::vector<std::string> path;
  std::vector<std::string> assert_failures;
};

class Executor {
 public:
  Executor(const LoweredProgram &prog, EngineOptions opts)
      : prog_(prog), opts_(opts) {
    if (prog.qubits < 1)
      throw ProtocolError("program declares no qubits", -1);
    if (prog.qubits != prog.device.n_qubits)
      throw ProtocolError("program width does not match the device", -1);
  }

  const SwitchPartition &partition_for(const std::vector<double> &fluxes,
                                       double bias, int stmt_index) {
    for (const auto &entry : cache_)
      if (entry.bias == bias && entry.fluxes == fluxes) return entry.part;
    try {
      cache_.push_back(
          {fluxes, bias,
           partition(prog_.device.with_fluxes(fluxes), bias, opts_.model)});
    } catch (const Error &e) {
      throw ProtocolError(e.what(), stmt_index);
    }
    return cache_.back().part;
  }

  BranchTree enumerate(const QuantumState *initial) {
    BranchTree tree;
    Bundle b{initial ? *initial : QuantumState(prog_.qubits),
             prog_.device.fluxes};
    if (b.psi.num_qubits() != prog_.qubits)
      throw ProtocolError("initial state width does not match program", -1);
    run_steps(tree, 0, std::move(b));
    return tree;
  }

  std::vector<std::string> sample_one(std::mt19937_64 &rng,
                                      const QuantumState *initial) {
    Bundle b{initial ? *initial : QuantumState(prog_.qubits),
             prog_.device.fluxes};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < prog_.steps.size(); ++i) {
      const Step *step = &prog_.steps[i];
      if (step->kind == dsl::Statement::Kind::branch) {
        auto it = b.bindings.find(step->binding);
        if (it == b.bindings.end())
          throw ProtocolError("unbound measurement result '" + step->binding +
                                  "'",
                              step->statement_index);
        if (it->second != step->outcome) continue;
        step = step->inner.get();
      }
      switch (step->kind) {
        case dsl::Statement::Kind::set_flux:
          apply_flux(b, *step);
          break;
        case dsl::Statement::Kind::set_bias:
          b.bias = step->value;
          break;
        case dsl::Statement::Kind::gate:
          b.psi = apply_gate(b.psi, step->qubit, gate_by_name(step->gate));
          break;
        case dsl::Statement::Kind::prepare:
          apply_prepare(b, *step);
          break;
        case dsl::Statement::Kind::assert_state:
          break;  // assertions do not affect sampled outcomes
        case dsl::Statement::Kind::select: {
          const auto &part =
              partition_for(b.fluxes, b.bias, step->statement_index);
          const SelectorOutcome out = measure(b.psi, part);
          if (unit(rng) < out.quiet_probability) {
            b.path.push_back("quiet");
            b.psi = out.quiet_state();
          } else {
            b.path.push_back("switch");
            return std::move(b.path);  // register destroyed, shot over
          }
          break;
        }
        case dsl::Statement::Kind::measure: {
          auto outcomes = measure_qubit(b.psi, step->qubit, step->basis);
          const double u = unit(rng);
          double acc = 0.0;
          std::size_t pick = outcomes.size() - 1;
          for (std::size_t k = 0; k < outcomes.size(); ++k) {
            acc += outcomes[k].probability;
            if (u < acc) {
              pick = k;
              break;
            }
          }
          b.path.push_back(outcomes[pick].label);
          b.bindings[step->binding] = outcomes[pick].label;
          b.psi = outcomes[pick].state();
          break;
        }
        case dsl::Statement::Kind::branch:
          break;  // handled above
      }
    }
    return std::move(b.path);
  }

 private:
  void apply_flux(Bundle &b, const Step &step) const {
    if (step.region < 1 || step.region > prog_.qubits)
      throw ProtocolError("region out of range", step.statement_index);
    b.fluxes[step.region - 1] = step.value;
  }

  void apply_prepare(Bundle &b, const Step &step) const {
    try {
      b.psi = prepare_qubit(b.psi, step.qubit, step.ket);
    } catch (const Error &e) {
      throw ProtocolError(e.what(), step.statement_index);
    }
  }

  int make_leaf(BranchTree &tree, Bundle b, LeafStatus status,
                bool with_state) {
    BranchTree::Node node;
    node.label = "leaf";
    node.leaf = true;
    node.status = status;
    node.joint_probability = b.joint;
    node.path = std::move(b.path);
    node.assert_failures = std::move(b.assert_failures);
    if (with_state) node.state = b.psi.canonical();
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size() - 1);
  }

  // Executes steps from `idx` on; returns the index of the node created for
  // that step (or the terminal leaf).
  int run_steps(BranchTree &tree, std::size_t idx, Bundle b) {
    if (idx >= prog_.steps.size())
      return make_leaf(tree, std::move(b), LeafStatus::accepted,
                       /*with_state=*/true);

    const Step &step = prog_.steps[idx];
    const int node_index = static_cast<int>(tree.nodes.size());
    {
      BranchTree::Node node;
      node.label = step.label;
      node.statement_index = step.statement_index;
      tree.nodes.push_back(std::move(node));
    }
    dispatch(tree, node_index, step, idx + 1, std::move(b));
    return node_index;
  }

  void continue_single(BranchTree &tree, int node_index, std::size_t next,
                       Bundle b) {
    const int child = run_steps(tree, next, std::move(b));
    tree.nodes[node_index].edges.push_back({"", 1.0, child});
  }

  void dispatch(BranchTree &tree, int node_index, const Step &step,
                std::size_t next, Bundle b) {
    switch (step.kind) {
      case dsl::Statement::Kind::set_flux:
        apply_flux(b, step);
        continue_single(tree, node_index, next, std::move(b));
        break;
      case dsl::Statement::Kind::set_bias:
        b.bias = step.value;
        continue_single(tree, node_index, next, std::move(b));
        break;
      case dsl::Statement::Kind::gate:
        try {
          b.psi = apply_gate(b.psi, step.qubit, gate_by_name(step.gate));
        } catch (const Error &e) {
          throw ProtocolError(e.what(), step.statement_index);
        }
        continue_single(tree, node_index, next, std::move(b));
        break;
      case dsl::Statement::Kind::prepare:
        apply_prepare(b, step);
        continue_single(tree, node_index, next, std::move(b));
        break;
      case dsl::Statement::Kind::assert_state: {
        const QuantumState &ref = [&]() -> const QuantumState & {
          try {
            return reference_state(step.ref);
          } catch (const Error &e) {
            throw ProtocolError(e.what(), step.statement_index);
          }
        }();
        if (ref.num_qubits() != b.psi.num_qubits())
          throw ProtocolError("reference state width mismatch",
                              step.statement_index);
        const double fid = fidelity(b.psi, ref);
        tree.nodes[node_index].assert_ref = step.ref;
        tree.nodes[node_index].assert_fidelity = fid;
        if (fid < 1.0 - step.tol)
          b.assert_failures.push_back(
              "assert_state \"" + step.ref + "\": fidelity " +
              format_double(fid) + " below 1 - " + format_double(step.tol));
        continue_single(tree, node_index, next, std::move(b));
        break;
      }
      case dsl::Statement::Kind::select: {
        const auto &part =
            partition_for(b.fluxes, b.bias, step.statement_index);
        const SelectorOutcome out = measure(b.psi, part);
        if (out.quiet_probability >= opts_.prune_threshold) {
          Bundle quiet = b;
          quiet.psi = out.quiet_state();
          quiet.joint *= out.quiet_probability;
          quiet.path.push_back("quiet");
          const int child = run_steps(tree, next, std::move(quiet));
          tree.nodes[node_index].edges.push_back(
              {"quiet", out.quiet_probability, child});
        }
        if (out.switch_probability >= opts_.prune_threshold) {
          Bundle sw = std::move(b);
          sw.joint *= out.switch_probability;
          sw.path.push_back("switch");
          const int child =
              make_leaf(tree, std::move(sw),
                        step.expect_quiet ? LeafStatus::aborted
                                          : LeafStatus::observed,
                        /*with_state=*/false);
          tree.nodes[node_index].edges.push_back(
              {"switch", out.switch_probability, child});
        }
        break;
      }
      case dsl::Statement::Kind::measure: {
        auto outcomes = measure_qubit(b.psi, step.qubit, step.basis);
        for (const auto &o : outcomes) {
          if (o.probability < opts_.prune_threshold) continue;
          Bundle next_b = b;
          next_b.psi = o.state();
          next_b.joint *= o.probability;
          next_b.path.push_back(o.label);
          next_b.bindings[step.binding] = o.label;
          const int child = run_steps(tree, next, std::move(next_b));
          tree.nodes[node_index].edges.push_back(
              {o.label, o.probability, child});
        }
        break;
      }
      case dsl::Statement::Kind::branch: {
        auto it = b.bindings.find(step.binding);
        if (it == b.bindings.end())
          throw ProtocolError("unbound measurement result '" + step.binding +
                                  "'",
                              step.statement_index);
        if (it->second == step.outcome)
          dispatch(tree, node_index, *step.inner, next, std::move(b));
        else
          continue_single(tree, node_index, next, std::move(b));
        break;
      }
    }
  }

  struct CacheEntry {
    std::vector<double> fluxes;
    double bias;
    SwitchPartition part;
  };

  const LoweredProgram &prog_;
  EngineOptions opts_;
  std::vector<CacheEntry> cache_;
};

}  // namespace detail

inline BranchTree enumerate(const LoweredProgram &prog,
                            EngineOptions opts = {},
                            const QuantumState *initial = nullptr) {
  detail::Executor exec(prog, opts);
  return exec.enumerate(initial);
}

inline SampleTable sample(const LoweredProgram &prog, long long shots,
                          std::uint64_t seed, EngineOptions opts = {},
                          const QuantumState *initial = nullptr) {
  if (shots < 1) throw ArgumentError("sample: shots must be positive");
  detail::Executor exec(prog, opts);
  SampleTable table;
  table.shots = shots;
  table.seed = seed;
  for (long long shot = 0; shot < shots; ++shot) {
    auto rng = stream_rng(seed, static_cast<std::uint64_t>(shot));
    ++table.counts[SampleTable::key(exec.sample_one(rng, initial))];
  }
  return table;
}

// The distinct (fluxes, bias) settings each select statement runs with,
// following straight-line flux/bias statements from the device defaults.
inline std::vector<std::pair<std::vector<double>, double>>
collect_select_configs(const LoweredProgram &prog) {
  std::vector<std::pair<std::vector<double>, double>> out;
  std::vector<double> fluxes = prog.device.fluxes;
  double bias = 0.0;
  for (const auto &step : prog.steps) {
    switch (step.kind) {
      case dsl::Statement::Kind::set_flux:
        fluxes[step.region - 1] = step.value;
        break;
      case dsl::Statement::Kind::set_bias:
        bias = step.value;
        break;
      case dsl::Statement::Kind::select: {
        bool seen = false;
        for (const auto &[f, bval] : out)
          if (f == fluxes && bval == bias) seen = true;
        if (!seen) out.push_back({fluxes, bias});
        break;
      }
      default:
        break;
    }
  }
  return out;
}

// Structural and numerical equality of trees: same topology and labels,
// probabilities within tol, canonical states componentwise within tol.
inline bool trees_equal(const BranchTree &a, const BranchTree &b, double tol,
                        std::string *why = nullptr) {
  auto fail = [&](const std::string &msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.nodes.size() != b.nodes.size()) return fail("node counts differ");
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto &na = a.nodes[i];
    const auto &nb = b.nodes[i];
    const std::string where = "node " + std::to_string(i) + " (" + na.label + ")";
    if (na.label != nb.label)
      return fail(where + ": labels differ (" + nb.label + ")");
    if (na.leaf != nb.leaf) return fail(where + ": leaf flags differ");
    if (na.edges.size() != nb.edges.size())
      return fail(where + ": edge counts differ");
    for (std::size_t e = 0; e < na.edges.size(); ++e) {
      if (na.edges[e].outcome != nb.edges[e].outcome)
        return fail(where + ": edge outcomes differ");
      if (na.edges[e].child != nb.edges[e].child)
        return fail(where + ": edge targets differ");
      if (std::abs(na.edges[e].conditional_probability -
                   nb.edges[e].conditional_probability) > tol)
        return fail(where + ": edge probabilities differ");
    }
    if (na.leaf) {
      if (na.status != nb.status) return fail(where + ": leaf status differs");
      if (std::abs(na.joint_probability - nb.joint_probability) > tol)
        return fail(where + ": joint probabilities differ");
      if (na.path != nb.path) return fail(where + ": leaf paths differ");
      if (na.state.has_value() != nb.state.has_value())
        return fail(where + ": one leaf has a state, the other does not");
      if (na.state && !approx_equal(*na.state, *nb.state, tol))
        return fail(where + ": leaf states differ");
    }
  }
  return true;
}

// Summary of a run: tree or sample table plus the derived quantities the
// protocol wrappers and the CLI report.
struct ProtocolResult {
  int qubits = 0;
  std::optional<BranchTree> tree;
  std::optional<SampleTable> samples;
  double success_probability = 0.0;
  std::optional<QuantumState> success_state;  // canonical, first accepted leaf
  std::vector<std::pair<std::vector<double>, double>> select_configs;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> frames;  // per-qubit Pauli letters
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
  bool assert_failed = false;
};

inline ProtocolResult summarize(const LoweredProgram &prog, BranchTree tree) {
  ProtocolResult result;
  result.qubits = prog.qubits;
  result.success_probability = tree.accepted_probability();
  const auto accepted = tree.accepted_leaves();
  if (!accepted.empty()) result.success_state = tree.nodes[accepted[0]].state;
  result.assert_failed = tree.has_assert_failures();
  result.select_configs = collect_select_configs(prog);
  result.tree = std::move(tree);
  return result;
}

}  // namespace qsel::protocols
