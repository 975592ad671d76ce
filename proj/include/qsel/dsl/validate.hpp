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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qsel/dsl/ast.hpp"
#include "qsel/dsl/format.hpp"
#include "qsel/references.hpp"
#include "qsel/selector.hpp"

namespace qsel::dsl {

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  SourceSpan span;
  std::string message;
};

namespace detail {

// Rough unit inference for expressions: currents (IT0, Ic*), fluxes (PHI0)
// and plain numbers. Mixed arithmetic that makes no dimensional sense is
// reported as a warning, not an error.
enum class Unit { number, current, flux, mixed };

inline Unit combine_mul(Unit a, Unit b) {
  if (a == Unit::number) return b;
  if (b == Unit::number) return a;
  return Unit::mixed;
}

inline Unit infer_unit(const Expr &e) {
  switch (e.kind) {
    case Expr::Kind::number: return Unit::number;
    case Expr::Kind::constant:
      return e.name == "PHI0" ? Unit::flux : Unit::current;
    case Expr::Kind::negate: return infer_unit(*e.lhs);
    case Expr::Kind::add:
    case Expr::Kind::sub: {
      const Unit l = infer_unit(*e.lhs);
      const Unit r = infer_unit(*e.rhs);
      if (l == r) return l;
      return Unit::mixed;
    }
    case Expr::Kind::mul:
      return combine_mul(infer_unit(*e.lhs), infer_unit(*e.rhs));
    case Expr::Kind::div: {
      const Unit l = infer_unit(*e.lhs);
      const Unit r = infer_unit(*e.rhs);
      if (r == Unit::number) return l;
      if (l == r) return Unit::number;
      return Unit::mixed;
    }
  }
  return Unit::mixed;
}

inline void check_constants(const Expr &e, const ConstantEnv &env,
                            const SourceSpan &stmt_span,
                            std::vector<Diagnostic> &out) {
  switch (e.kind) {
    case Expr::Kind::constant:
      if (!env.known(e.name))
        out.push_back({Diagnostic::Severity::error,
                       e.span.line ? e.span : stmt_span,
                       "unknown constant '" + e.name + "'"});
      break;
    case Expr::Kind::negate:
      check_constants(*e.lhs, env, stmt_span, out);
      break;
    case Expr::Kind::add:
    case Expr::Kind::sub:
    case Expr::Kind::mul:
    case Expr::Kind::div:
      check_constants(*e.lhs, env, stmt_span, out);
      check_constants(*e.rhs, env, stmt_span, out);
      break;
    default:
      break;
  }
}

}  // namespace detail

// Static checks: index bounds, binding discipline, expression constants and
// units, reference names, and a threshold-degeneracy preflight for every
// select reachable by straight-line execution. Returns diagnostics; never
// throws on malformed programs.
inline std::vector<Diagnostic> validate(const ProtocolProgram &prog,
                                        const DeviceConfig &device) {
  std::vector<Diagnostic> out;
  if (prog.empty()) return out;

  device.validate();
  if (prog.qubits != device.n_qubits)
    out.push_back({Diagnostic::Severity::error, prog.header_span,
                   "program declares " + std::to_string(prog.qubits) +
                       " qubits but the device has " +
                       std::to_string(device.n_qubits)});

  ConstantEnv env{&device};
  std::set<std::string> bindings;
  std::map<std::string, Basis> binding_basis;

  // Straight-line device state for the select preflight.
  std::vector<double> fluxes = device.fluxes;
  double bias = 0.0;
  bool device_state_known = true;

  auto check_stmt = [&](const Statement &s, bool conditional,
                        auto &&self) -> void {
    switch (s.kind) {
      case Statement::Kind::set_flux: {
        if (s.region < 1 || s.region > device.n_qubits)
          out.push_back({Diagnostic::Severity::error, s.span,
                         "region " + region_name(s.region) +
                             " is outside the device (regions s01.." +
                             region_name(device.n_qubits) + ")"});
        detail::check_constants(*s.expr, env, s.span, out);
        const auto unit = detail::infer_unit(*s.expr);
        if (unit == detail::Unit::current || unit == detail::Unit::mixed)
          out.push_back({Diagnostic::Severity::warning, s.span,
                         "flux value does not have flux units"});
        if (conditional) {
          device_state_known = false;
        } else if (s.region >= 1 && s.region <= device.n_qubits) {
          try {
            fluxes[s.region - 1] = evaluate(*s.expr, env);
          } catch (const Error &) {
            device_state_known = false;
          }
        }
        break;
      }
      case Statement::Kind::set_bias: {
        detail::check_constants(*s.expr, env, s.span, out);
        const auto unit = detail::infer_unit(*s.expr);
        if (unit == detail::Unit::flux || unit == detail::Unit::mixed)
          out.push_back({Diagnostic::Severity::warning, s.span,
                         "bias value does not have current units"});
        if (conditional) {
          device_state_known = false;
        } else {
          try {
            bias = evaluate(*s.expr, env);
          } catch (const Error &) {
            device_state_known = false;
          }
        }
        break;
      }
      case Statement::Kind::select: {
        if (!device_state_known) {
          out.push_back({Diagnostic::Severity::warning, s.span,
                         "select reached with statically unknown flux/bias "
                         "settings; degeneracy preflight skipped"});
          break;
        }
        try {
          partition(device.with_fluxes(fluxes), bias, CouplingModel::exact);
        } catch (const DegenerateThresholdError &e) {
          out.push_back({Diagnostic::Severity::error, s.span,
                         std::string("threshold degeneracy: ") + e.what()});
        } catch (const Error &e) {
          out.push_back({Diagnostic::Severity::error, s.span, e.what()});
        }
        break;
      }
      case Statement::Kind::gate:
      case Statement::Kind::prepare:
        if (s.qubit < 1 || s.qubit > device.n_qubits)
          out.push_back({Diagnostic::Severity::error, s.span,
                         "qubit " + std::to_string(s.qubit) +
                             " is outside the device"});
        break;
      case Statement::Kind::measure: {
        if (s.qubit < 1 || s.qubit > device.n_qubits)
          out.push_back({Diagnostic::Severity::error, s.span,
                         "qubit " + std::to_string(s.qubit) +
                             " is outside the device"});
        if (bindings.count(s.binding))
          out.push_back({Diagnostic::Severity::error, s.span,
                         "binding '" + s.binding + "' is already defined"});
        bindings.insert(s.binding);
        binding_basis[s.binding] = s.basis;
        break;
      }
      case Statement::Kind::branch: {
        if (!bindings.count(s.binding)) {
          out.push_back({Diagnostic::Severity::error, s.span,
                         "binding '" + s.binding +
                             "' is not defined by an earlier measure"});
        } else {
          const Basis b = binding_basis[s.binding];
          const bool pm_outcome = s.outcome == "+" || s.outcome == "-";
          if ((b == Basis::plus_minus) != pm_outcome)
            out.push_back({Diagnostic::Severity::warning, s.span,
                           "outcome '" + s.outcome +
                               "' can never match a measurement in this "
                               "basis"});
        }
        self(*s.inner, /*conditional=*/true, self);
        break;
      }
      case Statement::Kind::assert_state: {
        if (!known_reference(s.ref)) {
          out.push_back({Diagnostic::Severity::error, s.span,
                         "unknown reference state '" + s.ref + "'"});
        } else if (reference_state(s.ref).num_qubits() != device.n_qubits) {
          out.push_back({Diagnostic::Severity::error, s.span,
                         "reference state '" + s.ref + "' has " +
                             std::to_string(
                                 reference_state(s.ref).num_qubits()) +
                             " qubits, device has " +
                             std::to_string(device.n_qubits)});
        }
        break;
      }
    }
  };

  for (const auto &s : prog.statements)
    check_stmt(s, /*conditional=*/false, check_stmt);
  return out;
}

inline bool has_errors(const std::vector<Diagnostic> &diags) {
  for (const auto &d : diags)
    if (d.severity == Diagnostic::Severity::error) return true;
  return false;
}

inline std::string describe(const std::vector<Diagnostic> &diags) {
  std::string out;
  for (const auto &d : diags) {
    out += d.severity == Diagnostic::Severity::error ? "error" : "warning";
    if (d.span.line)
      out += " (line " + std::to_string(d.span.line) + ", column " +
             std::to_string(d.span.column) + ")";
    out += ": " + d.message + "\n";
  }
  return out;
}

}  // namespace qsel::dsl
