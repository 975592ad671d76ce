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

#include <string>

#include "qsel/dsl/ast.hpp"

namespace qsel::dsl {

namespace detail {

inline int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::negate: return 3;
    default: return 4;
  }
}

inline std::string format_expr(const Expr &e, int parent_prec,
                               bool right_side) {
  const int prec = precedence(e.kind);
  std::string body;
  switch (e.kind) {
    case Expr::Kind::number: body = format_double(e.number); break;
    case Expr::Kind::constant: body = e.name; break;
    case Expr::Kind::negate:
      body = "-" + format_expr(*e.lhs, prec, false);
      break;
    case Expr::Kind::add:
      body = format_expr(*e.lhs, prec, false) + " + " +
             format_expr(*e.rhs, prec, true);
      break;
    case Expr::Kind::sub:
      body = format_expr(*e.lhs, prec, false) + " - " +
             format_expr(*e.rhs, prec, true);
      break;
    case Expr::Kind::mul:
      body = format_expr(*e.lhs, prec, false) + " * " +
             format_expr(*e.rhs, prec, true);
      break;
    case Expr::Kind::div:
      body = format_expr(*e.lhs, prec, false) + " / " +
             format_expr(*e.rhs, prec, true);
      break;
  }
  // Parenthesize when binding looser than the parent, and on the right of
  // same-precedence - or / (left associativity must be preserved).
  const bool need_parens = prec < parent_prec || (prec == parent_prec && right_side &&
                            (e.kind == Expr::Kind::add || e.kind == Expr::Kind::sub ||
                             e.kind == Expr::Kind::mul || e.kind == Expr::Kind::div));
  return need_parens ? "(" + body + ")" : body;
}

}  // namespace detail

inline std::string format(const Expr &e) {
  return detail::format_expr(e, 0, false);
}

inline std::string region_name(int region) {
  return "s" + std::to_string(region - 1) + std::to_string(region);
}

inline std::string format(const Statement &s) {
  switch (s.kind) {
    case Statement::Kind::set_flux:
      return "flux " + region_name(s.region) + " = " + format(*s.expr);
    case Statement::Kind::set_bias:
      return "bias = " + format(*s.expr);
    case Statement::Kind::select:
      return std::string("select expect ") +
             (s.expect_quiet ? "quiet" : "either");
    case Statement::Kind::gate:
      return std::string("gate ") + s.gate + " " + std::to_string(s.qubit);
    case Statement::Kind::measure:
      return "measure " + std::to_string(s.qubit) + " in " +
             (s.basis == Basis::plus_minus ? "pm" : "comp") + " -> " +
             s.binding;
    case Statement::Kind::branch:
      return "if " + s.binding + " == " + s.outcome + " then " +
             format(*s.inner);
    case Statement::Kind::prepare:
      return "prepare " + std::to_string(s.qubit) + " " + ket_label(s.ket);
    case Statement::Kind::assert_state:
      return "assert_state \"" + s.ref + "\" tol " + format_double(s.tol);
  }
  return "";
}

// Canonical text form; parse(format(p)) is structurally equal to p and
// format is a fixed point after one application.
inline std::string format(const ProtocolProgram &prog) {
  std::string out;
  if (prog.empty()) {
    for (const auto &c : prog.trailing_comments) out += "# " + c + "\n";
    return out;
  }
  out += "qubits " + std::to_string(prog.qubits) + "\n";
  for (const auto &s : prog.statements) {
    for (const auto &c : s.comments)
      out += c.empty() ? "#\n" : "# " + c + "\n";
    out += format(s) + "\n";
  }
  for (const auto &c : prog.trailing_comments)
    out += c.empty() ? "#\n" : "# " + c + "\n";
  return out;
}

}  // namespace qsel::dsl
