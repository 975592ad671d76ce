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

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/device.hpp"
#include "qsel/hilbert.hpp"

namespace qsel::dsl {

struct SourceSpan {
  int line = 0;    // 1-based
  int column = 0;  // 1-based
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Arithmetic over numeric literals and named device constants
// (IT0, Ic0, Ic1..Ick, PHI0).
struct Expr {
  enum class Kind { number, constant, negate, add, sub, mul, div };

  Kind kind = Kind::number;
  double number = 0.0;
  std::string name;  // constant
  std::shared_ptr<Expr> lhs, rhs;
  SourceSpan span;

  static std::shared_ptr<Expr> make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::number;
    e->number = v;
    return e;
  }
  static std::shared_ptr<Expr> make_constant(std::string n) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::constant;
    e->name = std::move(n);
    return e;
  }
  static std::shared_ptr<Expr> make_unary(std::shared_ptr<Expr> inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::negate;
    e->lhs = std::move(inner);
    return e;
  }
  static std::shared_ptr<Expr> make_binary(Kind k, std::shared_ptr<Expr> l,
                                           std::shared_ptr<Expr> r) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }
};

inline bool structurally_equal(const Expr &a, const Expr &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::number:
      return a.number == b.number;
    case Expr::Kind::constant:
      return a.name == b.name;
    case Expr::Kind::negate:
      return structurally_equal(*a.lhs, *b.lhs);
    default:
      return structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
}

struct Statement {
  enum class Kind {
    set_flux,      // flux sNM = expr
    set_bias,      // bias = expr
    select,        // select expect quiet|either
    gate,          // gate H|X|Z|S q
    measure,       // measure q in pm|comp -> ident
    branch,        // if ident == outcome then stmt
    prepare,       // prepare q |0>|1>|+>|->
    assert_state,  // assert_state "name" tol value
  };

  Kind kind = Kind::select;
  SourceSpan span;
  std::vector<std::string> comments;  // '#' lines attached above the statement

  int region = 0;  // set_flux: region index j for s_{j-1,j}
  std::shared_ptr<Expr> expr;
  bool expect_quiet = true;
  char gate = 0;
  int qubit = 0;
  Basis basis = Basis::computational;
  std::string binding;
  std::string outcome;
  std::shared_ptr<Statement> inner;
  Ket ket = Ket::zero;
  std::string ref;
  double tol = 0.0;
};

inline bool structurally_equal(const Statement &a, const Statement &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Statement::Kind::set_flux:
      return a.region == b.region && structurally_equal(*a.expr, *b.expr);
    case Statement::Kind::set_bias:
      return structurally_equal(*a.expr, *b.expr);
    case Statement::Kind::select:
      return a.expect_quiet == b.expect_quiet;
    case Statement::Kind::gate:
      return a.gate == b.gate && a.qubit == b.qubit;
    case Statement::Kind::measure:
      return a.qubit == b.qubit && a.basis == b.basis &&
             a.binding == b.binding;
    case Statement::Kind::branch:
      return a.binding == b.binding && a.outcome == b.outcome &&
             structurally_equal(*a.inner, *b.inner);
    case Statement::Kind::prepare:
      return a.qubit == b.qubit && a.ket == b.ket;
    case Statement::Kind::assert_state:
      return a.ref == b.ref && a.tol == b.tol;
  }
  return false;
}

// A parsed protocol program. qubits == 0 marks the empty program (blank or
// comment-only input), which is valid but runs nothing.
struct ProtocolProgram {
  int qubits = 0;
  SourceSpan header_span;
  std::vector<Statement> statements;
  std::vector<std::string> trailing_comments;

  bool empty() const { return qubits == 0 && statements.empty(); }
};

inline bool structurally_equal(const ProtocolProgram &a,
                               const ProtocolProgram &b) {
  if (a.qubits != b.qubits) return false;
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i)
    if (!structurally_equal(a.statements[i], b.statements[i])) return false;
  return true;
}

// Names and evaluation of device constants inside expressions.
struct ConstantEnv {
  const DeviceConfig *device = nullptr;  // null: only literals allowed

  bool known(const std::string &name) const {
    if (!device) return false;
    if (name == "IT0" || name == "Ic0" || name == "PHI0") return true;
    if (name.size() > 2 && name.compare(0, 2, "Ic") == 0) {
      for (std::size_t i = 2; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
      const int j = std::stoi(name.substr(2));
      return j >= 1 && j <= device->n_qubits;
    }
    return false;
  }

  double value(const std::string &name) const {
    if (!device || !known(name))
      throw ArgumentError("unknown constant: " + name);
    if (name == "IT0") return device->i_t0;
    if (name == "Ic0") return device->i_c0;
    if (name == "PHI0") return 1.0;  // fluxes are stored in units of PHI0
    return device->i_c[static_cast<std::size_t>(std::stoi(name.substr(2))) -
                       1];
  }
};

inline double evaluate(const Expr &e, const ConstantEnv &env) {
  switch (e.kind) {
    case Expr::Kind::number: return e.number;
    case Expr::Kind::constant: return env.value(e.name);
    case Expr::Kind::negate: return -evaluate(*e.lhs, env);
    case Expr::Kind::add: return evaluate(*e.lhs, env) + evaluate(*e.rhs, env);
    case Expr::Kind::sub: return evaluate(*e.lhs, env) - evaluate(*e.rhs, env);
    case Expr::Kind::mul: return evaluate(*e.lhs, env) * evaluate(*e.rhs, env);
    case Expr::Kind::div: {
      const double d = evaluate(*e.rhs, env);
      if (d == 0.0) throw ArgumentError("division by zero in expression");
      return evaluate(*e.lhs, env) / d;
    }
  }
  throw ArgumentError("bad expression node");
}

}  // namespace qsel::dsl
