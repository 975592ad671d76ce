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

// Recursive-descent parser for .qsp protocol programs.
//
//   program = "qubits" INT { stmt }
//   stmt    = flux | bias | select | gate | measure | branch | prepare
//           | assert
//   flux    = "flux" REGION "=" expr
//   bias    = "bias" "=" expr
//   select  = "select" "expect" ("quiet" | "either")
//   gate    = "gate" ("H"|"X"|"Z"|"S") QUBIT
//   measure = "measure" QUBIT "in" ("pm"|"comp") "->" IDENT
//   branch  = "if" IDENT "==" OUTCOME "then" stmt
//   prepare = "prepare" QUBIT ("|0>"|"|1>"|"|+>"|"|->")
//   assert  = "assert_state" STRING "tol" FLOAT
//   REGION  = "s" DIGIT DIGIT   (adjacent digits, e.g. s01, s12)
//
// Statements are line oriented; comments run from '#' to end of line and
// attach to the statement that follows them. Every failure is reported as a
// ParseError with a 1-based line/column; no input crashes the parser.

#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qsel/dsl/ast.hpp"

namespace qsel::dsl {

class ParseError : public Error {
 public:
  ParseError(const std::string &msg, int line, int column)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line(line),
        column(column) {}
  int line;
  int column;
};

namespace detail {

struct Token {
  enum class Kind {
    end,
    newline,
    ident,     // keywords and bindings
    number,    // integer or float literal (text kept for spans only)
    region,    // sNM
    ket,       // |0> |1> |+> |->
    string,    // "..."
    plus, minus, star, slash, lparen, rparen,
    equals,        // =
    equals_equals, // ==
    arrow,         // ->
  };
  Kind kind = Kind::end;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token &peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  // Comment text (without '#') collected since the last consumed token.
  std::vector<std::string> take_comments() {
    auto out = std::move(comments_);
    comments_.clear();
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw ParseError(msg, line_, column_);
  }

  char at(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void bump(std::size_t count = 1) {
    for (std::size_t k = 0; k < count && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void advance() {
    // Skip spaces and collect comments; emit newline tokens.
    for (;;) {
      const char c = at(pos_);
      if (c == ' ' || c == '\t' || c == '\r') {
        bump();
      } else if (c == '#') {
        std::size_t end = pos_;
        while (end < src_.size() && src_[end] != '\n') ++end;
        std::string text(src_.substr(pos_ + 1, end - pos_ - 1));
        while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
          text.erase(text.begin());
        comments_.push_back(std::move(text));
        bump(end - pos_);
      } else {
        break;
      }
    }

    Token t;
    t.line = line_;
    t.column = column_;
    t.offset = pos_;
    const char c = at(pos_);

    if (c == '\0') {
      t.kind = Token::Kind::end;
    } else if (c == '\n') {
      t.kind = Token::Kind::newline;
      t.text = "\n";
      bump();
    } else if (c == '|') {
      const char v = at(pos_ + 1);
      if ((v == '0' || v == '1' || v == '+' || v == '-') && at(pos_ + 2) == '>') {
        t.kind = Token::Kind::ket;
        t.text = std::string("|") + v + ">";
        bump(3);
      } else {
        fail("malformed ket (expected |0>, |1>, |+> or |->)");
      }
    } else if (c == '"') {
      std::size_t end = pos_ + 1;
      while (end < src_.size() && src_[end] != '"' && src_[end] != '\n') ++end;
      if (at(end) != '"') fail("unterminated string literal");
      t.kind = Token::Kind::string;
      t.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
      bump(end + 1 - pos_);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && std::isdigit(static_cast<unsigned char>(at(pos_ + 1))))) {
      std::size_t end = pos_;
      bool saw_dot = false, saw_exp = false;
      while (end < src_.size()) {
        const char d = src_[end];
        if (std::isdigit(static_cast<unsigned char>(d))) {
          ++end;
        } else if (d == '.' && !saw_dot && !saw_exp) {
          saw_dot = true;
          ++end;
        } else if ((d == 'e' || d == 'E') && !saw_exp && end > pos_) {
          saw_exp = true;
          ++end;
          if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
        } else {
          break;
        }
      }
      t.kind = Token::Kind::number;
      t.text = std::string(src_.substr(pos_, end - pos_));
      try {
        t.number = std::stod(t.text);
      } catch (const std::exception &) {
        fail("malformed numeric literal '" + t.text + "'");
      }
      bump(end - pos_);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) ||
              src_[end] == '_'))
        ++end;
      t.text = std::string(src_.substr(pos_, end - pos_));
      // Region names: 's' followed by exactly two digits.
      if (t.text.size() == 3 && t.text[0] == 's' &&
          std::isdigit(static_cast<unsigned char>(t.text[1])) &&
          std::isdigit(static_cast<unsigned char>(t.text[2])))
        t.kind = Token::Kind::region;
      else
        t.kind = Token::Kind::ident;
      bump(end - pos_);
    } else {
      switch (c) {
        case '+': t.kind = Token::Kind::plus; t.text = "+"; bump(); break;
        case '-':
          if (at(pos_ + 1) == '>') {
            t.kind = Token::Kind::arrow;
            t.text = "->";
            bump(2);
          } else {
            t.kind = Token::Kind::minus;
            t.text = "-";
            bump();
          }
          break;
        case '*': t.kind = Token::Kind::star; t.text = "*"; bump(); break;
        case '/': t.kind = Token::Kind::slash; t.text = "/"; bump(); break;
        case '(': t.kind = Token::Kind::lparen; t.text = "("; bump(); break;
        case ')': t.kind = Token::Kind::rparen; t.text = ")"; bump(); break;
        case '=':
          if (at(pos_ + 1) == '=') {
            t.kind = Token::Kind::equals_equals;
            t.text = "==";
            bump(2);
          } else {
            t.kind = Token::Kind::equals;
            t.text = "=";
            bump();
          }
          break;
        default:
          fail(std::string("unexpected character '") + c + "'");
      }
    }
    current_ = t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
  std::vector<std::string> comments_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) {}

  ProtocolProgram parse_program() {
    ProtocolProgram prog;
    skip_newlines();
    auto header_comments = lex_.take_comments();
    if (peek_kind() == Token::Kind::end) {
      prog.trailing_comments = std::move(header_comments);
      return prog;  // empty input is a valid empty program
    }

    const Token header = expect_ident("qubits");
    const Token count = expect(Token::Kind::number, "qubit count");
    if (count.number < 1 || count.number != std::floor(count.number) ||
        count.number > 64)
      fail(count, "qubit count must be a small positive integer");
    prog.qubits = static_cast<int>(count.number);
    prog.header_span = span_from(header, count);
    end_of_statement();

    for (;;) {
      skip_newlines();
      auto comments = lex_.take_comments();
      if (peek_kind() == Token::Kind::end) {
        prog.trailing_comments = std::move(comments);
        break;
      }
      Statement stmt = parse_statement();
      stmt.comments = std::move(comments);
      end_of_statement();
      prog.statements.push_back(std::move(stmt));
    }
    return prog;
  }

  // Expression entry point shared with the device-file loader.
  std::shared_ptr<Expr> parse_expression_only() {
    auto e = parse_expr();
    skip_newlines();
    if (peek_kind() != Token::Kind::end)
      fail(lex_.peek(), "trailing input after expression");
    return e;
  }

  std::shared_ptr<Expr> parse_expr() {
    auto lhs = parse_term();
    for (;;) {
      const auto k = peek_kind();
      if (k != Token::Kind::plus && k != Token::Kind::minus) return lhs;
      const Token op = lex_.next();
      auto rhs = parse_term();
      auto node = Expr::make_binary(k == Token::Kind::plus ? Expr::Kind::add
                                                           : Expr::Kind::sub,
                                    std::move(lhs), std::move(rhs));
      node->span = token_span(op);
      lhs = std::move(node);
    }
  }

 private:
  Token::Kind peek_kind() const { return lex_.peek().kind; }

  [[noreturn]] void fail(const Token &at, const std::string &msg) const {
    throw ParseError(msg, at.line, at.column);
  }

  Token expect(Token::Kind k, const std::string &what) {
    const Token t = lex_.next();
    if (t.kind != k)
      fail(t, "expected " + what +
                  (t.text.empty() ? "" : (", found '" + t.text + "'")));
    return t;
  }

  Token expect_ident(const std::string &word) {
    const Token t = lex_.next();
    if (t.kind != Token::Kind::ident || t.text != word)
      fail(t, "expected '" + word + "'" +
                  (t.text.empty() ? "" : (", found '" + t.text + "'")));
    return t;
  }

  void skip_newlines() {
    while (peek_kind() == Token::Kind::newline) lex_.next();
  }

  void end_of_statement() {
    const auto k = peek_kind();
    if (k == Token::Kind::end) return;
    if (k == Token::Kind::newline) {
      lex_.next();
      return;
    }
    fail(lex_.peek(), "expected end of line");
  }

  static SourceSpan token_span(const Token &t) {
    return SourceSpan{t.line, t.column, t.offset, t.text.size()};
  }

  SourceSpan span_from(const Token &first, const Token &last) const {
    SourceSpan s;
    s.line = first.line;
    s.column = first.column;
    s.offset = first.offset;
    s.length = last.offset + last.text.size() - first.offset;
    return s;
  }

  int expect_qubit_index() {
    const Token t = expect(Token::Kind::number, "qubit index");
    if (t.number < 1 || t.number != std::floor(t.number) || t.number > 64)
      fail(t, "qubit index must be a positive integer");
    return static_cast<int>(t.number);
  }

  Statement parse_statement() {
    const Token &head = lex_.peek();
    if (head.kind != Token::Kind::ident)
      fail(head, "expected a statement keyword");

    Statement s;
    const Token first = lex_.next();
    [[maybe_unused]] Token last = first;

    if (first.text == "flux") {
      s.kind = Statement::Kind::set_flux;
      const Token region = expect(Token::Kind::region, "region name like s01");
      const int a = region.text[1] - '0';
      const int b = region.text[2] - '0';
      if (b != a + 1)
        fail(region, "region digits must name adjacent junctions (sNM with "
                     "M = N + 1)");
      s.region = b;  // region s_{j-1,j} is entry j of the flux list
      expect(Token::Kind::equals, "'='");
      s.expr = parse_expr();
    } else if (first.text == "bias") {
      s.kind = Statement::Kind::set_bias;
      expect(Token::Kind::equals, "'='");
      s.expr = parse_expr();
    } else if (first.text == "select") {
      s.kind = Statement::Kind::select;
      expect_ident("expect");
      const Token mode = expect(Token::Kind::ident, "'quiet' or 'either'");
      if (mode.text == "quiet")
        s.expect_quiet = true;
      else if (mode.text == "either")
        s.expect_quiet = false;
      else
        fail(mode, "expected 'quiet' or 'either'");
      last = mode;
    } else if (first.text == "gate") {
      s.kind = Statement::Kind::gate;
      const Token g = expect(Token::Kind::ident, "gate name H, X, Z or S");
      if (g.text != "H" && g.text != "X" && g.text != "Z" && g.text != "S")
        fail(g, "gate must be one of H, X, Z, S");
      s.gate = g.text[0];
      s.qubit = expect_qubit_index();
    } else if (first.text == "measure") {
      s.kind = Statement::Kind::measure;
      s.qubit = expect_qubit_index();
      expect_ident("in");
      const Token basis = expect(Token::Kind::ident, "'pm' or 'comp'");
      if (basis.text == "pm")
        s.basis = Basis::plus_minus;
      else if (basis.text == "comp")
        s.basis = Basis::computational;
      else
        fail(basis, "expected 'pm' or 'comp'");
      expect(Token::Kind::arrow, "'->'");
      const Token name = expect(Token::Kind::ident, "binding name");
      s.binding = name.text;
      last = name;
    } else if (first.text == "if") {
      s.kind = Statement::Kind::branch;
      const Token name = expect(Token::Kind::ident, "binding name");
      s.binding = name.text;
      expect(Token::Kind::equals_equals, "'=='");
      const Token out = lex_.next();
      if (out.kind == Token::Kind::plus)
        s.outcome = "+";
      else if (out.kind == Token::Kind::minus)
        s.outcome = "-";
      else if (out.kind == Token::Kind::number &&
               (out.number == 0.0 || out.number == 1.0))
        s.outcome = out.number == 0.0 ? "0" : "1";
      else
        fail(out, "expected an outcome (+, -, 0 or 1)");
      expect_ident("then");
      s.inner = std::make_shared<Statement>(parse_statement());
    } else if (first.text == "prepare") {
      s.kind = Statement::Kind::prepare;
      s.qubit = expect_qubit_index();
      const Token ket = expect(Token::Kind::ket, "a ket |0>, |1>, |+> or |->");
      s.ket = ket_from_label(ket.text);
      last = ket;
    } else if (first.text == "assert_state") {
      s.kind = Statement::Kind::assert_state;
      const Token ref = expect(Token::Kind::string, "reference state name");
      s.ref = ref.text;
      expect_ident("tol");
      bool negative = false;
      if (peek_kind() == Token::Kind::minus) {
        lex_.next();
        negative = true;
      }
      const Token tol = expect(Token::Kind::number, "tolerance");
      s.tol = negative ? -tol.number : tol.number;
      if (s.tol <= 0.0) fail(tol, "tolerance must be positive");
      last = tol;
    } else {
      fail(first, "unknown statement '" + first.text + "'");
    }

    // Span runs from the first token to the current lookahead, so nested
    // expression spans always sit inside it.
    s.span.line = first.line;
    s.span.column = first.column;
    s.span.offset = first.offset;
    s.span.length = lex_.peek().offset > first.offset
                        ? lex_.peek().offset - first.offset
                        : first.text.size();
    return s;
  }

  std::shared_ptr<Expr> parse_term() {
    auto lhs = parse_factor();
    for (;;) {
      const auto k = peek_kind();
      if (k != Token::Kind::star && k != Token::Kind::slash) return lhs;
      const Token op = lex_.next();
      auto rhs = parse_factor();
      auto node = Expr::make_binary(k == Token::Kind::star ? Expr::Kind::mul
                                                           : Expr::Kind::div,
                                    std::move(lhs), std::move(rhs));
      node->span = token_span(op);
      lhs = std::move(node);
    }
  }

  std::shared_ptr<Expr> parse_factor() {
    const Token t = lex_.next();
    switch (t.kind) {
      case Token::Kind::minus: {
        auto e = Expr::make_unary(parse_factor());
        e->span = token_span(t);
        return e;
      }
      case Token::Kind::number: {
        auto e = Expr::make_number(t.number);
        e->span = token_span(t);
        return e;
      }
      case Token::Kind::ident: {
        auto e = Expr::make_constant(t.text);
        e->span = token_span(t);
        return e;
      }
      case Token::Kind::lparen: {
        auto e = parse_expr();
        expect(Token::Kind::rparen, "')'");
        return e;
      }
      default:
        fail(t, "expected a number, constant, '-' or '('");
    }
  }

  Lexer lex_;
};

}  // namespace detail

inline ProtocolProgram parse(std::string_view text) {
  return detail::Parser(text).parse_program();
}

// Parses a standalone arithmetic expression (device config files use this).
inline std::shared_ptr<Expr> parse_expression(std::string_view text) {
  return detail::Parser(text).parse_expression_only();
}

}  // namespace qsel::dsl
