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

#include <optional>
#include <string>

#include "qsel/dsl/ast.hpp"
#include "qsel/dsl/validate.hpp"
#include "qsel/protocols/engine.hpp"

namespace qsel::dsl {

// Runtime failure with the source span of the statement that raised it.
class InterpretError : public Error {
 public:
  InterpretError(const std::string &msg, SourceSpan span)
      : Error(span.line ? ("line " + std::to_string(span.line) + ", column " +
                           std::to_string(span.column) + ": " + msg)
                        : msg),
        span(span) {}
  SourceSpan span;
};

namespace detail {

inline SourceSpan span_of(const ProtocolProgram &prog, int statement_index) {
  if (statement_index >= 0 &&
      statement_index < static_cast<int>(prog.statements.size()))
    return prog.statements[static_cast<std::size_t>(statement_index)].span;
  return {};
}

inline void require_valid(const ProtocolProgram &prog,
                          const DeviceConfig &device) {
  const auto diags = validate(prog, device);
  if (has_errors(diags))
    throw ArgumentError("program failed validation:\n" + describe(diags));
}

}  // namespace detail

// Exhaustive enumeration of a validated program. Semantics are exactly the
// protocol engine's; runtime errors carry the offending statement's span.
inline protocols::ProtocolResult interpret(const ProtocolProgram &prog,
                                           const DeviceConfig &device,
                                           protocols::EngineOptions opts = {},
                                           const QuantumState *initial =
                                               nullptr) {
  if (prog.empty()) return {};
  detail::require_valid(prog, device);
  try {
    const auto lowered = protocols::lower(prog, device);
    return protocols::summarize(lowered,
                                protocols::enumerate(lowered, opts, initial));
  } catch (const protocols::ProtocolError &e) {
    throw InterpretError(e.what(), detail::span_of(prog, e.statement_index));
  }
}

// Seeded sampling run; the result carries the empirical outcome table.
inline protocols::ProtocolResult interpret_sample(
    const ProtocolProgram &prog, const DeviceConfig &device, long long shots,
    std::uint64_t seed = kDefaultSeed, protocols::EngineOptions opts = {},
    const QuantumState *initial = nullptr) {
  if (prog.empty()) return {};
  detail::require_valid(prog, device);
  try {
    const auto lowered = protocols::lower(prog, device);
    protocols::ProtocolResult result;
    result.qubits = prog.qubits;
    result.samples = protocols::sample(lowered, shots, seed, opts, initial);
    result.select_configs = protocols::collect_select_configs(lowered);
    return result;
  } catch (const protocols::ProtocolError &e) {
    throw InterpretError(e.what(), detail::span_of(prog, e.statement_index));
  }
}

}  // namespace qsel::dsl
