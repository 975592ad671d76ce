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
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/hilbert.hpp"

namespace qsel {

// Named reference states usable from assert_state statements. Patterns list
// one character per qubit from {0, 1, +, -}; states are normalized sums of
// the listed product terms.
inline const std::map<std::string, QuantumState> &reference_states() {
  static const std::map<std::string, QuantumState> refs = [] {
    using T = std::vector<std::pair<cdouble, std::string>>;
    std::map<std::string, QuantumState> m;
    auto add = [&m](const std::string &name, int n, const T &terms) {
      m.emplace(name, QuantumState::from_terms(n, terms));
    };

    add("basis_00", 2, {{1, "00"}});
    add("odd_pair_01", 2, {{1, "01"}, {1, "10"}});

    // Quiet-branch collapse of |00> after one selection round that rules out
    // the ++ component.
    add("collapse_three_term", 2, {{1, "+-"}, {1, "-+"}, {1, "--"}});

    // Two-round pair selection output from |00> and from |01>.
    add("bell_from_00", 2, {{1, "00"}, {-1, "11"}});
    add("bell_from_01", 2, {{1, "01"}, {-1, "10"}});

    // Corrected CNOT pipeline output for input |+>|+>|0> (control, ancilla,
    // target), one entry per ancilla outcome.
    add("cnot_plus", 3, {{1, "0+0"}, {1, "1+1"}});
    add("cnot_minus", 3, {{1, "0-0"}, {1, "1-1"}});

    // Four-qubit cluster produced by the pipeline on qubits (1,2,4,5), and
    // the five-qubit state just before the ancilla measurement.
    add("cluster4_out", 4,
        {{1, "0000"}, {-1, "0011"}, {1, "1101"}, {-1, "1110"}});
    add("cluster5_premeasure", 5,
        {{1, "00-00"}, {-1, "00-11"}, {-1, "11-01"}, {1, "11-10"},
         {1, "00+01"}, {-1, "00+10"}, {-1, "11+00"}, {1, "11+11"}});

    // Corrected cluster leaves with the measured ancilla still in place.
    add("cluster5_out_plus", 5,
        {{1, "00+00"}, {-1, "00+11"}, {1, "11+01"}, {-1, "11+10"}});
    add("cluster5_out_minus", 5,
        {{1, "00-00"}, {-1, "00-11"}, {1, "11-01"}, {-1, "11-10"}});

    // The same states written in the singlet-pair frame (X on the first
    // qubit of each prepared pair, Z bookkeeping on control/ancilla); these
    // are what the pipeline states map to under the recorded Pauli frame.
    add("cluster4_paired_form", 4,
        {{1, "0100"}, {-1, "0111"}, {-1, "1001"}, {1, "1010"}});
    add("cluster5_paired_form", 5,
        {{1, "01+00"}, {-1, "01+11"}, {-1, "10+01"}, {1, "10+10"},
         {1, "01-01"}, {-1, "01-10"}, {-1, "10-00"}, {1, "10-11"}});

    // Standard cluster form reachable from cluster4_paired_form by
    // single-qubit unitaries.
    add("cluster4_standard", 4,
        {{1, "0000"}, {1, "0011"}, {1, "1100"}, {-1, "1111"}});

    return m;
  }();
  return refs;
}

inline bool known_reference(const std::string &name) {
  return reference_states().count(name) != 0;
}

inline const QuantumState &reference_state(const std::string &name) {
  const auto &refs = reference_states();
  auto it = refs.find(name);
  if (it == refs.end())
    throw ArgumentError("unknown reference state: " + name);
  return it->second;
}

}  // namespace qsel
