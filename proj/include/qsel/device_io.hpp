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

// Plain-text device description files:
//
//   n_qubits = 5
//   i_c      = [1, 1, 1, 1, 1]
//   i_c0     = 100
//   i_t0     = 50
//   fluxes   = [0, 0, 0, 0, 0]
//
// Values are arithmetic expressions in the protocol language's expression
// grammar (literals only, so 1/2 works for exact half-quantum fluxes);
// comments start with '#'.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsel/common.hpp"
#include "qsel/device.hpp"
#include "qsel/dsl/ast.hpp"
#include "qsel/dsl/parser.hpp"

namespace qsel {

inline DeviceConfig parse_device(const std::string &text) {
  DeviceConfig config;
  bool saw_n = false, saw_ic = false, saw_ic0 = false, saw_it0 = false,
       saw_fluxes = false;

  const dsl::ConstantEnv literals{};  // no named constants in device files
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("device file line " + std::to_string(line_no) +
                        ": expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);

    auto eval_scalar = [&](const std::string &s) {
      try {
        return dsl::evaluate(*dsl::parse_expression(s), literals);
      } catch (const Error &e) {
        throw ConfigError("device file line " + std::to_string(line_no) +
                          ": " + e.what());
      }
    };
    auto eval_list = [&](std::string s) {
      const auto open = s.find('[');
      const auto close = s.rfind(']');
      if (open == std::string::npos || close == std::string::npos ||
          close < open)
        throw ConfigError("device file line " + std::to_string(line_no) +
                          ": expected a [..] list");
      s = s.substr(open + 1, close - open - 1);
      std::vector<double> values;
      std::string item;
      std::istringstream items(s);
      while (std::getline(items, item, ',')) values.push_back(eval_scalar(item));
      return values;
    };

    if (key == "n_qubits") {
      config.n_qubits = static_cast<int>(eval_scalar(value));
      saw_n = true;
    } else if (key == "i_c") {
      config.i_c = eval_list(value);
      saw_ic = true;
    } else if (key == "i_c0") {
      config.i_c0 = eval_scalar(value);
      saw_ic0 = true;
    } else if (key == "i_t0") {
      config.i_t0 = eval_scalar(value);
      saw_it0 = true;
    } else if (key == "fluxes") {
      config.fluxes = eval_list(value);
      saw_fluxes = true;
    } else {
      throw ConfigError("device file line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }

  if (!saw_n || !saw_ic || !saw_ic0 || !saw_it0 || !saw_fluxes)
    throw ConfigError(
        "device file must set n_qubits, i_c, i_c0, i_t0 and fluxes");
  config.validate();
  return config;
}

inline DeviceConfig load_device(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open device file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_device(buf.str());
}

}  // namespace qsel
