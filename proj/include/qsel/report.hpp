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

// JSON run reports (schema version 1). Reports are self-contained: they echo
// the device and program so a run can be reproduced from the report alone,
// and leaf rows are sorted by outcome path so output is canonical. The only
// non-reproducible field is duration_ms.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsel/common.hpp"
#include "qsel/device.hpp"
#include "qsel/hilbert.hpp"
#include "qsel/protocols/engine.hpp"

namespace qsel {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

inline json state_to_json(const QuantumState &state) {
  json amps = json::array();
  for (const auto &a : state.amplitudes())
    amps.push_back(json::array({a.real(), a.imag()}));
  return json{{"n", state.num_qubits()}, {"amps", std::move(amps)}};
}

inline QuantumState state_from_json(const json &j) {
  const int n = j.at("n").get<int>();
  std::vector<cdouble> amps;
  for (const auto &pair : j.at("amps"))
    amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return QuantumState(n, std::move(amps));
}

inline json device_to_json(const DeviceConfig &device) {
  return json{{"n_qubits", device.n_qubits},
              {"i_c", device.i_c},
              {"i_c0", device.i_c0},
              {"i_t0", device.i_t0},
              {"fluxes", device.fluxes}};
}

inline json tree_to_json(const protocols::BranchTree &tree) {
  json leaves = json::array();
  std::vector<int> order = tree.leaves();
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return tree.nodes[a].path < tree.nodes[b].path;
  });
  for (int i : order) {
    const auto &node = tree.nodes[i];
    json leaf{{"path", node.path},
              {"status", protocols::to_string(node.status)},
              {"probability", node.joint_probability}};
    leaf["state"] = node.state ? state_to_json(*node.state) : json(nullptr);
    if (!node.assert_failures.empty())
      leaf["assert_failures"] = node.assert_failures;
    leaves.push_back(std::move(leaf));
  }
  return json{{"leaf_count", order.size()}, {"leaves", std::move(leaves)}};
}

inline json samples_to_json(const protocols::SampleTable &table) {
  json counts = json::object();
  for (const auto &[key, count] : table.counts) counts[key] = count;
  return json{{"shots", table.shots},
              {"seed", table.seed},
              {"counts", std::move(counts)}};
}

inline json result_to_json(const protocols::ProtocolResult &result) {
  json out;
  out["success_probability"] = result.success_probability;
  out["assert_failed"] = result.assert_failed;
  if (result.success_state)
    out["success_state"] = state_to_json(*result.success_state);
  if (result.tree) out["tree"] = tree_to_json(*result.tree);
  if (result.samples) out["samples"] = samples_to_json(*result.samples);
  if (!result.metrics.empty()) out["metrics"] = result.metrics;
  if (!result.frames.empty()) out["frames"] = result.frames;
  if (!result.notes.empty()) out["notes"] = result.notes;
  if (!result.warnings.empty()) out["warnings"] = result.warnings;
  return out;
}

struct RunReportInfo {
  std::string command;        // run | demo | scaling
  std::string mode;           // enumerate | sample
  std::string program_name;   // path or builtin name
  std::string program_text;   // echoed source
  std::string coupling_model = "exact";
  std::uint64_t seed = kDefaultSeed;
  long long shots = 0;
  double duration_ms = 0.0;
};

inline json make_run_report(const RunReportInfo &info,
                            const DeviceConfig &device,
                            const protocols::ProtocolResult &result) {
  json report;
  report["schema"] = kReportSchemaVersion;
  report["tool"] = "qsel";
  report["version"] = kVersion;
  report["command"] = info.command;
  report["mode"] = info.mode;
  report["coupling_model"] = info.coupling_model;
  if (info.mode == "sample") {
    report["seed"] = info.seed;
    report["shots"] = info.shots;
  }
  report["program"] = json{{"name", info.program_name},
                           {"text", info.program_text}};
  report["device"] = device_to_json(device);
  report["duration_ms"] = info.duration_ms;
  report["result"] = result_to_json(result);
  return report;
}

}  // namespace qsel
