// Copyright 2026 The qutrit-ccphase Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Device description: per-qutrit frequencies and coherence times, per-edge
// interaction type and timings. Times are in microseconds for coherence and
// nanoseconds for pulses.

#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccphase/errors.hpp"
#include "ccphase/pulse.hpp"
#include "ccphase/synth.hpp"

namespace ccphase {

inline constexpr int kDeviceSchemaVersion = 1;

// Measured value with an optional one-sigma uncertainty. Simulation uses the
// point estimate only.
struct Measured {
  double value = 0.0;
  std::optional<double> uncertainty;
  bool operator==(const Measured&) const = default;
};

struct QubitParams {
  int id = 0;
  double f01_ghz = 0.0;
  double f12_ghz = 0.0;
  Measured t1_1_us;  // |1> relaxation
  Measured t1_2_us;  // |2> relaxation
  Measured t2_01_us;
  Measured t2_12_us;
  bool flux_tunable = false;
  bool operator==(const QubitParams&) const = default;
};

struct EdgeParams {
  std::array<int, 2> pair{};
  Subspace interaction = Subspace::Swap02;  // relative to `pair`
  double pulse_ns = 0.0;
  double total_cphase_ns = 0.0;
  Measured cphase_fidelity;
  bool operator==(const EdgeParams&) const = default;
};

struct Timing {
  double rise_ns = 16.0;
  double pad_ns = 16.0;
  double one_qubit_gate_ns = 40.0;
  bool operator==(const Timing&) const = default;

  double window(double pulse_ns) const { return pulse_ns + rise_ns + pad_ns; }
};

class DeviceModel {
 public:
  DeviceModel() = default;
  DeviceModel(std::string name, std::vector<QubitParams> qubits, std::vector<EdgeParams> edges, Timing timing = {})
      : name_(std::move(name)), qubits_(std::move(qubits)), edges_(std::move(edges)), timing_(timing) {
    validate();
  }

  // Three-qutrit sublattice (10, 11, 12).
  static DeviceModel builtin() {
    std::vector<QubitParams> q = {
        {10, 4.791, 4.585, {33.7, 0.7}, {16.6, 0.4}, {22.0, 3.0}, {9.4, 0.1}, true},
        {11, 3.247, 3.044, {46.0, 8.0}, {18.9, 0.8}, {24.0, 9.0}, {1.6, 0.3}, false},
        {12, 4.867, 4.661, {19.0, 1.0}, {14.9, 0.3}, {12.0, 0.8}, {5.6, 0.1}, true},
    };
    std::vector<EdgeParams> e = {
        {{10, 11}, Subspace::Swap20, 61.0, 186.0, {0.977, 0.004}},
        {{11, 12}, Subspace::Swap02, 76.0, 216.0, {0.973, 0.007}},
    };
    return {"sublattice-10-11-12", std::move(q), std::move(e)};
  }

  const std::string& name() const { return name_; }
  const std::vector<QubitParams>& qubits() const { return qubits_; }
  const std::vector<EdgeParams>& edges() const { return edges_; }
  const Timing& timing() const { return timing_; }

  const QubitParams& qubit(int id) const {
    for (const auto& q : qubits_)
      if (q.id == id) return q;
    throw ValidationError("unknown qubit " + std::to_string(id));
  }

  // Edge record and the interaction type seen from the ordered pair (a, b).
  std::optional<std::pair<EdgeParams, Subspace>> edge(int a, int b) const {
    for (const auto& e : edges_) {
      if (e.pair[0] == a && e.pair[1] == b) return std::pair{e, e.interaction};
      if (e.pair[0] == b && e.pair[1] == a) return std::pair{e, reversed(e.interaction)};
    }
    return std::nullopt;
  }

  EdgeTypeMap edge_types() const {
    EdgeTypeMap m;
    for (const auto& e : edges_) m.set(e.pair[0], e.pair[1], e.interaction);
    return m;
  }

  // Default chain: the first edge followed by the edge sharing its second qubit.
  std::array<int, 3> default_chain() const {
    for (const auto& e1 : edges_)
      for (const auto& e2 : edges_) {
        if (&e1 == &e2) continue;
        if (e2.pair[0] == e1.pair[1] && e2.pair[1] != e1.pair[0]) return {e1.pair[0], e1.pair[1], e2.pair[1]};
        if (e2.pair[1] == e1.pair[1] && e2.pair[0] != e1.pair[0]) return {e1.pair[0], e1.pair[1], e2.pair[0]};
      }
    throw ValidationError("device has no three-qubit chain");
  }

  void validate() const {
    if (qubits_.empty()) throw ValidationError("device: no qubits");
    for (std::size_t i = 0; i < qubits_.size(); ++i) {
      const auto& q = qubits_[i];
      const std::string where = "qubit " + std::to_string(q.id) + ": ";
      for (std::size_t j = 0; j < i; ++j)
        if (qubits_[j].id == q.id) throw ValidationError(where + "duplicate id");
      if (!(q.f01_ghz > 0.0) || !(q.f12_ghz > 0.0)) throw ValidationError(where + "frequencies must be positive");
      for (const auto* m : {&q.t1_1_us, &q.t1_2_us, &q.t2_01_us, &q.t2_12_us})
        if (!(m->value > 0.0)) throw ValidationError(where + "coherence times must be positive");
      if (q.t2_01_us.value > 2.0 * q.t1_1_us.value + 1e-6) throw ValidationError(where + "physicality violated: T2_01 <= 2*T1_1");
      if (q.t2_12_us.value > 2.0 * q.t1_2_us.value + 1e-6) throw ValidationError(where + "physicality violated: T2_12 <= 2*T1_2");
    }
    if (!(timing_.rise_ns >= 0.0 && timing_.pad_ns >= 0.0 && timing_.one_qubit_gate_ns >= 0.0))
      throw ValidationError("timing: durations must be non-negative");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      const std::string where = "edge (" + std::to_string(e.pair[0]) + "," + std::to_string(e.pair[1]) + "): ";
      qubit(e.pair[0]);
      qubit(e.pair[1]);
      if (e.pair[0] == e.pair[1]) throw ValidationError(where + "self loop");
      for (std::size_t j = 0; j < i; ++j) {
        const auto& o = edges_[j];
        if ((o.pair[0] == e.pair[0] && o.pair[1] == e.pair[1]) || (o.pair[0] == e.pair[1] && o.pair[1] == e.pair[0]))
          throw ValidationError(where + "duplicate edge");
      }
      if (!(e.pulse_ns > 0.0)) throw ValidationError(where + "pulse_ns must be positive");
      if (std::abs(e.total_cphase_ns - 2.0 * timing_.window(e.pulse_ns)) > 1.0)
        throw ValidationError(where + "total_cphase_ns must equal 2*(pulse_ns + rise_ns + pad_ns) within 1 ns");
      if (!(e.cphase_fidelity.value >= 0.0 && e.cphase_fidelity.value <= 1.0))
        throw ValidationError(where + "cphase_fidelity must lie in [0, 1]");
    }
  }

  bool operator==(const DeviceModel&) const = default;

 private:
  std::string name_;
  std::vector<QubitParams> qubits_;
  std::vector<EdgeParams> edges_;
  Timing timing_;
};

// Pulse durations for the chain, in sequence order (first edge, second edge).
inline PulseTimings chain_timings(const DeviceModel& model, std::span<const int> chain) {
  if (chain.size() != 3) throw ValidationError("chain must list exactly three qubits");
  const auto e1 = model.edge(chain[0], chain[1]);
  const auto e2 = model.edge(chain[1], chain[2]);
  if (!e1 || !e2) throw ValidationError("chain edges missing from device");
  return {e1->first.pulse_ns, e2->first.pulse_ns};
}

// Wall-clock length of the four pulse windows.
inline double total_ccphase_time(const DeviceModel& model, std::span<const int> chain,
                                 const std::optional<Timing>& override_timing = std::nullopt) {
  const auto t = chain_timings(model, chain);
  const Timing& tm = override_timing ? *override_timing : model.timing();
  return 2.0 * tm.window(t.first_edge_ns) + 2.0 * tm.window(t.second_edge_ns);
}

// Synthesizes CCPHASE_011(theta) on a device chain; the combo follows from the
// deployed edge types.
inline PulseSequence synthesize_on_chain(double theta, const DeviceModel& model, std::span<const int> chain) {
  const auto check = chain_validity(model.edge_types(), chain);
  if (!check.valid) throw ValidationError("chain rejected: " + check.diagnosis);
  return synthesize(theta, check.combo, chain_timings(model, chain));
}

namespace detail {

inline nlohmann::json measured_to_json(const Measured& m) {
  if (!m.uncertainty) return m.value;
  return {{"value", m.value}, {"uncertainty", *m.uncertainty}};
}

inline Measured measured_from_json(const nlohmann::json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), std::nullopt};
  if (j.is_object() && j.contains("value") && j.at("value").is_number()) {
    Measured m{j.at("value").get<double>(), std::nullopt};
    if (j.contains("uncertainty")) {
      if (!j.at("uncertainty").is_number()) throw ValidationError(field + ".uncertainty: expected a number");
      m.uncertainty = j.at("uncertainty").get<double>();
    }
    return m;
  }
  throw ValidationError(field + ": expected a number or {\"value\", \"uncertainty\"}");
}

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline double require_number(const nlohmann::json& j, const std::string& key, const std::string& where) {
  const auto& v = require(j, key, where);
  if (!v.is_number()) throw ValidationError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::json& j, const std::string& key, const std::string& where) {
  const auto& v = require(j, key, where);
  if (!v.is_number_integer()) throw ValidationError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

}  // namespace detail

inline nlohmann::json to_json(const DeviceModel& m) {
  nlohmann::json j;
  j["schema_version"] = kDeviceSchemaVersion;
  j["name"] = m.name();
  j["timing"] = {{"rise_ns", m.timing().rise_ns}, {"pad_ns", m.timing().pad_ns}, {"one_qubit_gate_ns", m.timing().one_qubit_gate_ns}};
  j["qubits"] = nlohmann::json::array();
  for (const auto& q : m.qubits())
    j["qubits"].push_back({{"id", q.id},
                           {"f01_ghz", q.f01_ghz},
                           {"f12_ghz", q.f12_ghz},
                           {"t1_1_us", detail::measured_to_json(q.t1_1_us)},
                           {"t1_2_us", detail::measured_to_json(q.t1_2_us)},
                           {"t2_01_us", detail::measured_to_json(q.t2_01_us)},
                           {"t2_12_us", detail::measured_to_json(q.t2_12_us)},
                           {"flux_tunable", q.flux_tunable}});
  j["edges"] = nlohmann::json::array();
  for (const auto& e : m.edges())
    j["edges"].push_back({{"pair", {e.pair[0], e.pair[1]}},
                          {"interaction", gate_name(e.interaction)},
                          {"pulse_ns", e.pulse_ns},
                          {"total_cphase_ns", e.total_cphase_ns},
                          {"cphase_fidelity", detail::measured_to_json(e.cphase_fidelity)}});
  return j;
}

inline DeviceModel parse_device(const nlohmann::json& j) {
  using namespace detail;
  if (!j.is_object()) throw ValidationError("device: top level must be an object");
  const int version = require_int(j, "schema_version", "device");
  if (version != kDeviceSchemaVersion)
    throw ValidationError("device.schema_version: unsupported version " + std::to_string(version));
  Timing timing;
  if (j.contains("timing")) {
    const auto& t = j.at("timing");
    if (!t.is_object()) throw ValidationError("device.timing: expected an object");
    if (t.contains("rise_ns")) timing.rise_ns = require_number(t, "rise_ns", "device.timing");
    if (t.contains("pad_ns")) timing.pad_ns = require_number(t, "pad_ns", "device.timing");
    if (t.contains("one_qubit_gate_ns")) timing.one_qubit_gate_ns = require_number(t, "one_qubit_gate_ns", "device.timing");
  }
  const auto& qs = require(j, "qubits", "device");
  if (!qs.is_array()) throw ValidationError("device.qubits: expected an array");
  std::vector<QubitParams> qubits;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const std::string w = "device.qubits[" + std::to_string(i) + "]";
    const auto& q = qs[i];
    QubitParams p;
    p.id = require_int(q, "id", w);
    p.f01_ghz = require_number(q, "f01_ghz", w);
    p.f12_ghz = require_number(q, "f12_ghz", w);
    p.t1_1_us = measured_from_json(require(q, "t1_1_us", w), w + ".t1_1_us");
    p.t1_2_us = measured_from_json(require(q, "t1_2_us", w), w + ".t1_2_us");
    p.t2_01_us = measured_from_json(require(q, "t2_01_us", w), w + ".t2_01_us");
    p.t2_12_us = measured_from_json(require(q, "t2_12_us", w), w + ".t2_12_us");
    const auto& ft = require(q, "flux_tunable", w);
    if (!ft.is_boolean()) throw ValidationError(w + ".flux_tunable: expected a boolean");
    p.flux_tunable = ft.get<bool>();
    qubits.push_back(p);
  }
  const auto& es = require(j, "edges", "device");
  if (!es.is_array()) throw ValidationError("device.edges: expected an array");
  std::vector<EdgeParams> edges;
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string w = "device.edges[" + std::to_string(i) + "]";
    const auto& e = es[i];
    EdgeParams p;
    const auto& pair = require(e, "pair", w);
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
      throw ValidationError(w + ".pair: expected two integer qubit ids");
    p.pair = {pair[0].get<int>(), pair[1].get<int>()};
    const auto& it = require(e, "interaction", w);
    if (!it.is_string()) throw ValidationError(w + ".interaction: expected a string");
    try {
      p.interaction = parse_subspace(it.get<std::string>());
    } catch (const ValidationError& err) {
      throw ValidationError(w + ".interaction: " + err.what());
    }
    p.pulse_ns = require_number(e, "pulse_ns", w);
    p.total_cphase_ns = require_number(e, "total_cphase_ns", w);
    p.cphase_fidelity = measured_from_json(require(e, "cphase_fidelity", w), w + ".cphase_fidelity");
    edges.push_back(p);
  }
  std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : "";
  return {std::move(name), std::move(qubits), std::move(edges), timing};
}

inline DeviceModel load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open device file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("device file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_device(j);
}

}  // namespace ccphase
