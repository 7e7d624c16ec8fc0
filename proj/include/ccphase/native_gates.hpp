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

// Gate lists realized as register channels.
//
//   Ideal          exact unitaries on qubits
//   Depolarizing   each gate followed by depolarizing on its own sites
//   Device         qutrit register with device decoherence: 1Q gates take one
//                  1Q slot, RZ is a frame change, CPHASE/CZ are two pulses on
//                  the edge's deployed interaction, CCPHASE011 is the
//                  four-pulse sequence. Every site decoheres in every slot.

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <variant>

#include "ccphase/backend.hpp"
#include "ccphase/benchmarking.hpp"
#include "ccphase/decompose.hpp"
#include "ccphase/device.hpp"
#include "ccphase/noise.hpp"

namespace ccphase {

struct IdealRealization {};

struct DepolarizingRealization {
  double p1 = 0.0;  // after each non-virtual 1Q gate
  double p2 = 0.0;  // after each 2Q gate, on the pair
  double p3 = 0.0;  // after each 3Q gate
};

struct DeviceRealization {
  DeviceModel model;
  std::array<int, 3> chain{};
  NoiseOptions options;
};

using Realization = std::variant<IdealRealization, DepolarizingRealization, DeviceRealization>;

namespace detail {

inline void add_idle_noise(LayeredChannel& ch, const DeviceRealization& dev, double window_ns, std::span<const int> active) {
  if (window_ns <= 0.0) return;
  for (int s = 0; s < 3; ++s) {
    bool on = false;
    for (int a : active) on = on || a == s;
    if (!on && !dev.options.idle_decoherence) continue;
    const bool modulated = dev.options.modulation && (dev.options.modulation->scope == ModulationScope::WholeGate || on);
    const auto& q = dev.model.qubit(dev.chain[static_cast<std::size_t>(s)]);
    ch.add_site_superop(s, decoherence_channel(q, window_ns, dev.options.modulation, modulated).superop);
  }
}

// Two-pulse CPHASE(phi) on adjacent chain sites (a < b).
inline void add_device_cphase(LayeredChannel& ch, const DeviceRealization& dev, int a, int b, double phi) {
  const auto edge = dev.model.edge(dev.chain[static_cast<std::size_t>(a)], dev.chain[static_cast<std::size_t>(b)]);
  if (!edge) throw ValidationError("gate addresses an edge missing from the device");
  const Subspace type = edge->second;
  const double window = dev.model.timing().window(edge->first.pulse_ns);
  const int sites[2] = {a, b};
  for (double beta : {0.0, kPi - phi}) {
    ch.add_unitary(lift_local(iswap_unitary(type, beta), {a, b}, kChainLayout));
    add_idle_noise(ch, dev, window, sites);
  }
}

}  // namespace detail

inline RegisterLayout realization_layout(const Realization& r) {
  return std::holds_alternative<DeviceRealization>(r) ? kChainLayout : RegisterLayout{3, 2};
}

inline LayeredChannel circuit_channel(const GateList& gl, const Realization& real) {
  const RegisterLayout layout = realization_layout(real);
  LayeredChannel ch(layout);
  for (const auto& g : gl) {
    validate_gate(g);
    if (const auto* dev = std::get_if<DeviceRealization>(&real)) {
      switch (g.kind) {
        case GateKind::RZ:
          ch.add_unitary(site_gate(gate_matrix(g), g.sites[0]));
          break;
        case GateKind::RX:
        case GateKind::H:
        case GateKind::X:
          ch.add_unitary(site_gate(gate_matrix(g), g.sites[0]));
          detail::add_idle_noise(ch, *dev, dev->model.timing().one_qubit_gate_ns, g.sites);
          break;
        case GateKind::CPhase:
        case GateKind::CZ:
          detail::add_device_cphase(ch, *dev, std::min(g.sites[0], g.sites[1]), std::max(g.sites[0], g.sites[1]),
                                    g.kind == GateKind::CZ ? kPi : g.param);
          break;
        case GateKind::CNot:
          ch.append(circuit_channel(lower_to_native({g}), real));
          break;
        case GateKind::CCPhase011:
          ch.append(noisy_sequence_channel(synthesize_on_chain(g.param, dev->model, dev->chain), dev->model, dev->chain, dev->options));
          break;
        case GateKind::CCPhase: {
          const Gate x0{GateKind::X, {0}};
          ch.append(circuit_channel({x0, Gate{GateKind::CCPhase011, {0, 1, 2}, g.param}, x0}, real));
          break;
        }
      }
      continue;
    }
    ch.add_unitary(place_on_qubits(gate_matrix(g), g.sites));
    if (const auto* dep = std::get_if<DepolarizingRealization>(&real)) {
      const int a = arity(g.kind);
      const double p = a == 1 ? (g.kind == GateKind::RZ ? 0.0 : dep->p1) : a == 2 ? dep->p2 : dep->p3;
      if (p > 0.0) ch.add_depolarizing(p, g.sites);
    }
  }
  return ch;
}

// CB of the lowered reference decomposition treated as one cycle.
inline BenchmarkReport benchmark_decomposition(const Realization& real, double theta, const CBConfig& config) {
  auto factory = [&](double th) { return circuit_channel(lower_to_native(decompose_ccphase(th)), real); };
  auto target = [](double th) { return ccphase_target(th, 7); };
  return cycle_benchmark(factory, target, theta, config);
}

}  // namespace ccphase
