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

// Qutrit decoherence from measured coherence times.
//
// Ladder relaxation 2 -> 1 -> 0 plus pure dephasing. Dephasing uses one
// Lindblad operator diag(0, a, a + b) with a^2/2 = gamma_phi01 and
// b^2/2 = gamma_phi12, so the 0-2 coherence dephases as the two transitions
// combined. Channels are exp(t L) factorized into Kraus operators.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ccphase/device.hpp"
#include "ccphase/linalg.hpp"
#include "ccphase/simulator.hpp"
#include "ccphase/synth.hpp"

namespace ccphase {

// Rates in 1/us.
struct DecoherenceRates {
  double gamma1 = 0.0;     // |1> -> |0>
  double gamma2 = 0.0;     // |2> -> |1>
  double gphi01 = 0.0;
  double gphi12 = 0.0;
  bool clamped01 = false;  // inferred pure dephasing was negative and set to 0
  bool clamped12 = false;
};

// t2_factor scales both T2 values (1 = bare device).
inline DecoherenceRates decoherence_rates(const QubitParams& q, double t2_factor = 1.0) {
  if (!(t2_factor > 0.0 && t2_factor <= 1.0)) throw ValidationError("T2 scale factor must lie in (0, 1]");
  DecoherenceRates r;
  r.gamma1 = 1.0 / q.t1_1_us.value;
  r.gamma2 = 1.0 / q.t1_2_us.value;
  const double phi01 = 1.0 / (t2_factor * q.t2_01_us.value) - 0.5 * r.gamma1;
  const double phi12 = 1.0 / (t2_factor * q.t2_12_us.value) - 0.5 * (r.gamma1 + r.gamma2);
  r.clamped01 = phi01 < 0.0;
  r.clamped12 = phi12 < 0.0;
  r.gphi01 = std::max(0.0, phi01);
  r.gphi12 = std::max(0.0, phi12);
  return r;
}

// Column-stacked Lindblad generator on one qutrit, in 1/us.
inline Matrix lindblad_generator(const DecoherenceRates& r) {
  std::vector<Matrix> ops;
  Matrix l1 = Matrix::Zero(3, 3);
  l1(0, 1) = std::sqrt(r.gamma1);
  Matrix l2 = Matrix::Zero(3, 3);
  l2(1, 2) = std::sqrt(r.gamma2);
  Matrix lp = Matrix::Zero(3, 3);
  const double a = std::sqrt(2.0 * r.gphi01);
  lp(1, 1) = a;
  lp(2, 2) = a + std::sqrt(2.0 * r.gphi12);
  ops = {l1, l2, lp};
  const Matrix id = identity(3);
  Matrix g = Matrix::Zero(9, 9);
  for (const auto& l : ops) {
    const Matrix ll = l.adjoint() * l;
    g += kron(l.conjugate(), l) - 0.5 * kron(id, ll) - 0.5 * kron(ll.transpose(), id);
  }
  return g;
}

struct QutritNoiseChannel {
  int site = 0;            // qubit id
  double window_ns = 0.0;
  DecoherenceRates rates;
  Matrix superop;          // 9 x 9, column stacked
  KrausSet kraus_ops;
};

inline QutritNoiseChannel channel_from_rates(const DecoherenceRates& r, double t_ns, int site = 0) {
  if (!(t_ns >= 0.0) || !std::isfinite(t_ns)) throw ValidationError("decoherence window must be a non-negative duration");
  QutritNoiseChannel ch;
  ch.site = site;
  ch.window_ns = t_ns;
  ch.rates = r;
  if (t_ns == 0.0) {
    ch.superop = identity(9);
    ch.kraus_ops = {identity(3)};
    return ch;
  }
  const Matrix gt = lindblad_generator(r) * (t_ns * 1e-3);
  ch.superop = gt.exp();
  ch.kraus_ops = choi_to_kraus(Superoperator(3, ch.superop).choi(), 3, 3);
  if (kraus_completeness_error(ch.kraus_ops) > 1e-10) throw NumericalCheckError("decoherence channel is not trace preserving");
  return ch;
}

enum class ModulationScope {
  WholeGate,      // reduced T2 for the whole sequence
  ActiveWindows,  // reduced T2 only while the qubit's own edge is pulsed
};

struct ModulationDephasingPolicy {
  double factor = 0.5;
  ModulationScope scope = ModulationScope::WholeGate;

  void validate() const {
    if (!(factor > 0.0 && factor <= 1.0)) throw ValidationError("modulation dephasing factor must lie in (0, 1]");
  }
};

inline QutritNoiseChannel decoherence_channel(const QubitParams& q, double t_ns,
                                              const std::optional<ModulationDephasingPolicy>& policy = std::nullopt,
                                              bool modulated = true) {
  double f = 1.0;
  if (policy) {
    policy->validate();
    if (q.flux_tunable && modulated) f = policy->factor;
  }
  return channel_from_rates(decoherence_rates(q, f), t_ns, q.id);
}

struct NoiseOptions {
  std::optional<ModulationDephasingPolicy> modulation;
  bool idle_decoherence = true;
};

struct NoisyChannelInfo {
  double exposure_ns = 0.0;
  std::vector<std::string> warnings;
};

// Pulses interleaved with per-site decoherence over each pulse window
// (pulse + rise + pad), followed by the virtual frame corrections.
inline LayeredChannel noisy_sequence_channel(const PulseSequence& seq, const DeviceModel& model, std::span<const int> chain,
                                             const NoiseOptions& options = {}, const PulseImperfection& imp = {},
                                             NoisyChannelInfo* info = nullptr) {
  if (chain.size() != 3) throw ValidationError("chain must list exactly three qubits");
  if (options.modulation) options.modulation->validate();
  const auto windows = window_unitaries(seq, imp);
  LayeredChannel ch(kChainLayout);
  NoisyChannelInfo local;
  for (int k = 0; k < 4; ++k) {
    const auto& pulse = seq.pulses[static_cast<std::size_t>(k)];
    const auto edge = model.edge(chain[static_cast<std::size_t>(pulse.edge[0])], chain[static_cast<std::size_t>(pulse.edge[1])]);
    if (!edge) throw ValidationError("sequence pulse addresses an edge missing from the device");
    const double window = model.timing().window(pulse.duration_ns);
    local.exposure_ns += window;
    ch.add_unitary(windows[static_cast<std::size_t>(k)]);
    for (int s = 0; s < 3; ++s) {
      const bool active = s == pulse.edge[0] || s == pulse.edge[1];
      if (!active && !options.idle_decoherence) continue;
      const auto& q = model.qubit(chain[static_cast<std::size_t>(s)]);
      const bool modulated = options.modulation && (options.modulation->scope == ModulationScope::WholeGate || active);
      const auto nc = decoherence_channel(q, window, options.modulation, modulated);
      if ((nc.rates.clamped01 || nc.rates.clamped12) && k == 0)
        local.warnings.push_back("qubit " + std::to_string(q.id) + ": negative pure-dephasing rate clamped to 0");
      ch.add_site_superop(s, nc.superop);
    }
  }
  ch.add_unitary(correction_unitary(seq.rz_corrections));
  if (info) *info = std::move(local);
  return ch;
}

}  // namespace ccphase
