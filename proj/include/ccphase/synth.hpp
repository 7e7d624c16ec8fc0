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

// Four-pulse CCPHASE_011(theta) on a chain of three qutrits (q0, q1, q2).
//
//   pulse 1  edge (q0,q1)  beta = 0        stash |11x> into level 2
//   pulse 2  edge (q1,q2)  beta = 0        half oscillation on the target
//   pulse 3  edge (q1,q2)  beta = pi-theta close it with a geometric phase
//   pulse 4  edge (q0,q1)  beta = pi       retrieve the stash
//
// Only |011> survives the stash with q1 = 1 and accumulates e^{i theta}.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccphase/linalg.hpp"
#include "ccphase/pulse.hpp"
#include "ccphase/simulator.hpp"

namespace ccphase {

inline constexpr RegisterLayout kChainLayout{3, 3};
inline constexpr int kIndex011 = 3;  // qubit index of |011>

struct PulseCombo {
  Subspace first = Subspace::Swap20;   // edge (q0,q1)
  Subspace second = Subspace::Swap02;  // edge (q1,q2)
  bool operator==(const PulseCombo&) const = default;
  std::string label() const { return to_string(first) + "," + to_string(second); }
};

inline PulseCombo parse_combo(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw ValidationError("combo must be written as FIRST,SECOND (e.g. 20,02)");
  return {parse_subspace(text.substr(0, comma)), parse_subspace(text.substr(comma + 1))};
}

inline constexpr std::array<PulseCombo, 4> kAllCombos{{{Subspace::Swap02, Subspace::Swap02},
                                                       {Subspace::Swap02, Subspace::Swap20},
                                                       {Subspace::Swap20, Subspace::Swap02},
                                                       {Subspace::Swap20, Subspace::Swap20}}};

struct ComboRule {
  Subspace first;
  Subspace second;
  bool allowed;
  int excited_site;  // chain site holding level 2 during the stash
  std::string diagnosis;
};

inline ComboRule combo_allowed(const PulseCombo& combo) {
  ComboRule rule{combo.first, combo.second, true, combo.first == Subspace::Swap02 ? 1 : 0, ""};
  // SWAP02 on (q0,q1) and SWAP20 on (q1,q2) both move q1 to level 2.
  if (combo.first == Subspace::Swap02 && combo.second == Subspace::Swap20) {
    rule.allowed = false;
    rule.diagnosis =
        "central qubit promoted twice: (02,20) drives q1 to level 2 on both edges, so the |110> stash is "
        "reopened by the target pulses";
  }
  return rule;
}

struct PulseTimings {
  double first_edge_ns = 61.0;
  double second_edge_ns = 76.0;
};

struct PulseSequence {
  std::array<FluxPulse, 4> pulses;
  std::array<double, 3> rz_corrections{};  // (C, D, E)
  PulseCombo combo;
  double theta = 0.0;

  // Conditional-phase correction B, carried by the retrieval pulse as beta4 = pi - B.
  double conditional_correction() const { return normalize_angle(kPi - pulses[3].flux_phase); }
};

inline double target_flux_phase(double theta) { return normalize_angle(kPi - theta); }

// Register unitary of a single pulse on the three-site chain.
inline Matrix chain_pulse_unitary(const FluxPulse& p) {
  return lift_local(iswap_unitary(p), {p.edge[0], p.edge[1]}, kChainLayout);
}

// diag(1, e^{-ic}, e^{-2ic}): a virtual Z frame update on one qutrit.
inline Matrix frame_correction(double c) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = phase(-c);
  m(2, 2) = phase(-2.0 * c);
  return m;
}

inline Matrix correction_unitary(const std::array<double, 3>& c) {
  return kron(kron(frame_correction(c[0]), frame_correction(c[1])), frame_correction(c[2]));
}

inline Matrix level_phase(double l1, double l2) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = phase(l1);
  m(2, 2) = phase(l2);
  return m;
}

// Unitaries of the four pulse windows as realized on the device. Stray phases
// land when a site's last window closes: q2 after pulse 3, q0 and q1 after
// pulse 4. The frame corrections are not included.
inline std::array<Matrix, 4> window_unitaries(const PulseSequence& seq, const PulseImperfection& imp = {}) {
  if (!imp.finite()) throw ValidationError("pulse imperfection contains non-finite values");
  std::array<Matrix, 4> out;
  for (int k = 0; k < 4; ++k) {
    FluxPulse p = seq.pulses[static_cast<std::size_t>(k)];
    if (k == 3) p.flux_phase = normalize_angle(p.flux_phase + imp.conditional_phase_error);
    out[static_cast<std::size_t>(k)] = chain_pulse_unitary(p);
  }
  const auto& s = imp.stray_phases;
  out[2] = (lift_local(level_phase(s[2][0], s[2][1]), {2}, kChainLayout) * out[2]).eval();
  // Retrieval flux-phase offset from pi leaks into the central qubit's phase.
  const double beta4 = normalize_angle(seq.pulses[3].flux_phase + imp.conditional_phase_error);
  const double leak = imp.cross_coupling * normalize_angle(beta4 - kPi);
  const Matrix post = kron(kron(level_phase(s[0][0], s[0][1]), level_phase(s[1][0] + leak, s[1][1] + 2.0 * leak)), identity(3));
  out[3] = (post * out[3]).eval();
  return out;
}

inline Matrix sequence_unitary(const PulseSequence& seq, const PulseImperfection& imp = {}) {
  const auto w = window_unitaries(seq, imp);
  return correction_unitary(seq.rz_corrections) * w[3] * w[2] * w[1] * w[0];
}

// Three-qubit diagonal with e^{i theta} on one computational basis state.
inline Matrix ccphase_target(double theta, int phased_index = kIndex011) {
  Matrix m = identity(8);
  m(phased_index, phased_index) = phase(theta);
  return m;
}

struct SynthesisCheck {
  double max_deviation;  // restricted unitary vs target, entrywise
  double leakage;        // norm of the computational-to-leakage block
};

inline SynthesisCheck check_sequence(const PulseSequence& seq, const PulseImperfection& imp = {}) {
  const auto r = restrict_to_computational(sequence_unitary(seq, imp), ComputationalEmbedding(3));
  return {max_abs_diff(r.block, ccphase_target(seq.theta)), r.leakage};
}

inline PulseSequence build_sequence(double theta, const PulseCombo& combo, const PulseTimings& t) {
  return {{FluxPulse::make({0, 1}, combo.first, 0.0, t.first_edge_ns),
           FluxPulse::make({1, 2}, combo.second, 0.0, t.second_edge_ns),
           FluxPulse::make({1, 2}, combo.second, target_flux_phase(theta), t.second_edge_ns),
           FluxPulse::make({0, 1}, combo.first, kPi, t.first_edge_ns)},
          {0.0, 0.0, 0.0},
          combo,
          theta};
}

inline PulseSequence synthesize(double theta, const PulseCombo& combo, const PulseTimings& timings = {}) {
  if (!std::isfinite(theta)) throw ValidationError("theta must be finite");
  const auto rule = combo_allowed(combo);
  if (!rule.allowed) throw ValidationError("combo (" + combo.label() + ") rejected: " + rule.diagnosis);
  auto seq = build_sequence(theta, combo, timings);
  const auto chk = check_sequence(seq);
  if (chk.max_deviation >= 1e-9 || chk.leakage >= 1e-10)
    throw NumericalCheckError("synthesized sequence misses the CCPHASE target (deviation " + std::to_string(chk.max_deviation) + ")");
  return seq;
}

// Same pulses and calibration, new target phase.
inline PulseSequence with_theta(PulseSequence seq, double theta) {
  seq.theta = theta;
  seq.pulses[2].flux_phase = target_flux_phase(theta);
  return seq;
}

inline PulseSequence with_conditional_correction(PulseSequence seq, double b) {
  seq.pulses[3].flux_phase = normalize_angle(kPi - b);
  return seq;
}

struct Checkpoint {
  int basis;  // 27-dim register index
  Complex amplitude;
};

struct Trajectory {
  int input;
  std::array<Checkpoint, 4> steps;  // after pulses 1..4
};

// Per-input basis-ket trajectory of the ideal pulses. Frame corrections, if
// any, are folded into the last checkpoint.
inline std::vector<Trajectory> truth_table(const PulseSequence& seq, std::span<const int> inputs) {
  std::array<Matrix, 4> w;
  for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(k)] = chain_pulse_unitary(seq.pulses[static_cast<std::size_t>(k)]);
  w[3] = (correction_unitary(seq.rz_corrections) * w[3]).eval();
  std::vector<Trajectory> out;
  for (int in : inputs) {
    if (in < 0 || in >= 27) throw ValidationError("truth_table: input index out of range");
    Vector psi = Vector::Zero(27);
    psi(in) = 1.0;
    Trajectory t{in, {}};
    for (int k = 0; k < 4; ++k) {
      psi = w[static_cast<std::size_t>(k)] * psi;
      Eigen::Index arg = 0;
      psi.cwiseAbs().maxCoeff(&arg);
      if (std::abs(std::abs(psi(arg)) - 1.0) > 1e-10) throw NumericalCheckError("truth_table: state is not a single basis ket");
      t.steps[static_cast<std::size_t>(k)] = {static_cast<int>(arg), psi(arg)};
    }
    out.push_back(t);
  }
  return out;
}

// Deployed interaction type per undirected edge, stored relative to the
// orientation it was recorded with.
class EdgeTypeMap {
 public:
  void set(int a, int b, Subspace type) {
    if (a == b) throw ValidationError("edge needs two distinct qubits");
    if (a < b)
      map_[{a, b}] = type;
    else
      map_[{b, a}] = reversed(type);
  }

  // Type seen from the ordered pair (a, b).
  std::optional<Subspace> get(int a, int b) const {
    if (auto it = map_.find({std::min(a, b), std::max(a, b)}); it != map_.end()) return a < b ? it->second : reversed(it->second);
    return std::nullopt;
  }

 private:
  std::map<std::pair<int, int>, Subspace> map_;
};

struct ChainCheck {
  bool valid;
  PulseCombo combo;
  std::string diagnosis;
};

inline ChainCheck chain_validity(const EdgeTypeMap& edges, std::span<const int> chain) {
  if (chain.size() != 3) throw ValidationError("chain must list exactly three qubits");
  if (chain[0] == chain[1] || chain[1] == chain[2] || chain[0] == chain[2]) throw ValidationError("chain qubits must be distinct");
  const auto first = edges.get(chain[0], chain[1]);
  const auto second = edges.get(chain[1], chain[2]);
  if (!first) throw ValidationError("missing edge (" + std::to_string(chain[0]) + "," + std::to_string(chain[1]) + ")");
  if (!second) throw ValidationError("missing edge (" + std::to_string(chain[1]) + "," + std::to_string(chain[2]) + ")");
  const PulseCombo combo{*first, *second};
  const auto rule = combo_allowed(combo);
  return {rule.allowed, combo, rule.diagnosis};
}

}  // namespace ccphase
