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

// Depth-1 QAOA for MAX-3-SAT.
//
// A clause costs 0 on exactly one assignment (its unsatisfied row) and 1
// elsewhere, so e^{-i gamma C_k} is, up to the global phase e^{-i gamma}, a
// single phase e^{+i gamma} on that row. On hardware the row is moved onto the
// native gate's phased state with X gates on both sides.
//
// Ansatz: |+>^n, separator prod_k e^{-i gamma C_k}, mixer prod_j e^{-i beta X_j}
// (full angle, RX(2 beta)), Z-basis readout. Bitstrings are big-endian: x_0 is
// the most significant bit. On the qutrit register level 2 reads as 1.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccphase/decompose.hpp"
#include "ccphase/gates.hpp"
#include "ccphase/native_gates.hpp"
#include "ccphase/random.hpp"

namespace ccphase {

struct Literal {
  int var = 0;
  bool negated = false;
};

struct Clause {
  std::array<Literal, 3> literals;

  void validate() const {
    for (const auto& l : literals)
      if (l.var < 0) throw ValidationError("clause variable index must be non-negative");
    if (literals[0].var == literals[1].var || literals[1].var == literals[2].var || literals[0].var == literals[2].var)
      throw ValidationError("clause needs three distinct variables");
  }

  // Value of literal l's variable that leaves the literal false.
  int unsatisfied_bit(int l) const { return literals[static_cast<std::size_t>(l)].negated ? 1 : 0; }

  std::string label() const {
    std::string s;
    for (int l = 0; l < 3; ++l) {
      const auto& lit = literals[static_cast<std::size_t>(l)];
      if (l) s += "|";
      s += (lit.negated ? "~x" : "x") + std::to_string(lit.var);
    }
    return s;
  }
};

// "x0|~x1|x2"; '~', '!' and '-' negate.
inline Clause parse_clause(std::string_view text) {
  Clause c;
  int count = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto bar = std::min(text.find('|', pos), text.size());
    std::string_view tok = text.substr(pos, bar - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    Literal lit;
    if (!tok.empty() && (tok.front() == '~' || tok.front() == '!' || tok.front() == '-')) {
      lit.negated = true;
      tok.remove_prefix(1);
    }
    if (tok.size() < 2 || tok.front() != 'x') throw ValidationError("clause literal must look like x3 or ~x3");
    tok.remove_prefix(1);
    int v = 0;
    for (char ch : tok) {
      if (ch < '0' || ch > '9') throw ValidationError("clause literal must look like x3 or ~x3");
      v = 10 * v + (ch - '0');
      if (v > 1000000) throw ValidationError("clause variable index too large");
    }
    lit.var = v;
    if (count == 3) throw ValidationError("clause must have exactly three literals");
    c.literals[static_cast<std::size_t>(count++)] = lit;
    pos = bar + 1;
  }
  if (count != 3) throw ValidationError("clause must have exactly three literals");
  c.validate();
  return c;
}

struct SatInstance {
  int n_vars = 0;
  std::vector<Clause> clauses;

  void validate() const {
    if (n_vars < 0) throw ValidationError("variable count must be non-negative");
    for (const auto& c : clauses) {
      c.validate();
      for (const auto& l : c.literals)
        if (l.var >= n_vars) throw ValidationError("clause " + c.label() + " uses a variable beyond n_vars");
    }
  }
};

// Bit of variable v in bitstring index x over n variables.
inline int assignment_bit(std::size_t x, int v, int n) { return static_cast<int>((x >> (n - 1 - v)) & 1U); }

// 1 - (1/8) prod (1 +- s), s = 1 - 2x; `x` lists the value of every variable.
inline int clause_cost(const Clause& c, std::span<const int> x) {
  c.validate();
  double prod = 1.0;
  for (const auto& l : c.literals) {
    if (l.var >= static_cast<int>(x.size())) throw ValidationError("assignment does not cover clause " + c.label());
    const double s = 1.0 - 2.0 * x[static_cast<std::size_t>(l.var)];
    prod *= l.negated ? 1.0 - s : 1.0 + s;
  }
  return static_cast<int>(std::lround(1.0 - prod / 8.0));
}

inline constexpr int kMaxDenseVars = 20;

inline Eigen::VectorXd cost_diagonal(const SatInstance& inst) {
  inst.validate();
  if (inst.n_vars > kMaxDenseVars) throw ValidationError("dense cost diagonal supports at most 20 variables");
  const std::size_t dim = std::size_t{1} << inst.n_vars;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  std::vector<int> x(static_cast<std::size_t>(inst.n_vars));
  for (std::size_t i = 0; i < dim; ++i) {
    for (int v = 0; v < inst.n_vars; ++v) x[static_cast<std::size_t>(v)] = assignment_bit(i, v, inst.n_vars);
    for (const auto& c : inst.clauses) out(static_cast<Eigen::Index>(i)) += clause_cost(c, x);
  }
  return out;
}

// Gate that phases the unsatisfied row after alignment.
enum class SeparatorGate {
  Native011,  // CCPHASE on |011>, the four-pulse sequence
  Compiled,   // CCPHASE on |111>, the CPHASE/CNOT decomposition
};

struct PhaseSeparator {
  GateList circuit;  // qubit gates on sites 0..2
  Vector diagonal;   // e^{-i gamma cost(x)}
};

// Separator for an instance whose variables map onto the three chain sites.
// mapping[v] is the site of variable v; empty means the identity.
inline PhaseSeparator phase_separator(const SatInstance& inst, double gamma, SeparatorGate gate = SeparatorGate::Native011,
                                      std::vector<int> mapping = {}) {
  inst.validate();
  if (!std::isfinite(gamma)) throw ValidationError("gamma must be finite");
  if (mapping.empty()) {
    mapping.resize(static_cast<std::size_t>(inst.n_vars));
    std::iota(mapping.begin(), mapping.end(), 0);
  }
  if (static_cast<int>(mapping.size()) != inst.n_vars) throw ValidationError("variable mapping must list a site per variable");
  const std::array<int, 3> phased = gate == SeparatorGate::Native011 ? std::array<int, 3>{0, 1, 1} : std::array<int, 3>{1, 1, 1};
  PhaseSeparator out;
  for (const auto& c : inst.clauses) {
    std::array<int, 3> unsat{-1, -1, -1};
    for (int l = 0; l < 3; ++l) {
      const int site = mapping[static_cast<std::size_t>(c.literals[static_cast<std::size_t>(l)].var)];
      if (site < 0 || site > 2 || unsat[static_cast<std::size_t>(site)] != -1)
        throw ValidationError("clause " + c.label() + " cannot be mapped onto the three-site chain");
      unsat[static_cast<std::size_t>(site)] = c.unsatisfied_bit(l);
    }
    GateList flips;
    for (int s = 0; s < 3; ++s)
      if (unsat[static_cast<std::size_t>(s)] != phased[static_cast<std::size_t>(s)]) flips.push_back({GateKind::X, {s}});
    out.circuit.insert(out.circuit.end(), flips.begin(), flips.end());
    if (gate == SeparatorGate::Native011) {
      out.circuit.push_back({GateKind::CCPhase011, {0, 1, 2}, gamma});
    } else {
      const auto lowered = lower_to_native(decompose_ccphase(gamma));
      out.circuit.insert(out.circuit.end(), lowered.begin(), lowered.end());
    }
    out.circuit.insert(out.circuit.end(), flips.begin(), flips.end());
  }
  const Eigen::VectorXd cost = cost_diagonal(inst);
  out.diagonal.resize(cost.size());
  for (Eigen::Index i = 0; i < cost.size(); ++i) out.diagonal(i) = phase(-gamma * cost(i));
  return out;
}

enum class QaoaBackend { Ideal, Native, Compiled };

inline std::string to_string(QaoaBackend b) {
  switch (b) {
    case QaoaBackend::Ideal: return "ideal";
    case QaoaBackend::Native: return "native";
    case QaoaBackend::Compiled: return "compiled";
  }
  return "?";
}

inline QaoaBackend parse_qaoa_backend(std::string_view s) {
  if (s == "ideal") return QaoaBackend::Ideal;
  if (s == "native") return QaoaBackend::Native;
  if (s == "compiled") return QaoaBackend::Compiled;
  throw ValidationError("unknown QAOA backend '" + std::string(s) + "' (expected ideal, native or compiled)");
}

struct QaoaSetup {
  SatInstance instance;
  QaoaBackend backend = QaoaBackend::Ideal;
  std::optional<DeviceRealization> device;  // required by the noisy backends
  std::vector<int> mapping;                 // variable -> chain site

  void validate() const {
    instance.validate();
    if (backend == QaoaBackend::Ideal) {
      if (instance.n_vars > kMaxDenseVars) throw ValidationError("ideal backend supports at most 20 variables");
      return;
    }
    if (!device) throw ValidationError("noisy QAOA backends need a device model");
    if (instance.n_vars != 3) throw ValidationError("noisy QAOA backends run on one three-qubit chain");
  }
};

struct QaoaConfig {
  double beta = 0.0;
  double gamma = 0.0;
};

namespace detail {

// Transversal qubit gates in one 1Q slot.
inline void add_transversal(LayeredChannel& ch, const DeviceRealization& dev, const std::array<Matrix, 3>& ops,
                            const std::vector<int>& active) {
  Matrix u = identity(27);
  for (int s : active) u = (site_gate(ops[static_cast<std::size_t>(s)], s) * u).eval();
  ch.add_unitary(u);
  add_idle_noise(ch, dev, dev.model.timing().one_qubit_gate_ns, active);
}

// Splits a separator circuit at X gates adjacent to the phase gate so each
// flip layer occupies one slot.
inline LayeredChannel device_circuit(const GateList& gl, const DeviceRealization& dev) {
  LayeredChannel ch(kChainLayout);
  std::size_t i = 0;
  while (i < gl.size()) {
    if (gl[i].kind == GateKind::X) {
      std::vector<int> active;
      std::array<Matrix, 3> ops{identity(2), identity(2), identity(2)};
      while (i < gl.size() && gl[i].kind == GateKind::X &&
             std::find(active.begin(), active.end(), gl[i].sites[0]) == active.end()) {
        active.push_back(gl[i].sites[0]);
        ops[static_cast<std::size_t>(gl[i].sites[0])] = gates::pauli_x();
        ++i;
      }
      add_transversal(ch, dev, ops, active);
      continue;
    }
    // Phase gate block: everything up to the next X.
    GateList block;
    while (i < gl.size() && gl[i].kind != GateKind::X) block.push_back(gl[i++]);
    ch.append(circuit_channel(block, dev));
  }
  return ch;
}

inline std::vector<double> qutrit_readout(const Matrix& rho) {
  std::vector<double> p(8, 0.0);
  for (int i = 0; i < 27; ++i) {
    int q = 0;
    for (int s = 0; s < 3; ++s) {
      const int level = (i / kChainLayout.stride(s)) % 3;
      q = 2 * q + (level > 0 ? 1 : 0);
    }
    p[static_cast<std::size_t>(q)] += std::max(0.0, rho(i, i).real());
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= total;
  return p;
}

}  // namespace detail

// Register state after preparation and phase separation.
inline Matrix separated_state(const QaoaSetup& setup, double gamma) {
  setup.validate();
  if (setup.backend == QaoaBackend::Ideal) {
    const Eigen::VectorXd cost = cost_diagonal(setup.instance);
    Vector psi = Vector::Constant(cost.size(), 1.0 / std::sqrt(static_cast<double>(cost.size())));
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) *= phase(-gamma * cost(i));
    return psi;
  }
  const auto& dev = *setup.device;
  const auto gate = setup.backend == QaoaBackend::Native ? SeparatorGate::Native011 : SeparatorGate::Compiled;
  LayeredChannel ch(kChainLayout);
  const Matrix h = gates::hadamard();
  detail::add_transversal(ch, dev, {h, h, h}, {0, 1, 2});
  ch.append(detail::device_circuit(phase_separator(setup.instance, gamma, gate, setup.mapping).circuit, dev));
  return ch.apply(ground_state());
}

// Mixer channel on the qutrit register (noisy backends).
inline LayeredChannel mixer_channel(const DeviceRealization& dev, double beta) {
  LayeredChannel ch(kChainLayout);
  const Matrix r = gates::rx(2.0 * beta);
  detail::add_transversal(ch, dev, {r, r, r}, {0, 1, 2});
  return ch;
}

// Outcome distribution over 2^n bitstrings given the separated state.
inline std::vector<double> measure_after_mixer(const QaoaSetup& setup, const Matrix& separated, double beta,
                                               const LayeredChannel* mixer = nullptr) {
  if (setup.backend == QaoaBackend::Ideal) {
    const int n = setup.instance.n_vars;
    Vector psi = separated;
    const Complex c = std::cos(beta), s = -kI * std::sin(beta);
    for (int q = 0; q < n; ++q) {
      const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
      for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (i & stride) continue;
        const Complex a = psi(i), b = psi(i + stride);
        psi(i) = c * a + s * b;
        psi(i + stride) = s * a + c * b;
      }
    }
    std::vector<double> p(static_cast<std::size_t>(psi.size()));
    for (Eigen::Index i = 0; i < psi.size(); ++i) p[static_cast<std::size_t>(i)] = std::norm(psi(i));
    return p;
  }
  if (mixer) return detail::qutrit_readout(mixer->apply(separated));
  return detail::qutrit_readout(mixer_channel(*setup.device, beta).apply(separated));
}

inline std::vector<double> ansatz_distribution(const QaoaSetup& setup, double beta, double gamma) {
  return measure_after_mixer(setup, separated_state(setup, gamma), beta);
}

// <C> from a distribution: exact when shots == 0, otherwise sampled.
inline double expectation_from_distribution(const Eigen::VectorXd& cost, const std::vector<double>& p, long shots, Rng& rng) {
  if (shots < 0) throw ValidationError("shots must be non-negative (0 = exact)");
  double acc = 0.0;
  if (shots == 0) {
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * cost(static_cast<Eigen::Index>(i));
    return acc;
  }
  const auto counts = sample_multinomial(rng, shots, p);
  for (std::size_t i = 0; i < counts.size(); ++i) acc += static_cast<double>(counts[i]) * cost(static_cast<Eigen::Index>(i));
  return acc / static_cast<double>(shots);
}

inline double ansatz_expectation(const QaoaSetup& setup, double beta, double gamma, long shots, Rng& rng) {
  return expectation_from_distribution(cost_diagonal(setup.instance), ansatz_distribution(setup, beta, gamma), shots, rng);
}

struct LandscapePoint {
  double beta = 0.0;
  double gamma = 0.0;
  double expectation = 0.0;
  long shots = 0;  // 0 = exact
  QaoaBackend backend = QaoaBackend::Ideal;
};

// n x n grid over [lo, hi]^2 with both endpoints; beta varies slowest.
inline std::vector<QaoaConfig> grid_configs(int n, double lo = -kPi, double hi = kPi) {
  if (n < 1) throw ValidationError("grid needs at least one point per axis");
  if (!(hi >= lo)) throw ValidationError("grid range must satisfy lo <= hi");
  std::vector<QaoaConfig> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  auto at = [&](int k) { return n == 1 ? lo : lo + (hi - lo) * k / (n - 1); };
  for (int b = 0; b < n; ++b)
    for (int g = 0; g < n; ++g) out.push_back({at(b), at(g)});
  return out;
}

inline std::vector<QaoaConfig> random_configs(int count, std::uint64_t seed, double lo = -kPi, double hi = kPi) {
  if (count < 1) throw ValidationError("random search needs at least one configuration");
  if (!(hi >= lo)) throw ValidationError("search range must satisfy lo <= hi");
  Rng rng = make_rng(seed, {0x5a7ULL});
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<QaoaConfig> out(static_cast<std::size_t>(count));
  for (auto& c : out) {
    c.beta = u(rng);
    c.gamma = u(rng);
  }
  return out;
}

// Evaluates every config. Separated states are shared between configs with
// the same gamma and mixers between configs with the same beta; config i
// samples from its own stream (seed, i).
inline std::vector<LandscapePoint> landscape(const QaoaSetup& setup, const std::vector<QaoaConfig>& configs, long shots,
                                             std::uint64_t seed = 0, int workers = 1) {
  setup.validate();
  if (shots < 0) throw ValidationError("shots must be non-negative (0 = exact)");
  for (const auto& c : configs)
    if (!std::isfinite(c.beta) || !std::isfinite(c.gamma)) throw ValidationError("landscape angles must be finite");
  std::map<double, std::size_t> gamma_slot, beta_slot;
  std::vector<double> gammas, betas;
  for (const auto& c : configs) {
    if (gamma_slot.emplace(c.gamma, gammas.size()).second) gammas.push_back(c.gamma);
    if (beta_slot.emplace(c.beta, betas.size()).second) betas.push_back(c.beta);
  }
  std::vector<Matrix> states(gammas.size());
  parallel_for(gammas.size(), workers, [&](std::size_t k) { states[k] = separated_state(setup, gammas[k]); });
  std::vector<std::optional<LayeredChannel>> mixers(betas.size());
  if (setup.backend != QaoaBackend::Ideal)
    parallel_for(betas.size(), workers, [&](std::size_t k) { mixers[k] = mixer_channel(*setup.device, betas[k]); });
  const Eigen::VectorXd cost = cost_diagonal(setup.instance);
  std::vector<LandscapePoint> out(configs.size());
  parallel_for(configs.size(), workers, [&](std::size_t i) {
    const auto& c = configs[i];
    const auto& mixer = mixers[beta_slot.at(c.beta)];
    const auto p = measure_after_mixer(setup, states[gamma_slot.at(c.gamma)], c.beta, mixer ? &*mixer : nullptr);
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(i)});
    out[i] = {c.beta, c.gamma, expectation_from_distribution(cost, p, shots, rng), shots, setup.backend};
  });
  return out;
}

inline const LandscapePoint& landscape_minimum(const std::vector<LandscapePoint>& pts) {
  if (pts.empty()) throw ValidationError("landscape is empty");
  return *std::min_element(pts.begin(), pts.end(),
                           [](const LandscapePoint& a, const LandscapePoint& b) { return a.expectation < b.expectation; });
}

struct LandscapeComparison {
  double rho = 0.0;   // Pearson correlation of paired <C>
  double mu_a = 0.0;  // min <C> of a
  double mu_b = 0.0;
};

inline double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw ValidationError("pearson needs two equal-length samples of size >= 2");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  // Spread at rounding level counts as constant.
  auto flat = [n](double ss, double m) { return ss <= n * std::pow(1e-12 * std::max(1.0, std::abs(m)), 2); };
  if (flat(saa, ma) || flat(sbb, mb)) throw NumericalCheckError("pearson is undefined for a constant sample");
  return sab / std::sqrt(saa * sbb);
}

inline LandscapeComparison compare_landscapes(const std::vector<LandscapePoint>& a, const std::vector<LandscapePoint>& b) {
  if (a.size() != b.size()) throw ValidationError("landscapes have different numbers of configurations");
  std::vector<double> xa, xb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].beta != b[i].beta || a[i].gamma != b[i].gamma)
      throw ValidationError("landscapes differ at configuration " + std::to_string(i));
    xa.push_back(a[i].expectation);
    xb.push_back(b[i].expectation);
  }
  return {pearson(xa, xb), landscape_minimum(a).expectation, landscape_minimum(b).expectation};
}

}  // namespace ccphase
