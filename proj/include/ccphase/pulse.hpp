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

// Parametric flux-pulse primitives.
//
// A flux pulse on an ordered pair of qutrits (a, b) drives half of a
// |11> <-> |X> oscillation, where X = |02> (SWAP02, b promoted) or
// X = |20> (SWAP20, a promoted). Phase convention, fixed project-wide:
//
//   U|11> = -i e^{+i beta} |X>,    U|X> = -i e^{-i beta} |11>.
//
// Two pulses with flux phases (beta1, beta2) return |11> with phase
// pi + beta1 - beta2, so (0, pi - theta) realizes CPHASE(theta).

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "ccphase/linalg.hpp"

namespace ccphase {

enum class Subspace { Swap02, Swap20 };

inline std::string to_string(Subspace s) { return s == Subspace::Swap02 ? "02" : "20"; }
inline std::string gate_name(Subspace s) { return s == Subspace::Swap02 ? "iSWAP02" : "iSWAP20"; }

inline Subspace parse_subspace(std::string_view text) {
  if (text.starts_with("iSWAP")) text.remove_prefix(5);
  else if (text.starts_with("SWAP")) text.remove_prefix(4);
  if (text == "02") return Subspace::Swap02;
  if (text == "20") return Subspace::Swap20;
  throw ValidationError("unknown interaction type '" + std::string(text) + "' (expected 02 or 20)");
}

// Same physical interaction seen from the reversed qubit order.
inline Subspace reversed(Subspace s) { return s == Subspace::Swap02 ? Subspace::Swap20 : Subspace::Swap02; }

struct FluxPulse {
  std::array<int, 2> edge{0, 1};
  Subspace subspace = Subspace::Swap02;
  double flux_phase = 0.0;  // radians, (-pi, pi]
  double duration_ns = 1.0;

  static FluxPulse make(std::array<int, 2> edge, Subspace subspace, double flux_phase, double duration_ns) {
    if (!(duration_ns > 0.0)) throw ValidationError("flux pulse duration must be positive");
    if (edge[0] == edge[1]) throw ValidationError("flux pulse edge needs two distinct sites");
    if (!std::isfinite(flux_phase)) throw ValidationError("flux phase must be finite");
    return {edge, subspace, normalize_angle(flux_phase), duration_ns};
  }
};

// J_n(x) from the ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!).
inline double bessel_j(int n, double x) {
  if (!std::isfinite(x) || std::abs(x) > 10.0) throw ValidationError("bessel_j: series evaluation requires |x| <= 10");
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
  const double half = 0.5 * x;
  // Leading term (x/2)^n / n!
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double h2 = half * half;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-14 * std::max(1e-300, std::abs(sum)) || term == 0.0) break;
  }
  return sum;
}

struct CouplingParams {
  double g_mhz = 0.0;           // static coupling
  double epsilon_mhz = 0.0;     // frequency-oscillation amplitude
  double modulation_mhz = 1.0;  // omega_m
  int sideband = 0;             // n
  double beta = 0.0;            // beta_n, radians
};

// g_n = g J_n(epsilon / omega_m) e^{-i beta_n}, in MHz.
inline Complex effective_coupling(const CouplingParams& p) {
  if (!(p.modulation_mhz > 0.0)) throw ValidationError("modulation frequency must be positive");
  return p.g_mhz * bessel_j(p.sideband, p.epsilon_mhz / p.modulation_mhz) * phase(-p.beta);
}

// Index of the partner state X in the two-qutrit basis 3a + b.
inline int partner_index(Subspace s) { return s == Subspace::Swap02 ? 2 : 6; }
inline constexpr int kIndex11 = 4;

inline Matrix iswap_unitary(Subspace s, double beta) {
  Matrix u = identity(9);
  const int x = partner_index(s);
  u(kIndex11, kIndex11) = 0.0;
  u(x, x) = 0.0;
  u(x, kIndex11) = -kI * phase(beta);
  u(kIndex11, x) = -kI * phase(-beta);
  return u;
}

inline Matrix iswap_unitary(const FluxPulse& p) { return iswap_unitary(p.subspace, p.flux_phase); }

struct CphasePulses {
  std::array<FluxPulse, 2> pulses;
  Matrix unitary;  // 9 x 9 two-qutrit product
};

inline CphasePulses cphase_from_pulses(double theta, Subspace s = Subspace::Swap02, double duration_ns = 61.0) {
  CphasePulses out{{FluxPulse::make({0, 1}, s, 0.0, duration_ns), FluxPulse::make({0, 1}, s, kPi - theta, duration_ns)},
                   Matrix()};
  out.unitary = iswap_unitary(out.pulses[1]) * iswap_unitary(out.pulses[0]);
  return out;
}

// Rabi angular frequency sqrt(2)|g_n| in rad/ns for g_n given in MHz.
inline double rabi_rate(const CouplingParams& p) {
  return 2.0 * kPi * std::sqrt(2.0) * std::abs(effective_coupling(p)) * 1e-3;
}

// On-resonance evolution in the basis {|11>, |X>} under
// H = sqrt(2)|g_n| (e^{i beta}|X><11| + h.c.), integrated with classical RK4.
inline Matrix rwa_evolution(const CouplingParams& p, double t_ns, double beta) {
  if (!(t_ns >= 0.0)) throw ValidationError("rwa_evolution: duration must be non-negative");
  const double omega = rabi_rate(p);
  Matrix h(2, 2);
  h << 0.0, omega * phase(-beta), omega * phase(beta), 0.0;
  const Matrix gen = -kI * h;
  Matrix u = identity(2);
  if (t_ns == 0.0 || omega == 0.0) return u;
  const int steps = std::max(64, static_cast<int>(std::ceil(omega * t_ns / 2e-3)));
  const double dt = t_ns / steps;
  for (int k = 0; k < steps; ++k) {
    const Matrix k1 = gen * u;
    const Matrix k2 = gen * (u + 0.5 * dt * k1);
    const Matrix k3 = gen * (u + 0.5 * dt * k2);
    const Matrix k4 = gen * (u + dt * k3);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

// Half-swap time t* = pi / (2 sqrt(2) |g_n|), in ns.
inline double pulse_duration(const CouplingParams& p) {
  const double omega = rabi_rate(p);
  if (!(omega > 0.0)) throw ValidationError("pulse_duration: effective coupling is zero");
  return kPi / (2.0 * omega);
}

// Coherent imperfections a simulated device adds on top of the ideal pulses.
struct PulseImperfection {
  // Phase accumulated on levels 1 and 2 of each chain site over the sequence,
  // applied when that site's last pulse window closes.
  std::array<std::array<double, 2>, 3> stray_phases{};
  // Offset of the realized retrieval-pulse flux phase from the commanded one.
  double conditional_phase_error = 0.0;
  // Extra level-1 phase on the central site per radian of retrieval flux-phase
  // offset from pi (finite rise-time coupling between the B and D phases).
  double cross_coupling = 0.0;

  // Single-qubit phases (C, D, E) on levels 1 (and 2x on level 2) plus a B error.
  static PulseImperfection from_phases(double c, double d, double e, double b) {
    PulseImperfection p;
    p.stray_phases = {{{c, 2.0 * c}, {d, 2.0 * d}, {e, 2.0 * e}}};
    p.conditional_phase_error = b;
    return p;
  }

  bool finite() const {
    for (const auto& s : stray_phases)
      for (double v : s)
        if (!std::isfinite(v)) return false;
    return std::isfinite(conditional_phase_error) && std::isfinite(cross_coupling);
  }
};

}  // namespace ccphase
