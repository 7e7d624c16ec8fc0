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

// Conditional-phase verification: prepare the two controls in a basis state,
// the target in |+>, run the gate, and read the target's equatorial phase
// from <X> and <Y>.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ccphase/backend.hpp"

namespace ccphase {

struct PhaseScanOptions {
  long shots = 0;  // per measurement basis; 0 = exact expectation values
  std::uint64_t seed = 1;
};

struct PhaseScanPoint {
  double requested;
  double measured;  // (-pi, pi]
  double ex;
  double ey;
};

inline std::vector<PhaseScanPoint> conditional_phase_scan(const PulseSequence& seq, const std::string& control_prep,
                                                          const std::vector<double>& thetas, const SequenceBackend& backend,
                                                          const PhaseScanOptions& opts = {}) {
  if (control_prep.size() != 2 || (control_prep[0] != '0' && control_prep[0] != '1') ||
      (control_prep[1] != '0' && control_prep[1] != '1'))
    throw ValidationError("control preparation must be a two-qubit basis label such as 01");
  Matrix prep = identity(27);
  for (int s = 0; s < 2; ++s)
    if (control_prep[static_cast<std::size_t>(s)] == '1') prep = site_gate(gates::pauli_x(), s) * prep;
  prep = site_gate(gates::hadamard(), 2) * prep;
  const Matrix rho0 = prep * ground_state() * prep.adjoint();
  // <X> from H then Z; <Y> from S^dag, H then Z.
  const Matrix to_x = site_gate(gates::hadamard(), 2);
  const Matrix to_y = site_gate(gates::hadamard() * gates::phase_gate(-kPi / 2), 2);
  std::vector<PhaseScanPoint> out;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const Matrix rho = backend.channel(with_theta(seq, thetas[k])).apply(rho0);
    Rng rng = make_rng(opts.seed, {k, static_cast<std::uint64_t>(std::stoi(control_prep, nullptr, 2))});
    const double px = sample_probability(prob_zero(to_x * rho * to_x.adjoint(), 2), opts.shots, rng);
    const double py = sample_probability(prob_zero(to_y * rho * to_y.adjoint(), 2), opts.shots, rng);
    const double ex = 2.0 * px - 1.0, ey = 2.0 * py - 1.0;
    out.push_back({thetas[k], normalize_angle(std::atan2(ey, ex)), ex, ey});
  }
  return out;
}

// Requested-vs-measured slope after unwrapping the measured phases along the sweep.
inline double phase_slope(const std::vector<PhaseScanPoint>& pts) {
  if (pts.size() < 2) throw ValidationError("phase_slope needs at least two points");
  std::vector<double> y(pts.size());
  y[0] = pts[0].measured;
  for (std::size_t k = 1; k < pts.size(); ++k) y[k] = y[k - 1] + normalize_angle(pts[k].measured - pts[k - 1].measured);
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    mx += pts[k].requested;
    my += y[k];
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    sxy += (pts[k].requested - mx) * (y[k] - my);
    sxx += (pts[k].requested - mx) * (pts[k].requested - mx);
  }
  return sxy / sxx;
}

}  // namespace ccphase
