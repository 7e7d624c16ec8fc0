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

// Ramsey calibration of the CCPHASE frame corrections.
//
// Single-site scans: RX(pi/2), CCPHASE(0), frame shift diag(1, e^{-i phi}),
// RX(-pi/2), read P(0) = a + b cos(phi - phi0). phi0 is the phase the site
// still accumulates; it is added to that site's correction.
// Conditional scan: the same on q1 with q0 excited. Its offset is the |q0 q1>
// conditional phase and is removed from the retrieval pulse's flux phase.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ccphase/backend.hpp"
#include "ccphase/gates.hpp"

namespace ccphase {

struct RamseyScan {
  int target_site = 0;
  std::vector<int> excitations;     // sites flipped to |1> before the scan
  std::vector<double> scan_phases;  // radians
  long shots = 0;                   // 0 = exact Born probabilities
  std::uint64_t seed = 1;

  void validate() const {
    if (target_site < 0 || target_site > 2) throw ValidationError("ramsey: target site out of range");
    for (int s : excitations)
      if (s < 0 || s > 2 || s == target_site) throw ValidationError("ramsey: bad excitation site");
    if (scan_phases.size() < 8) throw ValidationError("ramsey: need at least 8 scan phases");
    const auto [lo, hi] = std::minmax_element(scan_phases.begin(), scan_phases.end());
    const double n = static_cast<double>(scan_phases.size());
    // Evenly spaced points over [0, 2 pi) cover the period.
    if ((*hi - *lo) * n / (n - 1.0) < 2.0 * kPi - 1e-9) throw ValidationError("ramsey: scan phases must cover 2 pi");
  }
};

inline std::vector<double> uniform_scan(int points) {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) out[static_cast<std::size_t>(k)] = 2.0 * kPi * k / points;
  return out;
}

struct RamseyCurve {
  std::vector<double> phases;
  std::vector<double> p0;
};

inline RamseyCurve ramsey_scan(const RamseyScan& scan, const PulseSequence& seq, const SequenceBackend& backend) {
  scan.validate();
  const int t = scan.target_site;
  Matrix prep = identity(27);
  for (int s : scan.excitations) prep = site_gate(gates::pauli_x(), s) * prep;
  prep = site_gate(gates::rx(kPi / 2), t) * prep;
  const Matrix rho = backend.channel(with_theta(seq, 0.0)).apply(prep * ground_state() * prep.adjoint());
  RamseyCurve curve{scan.scan_phases, {}};
  for (std::size_t k = 0; k < scan.scan_phases.size(); ++k) {
    const Matrix post = site_gate(gates::rx(-kPi / 2) * gates::phase_gate(-scan.scan_phases[k]), t);
    Rng rng = make_rng(scan.seed, {static_cast<std::uint64_t>(t), k});
    curve.p0.push_back(sample_probability(prob_zero(post * rho * post.adjoint(), t), scan.shots, rng));
  }
  return curve;
}

struct PhaseFit {
  double offset;     // phi0 in (-pi, pi]
  double amplitude;  // b
  double mean;       // a
  double rms;        // residual RMS of the fit
};

// Linear least squares on [1, cos phi, sin phi].
inline PhaseFit fit_phase_offset(const RamseyCurve& curve) {
  const auto n = static_cast<Eigen::Index>(curve.phases.size());
  if (n < 8 || curve.p0.size() != curve.phases.size()) throw ValidationError("fit_phase_offset: need at least 8 points");
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double phi = curve.phases[static_cast<std::size_t>(k)];
    a.row(k) << 1.0, std::cos(phi), std::sin(phi);
    y(k) = curve.p0[static_cast<std::size_t>(k)];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  const double b = std::hypot(c(1), c(2));
  if (b < 0.05) throw DegenerateFitError("fit_phase_offset: fringe amplitude " + std::to_string(b) + " below 0.05");
  const Eigen::VectorXd r = a * c - y;
  return {normalize_angle(std::atan2(c(2), c(1))), b, c(0), std::sqrt(r.squaredNorm() / static_cast<double>(n))};
}

struct CalibrationOptions {
  long shots = 8192;
  int passes = 2;
  int scan_points = 16;
  std::uint64_t seed = 1;
};

struct CalibrationPass {
  std::array<PhaseFit, 3> single;  // q0, q1, q2
  PhaseFit conditional;
};

struct CalibrationResult {
  double b = 0.0;                 // conditional correction on the retrieval pulse
  std::array<double, 3> cde{};    // frame corrections (C, D, E)
  std::array<double, 4> residuals{};  // fit RMS for (B, C, D, E), final pass
  int passes = 0;
  std::vector<CalibrationPass> history;
  PulseSequence sequence;         // input sequence with corrections applied
};

inline CalibrationResult calibrate(const PulseSequence& seq, const SequenceBackend& backend, const CalibrationOptions& opts = {}) {
  if (opts.passes < 1) throw ValidationError("calibrate: passes must be >= 1");
  CalibrationResult res;
  PulseSequence cur = seq;
  const auto phases = uniform_scan(opts.scan_points);
  for (int pass = 0; pass < opts.passes; ++pass) {
    CalibrationPass rec{};
    for (int s = 0; s < 3; ++s) {
      RamseyScan scan{s, {}, phases, opts.shots, stream_seed(opts.seed, {static_cast<std::uint64_t>(pass), 0})};
      rec.single[static_cast<std::size_t>(s)] = fit_phase_offset(ramsey_scan(scan, cur, backend));
    }
    for (int s = 0; s < 3; ++s)
      cur.rz_corrections[static_cast<std::size_t>(s)] =
          normalize_angle(cur.rz_corrections[static_cast<std::size_t>(s)] + rec.single[static_cast<std::size_t>(s)].offset);
    RamseyScan cond{1, {0}, phases, opts.shots, stream_seed(opts.seed, {static_cast<std::uint64_t>(pass), 1})};
    rec.conditional = fit_phase_offset(ramsey_scan(cond, cur, backend));
    cur = with_conditional_correction(cur, cur.conditional_correction() - rec.conditional.offset);
    res.history.push_back(rec);
  }
  const auto& last = res.history.back();
  res.b = cur.conditional_correction();
  res.cde = cur.rz_corrections;
  res.residuals = {last.conditional.rms, last.single[0].rms, last.single[1].rms, last.single[2].rms};
  res.passes = opts.passes;
  res.sequence = with_theta(cur, seq.theta);
  return res;
}

}  // namespace ccphase
