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

// Executes CCPHASE sequences as channels on the three-qutrit chain, either
// exactly (coherent imperfections only) or with device decoherence, and
// provides the readout helpers shared by the calibration and verification
// experiments. Level 2 reads out as "1".

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccphase/device.hpp"
#include "ccphase/gates.hpp"
#include "ccphase/noise.hpp"
#include "ccphase/random.hpp"
#include "ccphase/simulator.hpp"
#include "ccphase/synth.hpp"

namespace ccphase {

class SequenceBackend {
 public:
  static SequenceBackend ideal(PulseImperfection imp = {}) {
    SequenceBackend b;
    b.imp_ = imp;
    return b;
  }

  static SequenceBackend noisy(DeviceModel model, std::array<int, 3> chain, NoiseOptions options = {},
                               PulseImperfection imp = {}) {
    SequenceBackend b;
    b.imp_ = imp;
    b.device_ = std::move(model);
    b.chain_ = chain;
    b.options_ = std::move(options);
    return b;
  }

  bool is_noisy() const { return device_.has_value(); }
  const PulseImperfection& imperfection() const { return imp_; }

  LayeredChannel channel(const PulseSequence& seq) const {
    if (device_) return noisy_sequence_channel(seq, *device_, chain_, options_, imp_);
    LayeredChannel ch(kChainLayout);
    ch.add_unitary(sequence_unitary(seq, imp_));
    return ch;
  }

 private:
  PulseImperfection imp_;
  std::optional<DeviceModel> device_;
  std::array<int, 3> chain_{0, 1, 2};
  NoiseOptions options_;
};

// Qubit gate on one qutrit site (level 2 untouched).
inline Matrix site_gate(const Matrix& op2, int site, const RegisterLayout& layout = kChainLayout) {
  return lift_local(qubit_op_on_qutrit(op2), {site}, layout);
}

inline Matrix ground_state(const RegisterLayout& layout = kChainLayout) {
  Matrix rho = Matrix::Zero(layout.dim(), layout.dim());
  rho(0, 0) = 1.0;
  return rho;
}

// Probability that `site` reads 0.
inline double prob_zero(const Matrix& rho, int site, const RegisterLayout& layout = kChainLayout) {
  double p = 0.0;
  for (int i = 0; i < layout.dim(); ++i)
    if ((i / layout.stride(site)) % layout.levels == 0) p += rho(i, i).real();
  return std::clamp(p, 0.0, 1.0);
}

// Estimated probability: exact when shots == 0, otherwise a binomial draw.
inline double sample_probability(double p, long shots, Rng& rng) {
  if (shots <= 0) return p;
  return static_cast<double>(sample_binomial(rng, shots, p)) / static_cast<double>(shots);
}

}  // namespace ccphase
