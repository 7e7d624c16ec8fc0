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

// Single-qubit gate matrices. Rotations follow R_P(t) = exp(-i t P / 2).

#pragma once

#include <cmath>

#include "ccphase/linalg.hpp"

namespace ccphase::gates {

inline Matrix pauli_x() { return (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished(); }
inline Matrix pauli_y() { return (Matrix(2, 2) << 0.0, -kI, kI, 0.0).finished(); }
inline Matrix pauli_z() { return (Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished(); }

inline Matrix rx(double t) {
  return (Matrix(2, 2) << std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2)).finished();
}
inline Matrix ry(double t) {
  return (Matrix(2, 2) << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2)).finished();
}
inline Matrix rz(double t) { return (Matrix(2, 2) << phase(-t / 2), 0.0, 0.0, phase(t / 2)).finished(); }

inline Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return (Matrix(2, 2) << s, s, s, -s).finished();
}

// diag(1, e^{i t})
inline Matrix phase_gate(double t) { return (Matrix(2, 2) << 1.0, 0.0, 0.0, phase(t)).finished(); }

}  // namespace ccphase::gates
