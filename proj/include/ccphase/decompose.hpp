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

// Reference compilation of CCPHASE(theta) (phase on |111>) to nearest-neighbour
// CPHASE and CNOT gates on a three-qubit line, and its lowering to RX, RZ and
// CZ. Gate lists are in time order.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccphase/errors.hpp"
#include "ccphase/gates.hpp"
#include "ccphase/linalg.hpp"

namespace ccphase {

enum class GateKind { CPhase, CNot, CZ, RX, RZ, H, X, CCPhase, CCPhase011 };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::CPhase: return "CPHASE";
    case GateKind::CNot: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::RX: return "RX";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::CCPhase: return "CCPHASE";
    case GateKind::CCPhase011: return "CCPHASE011";
  }
  return "?";
}

inline int arity(GateKind k) {
  switch (k) {
    case GateKind::CPhase:
    case GateKind::CNot:
    case GateKind::CZ: return 2;
    case GateKind::CCPhase:
    case GateKind::CCPhase011: return 3;
    default: return 1;
  }
}

inline bool has_parameter(GateKind k) {
  return k == GateKind::CPhase || k == GateKind::RX || k == GateKind::RZ || k == GateKind::CCPhase || k == GateKind::CCPhase011;
}

struct Gate {
  GateKind kind;
  std::vector<int> sites;  // CNOT: (control, target)
  double param = 0.0;
};

using GateList = std::vector<Gate>;

inline void validate_gate(const Gate& g) {
  if (static_cast<int>(g.sites.size()) != arity(g.kind)) throw ValidationError(to_string(g.kind) + ": wrong number of sites");
  for (int s : g.sites)
    if (s < 0 || s > 2) throw ValidationError(to_string(g.kind) + ": site out of range");
  if (g.sites.size() == 2) {
    if (std::abs(g.sites[0] - g.sites[1]) != 1) throw ValidationError(to_string(g.kind) + ": two-qubit gates need adjacent sites");
  }
  if (g.sites.size() == 3 && !(g.sites[0] == 0 && g.sites[1] == 1 && g.sites[2] == 2))
    throw ValidationError(to_string(g.kind) + ": three-qubit gates act on (0,1,2)");
}

// 2^k x 2^k matrix of the gate on its own sites (in listed order).
inline Matrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::CPhase: {
      Matrix m = identity(4);
      m(3, 3) = phase(g.param);
      return m;
    }
    case GateKind::CZ: {
      Matrix m = identity(4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::CNot: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
      return m;
    }
    case GateKind::RX: return gates::rx(g.param);
    case GateKind::RZ: return gates::rz(g.param);
    case GateKind::H: return gates::hadamard();
    case GateKind::X: return gates::pauli_x();
    case GateKind::CCPhase: {
      Matrix m = identity(8);
      m(7, 7) = phase(g.param);
      return m;
    }
    case GateKind::CCPhase011: {
      Matrix m = identity(8);
      m(3, 3) = phase(g.param);
      return m;
    }
  }
  throw ValidationError("unknown gate");
}

// Places a k-site operator on an n-qubit register (big-endian).
inline Matrix place_on_qubits(const Matrix& op, const std::vector<int>& sites, int n = 3) {
  const int d = 1 << n;
  const int k = static_cast<int>(sites.size());
  Matrix out = Matrix::Zero(d, d);
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row) {
      // Spectator bits must agree.
      bool same = true;
      for (int b = 0; b < n && same; ++b) {
        bool target = false;
        for (int s : sites) target = target || s == b;
        if (!target && (((row >> (n - 1 - b)) & 1) != ((col >> (n - 1 - b)) & 1))) same = false;
      }
      if (!same) continue;
      int r = 0, c = 0;
      for (int t = 0; t < k; ++t) {
        r = 2 * r + ((row >> (n - 1 - sites[static_cast<std::size_t>(t)])) & 1);
        c = 2 * c + ((col >> (n - 1 - sites[static_cast<std::size_t>(t)])) & 1);
      }
      out(row, col) = op(r, c);
    }
  return out;
}

inline Matrix circuit_unitary(const GateList& gl) {
  Matrix u = identity(8);
  for (const auto& g : gl) {
    validate_gate(g);
    u = place_on_qubits(gate_matrix(g), g.sites) * u;
  }
  return u;
}

// Three CPHASE and six CNOT on the line q0 - q1 - q2.
inline GateList decompose_ccphase(double theta) {
  using K = GateKind;
  return {{K::CPhase, {1, 2}, theta / 2}, {K::CNot, {0, 1}},  {K::CPhase, {1, 2}, -theta / 2},
          {K::CNot, {1, 0}},              {K::CNot, {0, 1}},  {K::CPhase, {1, 2}, theta / 2},
          {K::CNot, {0, 1}},              {K::CNot, {1, 0}},  {K::CNot, {0, 1}}};
}

// H = RZ(pi/2) RX(pi/2) RZ(pi/2) up to global phase.
inline void append_hadamard(GateList& out, int q) {
  out.push_back({GateKind::RZ, {q}, kPi / 2});
  out.push_back({GateKind::RX, {q}, kPi / 2});
  out.push_back({GateKind::RZ, {q}, kPi / 2});
}

// CNOT -> H CZ H on the target, H -> RZ RX RZ, then consecutive RZ on a qubit
// merged and zero rotations dropped.
inline GateList lower_to_native(const GateList& in) {
  GateList expanded;
  for (const auto& g : in) {
    validate_gate(g);
    if (g.kind == GateKind::CNot) {
      append_hadamard(expanded, g.sites[1]);
      expanded.push_back({GateKind::CZ, {std::min(g.sites[0], g.sites[1]), std::max(g.sites[0], g.sites[1])}});
      append_hadamard(expanded, g.sites[1]);
    } else if (g.kind == GateKind::H) {
      append_hadamard(expanded, g.sites[0]);
    } else {
      expanded.push_back(g);
    }
  }
  GateList out;
  std::vector<int> last(3, -1);  // index in `out` of the latest gate touching each qubit
  for (const auto& g : expanded) {
    if (g.kind == GateKind::RZ) {
      const int q = g.sites[0];
      const int li = last[static_cast<std::size_t>(q)];
      if (li >= 0 && out[static_cast<std::size_t>(li)].kind == GateKind::RZ) {
        out[static_cast<std::size_t>(li)].param = normalize_angle(out[static_cast<std::size_t>(li)].param + g.param);
        continue;
      }
    }
    out.push_back(g);
    for (int s : g.sites) last[static_cast<std::size_t>(s)] = static_cast<int>(out.size()) - 1;
  }
  GateList pruned;
  for (const auto& g : out)
    if (!(g.kind == GateKind::RZ && std::abs(normalize_angle(g.param)) < 1e-15)) pruned.push_back(g);
  return pruned;
}

struct GateCounts {
  int two_qubit = 0;
  int one_qubit = 0;  // non-trivial: RZ excluded
  int virtual_rz = 0;
  int three_qubit = 0;
  int cphase = 0;
  int cnot = 0;
};

inline GateCounts count_gates(const GateList& gl) {
  GateCounts c;
  for (const auto& g : gl) {
    switch (arity(g.kind)) {
      case 3: ++c.three_qubit; break;
      case 2: ++c.two_qubit; break;
      default:
        if (g.kind == GateKind::RZ)
          ++c.virtual_rz;
        else
          ++c.one_qubit;
    }
    if (g.kind == GateKind::CPhase) ++c.cphase;
    if (g.kind == GateKind::CNot) ++c.cnot;
  }
  return c;
}

inline double estimate_fidelity(const GateCounts& c, double f1q = 0.995, double f2q = 0.975) {
  if (!(f1q > 0.0 && f1q <= 1.0 && f2q > 0.0 && f2q <= 1.0)) throw ValidationError("gate fidelities must lie in (0, 1]");
  return std::pow(f2q, c.two_qubit) * std::pow(f1q, c.one_qubit);
}

// H(q2) CCPHASE(pi) H(q2). With `native011`, the phase gate is the |011>
// form conjugated by X on q0.
inline GateList toffoli_from_ccphase(bool native011 = false) {
  using K = GateKind;
  if (!native011) return {{K::H, {2}}, {K::CCPhase, {0, 1, 2}, kPi}, {K::H, {2}}};
  return {{K::H, {2}}, {K::X, {0}}, {K::CCPhase011, {0, 1, 2}, kPi}, {K::X, {0}}, {K::H, {2}}};
}

inline Matrix toffoli_matrix() {
  Matrix m = identity(8);
  m(6, 6) = m(7, 7) = 0.0;
  m(6, 7) = m(7, 6) = 1.0;
  return m;
}

inline nlohmann::json to_json(const GateList& gl) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gl) {
    nlohmann::json j{{"gate", to_string(g.kind)}, {"sites", g.sites}};
    if (has_parameter(g.kind)) j["param"] = g.param;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace ccphase
