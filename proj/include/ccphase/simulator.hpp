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

// Register-level channel simulation: local operators lifted onto a register of
// identical sites, and channels stored as an ordered list of layers so that
// noisy gate sequences can be applied to density matrices without forming the
// full (d^2 x d^2) superoperator.

#pragma once

#include <variant>
#include <vector>

#include "ccphase/linalg.hpp"

namespace ccphase {

struct RegisterLayout {
  int sites = 3;
  int levels = 3;

  int dim() const { return ipow(levels, sites); }
  int stride(int site) const { return ipow(levels, sites - 1 - site); }
  bool operator==(const RegisterLayout&) const = default;
};

// Lifts an operator on the listed sites (its basis ordered by the listed sites,
// big-endian) to the whole register.
inline Matrix lift_local(const Matrix& op, std::span<const int> sites, const RegisterLayout& layout) {
  const int k = static_cast<int>(sites.size());
  const int sub = ipow(layout.levels, k);
  if (op.rows() != sub || op.cols() != sub) throw ValidationError("lift_local: operator dimension mismatch");
  for (std::size_t a = 0; a < sites.size(); ++a) {
    if (sites[a] < 0 || sites[a] >= layout.sites) throw ValidationError("lift_local: site out of range");
    for (std::size_t b = 0; b < a; ++b)
      if (sites[a] == sites[b]) throw ValidationError("lift_local: repeated site");
  }
  const int d = layout.dim();
  // Offsets contributed by the target sites for each sub-index.
  std::vector<int> offset(static_cast<std::size_t>(sub), 0);
  for (int s = 0; s < sub; ++s) {
    const auto digits = basis_digits(s, k, layout.levels);
    for (int t = 0; t < k; ++t) offset[static_cast<std::size_t>(s)] += digits[static_cast<std::size_t>(t)] * layout.stride(sites[static_cast<std::size_t>(t)]);
  }
  Matrix out = Matrix::Zero(d, d);
  for (int base = 0; base < d; ++base) {
    // `base` must have zero digits on all target sites.
    bool zero = true;
    for (int t : sites)
      if ((base / layout.stride(t)) % layout.levels != 0) zero = false;
    if (!zero) continue;
    for (int r = 0; r < sub; ++r)
      for (int c = 0; c < sub; ++c) {
        const Complex v = op(r, c);
        if (v != Complex{}) out(base + offset[static_cast<std::size_t>(r)], base + offset[static_cast<std::size_t>(c)]) = v;
      }
  }
  return out;
}

inline Matrix lift_local(const Matrix& op, std::initializer_list<int> sites, const RegisterLayout& layout) {
  return lift_local(op, std::span<const int>(sites.begin(), sites.size()), layout);
}

// Embeds a 2x2 qubit operator into one qutrit as op (+) 1 on level 2.
inline Matrix qubit_op_on_qutrit(const Matrix& op2) {
  Matrix m = identity(3);
  m.topLeftCorner(2, 2) = op2;
  return m;
}

// Applies a single-site superoperator (column-stacked, levels^2 x levels^2).
inline Matrix apply_site_superop(const Matrix& x, const Matrix& s, int site, const RegisterLayout& layout) {
  const int l = layout.levels;
  const int d = layout.dim();
  const int st = layout.stride(site);
  Matrix out = Matrix::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    const int cs = (c / st) % l;
    const int c0 = c - cs * st;
    for (int r = 0; r < d; ++r) {
      const int rs = (r / st) % l;
      const int r0 = r - rs * st;
      Complex acc = 0.0;
      for (int b = 0; b < l; ++b)
        for (int a = 0; a < l; ++a) acc += s(rs + l * cs, a + l * b) * x(r0 + a * st, c0 + b * st);
      out(r, c) = acc;
    }
  }
  return out;
}

// rho -> (1-p) rho + p Tr_S(rho) (x) I_S / d_S on the listed sites.
inline Matrix apply_depolarizing(const Matrix& x, double p, std::span<const int> sites, const RegisterLayout& layout) {
  const int d = layout.dim();
  const int k = static_cast<int>(sites.size());
  const int sub = ipow(layout.levels, k);
  std::vector<int> offset(static_cast<std::size_t>(sub), 0);
  for (int s = 0; s < sub; ++s) {
    const auto digits = basis_digits(s, k, layout.levels);
    for (int t = 0; t < k; ++t) offset[static_cast<std::size_t>(s)] += digits[static_cast<std::size_t>(t)] * layout.stride(sites[static_cast<std::size_t>(t)]);
  }
  Matrix out = (1.0 - p) * x;
  for (int rb = 0; rb < d; ++rb) {
    bool zr = true;
    for (int t : sites)
      if ((rb / layout.stride(t)) % layout.levels != 0) zr = false;
    if (!zr) continue;
    for (int cb = 0; cb < d; ++cb) {
      bool zc = true;
      for (int t : sites)
        if ((cb / layout.stride(t)) % layout.levels != 0) zc = false;
      if (!zc) continue;
      Complex tr = 0.0;
      for (int s = 0; s < sub; ++s) tr += x(rb + offset[static_cast<std::size_t>(s)], cb + offset[static_cast<std::size_t>(s)]);
      tr *= p / sub;
      for (int s = 0; s < sub; ++s) out(rb + offset[static_cast<std::size_t>(s)], cb + offset[static_cast<std::size_t>(s)]) += tr;
    }
  }
  return out;
}

struct UnitaryLayer {
  Matrix unitary;  // full register dimension
};

struct SiteSuperopLayer {
  int site;
  Matrix superop;
};

struct DepolarizingLayer {
  double p;
  std::vector<int> sites;
};

using ChannelLayer = std::variant<UnitaryLayer, SiteSuperopLayer, DepolarizingLayer>;

class LayeredChannel {
 public:
  explicit LayeredChannel(RegisterLayout layout) : layout_(layout) {
    if (layout.sites < 1 || layout.levels < 2 || layout.dim() > 243) throw ValidationError("unsupported register layout");
  }

  const RegisterLayout& layout() const { return layout_; }
  const std::vector<ChannelLayer>& layers() const { return layers_; }
  bool empty() const { return layers_.empty(); }

  // Full-register unitary. Consecutive unitaries are multiplied together.
  LayeredChannel& add_unitary(const Matrix& u) {
    if (u.rows() != layout_.dim() || u.cols() != layout_.dim()) throw ValidationError("add_unitary: dimension mismatch");
    if (unitarity_error(u) > 1e-9) throw NumericalCheckError("add_unitary: operator is not unitary");
    if (!layers_.empty())
      if (auto* last = std::get_if<UnitaryLayer>(&layers_.back())) {
        last->unitary = (u * last->unitary).eval();
        return *this;
      }
    layers_.emplace_back(UnitaryLayer{u});
    return *this;
  }

  LayeredChannel& add_local_unitary(const Matrix& op, std::span<const int> sites) {
    return add_unitary(lift_local(op, sites, layout_));
  }
  LayeredChannel& add_local_unitary(const Matrix& op, std::initializer_list<int> sites) {
    return add_unitary(lift_local(op, sites, layout_));
  }

  LayeredChannel& add_site_superop(int site, const Matrix& s) {
    const int l2 = layout_.levels * layout_.levels;
    if (site < 0 || site >= layout_.sites) throw ValidationError("add_site_superop: site out of range");
    if (s.rows() != l2 || s.cols() != l2) throw ValidationError("add_site_superop: superoperator dimension mismatch");
    layers_.emplace_back(SiteSuperopLayer{site, s});
    return *this;
  }

  LayeredChannel& add_depolarizing(double p, std::vector<int> sites) {
    const double dsub = std::pow(layout_.levels, static_cast<double>(sites.size()));
    // Complete positivity requires p <= d^2 / (d^2 - 1).
    if (!(p >= 0.0 && p <= dsub * dsub / (dsub * dsub - 1.0))) throw ValidationError("depolarizing parameter out of range");
    if (sites.empty()) throw ValidationError("depolarizing needs at least one site");
    layers_.emplace_back(DepolarizingLayer{p, std::move(sites)});
    return *this;
  }

  LayeredChannel& add_global_depolarizing(double p) {
    std::vector<int> all(static_cast<std::size_t>(layout_.sites));
    for (int s = 0; s < layout_.sites; ++s) all[static_cast<std::size_t>(s)] = s;
    return add_depolarizing(p, std::move(all));
  }

  LayeredChannel& append(const LayeredChannel& other) {
    if (!(other.layout_ == layout_)) throw ValidationError("append: layout mismatch");
    for (const auto& layer : other.layers_) {
      if (const auto* u = std::get_if<UnitaryLayer>(&layer))
        add_unitary(u->unitary);
      else
        layers_.push_back(layer);
    }
    return *this;
  }

  // Applies the channel to any operator (linear extension).
  Matrix apply(Matrix x) const {
    for (const auto& layer : layers_) {
      if (const auto* u = std::get_if<UnitaryLayer>(&layer)) {
        x = u->unitary * x * u->unitary.adjoint();
      } else if (const auto* s = std::get_if<SiteSuperopLayer>(&layer)) {
        x = apply_site_superop(x, s->superop, s->site, layout_);
      } else {
        const auto& dl = std::get<DepolarizingLayer>(layer);
        x = apply_depolarizing(x, dl.p, dl.sites, layout_);
      }
    }
    return x;
  }

  // Dense superoperator; intended for small registers and cross-checks.
  Superoperator to_superoperator() const {
    const int d = layout_.dim();
    Matrix s(d * d, d * d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, j) = 1.0;
        const Matrix y = apply(std::move(e));
        s.col(i + d * j) = Eigen::Map<const Vector>(y.data(), y.size());
      }
    return {d, std::move(s)};
  }

 private:
  RegisterLayout layout_;
  std::vector<ChannelLayer> layers_;
};

// Entanglement fidelity of a register channel against a qubit-space target.
// On qutrit registers the target acts on the embedded computational subspace
// and population leaving that subspace counts as error.
inline double process_fidelity(const LayeredChannel& channel, const UnitaryMatrix& target) {
  const auto& layout = channel.layout();
  const int nq = ipow(2, layout.sites);
  if (target.dimension() != nq) throw ValidationError("process_fidelity: target dimension mismatch");
  if (layout.levels != 2 && layout.levels != 3) throw ValidationError("process_fidelity: unsupported levels");
  std::vector<int> idx(static_cast<std::size_t>(nq));
  if (layout.levels == 3) {
    ComputationalEmbedding emb(layout.sites);
    for (int i = 0; i < nq; ++i) idx[static_cast<std::size_t>(i)] = emb[i];
  } else {
    for (int i = 0; i < nq; ++i) idx[static_cast<std::size_t>(i)] = i;
  }
  const int d = layout.dim();
  // psi_i = E U |i>
  Matrix psi = Matrix::Zero(d, nq);
  for (int i = 0; i < nq; ++i)
    for (int a = 0; a < nq; ++a) psi(idx[static_cast<std::size_t>(a)], i) = target.matrix()(a, i);
  Complex acc = 0.0;
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]) = 1.0;
      const Matrix y = channel.apply(std::move(e));
      acc += psi.col(i).dot(y * psi.col(j));
    }
  return std::clamp(acc.real() / static_cast<double>(nq) / nq, 0.0, 1.0);
}

}  // namespace ccphase
