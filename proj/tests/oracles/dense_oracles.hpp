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

// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;

inline M random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  M g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = C(n(rng), n(rng));
  Eigen::HouseholderQR<M> qr(g);
  M q = qr.householderQ();
  // Fix column phases so the distribution is Haar.
  const M r = qr.matrixQR();
  for (int j = 0; j < d; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

// Element-by-element Kronecker product.
inline M kron(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Entanglement fidelity from Kraus operators: sum_k |Tr(U^dag K_k)|^2 / d^2.
inline double kraus_fidelity(const std::vector<M>& kraus, const M& u) {
  const double d = static_cast<double>(u.rows());
  double f = 0.0;
  for (const auto& k : kraus) f += std::norm((u.adjoint() * k).trace());
  return f / (d * d);
}

// Entanglement fidelity by propagating half of |Phi> = sum_i |i>|i>/sqrt(d).
inline double choi_state_fidelity(const std::vector<M>& kraus, const M& u) {
  const int d = static_cast<int>(u.rows());
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  const M id = M::Identity(d, d);
  Eigen::VectorXcd target = kron(u, id) * phi;
  double f = 0.0;
  for (const auto& k : kraus) f += std::norm(target.dot(kron(k, id) * phi));
  return f;
}

// Kraus form of rho -> (1-p) rho + p I/d built from generalized Pauli operators.
inline std::vector<M> depolarizing_kraus(int d, double p) {
  std::vector<M> out;
  const C w = std::polar(1.0, 2.0 * M_PI / d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      M x = M::Zero(d, d), z = M::Zero(d, d);
      for (int i = 0; i < d; ++i) {
        x((i + a) % d, i) = 1.0;
        z(i, i) = std::pow(w, b * i);
      }
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / (d * d) : p / (d * d);
      out.push_back(std::sqrt(weight) * x * z);
    }
  return out;
}

// J_n(x) via explicit factorials in log space, summed until terms drop below 1e-14.
inline double bessel_series(int n, double x) {
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    const double logmag = (2 * k + n) * std::log(std::abs(x) / 2.0) - std::lgamma(k + 1.0) - std::lgamma(k + n + 1.0);
    double t = std::exp(logmag);
    if (x < 0.0 && (n % 2 == 1)) t = -t;
    if (k % 2 == 1) t = -t;
    sum += t;
    if (std::abs(t) < 1e-14 && k > 2) break;
  }
  return sum;
}

}  // namespace oracle
