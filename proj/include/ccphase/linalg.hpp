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

// Dense complex linear algebra for qutrit registers.
//
// Basis ordering is big-endian over sites: the label |q0 q1 ... q_{n-1}> maps
// to index sum_k q_k * L^(n-1-k), where L is the number of levels per site.
// For three qutrits this is 9*q0 + 3*q1 + q2.
//
// Superoperators use column stacking: vec(rho)[i + d*j] = rho(i, j), so that
// vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ccphase/errors.hpp"

namespace ccphase {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

inline constexpr int ipow(int base, int exp) {
  int r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

// Maps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

inline Complex phase(double a) { return std::polar(1.0, a); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

// Max-entry deviation of U^dagger U from the identity.
inline double unitarity_error(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - identity(u.rows())).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// min over phi of ||a - e^{i phi} b||_F. The optimal phase is arg Tr(b^dag a);
// the residual is formed explicitly to avoid cancellation near zero.
inline double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex ph = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a - ph * b).norm();
}

// Digits of a basis index, most significant site first.
inline std::vector<int> basis_digits(int index, int sites, int levels) {
  std::vector<int> d(static_cast<std::size_t>(sites));
  for (int k = sites - 1; k >= 0; --k) {
    d[static_cast<std::size_t>(k)] = index % levels;
    index /= levels;
  }
  return d;
}

inline int basis_index(std::span<const int> digits, int levels) {
  int idx = 0;
  for (int v : digits) {
    if (v < 0 || v >= levels) throw ValidationError("basis digit out of range");
    idx = idx * levels + v;
  }
  return idx;
}

// Parses a ket label such as "011" into an index.
inline int basis_index(const std::string& label, int levels) {
  std::vector<int> digits;
  for (char c : label) {
    if (c < '0' || c > '9') throw ValidationError("invalid ket label '" + label + "'");
    digits.push_back(c - '0');
  }
  return basis_index(digits, levels);
}

inline std::string basis_label(int index, int sites, int levels) {
  std::string s;
  for (int v : basis_digits(index, sites, levels)) s.push_back(static_cast<char>('0' + v));
  return s;
}

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tol = 1e-10) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw ValidationError("unitary must be square");
    if (unitarity_error(m_) > tol) throw NumericalCheckError("matrix is not unitary");
  }
  const Matrix& matrix() const { return m_; }
  Eigen::Index dimension() const { return m_.rows(); }

 private:
  Matrix m_;
};

// Index map from 2^n qubit labels to 3^n qutrit labels (levels 0,1 kept).
class ComputationalEmbedding {
 public:
  explicit ComputationalEmbedding(int sites) : sites_(sites) {
    if (sites < 1 || sites > 5) throw ValidationError("embedding supports 1..5 sites");
    const int nq = ipow(2, sites);
    index_.reserve(static_cast<std::size_t>(nq));
    for (int i = 0; i < nq; ++i) index_.push_back(basis_index(basis_digits(i, sites, 2), 3));
  }
  int sites() const { return sites_; }
  int qubit_dim() const { return ipow(2, sites_); }
  int qutrit_dim() const { return ipow(3, sites_); }
  int operator[](int qubit_index) const { return index_[static_cast<std::size_t>(qubit_index)]; }
  std::span<const int> indices() const { return index_; }

  // Isometry from the qubit space into the qutrit space.
  Matrix isometry() const {
    Matrix e = Matrix::Zero(qutrit_dim(), qubit_dim());
    for (int i = 0; i < qubit_dim(); ++i) e(index_[static_cast<std::size_t>(i)], i) = 1.0;
    return e;
  }

 private:
  int sites_;
  std::vector<int> index_;
};

inline Matrix embed_qubit_unitary(const Matrix& u, const ComputationalEmbedding& emb) {
  if (u.rows() != emb.qubit_dim() || u.cols() != emb.qubit_dim())
    throw ValidationError("dimension mismatch: expected " + std::to_string(emb.qubit_dim()) + "-dim unitary");
  if (unitarity_error(u) > 1e-10) throw ValidationError("embed_qubit_unitary requires a unitary");
  Matrix out = identity(emb.qutrit_dim());
  for (int i = 0; i < emb.qubit_dim(); ++i)
    for (int j = 0; j < emb.qubit_dim(); ++j) out(emb[i], emb[j]) = u(i, j);
  return out;
}

struct Restriction {
  Matrix block;
  // Largest l2 mass any embedded column places outside the embedded rows.
  double leakage = 0.0;
};

inline Restriction restrict_to_computational(const Matrix& u, const ComputationalEmbedding& emb) {
  if (u.rows() != emb.qutrit_dim() || u.cols() != emb.qutrit_dim())
    throw ValidationError("restrict_to_computational: dimension mismatch");
  Restriction r;
  const int nq = emb.qubit_dim();
  r.block.resize(nq, nq);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) r.block(i, j) = u(emb[i], emb[j]);
  for (int j = 0; j < nq; ++j) {
    const double total = u.col(emb[j]).squaredNorm();
    const double inside = r.block.col(j).squaredNorm();
    r.leakage = std::max(r.leakage, std::sqrt(std::max(0.0, total - inside)));
  }
  return r;
}

class QutritRegisterState {
 public:
  QutritRegisterState(int sites, Vector amplitudes) : sites_(sites), amp_(std::move(amplitudes)) {
    if (amp_.size() != ipow(3, sites_)) throw ValidationError("state length must be 3^n");
  }
  static QutritRegisterState basis(const std::string& label) {
    const int n = static_cast<int>(label.size());
    Vector v = Vector::Zero(ipow(3, n));
    v(basis_index(label, 3)) = 1.0;
    return {n, std::move(v)};
  }
  int sites() const { return sites_; }
  const Vector& amplitudes() const { return amp_; }
  double norm_error() const { return std::abs(amp_.squaredNorm() - 1.0); }
  QutritRegisterState normalized() const {
    const double n = amp_.norm();
    if (n == 0.0) throw NumericalCheckError("cannot normalize the zero vector");
    return {sites_, amp_ / n};
  }
  QutritRegisterState evolved(const Matrix& u) const {
    if (u.cols() != amp_.size()) throw ValidationError("operator dimension mismatch");
    return {sites_, u * amp_};
  }

 private:
  int sites_;
  Vector amp_;
};

class QutritDensityMatrix {
 public:
  QutritDensityMatrix(int sites, Matrix rho) : sites_(sites), rho_(std::move(rho)) {
    if (rho_.rows() != ipow(3, sites_) || rho_.cols() != rho_.rows())
      throw ValidationError("density matrix must be 3^n x 3^n");
  }
  explicit QutritDensityMatrix(const QutritRegisterState& psi)
      : QutritDensityMatrix(psi.sites(), psi.amplitudes() * psi.amplitudes().adjoint()) {}

  int sites() const { return sites_; }
  const Matrix& matrix() const { return rho_; }

  // Throws if Hermiticity, unit trace or positivity fail at the given tolerances.
  void validate(double tol = 1e-10, double eig_tol = 1e-9) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) throw NumericalCheckError("density matrix not Hermitian");
    if (std::abs(rho_.trace() - 1.0) > tol) throw NumericalCheckError("density matrix trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
    if (es.eigenvalues().minCoeff() < -eig_tol) throw NumericalCheckError("density matrix has negative eigenvalue");
  }

 private:
  int sites_;
  Matrix rho_;
};

using KrausSet = std::vector<Matrix>;

// Linear map on d x d matrices in column-stacking convention.
class Superoperator {
 public:
  Superoperator(int dim, Matrix s) : dim_(dim), s_(std::move(s)) {
    if (s_.rows() != dim_ * dim_ || s_.cols() != dim_ * dim_) throw ValidationError("superoperator must be d^2 x d^2");
  }
  static Superoperator from_unitary(const Matrix& u) {
    return {static_cast<int>(u.rows()), kron(Matrix(u.conjugate()), u)};
  }
  static Superoperator from_kraus(const KrausSet& ks) {
    if (ks.empty()) throw ValidationError("empty Kraus set");
    const int d = static_cast<int>(ks.front().rows());
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto& k : ks) {
      if (k.rows() != d || k.cols() != d) throw ValidationError("Kraus operators must share one square dimension");
      s += kron(Matrix(k.conjugate()), k);
    }
    return {d, std::move(s)};
  }

  int dim() const { return dim_; }
  const Matrix& matrix() const { return s_; }

  Matrix apply(const Matrix& rho) const {
    Eigen::Map<const Vector> v(rho.data(), rho.size());
    Vector out = s_ * v;
    return Eigen::Map<const Matrix>(out.data(), dim_, dim_);
  }

  // this, then `after`.
  Superoperator then(const Superoperator& after) const {
    if (after.dim_ != dim_) throw ValidationError("superoperator dimension mismatch");
    return {dim_, after.s_ * s_};
  }

  // J = sum_ij |i><j| (x) Lambda(|i><j|), input factor first, trace d.
  Matrix choi() const {
    const int d = dim_;
    Matrix j(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) j(i * d + a, k * d + b) = s_(a + d * b, i + d * k);
    return j;
  }

  double trace_preservation_error() const {
    // Tr(Lambda(|i><j|)) = delta_ij
    double err = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < dim_; ++k) {
        Complex tr = 0.0;
        for (int a = 0; a < dim_; ++a) tr += s_(a + dim_ * a, i + dim_ * k);
        err = std::max(err, std::abs(tr - (i == k ? 1.0 : 0.0)));
      }
    return err;
  }

  double min_choi_eigenvalue() const {
    Matrix j = choi();
    j = 0.5 * (j + j.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(j, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  int dim_;
  Matrix s_;
};

// Factorizes a (Hermitian, PSD) Choi matrix with input factor first into Kraus operators.
inline KrausSet choi_to_kraus(const Matrix& choi, int din, int dout, double drop_tol = 1e-14) {
  if (choi.rows() != din * dout) throw ValidationError("choi_to_kraus: dimension mismatch");
  Matrix h = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  KrausSet ks;
  for (Eigen::Index n = es.eigenvalues().size() - 1; n >= 0; --n) {
    const double lam = es.eigenvalues()(n);
    if (lam < -1e-8) throw NumericalCheckError("choi_to_kraus: map is not completely positive");
    if (lam <= drop_tol) continue;
    Matrix k(dout, din);
    const double s = std::sqrt(lam);
    for (int i = 0; i < din; ++i)
      for (int a = 0; a < dout; ++a) k(a, i) = s * es.eigenvectors()(i * dout + a, n);
    ks.push_back(std::move(k));
  }
  return ks;
}

inline double kraus_completeness_error(const KrausSet& ks) {
  if (ks.empty()) return std::numeric_limits<double>::infinity();
  Matrix sum = Matrix::Zero(ks.front().cols(), ks.front().cols());
  for (const auto& k : ks) sum += k.adjoint() * k;
  return (sum - identity(sum.rows())).cwiseAbs().maxCoeff();
}

// <<U|J|U>> / d^2 with |U>> = sum_i |i> (x) U|i>.
inline double choi_overlap_fidelity(const Matrix& choi, const Matrix& u) {
  const auto d = u.rows();
  Vector vu(d * d);
  for (Eigen::Index i = 0; i < d; ++i) vu.segment(i * d, d) = u.col(i);
  return std::real(vu.dot(choi * vu)) / static_cast<double>(d * d);
}

// Entanglement fidelity of the channel against a unitary target.
inline double process_fidelity(const Superoperator& channel, const UnitaryMatrix& target) {
  if (channel.dim() != target.dimension()) throw ValidationError("process_fidelity: dimension mismatch");
  if (channel.trace_preservation_error() > 1e-8) throw ValidationError("process_fidelity: channel is not trace preserving");
  if (channel.min_choi_eigenvalue() < -1e-8) throw ValidationError("process_fidelity: channel is not completely positive");
  return std::clamp(choi_overlap_fidelity(channel.choi(), target.matrix()), 0.0, 1.0);
}

inline double process_fidelity(const KrausSet& kraus, const UnitaryMatrix& target) {
  return process_fidelity(Superoperator::from_kraus(kraus), target);
}

inline double average_gate_fidelity(double process_fidelity, int dim) {
  return (dim * process_fidelity + 1.0) / (dim + 1.0);
}

}  // namespace ccphase
