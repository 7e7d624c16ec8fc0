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

// Cycle benchmarking and three-qubit process tomography of register channels.
//
// CB: for each Pauli term P, start in a +1 eigenstate of P, apply m cycles of
// (uniform random Pauli twirl, gate), and measure V P V^dag where V is the
// ideal accumulated unitary (the classically inverted frame). The observable
// is zero on leakage levels. Each term decays as A f_P^m; the process fidelity
// estimate is the mean of f_P over all 64 terms with f_I = 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ccphase/gates.hpp"
#include "ccphase/linalg.hpp"
#include "ccphase/random.hpp"
#include "ccphase/simulator.hpp"

namespace ccphase {

inline constexpr int kBenchQubits = 3;

inline Matrix pauli_1q(char c) {
  switch (c) {
    case 'I': return identity(2);
    case 'X': return gates::pauli_x();
    case 'Y': return gates::pauli_y();
    case 'Z': return gates::pauli_z();
    default: throw ValidationError(std::string("unknown Pauli letter '") + c + "'");
  }
}

inline Matrix pauli_string(const std::string& label) {
  if (label.size() != kBenchQubits) throw ValidationError("Pauli label must have three letters");
  return kron(kron(pauli_1q(label[0]), pauli_1q(label[1])), pauli_1q(label[2]));
}

inline std::string pauli_label(int index) {
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  return {letters[(index / 16) % 4], letters[(index / 4) % 4], letters[index % 4]};
}

inline std::vector<std::string> all_pauli_terms() {
  std::vector<std::string> out;
  for (int k = 0; k < 64; ++k) out.push_back(pauli_label(k));
  return out;
}

// Lifts an 8x8 qubit operator to the register; on qutrits it acts as the
// identity on every leakage level when `unitary` is set and as zero otherwise.
inline Matrix lift_qubit_operator(const Matrix& op8, const RegisterLayout& layout, bool unitary) {
  if (layout.levels == 2) return op8;
  ComputationalEmbedding emb(layout.sites);
  Matrix out = unitary ? identity(layout.dim()) : Matrix::Zero(layout.dim(), layout.dim());
  if (unitary)
    for (int i = 0; i < 8; ++i) out(emb[i], emb[i]) = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) out(emb[i], emb[j]) = op8(i, j);
  return out;
}

// +1 eigenstate of a Pauli string; |0> on identity factors.
inline Vector pauli_eigenstate(const std::string& label) {
  Vector v = Vector::Ones(1);
  for (char c : label) {
    Vector s(2);
    const double r = 1.0 / std::sqrt(2.0);
    switch (c) {
      case 'I':
      case 'Z': s << 1.0, 0.0; break;
      case 'X': s << r, r; break;
      case 'Y': s << r, kI * r; break;
      default: throw ValidationError("unknown Pauli letter");
    }
    v = kron(v, s);
  }
  return v;
}

struct CBConfig {
  std::vector<std::string> pauli_terms = all_pauli_terms();
  std::vector<int> depths = {2, 4, 8};
  int randomizations = 30;
  long shots = 1000;  // per (term, depth, randomization); 0 = exact expectations
  bool composite = false;
  std::uint64_t seed = 1;
  int workers = 1;
  double min_expectation = 0.1;  // terms below this at the smallest depth are excluded

  void validate() const {
    if (depths.size() < 2) throw ValidationError("CB needs at least two depths");
    for (std::size_t k = 0; k < depths.size(); ++k) {
      if (depths[k] < 1) throw ValidationError("CB depths must be >= 1");
      if (k > 0 && depths[k] <= depths[k - 1]) throw ValidationError("CB depths must be increasing");
    }
    if (randomizations < 1) throw ValidationError("CB needs at least one randomization");
    if (pauli_terms.empty()) throw ValidationError("CB needs at least one Pauli term");
    for (const auto& t : pauli_terms) pauli_string(t);
    if (shots < 0) throw ValidationError("shots must be non-negative");
  }
};

struct PauliDecay {
  std::string term;
  std::vector<double> mean_expectation;  // per depth, averaged over randomizations
  double amplitude = 1.0;                // A
  double decay = 1.0;                    // f
  double decay_se = 0.0;
  bool included = true;
};

struct BenchmarkReport {
  std::vector<int> depths;
  std::vector<PauliDecay> terms;
  std::vector<std::string> excluded_terms;  // vanishing expectation at the smallest depth
  double fidelity = 1.0;                    // per cycle
  double fidelity_se = 0.0;
  bool composite = false;
  double per_gate_bound = 1.0;  // sqrt(fidelity) in composite mode, else fidelity
  // raw[t][d][r]: estimated expectation for term t, depth index d, randomization r
  std::vector<std::vector<std::vector<double>>> raw;
};

// One benchmarked cycle: a register channel and its ideal 8x8 target.
struct BenchCycle {
  LayeredChannel channel;
  Matrix target;
};

// Weighted fit of log E = log A + m log f. Returns (A, f, se_f).
inline std::array<double, 3> fit_decay(const std::vector<int>& depths, const std::vector<double>& mean, double shots_times_r) {
  std::vector<double> xs, ys, ws;
  for (std::size_t k = 0; k < depths.size(); ++k) {
    const double e = mean[k];
    if (!(e > 0.0)) continue;
    double w = 1.0;
    if (shots_times_r > 0.0) {
      const double var = std::max(1.0 - e * e, 1e-6) / shots_times_r;
      w = e * e / var;
    }
    xs.push_back(depths[k]);
    ys.push_back(std::log(std::min(e, 1.0 + 1e-12)));
    ws.push_back(w);
  }
  if (xs.size() < 2) return {0.0, 0.0, 0.0};
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sw += ws[k];
    sx += ws[k] * xs[k];
    sy += ws[k] * ys[k];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += ws[k] * (xs[k] - mx) * (xs[k] - mx);
    sxy += ws[k] * (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double se_slope = 0.0;
  if (shots_times_r > 0.0) {
    se_slope = std::sqrt(1.0 / sxx);
  } else if (xs.size() > 2) {
    double rss = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) rss += ws[k] * std::pow(ys[k] - intercept - slope * xs[k], 2);
    se_slope = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
  }
  const double f = std::exp(slope);
  return {std::exp(intercept), f, f * se_slope};
}

// channel_factory(theta) builds the noisy gate; target_factory(theta) its 8x8 ideal.
inline BenchmarkReport cycle_benchmark(const std::function<LayeredChannel(double)>& channel_factory,
                                       const std::function<Matrix(double)>& target_factory, double theta,
                                       const CBConfig& config) {
  config.validate();
  std::vector<BenchCycle> parts;
  parts.push_back({channel_factory(theta), target_factory(theta)});
  if (config.composite) parts.push_back({channel_factory(2.0 * kPi - theta), target_factory(2.0 * kPi - theta)});
  const RegisterLayout layout = parts.front().channel.layout();
  if (layout.sites != kBenchQubits) throw ValidationError("CB expects a three-site register");
  for (const auto& p : parts) {
    if (!(p.channel.layout() == layout)) throw ValidationError("CB: channel layouts differ");
    if (p.target.rows() != 8 || unitarity_error(p.target) > 1e-9) throw ValidationError("CB: target must be an 8x8 unitary");
  }
  std::vector<Matrix> twirl8(64), twirl_reg(64);
  for (int k = 0; k < 64; ++k) {
    twirl8[static_cast<std::size_t>(k)] = pauli_string(pauli_label(k));
    twirl_reg[static_cast<std::size_t>(k)] = lift_qubit_operator(twirl8[static_cast<std::size_t>(k)], layout, true);
  }
  const auto nterms = config.pauli_terms.size();
  const auto ndepth = config.depths.size();
  const auto nr = static_cast<std::size_t>(config.randomizations);
  BenchmarkReport rep;
  rep.depths = config.depths;
  rep.composite = config.composite;
  rep.raw.assign(nterms, std::vector<std::vector<double>>(ndepth, std::vector<double>(nr, 0.0)));

  const std::size_t tasks = nterms * ndepth * nr;
  parallel_for(tasks, config.workers, [&](std::size_t task) {
    const std::size_t r = task % nr;
    const std::size_t d = (task / nr) % ndepth;
    const std::size_t t = task / (nr * ndepth);
    const auto& label = config.pauli_terms[t];
    Rng rng = make_rng(config.seed, {t, static_cast<std::uint64_t>(config.depths[d]), r});
    std::uniform_int_distribution<int> pick(0, 63);
    const Vector psi8 = pauli_eigenstate(label);
    Vector psi = Vector::Zero(layout.dim());
    if (layout.levels == 2) {
      psi = psi8;
    } else {
      ComputationalEmbedding emb(3);
      for (int i = 0; i < 8; ++i) psi(emb[i]) = psi8(i);
    }
    Matrix rho = psi * psi.adjoint();
    Matrix v = identity(8);
    for (int m = 0; m < config.depths[d]; ++m) {
      const int k = pick(rng);
      rho = twirl_reg[static_cast<std::size_t>(k)] * rho * twirl_reg[static_cast<std::size_t>(k)].adjoint();
      v = twirl8[static_cast<std::size_t>(k)] * v;
      for (const auto& p : parts) {
        rho = p.channel.apply(std::move(rho));
        v = p.target * v;
      }
    }
    const Matrix obs = lift_qubit_operator(v * pauli_string(label) * v.adjoint(), layout, false);
    const double e = std::clamp((rho * obs).trace().real(), -1.0, 1.0);
    double est = e;
    if (config.shots > 0) est = 2.0 * static_cast<double>(sample_binomial(rng, config.shots, 0.5 * (1.0 + e))) / config.shots - 1.0;
    rep.raw[t][d][r] = est;
  });

  double sum_f = 0.0, var_sum = 0.0;
  int counted = 0;
  bool identity_listed = false;
  for (std::size_t t = 0; t < nterms; ++t) {
    PauliDecay pd;
    pd.term = config.pauli_terms[t];
    for (std::size_t d = 0; d < ndepth; ++d) {
      double s = 0;
      for (double x : rep.raw[t][d]) s += x;
      pd.mean_expectation.push_back(s / static_cast<double>(nr));
    }
    if (pd.term == "III") {
      identity_listed = true;
      pd.amplitude = pd.mean_expectation.front();
      pd.decay = 1.0;
    } else if (pd.mean_expectation.front() < config.min_expectation) {
      pd.included = false;
      rep.excluded_terms.push_back(pd.term);
    } else {
      const auto fit = fit_decay(config.depths, pd.mean_expectation, static_cast<double>(config.shots) * static_cast<double>(nr));
      pd.amplitude = fit[0];
      pd.decay = std::min(fit[1], 1.0);
      pd.decay_se = fit[2];
    }
    if (pd.included) {
      sum_f += pd.decay;
      var_sum += pd.decay_se * pd.decay_se;
      ++counted;
    }
    rep.terms.push_back(std::move(pd));
  }
  // Identity term (f = 1) always enters the average.
  if (!identity_listed) {
    sum_f += 1.0;
    ++counted;
  }
  rep.fidelity = std::clamp(sum_f / counted, 0.0, 1.0);
  rep.fidelity_se = std::sqrt(var_sum) / counted;
  rep.per_gate_bound = config.composite ? std::sqrt(rep.fidelity) : rep.fidelity;
  return rep;
}

// ---------------------------------------------------------------------------
// Process tomography.

struct QptConfig {
  long shots = 10000;  // per (input, setting); 0 = exact probabilities
  std::uint64_t seed = 1;
  double residual_threshold = 0.1;
  int workers = 1;
};

struct QptResult {
  Matrix choi_linear;  // linear-inversion estimate, input factor first, trace 8
  Matrix choi;         // CPTP projection
  double fidelity = 0.0;
  double residual = 0.0;  // ||J_lin - J_cptp||_F / ||J_lin||_F
  bool residual_flagged = false;
};

namespace detail {

inline Matrix single_qubit_input(int s) {
  // 0: |0>, 1: |1>, 2: |+>, 3: |+i>
  Vector v(2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (s) {
    case 0: v << 1.0, 0.0; break;
    case 1: v << 0.0, 1.0; break;
    case 2: v << r, r; break;
    default: v << r, kI * r; break;
  }
  return v * v.adjoint();
}

// |a><b| = sum_s coeff[a][b][s] rho_s over the four preparations.
inline Complex unit_coeff(int a, int b, int s) {
  if (a == b) return (s == a) ? 1.0 : 0.0;
  const Complex half_plus = (a == 0) ? Complex(0.5, 0.5) : Complex(0.5, -0.5);
  switch (s) {
    case 0:
    case 1: return -half_plus;
    case 2: return 1.0;
    default: return a == 0 ? kI : -kI;
  }
}

inline Matrix partial_trace_out(const Matrix& j, int din, int dout) {
  Matrix t = Matrix::Zero(din, din);
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < din; ++k)
      for (int a = 0; a < dout; ++a) t(i, k) += j(i * dout + a, k * dout + a);
  return t;
}

inline Matrix project_tp(const Matrix& j, int d) {
  const Matrix delta = partial_trace_out(j, d, d) - identity(d);
  return j - kron(delta, identity(d)) / static_cast<double>(d);
}

inline Matrix project_cp(const Matrix& j) {
  const Matrix h = 0.5 * (j + j.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Nearest CPTP Choi matrix by Dykstra alternation between the PSD cone and the
// trace-preserving affine set, finished with a minimal depolarizing mix so the
// result is exactly CP and TP.
inline Matrix project_cptp(const Matrix& j_in, int d, int max_iter = 500, double tol = 1e-10) {
  Matrix x = 0.5 * (j_in + j_in.adjoint());
  Matrix p = Matrix::Zero(x.rows(), x.cols()), q = p;
  for (int it = 0; it < max_iter; ++it) {
    const Matrix y = detail::project_cp(x + p);
    p = x + p - y;
    const Matrix xn = detail::project_tp(y + q, d);
    q = y + q - xn;
    const double change = (xn - x).norm();
    x = xn;
    if (change < tol) break;
  }
  x = detail::project_tp(0.5 * (x + x.adjoint()), d);
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  const double mu = es.eigenvalues().minCoeff();
  if (mu < 0.0) {
    const double lam = -mu / (1.0 / d - mu);
    x = (1.0 - lam) * x + lam * identity(x.rows()) / static_cast<double>(d);
  }
  return x;
}

// 64 product inputs x 27 Pauli settings with multinomial shots, linear
// inversion to the Choi matrix, projection to CPTP.
inline QptResult qpt(const LayeredChannel& channel, const Matrix& target, const QptConfig& config = {}) {
  const auto& layout = channel.layout();
  if (layout.sites != 3) throw ValidationError("qpt expects a three-site register");
  if (target.rows() != 8 || unitarity_error(target) > 1e-9) throw ValidationError("qpt: target must be an 8x8 unitary");
  const int dim = layout.dim();
  std::vector<int> idx(8);
  {
    ComputationalEmbedding emb(3);
    for (int i = 0; i < 8; ++i) idx[static_cast<std::size_t>(i)] = layout.levels == 3 ? emb[i] : i;
  }
  // Measurement rotations per basis letter: X via H, Y via H S^dag, Z none.
  const Matrix rot[3] = {gates::hadamard(), gates::hadamard() * gates::phase_gate(-kPi / 2), identity(2)};
  auto site_op = [&](const Matrix& u2, int site) {
    return layout.levels == 3 ? lift_local(qubit_op_on_qutrit(u2), {site}, layout) : lift_local(u2, {site}, layout);
  };
  std::vector<Matrix> setting_rot(27);
  for (int s = 0; s < 27; ++s)
    setting_rot[static_cast<std::size_t>(s)] = site_op(rot[s / 9], 0) * site_op(rot[(s / 3) % 3], 1) * site_op(rot[s % 3], 2);

  // Estimated 8x8 output state for each of the 64 inputs.
  std::vector<Matrix> outputs(64);
  parallel_for(64, config.workers, [&](std::size_t in) {
    const int s0 = static_cast<int>(in) / 16, s1 = (static_cast<int>(in) / 4) % 4, s2 = static_cast<int>(in) % 4;
    const Matrix rin8 = kron(kron(detail::single_qubit_input(s0), detail::single_qubit_input(s1)), detail::single_qubit_input(s2));
    Matrix rin = Matrix::Zero(dim, dim);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) rin(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]) = rin8(i, j);
    const Matrix rout = channel.apply(rin);
    // Pauli expectations accumulated over compatible settings.
    std::vector<double> sum(64, 0.0);
    std::vector<int> count(64, 0);
    for (int s = 0; s < 27; ++s) {
      const Matrix& u = setting_rot[static_cast<std::size_t>(s)];
      const Matrix r = u * rout * u.adjoint();
      std::vector<double> probs(8, 0.0);
      for (int i = 0; i < dim; ++i) {
        const auto dg = basis_digits(i, 3, layout.levels);
        const int o = 4 * (dg[0] ? 1 : 0) + 2 * (dg[1] ? 1 : 0) + (dg[2] ? 1 : 0);
        probs[static_cast<std::size_t>(o)] += std::max(0.0, r(i, i).real());
      }
      if (config.shots > 0) {
        Rng rng = make_rng(config.seed, {in, static_cast<std::uint64_t>(s)});
        const auto counts = sample_multinomial(rng, config.shots, probs);
        for (int o = 0; o < 8; ++o) probs[static_cast<std::size_t>(o)] = static_cast<double>(counts[static_cast<std::size_t>(o)]) / config.shots;
      }
      const int letters[3] = {s / 9, (s / 3) % 3, s % 3};  // 0 X, 1 Y, 2 Z
      for (int mask = 0; mask < 8; ++mask) {
        // mask bit set: that qubit's factor is the measured letter, else identity
        int pidx = 0;
        for (int q = 0; q < 3; ++q) pidx = 4 * pidx + ((mask >> (2 - q)) & 1 ? letters[q] + 1 : 0);
        double e = 0.0;
        for (int o = 0; o < 8; ++o) {
          int parity = 0;
          for (int q = 0; q < 3; ++q)
            if ((mask >> (2 - q)) & 1) parity ^= (o >> (2 - q)) & 1;
          e += (parity ? -1.0 : 1.0) * probs[static_cast<std::size_t>(o)];
        }
        sum[static_cast<std::size_t>(pidx)] += e;
        ++count[static_cast<std::size_t>(pidx)];
      }
    }
    Matrix est = Matrix::Zero(8, 8);
    for (int pidx = 0; pidx < 64; ++pidx) est += (sum[static_cast<std::size_t>(pidx)] / count[static_cast<std::size_t>(pidx)]) * pauli_string(pauli_label(pidx));
    outputs[in] = est / 8.0;
  });

  // J = sum_{ij} |i><j| (x) L(|i><j|), with L(|i><j|) expanded over the inputs.
  Matrix j = Matrix::Zero(64, 64);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) {
      Matrix lij = Matrix::Zero(8, 8);
      for (int in = 0; in < 64; ++in) {
        const int s[3] = {in / 16, (in / 4) % 4, in % 4};
        Complex c = 1.0;
        for (int q = 0; q < 3 && c != Complex{}; ++q) c *= detail::unit_coeff((i >> (2 - q)) & 1, (k >> (2 - q)) & 1, s[q]);
        if (c != Complex{}) lij += c * outputs[static_cast<std::size_t>(in)];
      }
      j.block(i * 8, k * 8, 8, 8) = lij;
    }
  QptResult res;
  res.choi_linear = j;
  res.choi = project_cptp(j, 8);
  res.residual = (res.choi_linear - res.choi).norm() / std::max(1e-300, res.choi_linear.norm());
  res.residual_flagged = res.residual > config.residual_threshold;
  res.fidelity = std::clamp(choi_overlap_fidelity(res.choi, target), 0.0, 1.0);
  return res;
}

}  // namespace ccphase
