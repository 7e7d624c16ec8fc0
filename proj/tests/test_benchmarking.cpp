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

#include <gtest/gtest.h>

#include <random>

#include "ccphase/benchmarking.hpp"
#include "ccphase/device.hpp"
#include "ccphase/native_gates.hpp"
#include "ccphase/noise.hpp"
#include "oracles/dense_oracles.hpp"

namespace {

using namespace ccphase;

auto depolarized(double p) {
  return [p](double th) {
    LayeredChannel ch({3, 2});
    ch.add_unitary(ccphase_target(th, 3));
    if (p > 0.0) ch.add_global_depolarizing(p);
    return ch;
  };
}

Matrix target011(double th) { return ccphase_target(th, 3); }

// F of the depolarized gate via its Kraus form.
double depolarized_oracle(double p, double th) {
  const Matrix u = ccphase_target(th, 3);
  std::vector<oracle::M> kraus;
  for (const auto& k : oracle::depolarizing_kraus(8, p)) kraus.push_back(k * u);
  return oracle::kraus_fidelity(kraus, u);
}

std::function<LayeredChannel(double)> native_factory(const std::optional<ModulationDephasingPolicy>& policy) {
  return [policy](double th) {
    const auto m = DeviceModel::builtin();
    const std::array<int, 3> chain{10, 11, 12};
    NoiseOptions o;
    o.modulation = policy;
    return noisy_sequence_channel(synthesize_on_chain(th, m, chain), m, chain, o);
  };
}

CBConfig fast_exact() {
  CBConfig c;
  c.randomizations = 5;
  c.shots = 0;
  return c;
}

TEST(PauliHelpers, LabelsAndEigenstates) {
  const auto terms = all_pauli_terms();
  ASSERT_EQ(terms.size(), 64u);
  EXPECT_EQ(terms.front(), "III");
  EXPECT_EQ(terms.back(), "ZZZ");
  for (const auto& t : terms) {
    const Matrix p = pauli_string(t);
    const Vector v = pauli_eigenstate(t);
    EXPECT_NEAR((p * v - v).norm(), 0.0, 1e-12) << t;
    EXPECT_NEAR((p * p - identity(8)).norm(), 0.0, 1e-12) << t;
  }
  EXPECT_THROW(pauli_string("XY"), ValidationError);
  EXPECT_THROW(pauli_string("XQZ"), ValidationError);
}

TEST(PauliHelpers, LiftOntoQutrits) {
  const RegisterLayout q3{3, 3};
  const Matrix x = pauli_string("XII");
  const Matrix u = lift_qubit_operator(x, q3, true);
  EXPECT_LT(unitarity_error(u), 1e-12);
  const Matrix o = lift_qubit_operator(x, q3, false);
  EXPECT_NEAR(o.norm(), x.norm(), 1e-12);
}

TEST(FitDecay, RecoversSyntheticExponential) {
  const std::vector<int> depths{2, 4, 8, 16};
  std::vector<double> mean;
  for (int m : depths) mean.push_back(0.9 * std::pow(0.97, m));
  const auto exact = fit_decay(depths, mean, 0.0);
  EXPECT_NEAR(exact[0], 0.9, 1e-12);
  EXPECT_NEAR(exact[1], 0.97, 1e-12);
  EXPECT_NEAR(exact[2], 0.0, 1e-10);
  const auto weighted = fit_decay(depths, mean, 30000.0);
  EXPECT_NEAR(weighted[1], 0.97, 1e-12);
  EXPECT_GT(weighted[2], 0.0);
}

TEST(CycleBenchmark, ConfigValidation) {
  CBConfig c;
  c.depths = {4};
  EXPECT_THROW(c.validate(), ValidationError);
  c.depths = {4, 2};
  EXPECT_THROW(c.validate(), ValidationError);
  c = CBConfig{};
  c.randomizations = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = CBConfig{};
  c.pauli_terms = {"XXA"};
  EXPECT_THROW(c.validate(), ValidationError);
  c = CBConfig{};
  c.shots = -1;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_THROW(cycle_benchmark(depolarized(0.0), [](double) { return identity(4); }, kPi, CBConfig{}), ValidationError);
}

TEST(CycleBenchmark, IdealGateDoesNotDecay) {
  const auto rep = cycle_benchmark(depolarized(0.0), target011, kPi, fast_exact());
  EXPECT_NEAR(rep.fidelity, 1.0, 1e-9);
  for (const auto& t : rep.terms) EXPECT_NEAR(t.decay, 1.0, 1e-9) << t.term;
}

TEST(CycleBenchmark, DepolarizingMatchesOracle) {
  const double p = 0.05;
  const double analytic = 1.0 - p + p / 64.0;
  EXPECT_NEAR(depolarized_oracle(p, kPi), analytic, 1e-12);
  const auto exact = cycle_benchmark(depolarized(p), target011, kPi, fast_exact());
  EXPECT_NEAR(exact.fidelity, analytic, 1e-9);
  for (const auto& t : exact.terms)
    if (t.term != "III") EXPECT_NEAR(t.decay, 1.0 - p, 1e-9) << t.term;
  const auto sampled = cycle_benchmark(depolarized(p), target011, kPi, CBConfig{});
  EXPECT_NEAR(sampled.fidelity, analytic, 0.01);
  EXPECT_NEAR(sampled.fidelity, 0.950809, 1e-5);  // frozen at seed 1
  EXPECT_GT(sampled.fidelity_se, 0.0);
}

TEST(CycleBenchmark, StandardErrorCoversTruth) {
  const double analytic = depolarized_oracle(0.05, kPi);
  int covered = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    CBConfig c;
    c.seed = 100 + s;
    const auto rep = cycle_benchmark(depolarized(0.05), target011, kPi, c);
    if (std::abs(rep.fidelity - analytic) < 2.0 * rep.fidelity_se) ++covered;
  }
  EXPECT_GE(covered, 17);
}

TEST(CycleBenchmark, DeterministicAcrossWorkers) {
  CBConfig a;
  a.randomizations = 4;
  CBConfig b = a;
  b.workers = 3;
  const auto ra = cycle_benchmark(depolarized(0.05), target011, kPi, a);
  const auto rb = cycle_benchmark(depolarized(0.05), target011, kPi, b);
  EXPECT_EQ(ra.raw, rb.raw);
  EXPECT_EQ(ra.fidelity, rb.fidelity);
  CBConfig c = a;
  c.seed = 2;
  EXPECT_NE(cycle_benchmark(depolarized(0.05), target011, kPi, c).raw, ra.raw);
}

TEST(CycleBenchmark, CompositeBound) {
  CBConfig c = fast_exact();
  c.composite = true;
  const auto rep = cycle_benchmark(depolarized(0.05), target011, kPi / 2, c);
  const double single = depolarized_oracle(0.05, kPi / 2);
  EXPECT_NEAR(rep.fidelity, std::pow(1.0 - 0.05, 2) * 63.0 / 64.0 + 1.0 / 64.0, 1e-9);
  EXPECT_NEAR(rep.per_gate_bound, std::sqrt(rep.fidelity), 1e-12);
  EXPECT_GE(rep.per_gate_bound, single - 0.02);
}

TEST(CycleBenchmark, ExcludesVanishingTerms) {
  CBConfig c = fast_exact();
  c.pauli_terms = {"XII", "ZZZ"};
  c.depths = {40, 80};
  const auto rep = cycle_benchmark(depolarized(0.1), target011, kPi, c);
  EXPECT_EQ(rep.excluded_terms.size(), 2u);
  EXPECT_EQ(rep.fidelity, 1.0);
}

TEST(CycleBenchmark, NativeGateOnDevice) {
  const auto factory = native_factory(ModulationDephasingPolicy{0.5});
  const auto rep = cycle_benchmark(factory, target011, kPi, fast_exact());
  const double exact = process_fidelity(factory(kPi), UnitaryMatrix(target011(kPi)));
  EXPECT_GE(rep.fidelity, 0.82);
  EXPECT_LE(rep.fidelity, 0.91);
  EXPECT_NEAR(rep.fidelity, exact, 0.01);
}

TEST(Qpt, IdealGateExact) {
  QptConfig c;
  c.shots = 0;
  const auto r = qpt(depolarized(0.0)(kPi), target011(kPi), c);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-8);
  EXPECT_LT(r.residual, 1e-8);
  EXPECT_FALSE(r.residual_flagged);
}

TEST(Qpt, ChoiOfDepolarizedGate) {
  QptConfig c;
  c.shots = 0;
  const double p = 0.1;
  const auto r = qpt(depolarized(p)(kPi / 3), target011(kPi / 3), c);
  EXPECT_NEAR(r.fidelity, depolarized_oracle(p, kPi / 3), 1e-8);
  // J = (1-p) |U>><<U| + p I/8 for this channel.
  const Matrix u = target011(kPi / 3);
  Vector vec_u = Vector::Zero(64);
  for (int i = 0; i < 8; ++i)
    for (int a = 0; a < 8; ++a) vec_u(i * 8 + a) = u(a, i);
  const Matrix expected = (1.0 - p) * vec_u * vec_u.adjoint() + p * identity(64) / 8.0;
  EXPECT_LT((r.choi - expected).norm(), 1e-8);
}

TEST(Qpt, SampledEstimateIsCptp) {
  const auto r = qpt(depolarized(0.1)(kPi), target011(kPi), QptConfig{});
  EXPECT_NEAR(r.fidelity, depolarized_oracle(0.1, kPi), 0.02);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r.choi, Eigen::EigenvaluesOnly);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
  EXPECT_LT((detail::partial_trace_out(r.choi, 8, 8) - identity(8)).norm(), 1e-8);
  EXPECT_GT(r.residual, 0.0);
}

TEST(Qpt, NativeGateOnDevice) {
  const auto factory = native_factory(ModulationDephasingPolicy{0.5});
  const auto ch = factory(kPi / 2);
  const double exact = process_fidelity(ch, UnitaryMatrix(target011(kPi / 2)));
  const auto r = qpt(ch, target011(kPi / 2), QptConfig{});
  EXPECT_NEAR(r.fidelity, exact, 0.015);
}

TEST(Qpt, RejectsBadTarget) {
  EXPECT_THROW(qpt(depolarized(0.0)(kPi), identity(4)), ValidationError);
  Matrix bad = identity(8);
  bad(0, 0) = 2.0;
  EXPECT_THROW(qpt(depolarized(0.0)(kPi), bad), ValidationError);
}

TEST(ProjectCptp, RandomHermitianBecomesChannel) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int d : {2, 4}) {
    Matrix j(d * d, d * d);
    for (int a = 0; a < d * d; ++a)
      for (int b = 0; b < d * d; ++b) j(a, b) = Complex(n(rng), n(rng));
    const Matrix x = project_cptp(j, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
    EXPECT_LT((detail::partial_trace_out(x, d, d) - identity(d)).norm(), 1e-9);
  }
}

TEST(ProjectCptp, FixesValidChannel) {
  std::mt19937_64 rng(3);
  const oracle::M u = oracle::random_unitary(4, rng);
  Vector v = Vector::Zero(16);
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 4; ++a) v(i * 4 + a) = u(a, i);
  const Matrix j = 0.7 * v * v.adjoint() + 0.3 * identity(16) / 4.0;
  EXPECT_LT((project_cptp(j, 4) - j).norm(), 1e-9);
}

TEST(DecompositionBenchmark, IdealIsPerfect) {
  const auto rep = benchmark_decomposition(IdealRealization{}, 1.1, fast_exact());
  EXPECT_NEAR(rep.fidelity, 1.0, 1e-9);
}

TEST(DecompositionBenchmark, DepolarizingFollowsProductLaw) {
  const double p2 = 0.01;
  const auto counts = count_gates(lower_to_native(decompose_ccphase(kPi)));
  const double per_gate = 1.0 - p2 * 15.0 / 16.0;
  const double product = std::pow(per_gate, counts.two_qubit);
  const auto rep = benchmark_decomposition(DepolarizingRealization{0.0, p2, 0.0}, kPi, fast_exact());
  EXPECT_NEAR(rep.fidelity, product, 0.01);
}

TEST(DecompositionBenchmark, NativeBeatsDecomposedOnDevice) {
  const auto m = DeviceModel::builtin();
  const std::array<int, 3> chain{10, 11, 12};
  for (bool policy : {false, true}) {
    NoiseOptions o;
    if (policy) o.modulation = ModulationDephasingPolicy{0.5};
    const double native = process_fidelity(noisy_sequence_channel(synthesize_on_chain(kPi, m, chain), m, chain, o),
                                           UnitaryMatrix(target011(kPi)));
    const DeviceRealization dev{m, chain, o};
    const double decomposed =
        process_fidelity(circuit_channel(lower_to_native(decompose_ccphase(kPi)), dev), UnitaryMatrix(ccphase_target(kPi, 7)));
    EXPECT_GT(native, decomposed + 0.1) << "policy " << policy;
  }
}

}  // namespace
