// Copyright 2026 The nosignal Authors
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

#include "nosignal/signalling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

namespace nosignal {
namespace {

using testing::max_abs_diff;
using testing::MediatorFamily;

constexpr double kPi = std::numbers::pi;
const Complex I(0.0, 1.0);
const std::size_t kSender[] = {0};
const std::size_t kReceiver[] = {1};

// (|0⟩⟨1| − |1⟩⟨0|)⊗σ_x: the commutator of the two-qubit example.
ComplexMatrix example_commutator() {
  return tensor(ket_bra(2, 0, 1) - ket_bra(2, 1, 0), pauli::x().matrix());
}

// ⟨O₃⟩ along the protocol, each step written out with plain matrices: the
// kick via the general eigensolver of O₁, the measurement from the
// channel's projectors.
double reference_expectation(const Scenario& s, const MeasurementChannel& ch, double g) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(s.o1_embedded().matrix());
  const ComplexMatrix v = es.eigenvectors();
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::exp(I * g * es.eigenvalues()[k].real());
  const ComplexMatrix u = v * phases.asDiagonal() * v.inverse();
  const ComplexMatrix kicked = u * s.rho0().matrix() * u.adjoint();
  ComplexMatrix measured = ComplexMatrix::Zero(kicked.rows(), kicked.cols());
  for (const auto& p : ch.projectors()) measured += p.matrix() * kicked * p.matrix();
  return (measured * s.o3_embedded().matrix()).trace().real();
}

MeasurementChannel perfect_channel(const Scenario& s) { return build_channel(s.o2(), s.resolution()); }

// ---------------------------------------------------------------------------
// Scenario

TEST(Scenario, Validation) {
  const CompositeStructure qq({2, 2});
  const auto o2 = controlled_sigma_z();
  const auto rho = DensityMatrix::maximally_mixed(4);
  const auto perfect = MeasurementResolution::perfect();
  EXPECT_THROW(Scenario(qq, {0}, {0}, pauli::x(), o2, perfect, pauli::x(), rho), InputError);
  EXPECT_THROW(Scenario(qq, {0}, {2}, pauli::x(), o2, perfect, pauli::x(), rho), InputError);
  EXPECT_THROW(Scenario(qq, {}, {1}, pauli::x(), o2, perfect, pauli::x(), rho), InputError);
  EXPECT_THROW(Scenario(qq, {0}, {1}, HermitianOperator::identity(3), o2, perfect, pauli::x(), rho), InputError);
  EXPECT_THROW(Scenario(qq, {0}, {1}, pauli::x(), HermitianOperator::identity(2), perfect, pauli::x(), rho),
               InputError);
  EXPECT_THROW(Scenario(qq, {0}, {1}, pauli::x(), o2, perfect, pauli::x(), DensityMatrix::maximally_mixed(2)),
               InputError);
  EXPECT_NO_THROW(Scenario(qq, {0}, {1}, pauli::x(), o2, perfect, pauli::x(), rho));
}

TEST(Scenario, MultiFactorRoles) {
  // Sender owns factors {2, 0}; receiver owns factor 1.
  const CompositeStructure s({2, 3, 2});
  Rng rng(8);
  const Scenario sc(s, {2, 0}, {1}, random_hermitian(4, rng), random_hermitian(12, rng),
                    MeasurementResolution::perfect(), random_hermitian(3, rng), random_density(12, rng));
  EXPECT_LE(commutator(sc.o1_embedded().matrix(), sc.o3_embedded().matrix()).norm(), 1e-12);
  EXPECT_EQ(sc.o1_embedded().dim(), 12u);
}

// ---------------------------------------------------------------------------
// kick

TEST(Kick, ZeroAngleIsIdentity) {
  Rng rng(1);
  const DensityMatrix rho = random_density(4, rng);
  const HermitianOperator o1 = random_hermitian(4, rng);
  EXPECT_LT(max_abs_diff(kick(rho, o1, 0.0).matrix(), rho.matrix()), 1e-14);
}

TEST(Kick, HalfPiFlipsSenderQubit) {
  const Scenario s = two_qubit_scenario();
  const DensityMatrix kicked = kick(s.rho0(), s.o1_embedded(), kPi / 2);
  const ComplexMatrix sender = testing::trace_out_second(kicked.matrix(), 2, 2);
  EXPECT_LT(max_abs_diff(sender, ket_bra(2, 1, 1)), 1e-10);
  // e^{iπσ_x/2} = iσ_x, so the full state is (σ_x⊗𝟙)ρ₀(σ_x⊗𝟙).
  const ComplexMatrix flip = tensor(pauli::x().matrix(), ComplexMatrix::Identity(2, 2));
  EXPECT_LT(max_abs_diff(kicked.matrix(), flip * s.rho0().matrix() * flip), 1e-10);
}

TEST(Kick, PreservesSpectrumAndUnitarity) {
  Rng rng(2);
  for (int k = 0; k < 30; ++k) {
    const std::size_t d = 2 + rng.index(6);
    const DensityMatrix rho = random_density(d, rng);
    const HermitianOperator o1 = random_hermitian(d, rng);
    const double g = 4.0 * (rng.uniform() - 0.5);
    const KickUnitary ku(o1);
    const ComplexMatrix u = ku.unitary(g);
    const auto n = static_cast<Eigen::Index>(d);
    EXPECT_LE((u * u.adjoint() - ComplexMatrix::Identity(n, n)).norm(), 1e-10);
    const auto before = testing::general_eigenvalues(rho.matrix());
    const auto after = testing::general_eigenvalues(ku.apply(rho, g).matrix());
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(before[i], after[i], 1e-10);
  }
}

TEST(Kick, DimensionMismatch) {
  EXPECT_THROW(kick(DensityMatrix::maximally_mixed(2), HermitianOperator::identity(4), 1.0), InputError);
}

// ---------------------------------------------------------------------------
// simulate_protocol / expectation_curve

TEST(Simulate, TwoQubitCosSquared) {
  const Scenario s = two_qubit_scenario();
  EXPECT_NEAR(simulate_protocol(s, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(simulate_protocol(s, kPi / 2), 0.0, 1e-10);
  EXPECT_NEAR(simulate_protocol(s, kPi / 4), 0.5, 1e-10);
}

TEST(Simulate, MatchesStepByStepReference) {
  Rng rng(3);
  for (MediatorFamily f : testing::kAllFamilies) {
    for (int rep = 0; rep < 4; ++rep) {
      const Scenario s = testing::random_scenario(rng, f);
      const MeasurementChannel ch = perfect_channel(s);
      for (double g : {-1.3, 0.0, 0.4, 2.2}) {
        EXPECT_NEAR(simulate_protocol(s, g), reference_expectation(s, ch, g), 1e-10);
      }
    }
  }
}

TEST(ExpectationCurve, TwoQubitOverFullPeriod) {
  const auto grid = linear_grid(0.0, 2 * kPi, 65);
  const auto curve = expectation_curve(two_qubit_scenario(), grid);
  ASSERT_EQ(curve.size(), 65u);
  double worst = 0.0;
  for (const auto& [g, v] : curve) worst = std::max(worst, std::abs(v - std::cos(g) * std::cos(g)));
  EXPECT_LE(worst, 1e-9);
}

TEST(ExpectationCurve, SumOfLocalsIsFlat) {
  Rng rng(4);
  const auto grid = linear_grid(-kPi, kPi, 33);
  for (int rep = 0; rep < 5; ++rep) {
    const Scenario s = testing::random_scenario(rng, MediatorFamily::SumOfLocals);
    const auto curve = expectation_curve(s, grid);
    EXPECT_LE(testing::curve_spread(curve), 1e-9);
    // Independent route at the end points.
    const MeasurementChannel ch = perfect_channel(s);
    EXPECT_NEAR(reference_expectation(s, ch, -kPi), reference_expectation(s, ch, kPi), 1e-9);
  }
}

TEST(ExpectationCurve, SinglePointAndDeterminism) {
  const double g[] = {0.7};
  const auto curve = expectation_curve(two_qubit_scenario(), g);
  ASSERT_EQ(curve.size(), 1u);
  EXPECT_EQ(curve[0].first, 0.7);
  EXPECT_EQ(curve[0].second, simulate_protocol(two_qubit_scenario(), 0.7));
  const auto grid = linear_grid(0.0, 1.0, 7);
  EXPECT_EQ(expectation_curve(two_qubit_scenario(), grid), expectation_curve(two_qubit_scenario(), grid));
  EXPECT_THROW(expectation_curve(two_qubit_scenario(), std::span<const double>{}), InputError);
}

TEST(LinearGrid, Endpoints) {
  const auto g = linear_grid(0.0, 2 * kPi, 65);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 2 * kPi);
  EXPECT_NEAR(g[16], kPi / 2, 1e-15);
  EXPECT_EQ(linear_grid(1.5, 9.0, 1), std::vector<double>{1.5});
  EXPECT_THROW(linear_grid(0.0, 1.0, 0), InputError);
  EXPECT_THROW(linear_grid(0.0, INFINITY, 3), InputError);
}

// ---------------------------------------------------------------------------
// series_expectation

TEST(Series, ZerothOrderIsUnkickedExpectation) {
  Rng rng(5);
  const Scenario s = testing::random_scenario(rng, MediatorFamily::RandomFull);
  const MeasurementChannel ch = perfect_channel(s);
  const double direct = (s.rho0().matrix() * conjugate_observable(ch, s.o3_embedded()).matrix()).trace().real();
  EXPECT_NEAR(series_expectation(s, 0.8, 0), direct, 1e-12);
}

TEST(Series, TwoQubitTwentiethOrder) {
  const Scenario s = two_qubit_scenario();
  EXPECT_NEAR(series_expectation(s, 0.3, 20), simulate_protocol(s, 0.3), 1e-9);
  EXPECT_NEAR(series_expectation(s, 0.3, 20), std::cos(0.3) * std::cos(0.3), 1e-9);
}

TEST(Series, TwoQubitFirstOrderTermVanishes) {
  const Scenario s = two_qubit_scenario();
  // tr(ρ₀ C) by hand with C the explicit example commutator.
  EXPECT_NEAR(std::abs((s.rho0().matrix() * example_commutator()).trace()), 0.0, 1e-15);
  EXPECT_NEAR(series_expectation(s, 0.3, 1) - series_expectation(s, 0.3, 0), 0.0, 1e-15);
  // Second order carries −γ².
  EXPECT_NEAR(series_expectation(s, 0.3, 2) - series_expectation(s, 0.3, 1), -0.09, 1e-12);
}

TEST(Series, AgreesWithSimulationOnRandomScenarios) {
  Rng rng(6);
  for (int k = 0; k < 30; ++k) {
    const Scenario s = testing::random_scenario(rng, testing::kAllFamilies[k % 6]);
    const double norm = s.o1_local().spectral_norm();
    for (double frac : {-1.0, -0.4, 0.5, 1.0}) {
      const double g = 2.0 * frac / norm;
      EXPECT_NEAR(series_expectation(s, g, 20), simulate_protocol(s, g), 1e-8) << "k=" << k << " g=" << g;
    }
  }
}

// ---------------------------------------------------------------------------
// is_signalling / check_channel

TEST(IsSignalling, TwoQubitExampleSignals) {
  const SignalVerdict v = is_signalling(two_qubit_scenario());
  EXPECT_TRUE(v.signalling);
  ASSERT_TRUE(v.witness.has_value());
  // Basis index 1 is σ_x and 2 is σ_y on a qubit.
  EXPECT_TRUE(v.witness->sender_index == 1 || v.witness->sender_index == 2);
  EXPECT_TRUE(v.witness->receiver_index == 1 || v.witness->receiver_index == 2);
  EXPECT_NEAR(v.max_commutator_norm, v.witness->commutator_norm, 0.0);
  // ‖[|0⟩⟨0|⊗σ_x, σ_x⊗𝟙]‖_F = ‖(|0⟩⟨1|−|1⟩⟨0|)⊗σ_x‖_F = 2.
  EXPECT_NEAR(v.max_commutator_norm, example_commutator().norm(), 1e-12);
}

TEST(IsSignalling, SumOfQutritLocalsDoesNot) {
  Rng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    const LocalPair p = random_local_pair(3, 3, KernelShape::None, rng);
    const SignalVerdict v =
        is_signalling(sum_local(p), MeasurementResolution::perfect(), p.structure(), kSender, kReceiver);
    EXPECT_FALSE(v.signalling);
    EXPECT_FALSE(v.witness.has_value());
    EXPECT_LE(v.max_commutator_norm, 1e-9);
  }
}

TEST(IsSignalling, IdentityMediatorDoesNot) {
  const CompositeStructure s({3, 2});
  const SignalVerdict v =
      is_signalling(HermitianOperator::identity(6), MeasurementResolution::perfect(), s, kSender, kReceiver);
  EXPECT_FALSE(v.signalling);
  EXPECT_EQ(v.max_commutator_norm, 0.0);
}

TEST(IsSignalling, RejectsBadRoles) {
  const CompositeStructure s({2, 2});
  const std::size_t both[] = {0, 1};
  const std::size_t bad[] = {3};
  const auto o2 = controlled_sigma_z();
  const auto res = MeasurementResolution::perfect();
  EXPECT_THROW(is_signalling(o2, res, s, both, kReceiver), InputError);
  EXPECT_THROW(is_signalling(o2, res, s, kSender, bad), InputError);
  EXPECT_THROW(is_signalling(o2, res, s, std::span<const std::size_t>{}, kReceiver), InputError);
  EXPECT_THROW(is_signalling(HermitianOperator::identity(3), res, s, kSender, kReceiver), InputError);
}

TEST(IsSignalling, VerdictInvariantUnderScaling) {
  Rng rng(9);
  const auto perfect = MeasurementResolution::perfect();
  for (int k = 0; k < 10; ++k) {
    const Scenario s = testing::random_scenario(rng, testing::kAllFamilies[k % 5]);
    const CompositeStructure& st = s.structure();
    const bool base = is_signalling(s.o2(), perfect, st, kSender, kReceiver).signalling;
    for (double c : {1e-3, 1e3}) {
      EXPECT_EQ(is_signalling(s.o2() * c, perfect, st, kSender, kReceiver).signalling, base);
    }
  }
}

// Brute-force oracle over the same basis pairs, independent of check_channel.
double brute_force_max(const MeasurementChannel& ch, const CompositeStructure& s) {
  double best = 0.0;
  for (const auto& a : hermitian_basis(s.factor_dims()[0])) {
    const ComplexMatrix ea = tensor(a.matrix(), ComplexMatrix::Identity(
                                                    static_cast<Eigen::Index>(s.factor_dims()[1]),
                                                    static_cast<Eigen::Index>(s.factor_dims()[1])));
    for (const auto& b : hermitian_basis(s.factor_dims()[1])) {
      const ComplexMatrix eb = tensor(ComplexMatrix::Identity(static_cast<Eigen::Index>(s.factor_dims()[0]),
                                                              static_cast<Eigen::Index>(s.factor_dims()[0])),
                                      b.matrix());
      ComplexMatrix heis = ComplexMatrix::Zero(eb.rows(), eb.cols());
      for (const auto& p : ch.projectors()) heis += p.matrix() * eb * p.matrix();
      best = std::max(best, (heis * ea - ea * heis).norm());
    }
  }
  return best;
}

TEST(IsSignalling, MaxNormMatchesBruteForce) {
  Rng rng(10);
  for (int k = 0; k < 24; ++k) {
    const Scenario s = testing::random_scenario(rng, testing::kAllFamilies[k % 6]);
    const MeasurementChannel ch = perfect_channel(s);
    const SignalVerdict v = check_channel(ch, s.structure(), kSender, kReceiver);
    EXPECT_NEAR(v.max_commutator_norm, brute_force_max(ch, s.structure()), 1e-10);
  }
}

TEST(Claim, NonSignallingMeansFlatCurves) {
  Rng rng(11);
  const auto grid = linear_grid(-3.0, 3.0, 13);
  for (MediatorFamily f : {MediatorFamily::SumOfLocals, MediatorFamily::SenderLocal, MediatorFamily::Identity}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Scenario s = testing::random_scenario(rng, f);
      ASSERT_FALSE(is_signalling(s).signalling);
      EXPECT_LE(testing::curve_spread(expectation_curve(s, grid)), 1e-8);
    }
  }
}

TEST(Claim, SignallingMeansWitnessSlope) {
  Rng rng(12);
  int signalling = 0;
  for (int k = 0; k < 40; ++k) {
    const Scenario s = testing::random_scenario(
        rng, k % 2 == 0 ? MediatorFamily::RandomFull : MediatorFamily::ProductWithKernel);
    const MeasurementChannel ch = perfect_channel(s);
    const auto w = find_witness(ch, s.structure(), kSender, kReceiver);
    if (!is_signalling(s).signalling) {
      EXPECT_FALSE(w.has_value());
      continue;
    }
    ++signalling;
    ASSERT_TRUE(w.has_value());
    const Scenario ws = witness_scenario(s, *w);
    const double top = testing::general_eigenvalues(I * w->commutator).back();
    const double bottom = testing::general_eigenvalues(I * w->commutator).front();
    const double spectral = std::max(std::abs(top), std::abs(bottom));
    EXPECT_GE(std::abs(finite_difference_slope(ws)), spectral - 1e-6);
    EXPECT_NEAR(std::abs(w->witness.slope), spectral, 1e-10);
  }
  EXPECT_GT(signalling, 20);
}

TEST(Claim, BasisReductionSoundness) {
  Rng rng(13);
  for (int k = 0; k < 20; ++k) {
    const Scenario s = testing::random_scenario(rng, testing::kAllFamilies[k % 6]);
    const MeasurementChannel ch = perfect_channel(s);
    const SignalVerdict v = check_channel(ch, s.structure(), kSender, kReceiver);
    const HermitianOperator a = random_hermitian(s.structure().factor_dims()[0], rng);
    const HermitianOperator b = random_hermitian(s.structure().factor_dims()[1], rng);
    const ComplexMatrix c = signal_commutator(ch, embed_local(a, 0, s.structure()), embed_local(b, 1, s.structure()));
    if (!v.signalling) EXPECT_LE(c.norm(), 1e-8);

    // Bilinearity: C(a, b) = Σ aᵢ bⱼ C(Gᵢ, Gⱼ).
    const auto ga = hermitian_basis(a.dim());
    const auto gb = hermitian_basis(b.dim());
    const Eigen::VectorXd ca = basis_coefficients(a, ga), cb = basis_coefficients(b, gb);
    ComplexMatrix sum = ComplexMatrix::Zero(c.rows(), c.cols());
    for (std::size_t i = 0; i < ga.size(); ++i)
      for (std::size_t j = 0; j < gb.size(); ++j)
        sum += ca[static_cast<Eigen::Index>(i)] * cb[static_cast<Eigen::Index>(j)] *
               signal_commutator(ch, embed_local(ga[i], 0, s.structure()), embed_local(gb[j], 1, s.structure()));
    EXPECT_LE((sum - c).norm(), 1e-9 * (1.0 + c.norm()));
  }
}

TEST(Claim, CommutatorIsAntiHermitian) {
  Rng rng(14);
  for (int k = 0; k < 60; ++k) {
    const Scenario s = testing::random_scenario(rng, testing::kAllFamilies[k % 6]);
    const ComplexMatrix c = signal_commutator(perfect_channel(s), s.o1_embedded(), s.o3_embedded());
    EXPECT_LE((c + c.adjoint()).norm(), 1e-9 * c.norm() + 1e-12);
  }
}

// ---------------------------------------------------------------------------
// witness_state

TEST(WitnessState, ExampleCommutator) {
  const ComplexMatrix c = example_commutator();
  // Oracle: iC has spectrum {−1, −1, 1, 1}.
  const auto spectrum = testing::general_eigenvalues(I * c);
  EXPECT_NEAR(spectrum[0], -1.0, 1e-12);
  EXPECT_NEAR(spectrum[1], -1.0, 1e-12);
  EXPECT_NEAR(spectrum[2], 1.0, 1e-12);
  EXPECT_NEAR(spectrum[3], 1.0, 1e-12);

  const WitnessState w = witness_state(c);
  EXPECT_NEAR(std::abs(w.slope), 1.0, 1e-12);
  EXPECT_NEAR(w.state.purity(), 1.0, 1e-12);
  // slope = i·tr(ρC) recomputed from the returned vector.
  const Complex direct = I * (w.vector.adjoint() * c * w.vector)(0, 0);
  EXPECT_NEAR(direct.real(), w.slope, 1e-12);
  EXPECT_NEAR(direct.imag(), 0.0, 1e-12);
}

TEST(WitnessState, Errors) {
  EXPECT_THROW(witness_state(ComplexMatrix::Zero(4, 4)), InputError);
  EXPECT_THROW(witness_state(ComplexMatrix::Identity(2, 2)), InputError);  // Hermitian, not anti-Hermitian
}

TEST(WitnessState, FiniteDifferenceMatchesSlope) {
  const Scenario s = two_qubit_scenario();
  const auto w = find_witness(perfect_channel(s), s.structure(), kSender, kReceiver);
  ASSERT_TRUE(w.has_value());
  const Scenario ws = witness_scenario(s, *w);
  EXPECT_NEAR(finite_difference_slope(ws), w->witness.slope, 1e-6);
  EXPECT_NEAR(std::abs(w->witness.slope), 1.0, 1e-12);
  // Central difference by hand.
  const double h = 1e-4;
  EXPECT_NEAR((simulate_protocol(ws, h) - simulate_protocol(ws, -h)) / (2 * h), w->witness.slope, 1e-6);
}

TEST(WitnessState, NoneForNonSignalling) {
  const CompositeStructure s({2, 2});
  const MeasurementChannel ch = MeasurementChannel::identity(4);
  EXPECT_FALSE(find_witness(ch, s, kSender, kReceiver).has_value());
}

// ---------------------------------------------------------------------------
// find_nonsignalling_coarsening

TEST(Coarsening, TwoQubitMergesPlusMinus) {
  const Coarsening c =
      find_nonsignalling_coarsening(controlled_sigma_z(), CompositeStructure({2, 2}), kSender, kReceiver);
  EXPECT_EQ(c.partition, (MergeSpec{{0, 1}, {2}}));
  ASSERT_EQ(c.merges.size(), 1u);
  EXPECT_EQ(c.merges[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_FALSE(c.verdict.signalling);
  ASSERT_EQ(c.channel.size(), 2u);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  EXPECT_LT(max_abs_diff(c.channel.projectors()[0].matrix(), tensor(ket_bra(2, 1, 1), i2)), 1e-12);
  EXPECT_LT(max_abs_diff(c.channel.projectors()[1].matrix(), tensor(ket_bra(2, 0, 0), i2)), 1e-12);
}

TEST(Coarsening, AlreadyNonSignallingIsUnchanged) {
  Rng rng(15);
  const LocalPair p = random_local_pair(2, 3, KernelShape::None, rng);
  const Coarsening c = find_nonsignalling_coarsening(sum_local(p), p.structure(), kSender, kReceiver);
  EXPECT_TRUE(c.merges.empty());
  EXPECT_EQ(c.partition.size(), 6u);
  EXPECT_EQ(c.channel.size(), 6u);
  EXPECT_FALSE(c.verdict.signalling);
}

TEST(Coarsening, RandomSignallingInputsEndNonSignalling) {
  Rng rng(16);
  const CompositeStructure s({2, 2});
  for (int k = 0; k < 15; ++k) {
    const HermitianOperator o2 = random_hermitian(4, rng);
    ASSERT_TRUE(is_signalling(o2, MeasurementResolution::perfect(), s, kSender, kReceiver).signalling);
    const Coarsening c = find_nonsignalling_coarsening(o2, s, kSender, kReceiver);
    EXPECT_FALSE(c.verdict.signalling);
    EXPECT_FALSE(check_channel(c.channel, s, kSender, kReceiver).signalling);
    EXPECT_EQ(c.partition.size(), 4 - c.merges.size());
    EXPECT_NO_THROW(validate_partition(c.partition, 4));
  }
}

TEST(Coarsening, FullMergeNeverSignals) {
  Rng rng(17);
  for (int k = 0; k < 10; ++k) {
    const Scenario s = testing::random_scenario(rng, MediatorFamily::RandomFull);
    const MeasurementChannel ch = perfect_channel(s);
    MergeSpec all(1);
    for (std::size_t i = 0; i < ch.size(); ++i) all[0].push_back(i);
    EXPECT_FALSE(check_channel(coarsen(ch, all), s.structure(), kSender, kReceiver).signalling);
  }
}

}  // namespace
}  // namespace nosignal
