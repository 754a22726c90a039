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

// The kick–measure–measure protocol between a sender, a mediator who
// performs a non-selective measurement on the whole system, and a receiver;
// the exact no-signalling test [ℰ(O₃), O₁] = 0 over local Hermitian bases;
// first-order witness states; and a greedy coarse-graining search.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nosignal/measurement.hpp"
#include "nosignal/operator_core.hpp"

namespace nosignal {

struct SignallingOptions {
  double tol_eig = kDefaultEigTol;
  /// Relative commutator tolerance; a basis pair signals when
  /// ‖C‖_F > tol_comm · (1 + ‖O₁‖_F ‖ℰ(O₃)‖_F).
  double tol_comm = 1e-9;
};

/// Throws InputError unless both role sets are nonempty, duplicate-free,
/// in range and disjoint.
void validate_roles(const CompositeStructure& structure, std::span<const std::size_t> sender,
                    std::span<const std::size_t> receiver);

/// One run of the three-party protocol: the sender kicks with O₁, the
/// mediator measures O₂ at the given resolution, the receiver reads ⟨O₃⟩.
class Scenario {
 public:
  Scenario(CompositeStructure structure, std::vector<std::size_t> sender_factors,
           std::vector<std::size_t> receiver_factors, HermitianOperator o1_local,
           HermitianOperator o2, MeasurementResolution resolution, HermitianOperator o3_local,
           DensityMatrix rho0);

  const CompositeStructure& structure() const noexcept { return structure_; }
  const std::vector<std::size_t>& sender_factors() const noexcept { return sender_; }
  const std::vector<std::size_t>& receiver_factors() const noexcept { return receiver_; }
  const HermitianOperator& o1_local() const noexcept { return o1_local_; }
  const HermitianOperator& o2() const noexcept { return o2_; }
  const MeasurementResolution& resolution() const noexcept { return resolution_; }
  const HermitianOperator& o3_local() const noexcept { return o3_local_; }
  const DensityMatrix& rho0() const noexcept { return rho0_; }
  const HermitianOperator& o1_embedded() const noexcept { return o1_embedded_; }
  const HermitianOperator& o3_embedded() const noexcept { return o3_embedded_; }

  Scenario with_local_observables(HermitianOperator o1_local, HermitianOperator o3_local) const;
  Scenario with_state(DensityMatrix rho0) const;
  Scenario with_resolution(MeasurementResolution resolution) const;

 private:
  CompositeStructure structure_;
  std::vector<std::size_t> sender_;
  std::vector<std::size_t> receiver_;
  HermitianOperator o1_local_;
  HermitianOperator o2_;
  MeasurementResolution resolution_;
  HermitianOperator o3_local_;
  DensityMatrix rho0_;
  HermitianOperator o1_embedded_;
  HermitianOperator o3_embedded_;
};

/// U_γ = e^{iγG} assembled from the spectral decomposition of the generator.
class KickUnitary {
 public:
  explicit KickUnitary(const HermitianOperator& generator, double tol_eig = kDefaultEigTol);

  /// Throws NumericalError if ‖U U† − 𝟙‖_F > 1e-10.
  ComplexMatrix unitary(double gamma) const;
  DensityMatrix apply(const DensityMatrix& rho, double gamma) const;

 private:
  SpectralDecomposition spectrum_;
  std::size_t dim_;
};

/// ρ ↦ U_γ ρ U_γ† with U_γ = e^{iγ O₁}.
DensityMatrix kick(const DensityMatrix& rho, const HermitianOperator& o1_embedded, double gamma,
                   double tol_eig = kDefaultEigTol);

/// tr(ℰ_{O₂}(U_γ ρ₀ U_γ†) · O₃).
double simulate_protocol(const Scenario& scenario, double gamma, const SignallingOptions& options = {});

/// Pointwise simulate_protocol over `grid`, in grid order.
std::vector<std::pair<double, double>> expectation_curve(const Scenario& scenario,
                                                         std::span<const double> grid,
                                                         const SignallingOptions& options = {});

/// Σ_{n≤order} (iγ)ⁿ/n! tr(ρ₀ [ℰ(O₃), O₁]ₙ) with [X,Y]₀ = X and
/// [X,Y]ₙ₊₁ = [[X,Y]ₙ, Y]. Throws NumericalError if the imaginary residue
/// exceeds 1e-9 · max(1, |value|).
double series_expectation(const Scenario& scenario, double gamma, std::size_t order,
                          const SignallingOptions& options = {});

struct BasisPair {
  std::size_t sender_index;
  std::size_t receiver_index;
  double commutator_norm;
};

struct SignalVerdict {
  bool signalling = false;
  /// Basis pair with the largest ‖[ℰ(G_r), G_s]‖_F; set only when signalling.
  std::optional<BasisPair> witness;
  double max_commutator_norm = 0.0;
};

/// Decides whether measuring with `channel` lets the sender signal the
/// receiver, by testing [ℰ(G_r), G_s] = 0 for every pair of local
/// hermitian_basis elements. Since the map (O₁, O₃) ↦ [ℰ(O₃), O₁] is
/// bilinear, this is equivalent to the condition for all local observables.
SignalVerdict check_channel(const MeasurementChannel& channel, const CompositeStructure& structure,
                            std::span<const std::size_t> sender, std::span<const std::size_t> receiver,
                            const SignallingOptions& options = {});

SignalVerdict is_signalling(const HermitianOperator& o2, const MeasurementResolution& resolution,
                            const CompositeStructure& structure, std::span<const std::size_t> sender,
                            std::span<const std::size_t> receiver, const SignallingOptions& options = {});

SignalVerdict is_signalling(const Scenario& scenario, const SignallingOptions& options = {});

/// [ℰ(O₃), O₁] for the scenario's embedded observables.
ComplexMatrix signal_commutator(const MeasurementChannel& channel, const HermitianOperator& o1_embedded,
                                const HermitianOperator& o3_embedded);

struct WitnessState {
  DensityMatrix state;
  ComplexVector vector;
  /// d⟨O₃⟩/dγ at γ = 0, i·tr(ρ C).
  double slope;
};

/// Pure state on the top-|eigenvalue| eigenvector of iC, which maximizes the
/// first-order response |i·tr(ρC)| = ‖iC‖₂ over pure states. C must be
/// anti-Hermitian; throws InputError when ‖C‖_F ≤ zero_tol (no witness).
WitnessState witness_state(const ComplexMatrix& c, double zero_tol = 1e-12);

struct SignalWitness {
  BasisPair pair;
  HermitianOperator o1_local;
  HermitianOperator o3_local;
  ComplexMatrix commutator;
  WitnessState witness;
};

/// Witnessing basis pair and state for a signalling channel; nullopt when
/// the channel does not signal.
std::optional<SignalWitness> find_witness(const MeasurementChannel& channel,
                                          const CompositeStructure& structure,
                                          std::span<const std::size_t> sender,
                                          std::span<const std::size_t> receiver,
                                          const SignallingOptions& options = {});

/// `base` with the witness pair as O₁, O₃ and the witness state as ρ₀.
Scenario witness_scenario(const Scenario& base, const SignalWitness& witness);

/// Central-difference derivative of ⟨O₃⟩ at γ = 0.
double finite_difference_slope(const Scenario& scenario, double h = 1e-4,
                               const SignallingOptions& options = {});

struct Coarsening {
  /// Partition of the Perfect channel's projector indices.
  MergeSpec partition;
  /// Block pairs merged, in order; empty when the Perfect channel is already
  /// non-signalling.
  std::vector<std::pair<std::size_t, std::size_t>> merges;
  MeasurementChannel channel;
  SignalVerdict verdict;
};

/// Greedy search from the Perfect channel: repeatedly merge the block pair
/// whose merge gives the smallest max commutator norm (ties: lowest pair)
/// until the channel no longer signals. Always terminates, since the single
/// block channel is the identity. Not guaranteed to be the finest
/// non-signalling coarsening.
Coarsening find_nonsignalling_coarsening(const HermitianOperator& o2, const CompositeStructure& structure,
                                         std::span<const std::size_t> sender,
                                         std::span<const std::size_t> receiver,
                                         const SignallingOptions& options = {});

/// `points` evenly spaced values from start to stop inclusive.
std::vector<double> linear_grid(double start, double stop, std::size_t points);

}  // namespace nosignal
