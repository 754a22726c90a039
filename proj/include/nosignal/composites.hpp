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

// Bipartite observables built from local pieces: sums C_A⊗𝟙 + 𝟙⊗C_B, which
// never signal, and products C_A⊗C_B, which signal through the kernel of C_A.
// Closed forms for their measurement channels serve as independent oracles
// for the general channel path.

#pragma once

#include <cstdint>

#include "nosignal/measurement.hpp"
#include "nosignal/operator_core.hpp"
#include "nosignal/signalling.hpp"

namespace nosignal {

struct LocalPair {
  HermitianOperator c_a;
  HermitianOperator c_b;

  std::size_t dim_a() const noexcept { return c_a.dim(); }
  std::size_t dim_b() const noexcept { return c_b.dim(); }
  CompositeStructure structure() const { return CompositeStructure({dim_a(), dim_b()}); }
};

/// C_A⊗𝟙_B + 𝟙_A⊗C_B.
HermitianOperator sum_local(const LocalPair& p);
/// C_A⊗C_B.
HermitianOperator tensor_local(const LocalPair& p);

/// Kernel projector of C_A⊗C_B from the local data:
/// E_A⁽⁰⁾⊗𝟙 + (𝟙 − E_A⁽⁰⁾)⊗E_B⁽⁰⁾, with E⁽⁰⁾ = 0 for an invertible factor.
HermitianOperator product_kernel_projector(const LocalPair& p, double tol_eig = kDefaultEigTol);

/// ℰ_{C_B}(O_B) under Perfect resolution.
HermitianOperator local_channel_action(const HermitianOperator& c, const HermitianOperator& o,
                                       double tol_eig = kDefaultEigTol);

/// 𝟙_A⊗ℰ_{C_B}(O_B): the measured sum observable acting on a receiver
/// observable 𝟙⊗O_B.
HermitianOperator closed_form_sum_channel(const LocalPair& p, const HermitianOperator& o_b,
                                          double tol_eig = kDefaultEigTol);
/// ℰ_{C_A}(O_A)⊗𝟙_B: the mirrored form for a sender-side observable.
HermitianOperator closed_form_sum_channel_sender(const LocalPair& p, const HermitianOperator& o_a,
                                                 double tol_eig = kDefaultEigTol);

/// E_A⁽⁰⁾⊗O_B + (𝟙 − E_A⁽⁰⁾)⊗ℰ_{C_B}(O_B). Throws InputError when two
/// distinct nonzero eigenvalue pairs give the same product μ_A·μ_B.
HermitianOperator closed_form_product_channel(const LocalPair& p, const HermitianOperator& o_b,
                                              double tol_eig = kDefaultEigTol);

/// [E_A⁽⁰⁾, O_A]⊗(O_B − ℰ_{C_B}(O_B)), the product-observable commutator
/// [ℰ(𝟙⊗O_B), O_A⊗𝟙] in factorized form.
ComplexMatrix factorized_product_commutator(const LocalPair& p, const HermitianOperator& o_a,
                                            const HermitianOperator& o_b, double tol_eig = kDefaultEigTol);

/// True iff both [E_A⁽⁰⁾, O_A] and O_B − ℰ_{C_B}(O_B) are nonzero beyond
/// the commutator tolerance.
bool product_signals(const LocalPair& p, const HermitianOperator& o_a, const HermitianOperator& o_b,
                     const SignallingOptions& options = {});

/// Measuring |1⟩⟨1|⊗σ_z as two local steps: a non-selective z measurement
/// of qubit A, then a z measurement of qubit B only on the A = |1⟩ branch.
DensityMatrix two_stage_apply(const DensityMatrix& rho);

/// |1⟩⟨1|⊗σ_z.
HermitianOperator controlled_sigma_z();

/// Two qubits; sender kicks qubit 0 with σ_x, the mediator measures
/// |1⟩⟨1|⊗σ_z with Perfect resolution, the receiver reads σ_x on qubit 1,
/// and ρ₀ = |ψ⟩⟨ψ| with |ψ⟩ = |0⟩⊗(|0⟩+|1⟩)/√2. ⟨O₃⟩ = cos²γ.
Scenario two_qubit_scenario();

enum class KernelShape {
  /// Nondegenerate nonzero spectra on both sides.
  None,
  /// C_A has a one-dimensional kernel; C_B is nondegenerate and invertible.
  SenderKernel,
};

/// Random pair with prescribed local spectra, rejecting draws where local
/// eigenvalues, pairwise sums or nonzero pairwise products coincide to 1e-6.
LocalPair random_local_pair(std::size_t d_a, std::size_t d_b, KernelShape shape, Rng& rng);

}  // namespace nosignal
