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

// Dense complex operator algebra on finite-dimensional composite Hilbert
// spaces: validated Hermitian operators and density matrices, clustered
// spectral decompositions, Kronecker products, local embeddings, the
// generalized Gell-Mann basis and seeded random generators.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "nosignal/error.hpp"

namespace nosignal {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative Hermiticity tolerance: ‖M − M†‖_F ≤ kHermitianTol · max(1, ‖M‖_F).
inline constexpr double kHermitianTol = 1e-10;
/// Default eigenvalue clustering tolerance (relative to max(1, ‖O‖₂)).
inline constexpr double kDefaultEigTol = 1e-8;
inline constexpr std::size_t kDefaultMaxDim = 4096;

/// Largest total Hilbert-space dimension any operation may create.
/// Defaults to 4096; the environment variable NOSIGNAL_MAX_DIM overrides it.
std::size_t max_total_dim();

/// Throws InputError unless `m` is square, non-empty and finite.
void validate_matrix(const ComplexMatrix& m, std::string_view what);

class HermitianOperator {
 public:
  /// Validates squareness, finiteness and Hermiticity to kHermitianTol.
  explicit HermitianOperator(ComplexMatrix m);

  /// (m + m†)/2; for results that are Hermitian up to round-off.
  static HermitianOperator symmetrized(const ComplexMatrix& m);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double frobenius_norm() const { return m_.norm(); }
  /// Largest eigenvalue magnitude.
  double spectral_norm() const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;

 private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// A validated quantum state: Hermitian, unit trace (1e-10) and positive
/// semidefinite down to -1e-10.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kPositivityTol = 1e-10;

  explicit DensityMatrix(ComplexMatrix m);

  /// |ψ⟩⟨ψ| for the normalized vector ψ; throws on a zero vector.
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  /// tr(ρ·O), real part; the imaginary part is round-off for Hermitian O.
  double expectation(const HermitianOperator& o) const;
  double purity() const;
  double min_eigenvalue() const;

 private:
  ComplexMatrix m_;
};

/// Distinct eigenvalue clusters and their spectral projectors, ordered by
/// decreasing |λ| with ties broken by decreasing λ.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<HermitianOperator> projectors;
  /// Index of the cluster at zero, if the operator has a kernel.
  std::optional<std::size_t> zero_index;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  /// Kernel projector, or the zero matrix of dimension `dim` if there is none.
  HermitianOperator kernel_projector_or_zero(std::size_t dim) const;
};

/// Eigen-decomposes `op` and clusters eigenvalues whose adjacent gap is at
/// most tol_eig · max(1, ‖op‖₂). Projector invariants (idempotence,
/// orthogonality, completeness, reconstruction) are checked to
/// 1e-9 · max(1, ‖op‖_F); a violation or solver failure throws NumericalError.
SpectralDecomposition spectral_decompose(const HermitianOperator& op,
                                         double tol_eig = kDefaultEigTol);

/// Ordered tensor factors of a composite space.
class CompositeStructure {
 public:
  explicit CompositeStructure(std::vector<std::size_t> factor_dims);

  const std::vector<std::size_t>& factor_dims() const noexcept { return dims_; }
  std::size_t num_factors() const noexcept { return dims_.size(); }
  std::size_t total_dim() const noexcept { return total_; }
  /// Product of the dimensions of the listed factors.
  std::size_t subsystem_dim(std::span<const std::size_t> factors) const;

  bool operator==(const CompositeStructure&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Kronecker product, (A⊗B)_{(i·d_B+k),(j·d_B+l)} = A_{ij} B_{kl}.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

/// 𝟙⊗…⊗op⊗…⊗𝟙 with `op` on factor `factor_index`.
HermitianOperator embed_local(const HermitianOperator& op, std::size_t factor_index,
                              const CompositeStructure& structure);

/// Embeds an operator acting on several (distinct) factors. The local
/// operator's multi-index runs over `factors` in the order listed, the last
/// one fastest, and acts as identity on every other factor.
HermitianOperator embed_factors(const HermitianOperator& op,
                                std::span<const std::size_t> factors,
                                const CompositeStructure& structure);

/// 𝟙_d followed by the d²−1 generalized Gell-Mann matrices: symmetric
/// e_jk+e_kj and antisymmetric −i(e_jk−e_kj) for j<k, then the traceless
/// diagonal ladder. Members are mutually trace-orthogonal.
std::vector<HermitianOperator> hermitian_basis(std::size_t d);

/// Real coefficients c with Σ c_k B_k = op, from the Gram system of the
/// vectorized basis. Throws NumericalError if the Gram matrix is singular.
Eigen::VectorXd basis_coefficients(const HermitianOperator& op,
                                   std::span<const HermitianOperator> basis);

/// Rank of the Gram matrix ⟨B_i, B_j⟩ = tr(B_i B_j) of a list of operators.
std::size_t gram_rank(std::span<const HermitianOperator> ops);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
HermitianOperator identity();
HermitianOperator x();
HermitianOperator y();
HermitianOperator z();
}  // namespace pauli

/// |i⟩⟨j| in dimension d.
ComplexMatrix ket_bra(std::size_t d, std::size_t i, std::size_t j);
/// |i⟩⟨i| in dimension d.
HermitianOperator basis_projector(std::size_t d, std::size_t i);

/// Seeded generator: std::mt19937_64, 53-bit uniforms (x >> 11)·2⁻⁵³ and
/// Box–Muller normals. Reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

ComplexMatrix ginibre(std::size_t d, Rng& rng);
/// Haar-random unitary from the QR decomposition of a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t d, Rng& rng);

/// GUE sample (G + G†)/2.
HermitianOperator random_hermitian(std::size_t d, Rng& rng);
HermitianOperator random_hermitian(std::size_t d, std::uint64_t seed);
/// G G† / tr(G G†).
DensityMatrix random_density(std::size_t d, Rng& rng);
DensityMatrix random_density(std::size_t d, std::uint64_t seed);
DensityMatrix random_pure_state(std::size_t d, Rng& rng);
DensityMatrix random_pure_state(std::size_t d, std::uint64_t seed);
/// V diag(eigenvalues) V† with a Haar-random V.
HermitianOperator random_hermitian_with_spectrum(std::span<const double> eigenvalues, Rng& rng);

}  // namespace nosignal
