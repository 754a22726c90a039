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

#include "nosignal/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

namespace nosignal {

std::size_t max_total_dim() {
  if (const char* env = std::getenv("NOSIGNAL_MAX_DIM"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxDim;
}

void validate_matrix(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw InputError(std::string(what) + ": matrix must have dimension >= 1");
  }
  if (m.rows() != m.cols()) {
    throw InputError(std::string(what) + ": matrix must be square, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  validate_matrix(m_, "hermitian operator");
  const double defect = (m_ - m_.adjoint()).norm();
  if (defect > kHermitianTol * std::max(1.0, m_.norm())) {
    throw InputError("operator is not Hermitian: ||M - M^dag||_F = " + std::to_string(defect));
  }
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  validate_matrix(m, "hermitian operator");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return HermitianOperator(std::move(h), Trusted{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Identity(n, n));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return HermitianOperator(ComplexMatrix::Zero(n, n));
}

double HermitianOperator::spectral_norm() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw InputError("operator sum: dimension mismatch");
  return HermitianOperator(m_ + o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw InputError("operator difference: dimension mismatch");
  return HermitianOperator(m_ - o.m_, Trusted{});
}

HermitianOperator HermitianOperator::operator*(double s) const {
  return HermitianOperator(m_ * s, Trusted{});
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  validate_matrix(m_, "density matrix");
  const double defect = (m_ - m_.adjoint()).norm();
  if (defect > kHermitianTol * std::max(1.0, m_.norm())) {
    throw InputError("density matrix is not Hermitian");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTol || std::abs(tr.imag()) > kTraceTol) {
    throw InputError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  if (min_eigenvalue() < -kPositivityTol) {
    throw InputError("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  if (psi.size() == 0 || !psi.allFinite()) throw InputError("state vector is empty or non-finite");
  const double n = psi.norm();
  if (n == 0.0) throw InputError("state vector is zero");
  const ComplexVector v = psi / n;
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

double DensityMatrix::expectation(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw InputError("expectation: dimension mismatch");
  // tr(ρO) = Σ_ij ρ_ij O_ji
  return (m_.cwiseProduct(o.matrix().transpose())).sum().real();
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver did not converge");
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Spectral decomposition

HermitianOperator SpectralDecomposition::kernel_projector_or_zero(std::size_t dim) const {
  if (zero_index) return projectors[*zero_index];
  return HermitianOperator::zero(dim);
}

namespace {

struct Cluster {
  double value;
  HermitianOperator projector;
};

void check_decomposition(const SpectralDecomposition& sd, const HermitianOperator& op) {
  const double tol = 1e-9 * std::max(1.0, op.frobenius_norm());
  const auto n = static_cast<Eigen::Index>(op.dim());
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix rebuilt = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < sd.size(); ++i) {
    const ComplexMatrix& p = sd.projectors[i].matrix();
    if ((p * p - p).norm() > tol) throw NumericalError("spectral projector is not idempotent");
    for (std::size_t j = i + 1; j < sd.size(); ++j) {
      if ((p * sd.projectors[j].matrix()).norm() > tol) {
        throw NumericalError("spectral projectors are not mutually orthogonal");
      }
    }
    sum += p;
    rebuilt += sd.eigenvalues[i] * p;
  }
  if ((sum - ComplexMatrix::Identity(n, n)).norm() > tol) {
    throw NumericalError("spectral projectors do not resolve the identity");
  }
  if ((rebuilt - op.matrix()).norm() > tol) {
    throw NumericalError("spectral decomposition does not reconstruct the operator");
  }
}

}  // namespace

SpectralDecomposition spectral_decompose(const HermitianOperator& op, double tol_eig) {
  if (!(tol_eig > 0.0)) throw InputError("eigenvalue clustering tolerance must be positive");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition did not converge");

  const Eigen::VectorXd& raw = es.eigenvalues();  // ascending
  const ComplexMatrix& vecs = es.eigenvectors();
  const double threshold = tol_eig * std::max(1.0, raw.cwiseAbs().maxCoeff());

  std::vector<Cluster> clusters;
  Eigen::Index begin = 0;
  const Eigen::Index n = raw.size();
  for (Eigen::Index k = 1; k <= n; ++k) {
    if (k < n && raw[k] - raw[k - 1] <= threshold) continue;
    const Eigen::Index count = k - begin;
    const double mean = raw.segment(begin, count).mean();
    const auto block = vecs.middleCols(begin, count);
    clusters.push_back({mean, HermitianOperator::symmetrized(block * block.adjoint())});
    begin = k;
  }

  std::stable_sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (std::abs(a.value) != std::abs(b.value)) return std::abs(a.value) > std::abs(b.value);
    return a.value > b.value;
  });

  SpectralDecomposition sd;
  double best_zero = threshold;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const double v = clusters[i].value;
    if (std::abs(v) <= best_zero) {
      best_zero = std::abs(v);
      sd.zero_index = i;
    }
    sd.eigenvalues.push_back(v);
    sd.projectors.push_back(std::move(clusters[i].projector));
  }
  check_decomposition(sd, op);
  return sd;
}

// ---------------------------------------------------------------------------
// Composite structure and embeddings

CompositeStructure::CompositeStructure(std::vector<std::size_t> factor_dims)
    : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw InputError("composite structure needs at least one factor");
  const std::size_t cap = max_total_dim();
  for (std::size_t d : dims_) {
    if (d == 0) throw InputError("factor dimensions must be positive");
    if (total_ > cap / d) {
      throw InputError("total dimension exceeds the maximum of " + std::to_string(cap));
    }
    total_ *= d;
  }
}

std::size_t CompositeStructure::subsystem_dim(std::span<const std::size_t> factors) const {
  std::size_t d = 1;
  for (std::size_t f : factors) {
    if (f >= dims_.size()) throw InputError("factor index " + std::to_string(f) + " out of range");
    d *= dims_[f];
  }
  return d;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = static_cast<std::size_t>(a.rows());
  const std::size_t db = static_cast<std::size_t>(b.rows());
  if (a.rows() != a.cols() || b.rows() != b.cols()) throw InputError("tensor: operands must be square");
  if (da != 0 && db > max_total_dim() / da) {
    throw InputError("tensor: dimension " + std::to_string(da) + "x" + std::to_string(db) +
                     " exceeds the maximum of " + std::to_string(max_total_dim()));
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(tensor(a.matrix(), b.matrix()));
}

HermitianOperator embed_local(const HermitianOperator& op, std::size_t factor_index,
                              const CompositeStructure& structure) {
  const std::size_t f[] = {factor_index};
  return embed_factors(op, f, structure);
}

HermitianOperator embed_factors(const HermitianOperator& op, std::span<const std::size_t> factors,
                                const CompositeStructure& structure) {
  if (factors.empty()) throw InputError("embed: no target factors");
  const auto& dims = structure.factor_dims();
  std::vector<bool> used(dims.size(), false);
  for (std::size_t f : factors) {
    if (f >= dims.size()) throw InputError("embed: factor index " + std::to_string(f) + " out of range");
    if (used[f]) throw InputError("embed: factor index " + std::to_string(f) + " repeated");
    used[f] = true;
  }
  if (op.dim() != structure.subsystem_dim(factors)) {
    throw InputError("embed: operator dimension " + std::to_string(op.dim()) +
                     " does not match factor dimension " +
                     std::to_string(structure.subsystem_dim(factors)));
  }

  // Row-major strides of the full space (factor 0 most significant).
  std::vector<std::size_t> stride(dims.size());
  std::size_t s = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    stride[k] = s;
    s *= dims[k];
  }
  const std::size_t total = structure.total_dim();

  // For each full index: its local index on the target factors and the
  // residual index on the complement.
  std::vector<std::size_t> local(total), rest(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t li = 0;
    std::size_t ri = i;
    for (std::size_t f : factors) {
      const std::size_t digit = (i / stride[f]) % dims[f];
      li = li * dims[f] + digit;
      ri -= digit * stride[f];
    }
    local[i] = li;
    rest[i] = ri;
  }

  const auto n = static_cast<Eigen::Index>(total);
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  const ComplexMatrix& m = op.matrix();
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (rest[i] == rest[j]) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            m(static_cast<Eigen::Index>(local[i]), static_cast<Eigen::Index>(local[j]));
      }
    }
  }
  return HermitianOperator(std::move(out));
}

// ---------------------------------------------------------------------------
// Hermitian basis

std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
  if (d == 0) throw InputError("hermitian_basis: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<HermitianOperator> basis;
  basis.reserve(d * d);
  basis.push_back(HermitianOperator::identity(d));
  const Complex i_unit(0.0, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      basis.emplace_back(std::move(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = -i_unit;
      anti(k, j) = i_unit;
      basis.emplace_back(std::move(anti));
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < l; ++k) diag(k, k) = scale;
    diag(l, l) = -scale * static_cast<double>(l);
    basis.emplace_back(std::move(diag));
  }
  return basis;
}

namespace {

Eigen::MatrixXd gram_matrix(std::span<const HermitianOperator> ops) {
  const auto n = static_cast<Eigen::Index>(ops.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      // tr(A B) for Hermitian A, B is real.
      const double v =
          (ops[i].matrix().cwiseProduct(ops[j].matrix().transpose())).sum().real();
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

}  // namespace

std::size_t gram_rank(std::span<const HermitianOperator> ops) {
  if (ops.empty()) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram_matrix(ops));
  return static_cast<std::size_t>(lu.rank());
}

Eigen::VectorXd basis_coefficients(const HermitianOperator& op,
                                   std::span<const HermitianOperator> basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  for (const auto& b : basis) {
    if (b.dim() != op.dim()) throw InputError("basis_coefficients: dimension mismatch");
  }
  const Eigen::MatrixXd g = gram_matrix(basis);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs[i] = (basis[i].matrix().cwiseProduct(op.matrix().transpose())).sum().real();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible()) throw NumericalError("basis_coefficients: Gram matrix is singular");
  return lu.solve(rhs);
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw InputError("commutator: dimension mismatch");
  }
  return a * b - b * a;
}

// ---------------------------------------------------------------------------
// Named operators

namespace pauli {

HermitianOperator identity() { return HermitianOperator::identity(2); }

HermitianOperator x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermitianOperator(std::move(m));
}

}  // namespace pauli

ComplexMatrix ket_bra(std::size_t d, std::size_t i, std::size_t j) {
  if (i >= d || j >= d) throw InputError("ket_bra: index out of range");
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return m;
}

HermitianOperator basis_projector(std::size_t d, std::size_t i) {
  return HermitianOperator(ket_bra(d, i, i));
}

// ---------------------------------------------------------------------------
// Random generators

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw InputError("Rng::index: empty range");
  return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
}

ComplexMatrix ginibre(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw InputError("random_unitary: dimension must be >= 1");
  const ComplexMatrix g = ginibre(d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) q.col(k) *= rkk / mag;
  }
  return q;
}

HermitianOperator random_hermitian(std::size_t d, Rng& rng) {
  if (d == 0) throw InputError("random_hermitian: dimension must be >= 1");
  const ComplexMatrix g = ginibre(d, rng);
  return HermitianOperator::symmetrized(g);
}

HermitianOperator random_hermitian(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_hermitian(d, rng);
}

DensityMatrix random_density(std::size_t d, Rng& rng) {
  if (d == 0) throw InputError("random_density: dimension must be >= 1");
  const ComplexMatrix g = ginibre(d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix random_density(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(d, rng);
}

DensityMatrix random_pure_state(std::size_t d, Rng& rng) {
  if (d == 0) throw InputError("random_pure_state: dimension must be >= 1");
  ComplexVector psi(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = rng.complex_normal();
  return DensityMatrix::pure(psi);
}

DensityMatrix random_pure_state(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure_state(d, rng);
}

HermitianOperator random_hermitian_with_spectrum(std::span<const double> eigenvalues, Rng& rng) {
  const std::size_t d = eigenvalues.size();
  const ComplexMatrix v = random_unitary(d, rng);
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) diag[static_cast<Eigen::Index>(i)] = eigenvalues[i];
  return HermitianOperator::symmetrized(v * diag.asDiagonal() * v.adjoint());
}

}  // namespace nosignal
