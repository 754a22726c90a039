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

#include "nosignal/composites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nosignal {

HermitianOperator sum_local(const LocalPair& p) {
  return tensor(p.c_a, HermitianOperator::identity(p.dim_b())) +
         tensor(HermitianOperator::identity(p.dim_a()), p.c_b);
}

HermitianOperator tensor_local(const LocalPair& p) { return tensor(p.c_a, p.c_b); }

HermitianOperator product_kernel_projector(const LocalPair& p, double tol_eig) {
  const HermitianOperator e_a0 = spectral_decompose(p.c_a, tol_eig).kernel_projector_or_zero(p.dim_a());
  const HermitianOperator e_b0 = spectral_decompose(p.c_b, tol_eig).kernel_projector_or_zero(p.dim_b());
  const HermitianOperator complement = HermitianOperator::identity(p.dim_a()) - e_a0;
  return tensor(e_a0, HermitianOperator::identity(p.dim_b())) + tensor(complement, e_b0);
}

HermitianOperator local_channel_action(const HermitianOperator& c, const HermitianOperator& o,
                                       double tol_eig) {
  return conjugate_observable(build_channel(c, MeasurementResolution::perfect(), tol_eig), o);
}

HermitianOperator closed_form_sum_channel(const LocalPair& p, const HermitianOperator& o_b, double tol_eig) {
  if (o_b.dim() != p.dim_b()) throw InputError("closed_form_sum_channel: O_B dimension mismatch");
  return tensor(HermitianOperator::identity(p.dim_a()), local_channel_action(p.c_b, o_b, tol_eig));
}

HermitianOperator closed_form_sum_channel_sender(const LocalPair& p, const HermitianOperator& o_a,
                                                 double tol_eig) {
  if (o_a.dim() != p.dim_a()) throw InputError("closed_form_sum_channel_sender: O_A dimension mismatch");
  return tensor(local_channel_action(p.c_a, o_a, tol_eig), HermitianOperator::identity(p.dim_b()));
}

namespace {

void require_distinct_products(const SpectralDecomposition& a, const SpectralDecomposition& b,
                               double threshold) {
  std::vector<double> products;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a.zero_index == n) continue;
    for (std::size_t m = 0; m < b.size(); ++m) {
      if (b.zero_index == m) continue;
      products.push_back(a.eigenvalues[n] * b.eigenvalues[m]);
    }
  }
  std::sort(products.begin(), products.end());
  for (std::size_t k = 1; k < products.size(); ++k) {
    if (products[k] - products[k - 1] <= threshold) {
      throw InputError("closed-form product channel: eigenvalue products collide at " +
                       std::to_string(products[k]));
    }
  }
}

}  // namespace

HermitianOperator closed_form_product_channel(const LocalPair& p, const HermitianOperator& o_b,
                                              double tol_eig) {
  if (o_b.dim() != p.dim_b()) throw InputError("closed_form_product_channel: O_B dimension mismatch");
  const SpectralDecomposition sa = spectral_decompose(p.c_a, tol_eig);
  const SpectralDecomposition sb = spectral_decompose(p.c_b, tol_eig);
  double max_a = 0.0, max_b = 0.0;
  for (double v : sa.eigenvalues) max_a = std::max(max_a, std::abs(v));
  for (double v : sb.eigenvalues) max_b = std::max(max_b, std::abs(v));
  require_distinct_products(sa, sb, tol_eig * std::max(1.0, max_a * max_b));

  const HermitianOperator e_a0 = sa.kernel_projector_or_zero(p.dim_a());
  const HermitianOperator complement = HermitianOperator::identity(p.dim_a()) - e_a0;
  return tensor(e_a0, o_b) + tensor(complement, local_channel_action(p.c_b, o_b, tol_eig));
}

ComplexMatrix factorized_product_commutator(const LocalPair& p, const HermitianOperator& o_a,
                                            const HermitianOperator& o_b, double tol_eig) {
  if (o_a.dim() != p.dim_a() || o_b.dim() != p.dim_b()) {
    throw InputError("factorized_product_commutator: dimension mismatch");
  }
  const HermitianOperator e_a0 = spectral_decompose(p.c_a, tol_eig).kernel_projector_or_zero(p.dim_a());
  const ComplexMatrix left = commutator(e_a0.matrix(), o_a.matrix());
  const ComplexMatrix right = o_b.matrix() - local_channel_action(p.c_b, o_b, tol_eig).matrix();
  return tensor(left, right);
}

bool product_signals(const LocalPair& p, const HermitianOperator& o_a, const HermitianOperator& o_b,
                     const SignallingOptions& options) {
  if (o_a.dim() != p.dim_a() || o_b.dim() != p.dim_b()) throw InputError("product_signals: dimension mismatch");
  const HermitianOperator e_a0 =
      spectral_decompose(p.c_a, options.tol_eig).kernel_projector_or_zero(p.dim_a());
  const double left = commutator(e_a0.matrix(), o_a.matrix()).norm();
  const double right = (o_b - local_channel_action(p.c_b, o_b, options.tol_eig)).frobenius_norm();
  return left > options.tol_comm * (1.0 + e_a0.frobenius_norm() * o_a.frobenius_norm()) &&
         right > options.tol_comm * (1.0 + o_b.frobenius_norm());
}

DensityMatrix two_stage_apply(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw InputError("two_stage_apply: expects a two-qubit state (dim 4)");
  const HermitianOperator id = pauli::identity();
  const ComplexMatrix a_down = tensor(basis_projector(2, 0), id).matrix();
  const ComplexMatrix a_up = tensor(basis_projector(2, 1), id).matrix();

  // Stage i: z on qubit A.
  const ComplexMatrix down_branch = a_down * rho.matrix() * a_down;
  const ComplexMatrix up_branch = a_up * rho.matrix() * a_up;

  // Stage ii: z on qubit B, on the |1⟩ branch of A only.
  ComplexMatrix up_measured = ComplexMatrix::Zero(4, 4);
  for (std::size_t b = 0; b < 2; ++b) {
    const ComplexMatrix pb = tensor(id, basis_projector(2, b)).matrix();
    up_measured += pb * up_branch * pb;
  }
  const ComplexMatrix out = down_branch + up_measured;
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

HermitianOperator controlled_sigma_z() { return tensor(basis_projector(2, 1), pauli::z()); }

Scenario two_qubit_scenario() {
  ComplexVector psi(4);
  const double r = 1.0 / std::numbers::sqrt2;
  psi << r, r, 0.0, 0.0;  // |0⟩⊗(|0⟩+|1⟩)/√2
  return Scenario(CompositeStructure({2, 2}), {0}, {1}, pauli::x(), controlled_sigma_z(),
                  MeasurementResolution::perfect(), pauli::x(), DensityMatrix::pure(psi));
}

namespace {

bool all_separated(std::vector<double> values, double gap) {
  std::sort(values.begin(), values.end());
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] - values[k - 1] < gap) return false;
  }
  return true;
}

std::vector<double> draw_spectrum(std::size_t d, bool with_kernel, Rng& rng) {
  std::vector<double> mu;
  if (with_kernel) mu.push_back(0.0);
  while (mu.size() < d) {
    const double magnitude = 0.2 + 1.8 * rng.uniform();
    mu.push_back(rng.uniform() < 0.5 ? -magnitude : magnitude);
  }
  return mu;
}

}  // namespace

LocalPair random_local_pair(std::size_t d_a, std::size_t d_b, KernelShape shape, Rng& rng) {
  constexpr double kGap = 1e-6;
  for (;;) {
    const std::vector<double> mu_a = draw_spectrum(d_a, shape == KernelShape::SenderKernel, rng);
    const std::vector<double> mu_b = draw_spectrum(d_b, false, rng);
    std::vector<double> sums, products;
    for (double a : mu_a) {
      for (double b : mu_b) {
        sums.push_back(a + b);
        if (a != 0.0 && b != 0.0) products.push_back(a * b);
      }
    }
    if (!all_separated(mu_a, kGap) || !all_separated(mu_b, kGap) || !all_separated(sums, kGap) ||
        !all_separated(products, kGap)) {
      continue;
    }
    HermitianOperator c_a = random_hermitian_with_spectrum(mu_a, rng);
    HermitianOperator c_b = random_hermitian_with_spectrum(mu_b, rng);
    return LocalPair{std::move(c_a), std::move(c_b)};
  }
}

}  // namespace nosignal
