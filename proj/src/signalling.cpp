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

#include <algorithm>
#include <cmath>
#include <string>

namespace nosignal {

void validate_roles(const CompositeStructure& structure, std::span<const std::size_t> sender,
                    std::span<const std::size_t> receiver) {
  if (sender.empty()) throw InputError("sender factors must be nonempty");
  if (receiver.empty()) throw InputError("receiver factors must be nonempty");
  std::vector<int> role(structure.num_factors(), 0);
  auto mark = [&](std::span<const std::size_t> factors, int tag, const char* name) {
    for (std::size_t f : factors) {
      if (f >= role.size()) {
        throw InputError(std::string(name) + " factor " + std::to_string(f) + " out of range");
      }
      if (role[f] == tag) throw InputError(std::string(name) + " factor " + std::to_string(f) + " repeated");
      if (role[f] != 0) {
        throw InputError("factor " + std::to_string(f) + " is assigned to both sender and receiver");
      }
      role[f] = tag;
    }
  };
  mark(sender, 1, "sender");
  mark(receiver, 2, "receiver");
}

// ---------------------------------------------------------------------------
// Scenario

Scenario::Scenario(CompositeStructure structure, std::vector<std::size_t> sender_factors,
                   std::vector<std::size_t> receiver_factors, HermitianOperator o1_local,
                   HermitianOperator o2, MeasurementResolution resolution, HermitianOperator o3_local,
                   DensityMatrix rho0)
    : structure_(std::move(structure)),
      sender_(std::move(sender_factors)),
      receiver_(std::move(receiver_factors)),
      o1_local_(std::move(o1_local)),
      o2_(std::move(o2)),
      resolution_(std::move(resolution)),
      o3_local_(std::move(o3_local)),
      rho0_(std::move(rho0)),
      o1_embedded_(HermitianOperator::zero(1)),
      o3_embedded_(HermitianOperator::zero(1)) {
  validate_roles(structure_, sender_, receiver_);
  const std::size_t total = structure_.total_dim();
  if (o1_local_.dim() != structure_.subsystem_dim(sender_)) {
    throw InputError("o1 has dimension " + std::to_string(o1_local_.dim()) + ", sender factors need " +
                     std::to_string(structure_.subsystem_dim(sender_)));
  }
  if (o3_local_.dim() != structure_.subsystem_dim(receiver_)) {
    throw InputError("o3 has dimension " + std::to_string(o3_local_.dim()) + ", receiver factors need " +
                     std::to_string(structure_.subsystem_dim(receiver_)));
  }
  if (o2_.dim() != total) {
    throw InputError("o2 has dimension " + std::to_string(o2_.dim()) + ", the full space is " +
                     std::to_string(total));
  }
  if (rho0_.dim() != total) {
    throw InputError("rho0 has dimension " + std::to_string(rho0_.dim()) + ", the full space is " +
                     std::to_string(total));
  }
  o1_embedded_ = embed_factors(o1_local_, sender_, structure_);
  o3_embedded_ = embed_factors(o3_local_, receiver_, structure_);
  const double defect = commutator(o1_embedded_.matrix(), o3_embedded_.matrix()).norm();
  if (defect > 1e-12 * std::max(1.0, o1_embedded_.frobenius_norm() * o3_embedded_.frobenius_norm())) {
    throw NumericalError("embedded sender and receiver observables do not commute");
  }
}

Scenario Scenario::with_local_observables(HermitianOperator o1_local, HermitianOperator o3_local) const {
  return Scenario(structure_, sender_, receiver_, std::move(o1_local), o2_, resolution_,
                  std::move(o3_local), rho0_);
}

Scenario Scenario::with_state(DensityMatrix rho0) const {
  return Scenario(structure_, sender_, receiver_, o1_local_, o2_, resolution_, o3_local_, std::move(rho0));
}

Scenario Scenario::with_resolution(MeasurementResolution resolution) const {
  return Scenario(structure_, sender_, receiver_, o1_local_, o2_, std::move(resolution), o3_local_, rho0_);
}

// ---------------------------------------------------------------------------
// Kick

KickUnitary::KickUnitary(const HermitianOperator& generator, double tol_eig)
    : spectrum_(spectral_decompose(generator, tol_eig)), dim_(generator.dim()) {}

ComplexMatrix KickUnitary::unitary(double gamma) const {
  const auto n = static_cast<Eigen::Index>(dim_);
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < spectrum_.size(); ++k) {
    u += std::polar(1.0, gamma * spectrum_.eigenvalues[k]) * spectrum_.projectors[k].matrix();
  }
  const double defect = (u * u.adjoint() - ComplexMatrix::Identity(n, n)).norm();
  if (defect > 1e-10) {
    throw NumericalError("kick unitary deviates from unitarity by " + std::to_string(defect));
  }
  return u;
}

DensityMatrix KickUnitary::apply(const DensityMatrix& rho, double gamma) const {
  if (rho.dim() != dim_) throw InputError("kick: dimension mismatch");
  const ComplexMatrix u = unitary(gamma);
  ComplexMatrix out = u * rho.matrix() * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

DensityMatrix kick(const DensityMatrix& rho, const HermitianOperator& o1_embedded, double gamma,
                   double tol_eig) {
  if (rho.dim() != o1_embedded.dim()) throw InputError("kick: dimension mismatch");
  return KickUnitary(o1_embedded, tol_eig).apply(rho, gamma);
}

// ---------------------------------------------------------------------------
// Protocol

std::vector<std::pair<double, double>> expectation_curve(const Scenario& scenario,
                                                         std::span<const double> grid,
                                                         const SignallingOptions& options) {
  if (grid.empty()) throw InputError("expectation_curve: empty grid");
  const MeasurementChannel channel = build_channel(scenario.o2(), scenario.resolution(), options.tol_eig);
  const KickUnitary kicker(scenario.o1_embedded(), options.tol_eig);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double gamma : grid) {
    const DensityMatrix measured = apply_nonselective(channel, kicker.apply(scenario.rho0(), gamma));
    curve.emplace_back(gamma, measured.expectation(scenario.o3_embedded()));
  }
  return curve;
}

double simulate_protocol(const Scenario& scenario, double gamma, const SignallingOptions& options) {
  const double g[] = {gamma};
  return expectation_curve(scenario, g, options).front().second;
}

double series_expectation(const Scenario& scenario, double gamma, std::size_t order,
                          const SignallingOptions& options) {
  const MeasurementChannel channel = build_channel(scenario.o2(), scenario.resolution(), options.tol_eig);
  const ComplexMatrix& y = scenario.o1_embedded().matrix();
  const ComplexMatrix& rho = scenario.rho0().matrix();
  ComplexMatrix nested = conjugate_observable(channel, scenario.o3_embedded()).matrix();
  auto trace_with_rho = [&rho](const ComplexMatrix& x) {
    return (rho.cwiseProduct(x.transpose())).sum();
  };

  Complex coefficient(1.0, 0.0);
  Complex total = trace_with_rho(nested);
  for (std::size_t n = 1; n <= order; ++n) {
    nested = commutator(nested, y);
    coefficient *= Complex(0.0, gamma) / static_cast<double>(n);
    total += coefficient * trace_with_rho(nested);
  }
  if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real()))) {
    throw NumericalError("series expectation has imaginary residue " + std::to_string(total.imag()));
  }
  return total.real();
}

// ---------------------------------------------------------------------------
// Signalling verdict

ComplexMatrix signal_commutator(const MeasurementChannel& channel, const HermitianOperator& o1_embedded,
                                const HermitianOperator& o3_embedded) {
  return commutator(conjugate_observable(channel, o3_embedded).matrix(), o1_embedded.matrix());
}

namespace {

std::vector<HermitianOperator> embedded_basis(const CompositeStructure& structure,
                                              std::span<const std::size_t> factors) {
  std::vector<HermitianOperator> out;
  for (const auto& g : hermitian_basis(structure.subsystem_dim(factors))) {
    out.push_back(embed_factors(g, factors, structure));
  }
  return out;
}

}  // namespace

SignalVerdict check_channel(const MeasurementChannel& channel, const CompositeStructure& structure,
                            std::span<const std::size_t> sender, std::span<const std::size_t> receiver,
                            const SignallingOptions& options) {
  validate_roles(structure, sender, receiver);
  if (channel.dim() != structure.total_dim()) throw InputError("check_channel: dimension mismatch");

  const std::vector<HermitianOperator> senders = embedded_basis(structure, sender);
  std::vector<HermitianOperator> conjugated;
  for (const auto& g : embedded_basis(structure, receiver)) {
    conjugated.push_back(conjugate_observable(channel, g));
  }

  SignalVerdict verdict;
  for (std::size_t i = 0; i < senders.size(); ++i) {
    for (std::size_t j = 0; j < conjugated.size(); ++j) {
      const double norm = commutator(conjugated[j].matrix(), senders[i].matrix()).norm();
      const double tau =
          options.tol_comm * (1.0 + senders[i].frobenius_norm() * conjugated[j].frobenius_norm());
      if (norm > tau) verdict.signalling = true;
      if (norm > verdict.max_commutator_norm || (i == 0 && j == 0)) {
        verdict.max_commutator_norm = norm;
        verdict.witness = BasisPair{i, j, norm};
      }
    }
  }
  if (!verdict.signalling) verdict.witness.reset();
  return verdict;
}

SignalVerdict is_signalling(const HermitianOperator& o2, const MeasurementResolution& resolution,
                            const CompositeStructure& structure, std::span<const std::size_t> sender,
                            std::span<const std::size_t> receiver, const SignallingOptions& options) {
  if (o2.dim() != structure.total_dim()) throw InputError("is_signalling: dimension mismatch");
  return check_channel(build_channel(o2, resolution, options.tol_eig), structure, sender, receiver, options);
}

SignalVerdict is_signalling(const Scenario& scenario, const SignallingOptions& options) {
  return is_signalling(scenario.o2(), scenario.resolution(), scenario.structure(),
                       scenario.sender_factors(), scenario.receiver_factors(), options);
}

// ---------------------------------------------------------------------------
// Witnesses

WitnessState witness_state(const ComplexMatrix& c, double zero_tol) {
  validate_matrix(c, "witness commutator");
  const double norm = c.norm();
  if (norm <= zero_tol) throw InputError("commutator vanishes: no witness exists");
  if ((c + c.adjoint()).norm() > kHermitianTol * std::max(1.0, norm)) {
    throw InputError("witness commutator is not anti-Hermitian");
  }
  const ComplexMatrix ic = Complex(0.0, 1.0) * c;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (ic + ic.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition did not converge");

  // Ascending eigenvalues: the extremal magnitude is at one end; prefer the
  // positive end on ties.
  const Eigen::Index last = es.eigenvalues().size() - 1;
  const Eigen::Index top =
      std::abs(es.eigenvalues()[0]) > std::abs(es.eigenvalues()[last]) ? 0 : last;
  const ComplexVector v = es.eigenvectors().col(top);
  DensityMatrix state = DensityMatrix::pure(v);
  const double slope = (Complex(0.0, 1.0) * (state.matrix().cwiseProduct(c.transpose())).sum()).real();
  return WitnessState{std::move(state), v, slope};
}

std::optional<SignalWitness> find_witness(const MeasurementChannel& channel,
                                          const CompositeStructure& structure,
                                          std::span<const std::size_t> sender,
                                          std::span<const std::size_t> receiver,
                                          const SignallingOptions& options) {
  const SignalVerdict verdict = check_channel(channel, structure, sender, receiver, options);
  if (!verdict.signalling) return std::nullopt;
  const BasisPair pair = *verdict.witness;
  HermitianOperator o1 = hermitian_basis(structure.subsystem_dim(sender))[pair.sender_index];
  HermitianOperator o3 = hermitian_basis(structure.subsystem_dim(receiver))[pair.receiver_index];
  ComplexMatrix c = signal_commutator(channel, embed_factors(o1, sender, structure),
                                      embed_factors(o3, receiver, structure));
  WitnessState w = witness_state(c);
  return SignalWitness{pair, std::move(o1), std::move(o3), std::move(c), std::move(w)};
}

Scenario witness_scenario(const Scenario& base, const SignalWitness& witness) {
  return base.with_local_observables(witness.o1_local, witness.o3_local).with_state(witness.witness.state);
}

double finite_difference_slope(const Scenario& scenario, double h, const SignallingOptions& options) {
  const double grid[] = {-h, h};
  const auto curve = expectation_curve(scenario, grid, options);
  return (curve[1].second - curve[0].second) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// Coarse-graining search

namespace {

MergeSpec merged(const MergeSpec& partition, std::size_t a, std::size_t b) {
  MergeSpec out = partition;
  out[a].insert(out[a].end(), out[b].begin(), out[b].end());
  std::sort(out[a].begin(), out[a].end());
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(b));
  return out;
}

}  // namespace

Coarsening find_nonsignalling_coarsening(const HermitianOperator& o2, const CompositeStructure& structure,
                                         std::span<const std::size_t> sender,
                                         std::span<const std::size_t> receiver,
                                         const SignallingOptions& options) {
  const MeasurementChannel perfect = build_channel(o2, MeasurementResolution::perfect(), options.tol_eig);
  MergeSpec partition;
  for (std::size_t k = 0; k < perfect.size(); ++k) partition.push_back({k});

  Coarsening result{partition, {}, perfect, check_channel(perfect, structure, sender, receiver, options)};
  while (result.verdict.signalling) {
    // A signalling channel has at least two blocks: one block is the identity.
    std::optional<Coarsening> best;
    for (std::size_t a = 0; a < result.partition.size(); ++a) {
      for (std::size_t b = a + 1; b < result.partition.size(); ++b) {
        MergeSpec candidate = merged(result.partition, a, b);
        MeasurementChannel channel = coarsen(perfect, candidate);
        SignalVerdict verdict = check_channel(channel, structure, sender, receiver, options);
        if (!best || verdict.max_commutator_norm < best->verdict.max_commutator_norm) {
          auto merges = result.merges;
          merges.emplace_back(a, b);
          best = Coarsening{std::move(candidate), std::move(merges), std::move(channel), verdict};
        }
      }
    }
    result = std::move(*best);
  }
  return result;
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (points == 0) throw InputError("grid must have at least one point");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw InputError("grid bounds must be finite");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = start;
    return grid;
  }
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) grid[k] = start + step * static_cast<double>(k);
  grid.back() = stop;
  return grid;
}

}  // namespace nosignal
