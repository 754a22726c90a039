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

// Measurement resolutions, binned projection-valued measures and the
// non-selective (Lüders) measurement channel ρ ↦ Σₙ Eₙ ρ Eₙ.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nosignal/operator_core.hpp"

namespace nosignal {

/// Disjoint cover of the real line by outcome bins.
///
/// Perfect resolves every distinct (clustered) eigenvalue. Intervals with
/// breakpoints b₁ < … < b_k gives the bins (−∞,b₁), [b₁,b₂), …, [b_k,∞).
class MeasurementResolution {
 public:
  enum class Kind { Perfect, Intervals };

  static MeasurementResolution perfect() { return MeasurementResolution(Kind::Perfect, {}); }
  /// Throws InputError unless breakpoints are finite and strictly increasing.
  static MeasurementResolution intervals(std::vector<double> breakpoints);

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  std::size_t num_bins() const noexcept { return breakpoints_.size() + 1; }

  /// Interval bin of `value`; a value within `tol` below a breakpoint counts
  /// as lying on it and goes to the right-hand bin.
  std::size_t bin_of(double value, double tol) const;
  std::string bin_label(std::size_t bin) const;

  bool operator==(const MeasurementResolution&) const = default;

 private:
  MeasurementResolution(Kind kind, std::vector<double> breakpoints)
      : kind_(kind), breakpoints_(std::move(breakpoints)) {}

  Kind kind_;
  std::vector<double> breakpoints_;
};

struct ChannelSource {
  std::uint64_t observable_hash = 0;
  MeasurementResolution resolution = MeasurementResolution::perfect();
};

/// Stable FNV-1a hash of the matrix entries, for provenance records.
std::uint64_t hash_operator(const ComplexMatrix& m);

/// A complete set of nonzero, mutually orthogonal projectors.
class MeasurementChannel {
 public:
  /// Validates idempotence, orthogonality, completeness and nonzero
  /// projectors to 1e-9 · max(1, √dim).
  MeasurementChannel(std::vector<HermitianOperator> projectors, std::vector<std::string> bin_labels,
                     ChannelSource source);

  static MeasurementChannel identity(std::size_t dim);

  const std::vector<HermitianOperator>& projectors() const noexcept { return projectors_; }
  const std::vector<std::string>& bin_labels() const noexcept { return labels_; }
  const ChannelSource& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  std::size_t dim() const noexcept { return projectors_.front().dim(); }

  static double tolerance(std::size_t dim);

 private:
  std::vector<HermitianOperator> projectors_;
  std::vector<std::string> labels_;
  ChannelSource source_;
};

/// Spectral projectors of `observable` summed over the bins of `resolution`.
/// Empty bins are dropped.
MeasurementChannel build_channel(const HermitianOperator& observable,
                                 const MeasurementResolution& resolution,
                                 double tol_eig = kDefaultEigTol);

/// Schrödinger picture: Σₙ Eₙ ρ Eₙ.
DensityMatrix apply_nonselective(const MeasurementChannel& channel, const DensityMatrix& rho);

/// Heisenberg picture: Σₙ Eₙ O Eₙ. Self-dual with apply_nonselective.
HermitianOperator conjugate_observable(const MeasurementChannel& channel,
                                       const HermitianOperator& observable);

struct SelectiveOutcome {
  double probability;
  /// Absent when probability ≤ kMinProbability.
  std::optional<DensityMatrix> state;
};

inline constexpr double kMinProbability = 1e-12;

/// Born probabilities tr(ρEₙ) and conditional states EₙρEₙ/pₙ, one entry per
/// projector in channel order.
std::vector<SelectiveOutcome> selective_outcomes(const MeasurementChannel& channel,
                                                 const DensityMatrix& rho);

/// Partition of projector indices; each block becomes one projector.
using MergeSpec = std::vector<std::vector<std::size_t>>;

/// Throws InputError unless `spec` partitions {0, …, n−1} into nonempty blocks.
void validate_partition(const MergeSpec& spec, std::size_t n);

/// Merges projectors block-wise, in block order.
MeasurementChannel coarsen(const MeasurementChannel& channel, const MergeSpec& spec);

}  // namespace nosignal
