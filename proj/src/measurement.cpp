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

#include "nosignal/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>

namespace nosignal {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

MeasurementResolution MeasurementResolution::intervals(std::vector<double> breakpoints) {
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) throw InputError("resolution breakpoints must be finite");
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
      throw InputError("resolution breakpoints must be strictly increasing");
    }
  }
  return MeasurementResolution(Kind::Intervals, std::move(breakpoints));
}

std::size_t MeasurementResolution::bin_of(double value, double tol) const {
  // Number of breakpoints b with value >= b - tol.
  std::size_t bin = 0;
  while (bin < breakpoints_.size() && value >= breakpoints_[bin] - tol) ++bin;
  return bin;
}

std::string MeasurementResolution::bin_label(std::size_t bin) const {
  const std::string lo = bin == 0 ? "(-inf" : "[" + format_value(breakpoints_[bin - 1]);
  const std::string hi = bin == breakpoints_.size() ? "inf)" : format_value(breakpoints_[bin]) + ")";
  return lo + "," + hi;
}

std::uint64_t hash_operator(const ComplexMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      mix(std::bit_cast<std::uint64_t>(m(i, j).real()));
      mix(std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// MeasurementChannel

double MeasurementChannel::tolerance(std::size_t dim) {
  return 1e-9 * std::max(1.0, std::sqrt(static_cast<double>(dim)));
}

MeasurementChannel::MeasurementChannel(std::vector<HermitianOperator> projectors,
                                       std::vector<std::string> bin_labels, ChannelSource source)
    : projectors_(std::move(projectors)), labels_(std::move(bin_labels)), source_(std::move(source)) {
  if (projectors_.empty()) throw InputError("measurement channel needs at least one projector");
  if (labels_.size() != projectors_.size()) {
    throw InputError("measurement channel: one bin label per projector required");
  }
  const std::size_t d = projectors_.front().dim();
  const double tol = tolerance(d);
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const ComplexMatrix& p = projectors_[i].matrix();
    if (projectors_[i].dim() != d) throw InputError("measurement channel: projector dimension mismatch");
    if (p.norm() <= tol) throw InputError("measurement channel: projector " + std::to_string(i) + " is zero");
    if ((p * p - p).norm() > tol) {
      throw InputError("measurement channel: element " + std::to_string(i) + " is not a projector");
    }
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if (projectors_[j].dim() != d) throw InputError("measurement channel: projector dimension mismatch");
      if ((p * projectors_[j].matrix()).norm() > tol) {
        throw InputError("measurement channel: projectors " + std::to_string(i) + " and " +
                         std::to_string(j) + " are not orthogonal");
      }
    }
    sum += p;
  }
  if ((sum - ComplexMatrix::Identity(n, n)).norm() > tol) {
    throw InputError("measurement channel: projectors do not sum to the identity");
  }
}

MeasurementChannel MeasurementChannel::identity(std::size_t dim) {
  return MeasurementChannel({HermitianOperator::identity(dim)}, {"(-inf,inf)"},
                            ChannelSource{hash_operator(HermitianOperator::identity(dim).matrix()),
                                          MeasurementResolution::intervals({})});
}

MeasurementChannel build_channel(const HermitianOperator& observable,
                                 const MeasurementResolution& resolution, double tol_eig) {
  const SpectralDecomposition sd = spectral_decompose(observable, tol_eig);
  ChannelSource source{hash_operator(observable.matrix()), resolution};

  if (resolution.kind() == MeasurementResolution::Kind::Perfect) {
    std::vector<std::string> labels;
    for (double v : sd.eigenvalues) labels.push_back("{" + format_value(v) + "}");
    return MeasurementChannel(sd.projectors, std::move(labels), std::move(source));
  }

  // Same scale as the clustering threshold in spectral_decompose.
  double max_abs = 0.0;
  for (double v : sd.eigenvalues) max_abs = std::max(max_abs, std::abs(v));
  const double tol = tol_eig * std::max(1.0, max_abs);

  std::map<std::size_t, ComplexMatrix> bins;
  for (std::size_t i = 0; i < sd.size(); ++i) {
    const std::size_t bin = resolution.bin_of(sd.eigenvalues[i], tol);
    auto [it, inserted] = bins.try_emplace(bin, sd.projectors[i].matrix());
    if (!inserted) it->second += sd.projectors[i].matrix();
  }
  std::vector<HermitianOperator> projectors;
  std::vector<std::string> labels;
  for (const auto& [bin, p] : bins) {
    projectors.push_back(HermitianOperator::symmetrized(p));
    labels.push_back(resolution.bin_label(bin));
  }
  return MeasurementChannel(std::move(projectors), std::move(labels), std::move(source));
}

namespace {

ComplexMatrix sandwich_sum(const MeasurementChannel& channel, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& p : channel.projectors()) out += p.matrix() * x * p.matrix();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

DensityMatrix apply_nonselective(const MeasurementChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim()) throw InputError("apply_nonselective: dimension mismatch");
  return DensityMatrix(sandwich_sum(channel, rho.matrix()));
}

HermitianOperator conjugate_observable(const MeasurementChannel& channel,
                                       const HermitianOperator& observable) {
  if (observable.dim() != channel.dim()) throw InputError("conjugate_observable: dimension mismatch");
  return HermitianOperator::symmetrized(sandwich_sum(channel, observable.matrix()));
}

std::vector<SelectiveOutcome> selective_outcomes(const MeasurementChannel& channel,
                                                 const DensityMatrix& rho) {
  if (rho.dim() != channel.dim()) throw InputError("selective_outcomes: dimension mismatch");
  std::vector<SelectiveOutcome> out;
  out.reserve(channel.size());
  for (const auto& p : channel.projectors()) {
    const double prob = rho.expectation(p);
    if (prob <= kMinProbability) {
      out.push_back({prob, std::nullopt});
      continue;
    }
    const ComplexMatrix raw = p.matrix() * rho.matrix() * p.matrix();
    ComplexMatrix post = 0.5 * (raw + raw.adjoint()) / raw.trace().real();
    out.push_back({prob, DensityMatrix(std::move(post))});
  }
  return out;
}

void validate_partition(const MergeSpec& spec, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (const auto& block : spec) {
    if (block.empty()) throw InputError("merge spec: empty block");
    for (std::size_t idx : block) {
      if (idx >= n) throw InputError("merge spec: index " + std::to_string(idx) + " out of range");
      if (seen[idx]) throw InputError("merge spec: index " + std::to_string(idx) + " appears twice");
      seen[idx] = true;
      ++count;
    }
  }
  if (count != n) throw InputError("merge spec: not every projector index is covered");
}

MeasurementChannel coarsen(const MeasurementChannel& channel, const MergeSpec& spec) {
  validate_partition(spec, channel.size());
  std::vector<HermitianOperator> projectors;
  std::vector<std::string> labels;
  for (const auto& block : spec) {
    ComplexMatrix sum = channel.projectors()[block.front()].matrix();
    std::string label = channel.bin_labels()[block.front()];
    for (std::size_t k = 1; k < block.size(); ++k) {
      sum += channel.projectors()[block[k]].matrix();
      label += "|" + channel.bin_labels()[block[k]];
    }
    projectors.push_back(HermitianOperator::symmetrized(sum));
    labels.push_back(std::move(label));
  }
  return MeasurementChannel(std::move(projectors), std::move(labels), channel.source());
}

}  // namespace nosignal
