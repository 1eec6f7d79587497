// Copyright 2026 The qwqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwqkd/security.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qwqkd/angle.hpp"
#include "qwqkd/rng.hpp"

namespace qwqkd {

namespace {

void require_odd(int positions) {
  if (positions < 1 || positions % 2 == 0) {
    throw std::invalid_argument("P must be a positive odd integer, got " +
                                std::to_string(positions));
  }
}

void require_positions(int positions) {
  if (positions < 1) {
    throw std::invalid_argument("P must be >= 1, got " + std::to_string(positions));
  }
}

void require_error_weight(double error_weight) {
  if (!(error_weight >= 0.0 && error_weight <= 1.0)) {
    throw std::invalid_argument("error weight must lie in [0, 1]");
  }
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Column i is the state Bob holds once Alice has seen outcome i.
ComplexMatrix collapse_states(Basis basis, const WalkParams& walk) {
  const auto dim = static_cast<Eigen::Index>(walk.dim());
  if (basis == Basis::Z) return ComplexMatrix::Identity(dim, dim);
  return walk_basis_amplitudes(walk);
}

ComplexMatrix bob_basis(Basis basis, const WalkParams& walk) {
  return collapse_states(basis, walk);
}

// Phase w^{k n} with w = exp(i pi / P), reduced mod 2P before the trig call.
Complex pauli_phase(std::size_t k, int n, std::size_t dim) {
  const std::size_t e = (k * static_cast<std::size_t>(n)) % dim;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(e) / static_cast<double>(dim));
}

}  // namespace

double overlap_constant(const ComplexMatrix& amplitudes) {
  return amplitudes.cwiseAbs2().maxCoeff();
}

OverlapReport compute_c(const WalkParams& walk, long t_max, bool keep_trace) {
  require_odd(walk.positions());
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");

  const std::size_t dim = walk.dim();
  // Both position-0 columns, interleaved: amps[i * 2 + column].
  std::vector<Complex> amps(2 * dim);
  const CoinMatrix flip = flip_matrix(walk.flip());
  amps[0] = flip(0, 0);
  amps[1] = flip(0, 1);
  amps[2] = flip(1, 0);
  amps[3] = flip(1, 1);

  OverlapReport report;
  report.c = std::numeric_limits<double>::infinity();
  if (keep_trace) report.c_trace.reserve(static_cast<std::size_t>(t_max));

  for (long t = 1; t <= t_max; ++t) {
    kernels::step(amps, walk, 2);
    double c = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
      const double v = std::norm(amps[k]);
      if (v > c) {
        c = v;
        arg = k;
      }
    }
    if (keep_trace) report.c_trace.push_back(c);
    if (c < report.c - kOverlapTieTolerance) {
      report.c = c;
      report.row = arg / 2;
      report.column = arg % 2;
      report.t_star = t;
    }
  }
  return report;
}

ComplexMatrix pauli_unitary(int m, int n, int positions) {
  require_positions(positions);
  const int dim = 2 * positions;
  if (m < 0 || m >= dim || n < 0 || n >= dim) {
    throw std::out_of_range("Pauli indices must lie in [0, 2P)");
  }
  const auto d = static_cast<std::size_t>(dim);
  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < d; ++k) {
    u(static_cast<Eigen::Index>((k + static_cast<std::size_t>(m)) % d),
      static_cast<Eigen::Index>(k)) = pauli_phase(k, n, d);
  }
  return u;
}

void apply_pauli(std::span<Complex> amps, int m, int n, std::size_t dim,
                 std::size_t stride) {
  if (dim == 0 || stride == 0 || amps.size() != dim * stride) {
    throw std::invalid_argument("apply_pauli: buffer does not match dim * stride");
  }
  if (m < 0 || n < 0 || static_cast<std::size_t>(m) >= dim ||
      static_cast<std::size_t>(n) >= dim) {
    throw std::out_of_range("Pauli indices must lie in [0, dim)");
  }
  std::vector<Complex> out(amps.size());
  for (std::size_t k = 0; k < dim; ++k) {
    const Complex phase = pauli_phase(k, n, dim);
    const std::size_t to = (k + static_cast<std::size_t>(m)) % dim;
    for (std::size_t e = 0; e < stride; ++e) {
      out[to * stride + e] = phase * amps[k * stride + e];
    }
  }
  std::copy(out.begin(), out.end(), amps.begin());
}

PauliChannel PauliChannel::from_error_weight(double error_weight, int positions) {
  require_positions(positions);
  require_error_weight(error_weight);
  PauliChannel ch;
  ch.positions_ = positions;
  ch.error_weight_ = error_weight;
  const std::size_t d = ch.dim();
  const double off = error_weight / static_cast<double>(d * d - 1);
  ch.table_.assign(d * d, off);
  ch.table_[0] = 1.0 - error_weight;
  return ch;
}

PauliChannel PauliChannel::from_table(int positions, std::vector<double> table) {
  require_positions(positions);
  PauliChannel ch;
  ch.positions_ = positions;
  const std::size_t d = ch.dim();
  if (table.size() != d * d) {
    throw std::invalid_argument("Pauli table must have (2P)^2 = " +
                                std::to_string(d * d) + " entries");
  }
  double total = 0.0;
  for (double p : table) {
    if (!(p >= 0.0)) throw std::invalid_argument("Pauli table has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("Pauli table sums to " + std::to_string(total));
  }
  ch.table_ = std::move(table);
  return ch;
}

std::pair<int, int> PauliChannel::sample(Rng& rng) const {
  const std::size_t d = dim();
  std::size_t idx = 0;
  if (error_weight_) {
    if (!rng.bernoulli(*error_weight_)) return {0, 0};
    idx = 1 + static_cast<std::size_t>(rng.below(d * d - 1));
  } else {
    idx = rng.discrete(table_);
  }
  return {static_cast<int>(idx / d), static_cast<int>(idx % d)};
}

PauliChannel channel_probs(double error_weight, int positions) {
  return PauliChannel::from_error_weight(error_weight, positions);
}

DepolarizingParams depolarizing_closed_form(double error_weight, int positions) {
  require_positions(positions);
  require_error_weight(error_weight);
  const double d = 2.0 * positions;
  DepolarizingParams out;
  out.lambda = error_weight * d * d / (d * d - 1.0);
  out.qber = out.lambda * (d - 1.0) / d;
  return out;
}

double error_weight_for_lambda(double lambda, int positions) {
  require_positions(positions);
  const double d = 2.0 * positions;
  const double e = lambda * (d * d - 1.0) / (d * d);
  require_error_weight(e);
  return e;
}

JointDistribution::JointDistribution(Eigen::MatrixXd probs) : probs_(std::move(probs)) {
  if (probs_.rows() == 0 || probs_.rows() != probs_.cols()) {
    throw std::invalid_argument("joint distribution must be a non-empty square table");
  }
  if (probs_.minCoeff() < -kTolerance) {
    throw std::invalid_argument("joint distribution has a negative entry");
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > kTolerance) {
    throw std::invalid_argument("joint distribution sums to " + std::to_string(total));
  }
}

double JointDistribution::alice_marginal_deviation() const {
  const double uniform = 1.0 / static_cast<double>(dim());
  return (probs_.rowwise().sum().array() - uniform).abs().maxCoeff();
}

JointDistribution joint_distribution(Basis basis, const WalkParams& walk,
                                     const PauliChannel& channel) {
  if (channel.is_depolarizing()) {
    const auto params = depolarizing_closed_form(*channel.error_weight(), channel.positions());
    if (channel.positions() != walk.positions()) {
      throw std::invalid_argument("channel and walk disagree on P");
    }
    return joint_distribution_depolarizing(basis, walk, params.lambda);
  }
  return joint_distribution_kraus(basis, walk, channel);
}

JointDistribution joint_distribution_kraus(Basis basis, const WalkParams& walk,
                                           const PauliChannel& channel) {
  if (channel.positions() != walk.positions()) {
    throw std::invalid_argument("channel and walk disagree on P");
  }
  const std::size_t d = walk.dim();
  const ComplexMatrix collapse = collapse_states(basis, walk);
  const ComplexMatrix bob_adj = bob_basis(basis, walk).adjoint();
  const auto di = static_cast<Eigen::Index>(d);

  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(di, di);
  ComplexMatrix moved(di, di);
  for (int m = 0; m < static_cast<int>(d); ++m) {
    for (int n = 0; n < static_cast<int>(d); ++n) {
      const double p = channel.prob(m, n);
      if (p == 0.0) continue;
      for (std::size_t k = 0; k < d; ++k) {
        moved.row(static_cast<Eigen::Index>((k + static_cast<std::size_t>(m)) % d)) =
            pauli_phase(k, n, d) * collapse.row(static_cast<Eigen::Index>(k));
      }
      // overlaps(j, i) = <b_j | U_mn | c_i>
      const ComplexMatrix overlaps = bob_adj * moved;
      probs += p * overlaps.cwiseAbs2().transpose();
    }
  }
  probs /= static_cast<double>(d);
  return JointDistribution(std::move(probs));
}

JointDistribution joint_distribution_depolarizing(Basis basis, const WalkParams& walk,
                                                  double lambda) {
  const double d = static_cast<double>(walk.dim());
  if (!(lambda >= 0.0 && lambda <= d * d / (d * d - 1.0) + 1e-12)) {
    throw std::invalid_argument("depolarizing strength out of range");
  }
  const ComplexMatrix overlaps = bob_basis(basis, walk).adjoint() * collapse_states(basis, walk);
  Eigen::MatrixXd probs =
      ((1.0 - lambda) * overlaps.cwiseAbs2().transpose().array() + lambda / d) / d;
  return JointDistribution(std::move(probs));
}

double qber(const JointDistribution& joint) {
  return 1.0 - joint.probs().trace();
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of range");
  return -plogp(p) - plogp(1.0 - p);
}

double conditional_entropy(const JointDistribution& joint) {
  const Eigen::MatrixXd& p = joint.probs();
  double h_ab = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) h_ab -= plogp(std::max(0.0, p.data()[i]));
  double h_b = 0.0;
  const Eigen::VectorXd bob = p.colwise().sum().transpose();
  for (Eigen::Index j = 0; j < bob.size(); ++j) h_b -= plogp(std::max(0.0, bob(j)));
  return std::max(0.0, h_ab - h_b);
}

double symmetric_error_entropy(double q, std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("dimension must be >= 2");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("QBER out of range");
  return binary_entropy(q) + q * std::log2(static_cast<double>(dim - 1));
}

double key_rate(double c, double h_z, double h_w) {
  if (!(c > 0.0 && c <= 1.0 + 1e-12)) throw std::invalid_argument("c must lie in (0, 1]");
  return std::log2(1.0 / c) - h_z - h_w;
}

KeyRateReport key_rate_report(double c, int positions, double q) {
  require_positions(positions);
  KeyRateReport r;
  r.c = c;
  r.qber = q;
  r.h_z = symmetric_error_entropy(q, 2 * static_cast<std::size_t>(positions));
  r.h_w = r.h_z;
  r.rate = key_rate(c, r.h_z, r.h_w);
  return r;
}

double max_tolerated_qber(double c, int positions) {
  require_positions(positions);
  const std::size_t dim = 2 * static_cast<std::size_t>(positions);
  auto rate = [&](double q) {
    return key_rate(c, symmetric_error_entropy(q, dim), symmetric_error_entropy(q, dim));
  };
  if (rate(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = static_cast<double>(dim - 1) / static_cast<double>(dim);
  // At the upper end both entropies equal log2(dim) and c >= 1/dim, so the
  // rate is non-positive there.
  if (rate(hi) > 0.0) {
    throw std::logic_error("overlap constant below 1/dim; not a walk basis");
  }
  while (hi - lo > kQberBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    (rate(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace qwqkd
