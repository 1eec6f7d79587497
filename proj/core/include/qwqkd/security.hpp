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

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwqkd/walk.hpp"

namespace qwqkd {

// Tolerance under which two overlap constants count as tied.
inline constexpr double kOverlapTieTolerance = 1e-12;

struct OverlapReport {
  double c = 1.0;
  std::size_t row = 0;     // x of the maximizing |alpha|^2 entry
  std::size_t column = 0;  // initial basis index (0 = (0,R), 1 = (0,L))
  long t_star = 0;
  std::vector<double> c_trace;  // c(t) for t = 1..t_max when requested
};

// Largest squared magnitude over all entries of a walk-basis matrix.
double overlap_constant(const ComplexMatrix& amplitudes);

// Minimizes c(t) over 1 <= t <= t_max for the walk's coin, flip and step
// order (its own step count is ignored). Only the two columns for initial
// position 0 are evolved; translation covariance gives the rest.
// Throws std::invalid_argument for even P or t_max < 1.
OverlapReport compute_c(const WalkParams& walk, long t_max,
                        bool keep_trace = false);

// Generalized Pauli U_{m,n} |k> = w^{k n} |k + m mod 2P>, w = exp(i pi / P).
ComplexMatrix pauli_unitary(int m, int n, int positions);

// In-place U_{m,n} on a buffer laid out as (walk index) * stride + ancilla.
void apply_pauli(std::span<Complex> amps, int m, int n, std::size_t dim,
                 std::size_t stride = 1);

// Pauli channel on the 2P-dimensional walk space, p(m, n) for 0 <= m, n < 2P.
class PauliChannel {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // p(0,0) = 1 - E_r, every other entry E_r / ((2P)^2 - 1).
  static PauliChannel from_error_weight(double error_weight, int positions);
  // Row-major (2P)x(2P) table. Throws on negative entries or bad total.
  static PauliChannel from_table(int positions, std::vector<double> table);

  int positions() const { return positions_; }
  std::size_t dim() const { return 2 * static_cast<std::size_t>(positions_); }
  std::optional<double> error_weight() const { return error_weight_; }
  bool is_depolarizing() const { return error_weight_.has_value(); }
  double prob(int m, int n) const {
    return table_[static_cast<std::size_t>(m) * dim() + static_cast<std::size_t>(n)];
  }
  std::span<const double> table() const { return table_; }

  // Draws (m, n) according to the table.
  std::pair<int, int> sample(Rng& rng) const;

 private:
  PauliChannel() = default;

  int positions_ = 1;
  std::optional<double> error_weight_;
  std::vector<double> table_;
};

PauliChannel channel_probs(double error_weight, int positions);

struct DepolarizingParams {
  double lambda = 0.0;  // rho -> (1 - lambda) rho + lambda I / 2P
  double qber = 0.0;
};

DepolarizingParams depolarizing_closed_form(double error_weight, int positions);
// Inverse of the closed form: E_r that yields depolarizing strength lambda.
double error_weight_for_lambda(double lambda, int positions);

enum class Basis { Z, W };

// Pr(Alice = i, Bob = j) over a (2P)x(2P) grid.
class JointDistribution {
 public:
  static constexpr double kTolerance = 1e-10;

  // Throws when entries are negative or the total is off by more than 1e-10.
  explicit JointDistribution(Eigen::MatrixXd probs);

  const Eigen::MatrixXd& probs() const { return probs_; }
  std::size_t dim() const { return static_cast<std::size_t>(probs_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return probs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  // Largest deviation of Alice's marginal from 1/dim.
  double alice_marginal_deviation() const;

 private:
  Eigen::MatrixXd probs_;
};

// Alice measures her half of (1/sqrt 2P) sum |i,i> in `basis`, which leaves
// Bob holding the conjugate of her outcome vector; the channel then acts on
// Bob's half before he measures in the same basis. For W, Alice's vectors
// are the conjugated walk basis so that Bob's collapsed states are exactly
// the walk-basis states he measures against.
//
// Depolarizing channels use the closed form; explicit tables go through the
// full Kraus sum.
JointDistribution joint_distribution(Basis basis, const WalkParams& walk,
                                     const PauliChannel& channel);
JointDistribution joint_distribution_kraus(Basis basis, const WalkParams& walk,
                                           const PauliChannel& channel);
JointDistribution joint_distribution_depolarizing(Basis basis,
                                                  const WalkParams& walk,
                                                  double lambda);

double qber(const JointDistribution& joint);

// Shannon entropy in bits of a binary source, h2(0) = h2(1) = 0.
double binary_entropy(double p);
// H(A|B) = H(AB) - H(B) in bits.
double conditional_entropy(const JointDistribution& joint);
// H(A|B) for errors spread uniformly over the dim - 1 wrong symbols.
double symmetric_error_entropy(double qber, std::size_t dim);

// log2(1/c) - H_Z - H_W
double key_rate(double c, double h_z, double h_w);

struct KeyRateReport {
  double c = 1.0;
  double h_z = 0.0;
  double h_w = 0.0;
  double rate = 0.0;
  double qber = 0.0;
};

// Rate for symmetric errors at rate Q in both bases.
KeyRateReport key_rate_report(double c, int positions, double q);

inline constexpr double kQberBisectionTolerance = 1e-6;

// Zero crossing of log2(1/c) - 2 [h2(Q) + Q log2(2P - 1)] on
// [0, (2P-1)/2P); 0 when the rate at Q = 0 is not positive.
double max_tolerated_qber(double c, int positions);

}  // namespace qwqkd
