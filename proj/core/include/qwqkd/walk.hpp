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

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qwqkd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

class Rng;

// Coin label. The numeric value is the coin slot inside a position block.
enum class Coin : int { R = 0, L = 1 };

// Initial coin flip F applied once before the walk.
enum class Flip { I, X, Y };

enum class StepOrder {
  CoinThenShift,  // U = S (I (x) C)
  ShiftThenCoin,  // U = (I (x) C) S
};

// Direction an |R> walker moves under the shift.
enum class ShiftSense {
  RightIncrements,  // |x,R> -> |x+1,R>, |x,L> -> |x-1,L>
  RightDecrements,  // |x,R> -> |x-1,R>, |x,L> -> |x+1,L>
};

std::string_view to_string(Flip flip);
std::string_view to_string(Coin coin);
Flip parse_flip(std::string_view text);
Coin parse_coin(std::string_view text);

// Reduces an angle to [0, 2*pi).
double reduce_angle(double radians);

// 2x2 complex matrix in the ordered basis (|R>, |L>), row-major.
struct CoinMatrix {
  std::array<Complex, 4> entries{};

  Complex operator()(int row, int col) const { return entries[2 * row + col]; }
  Complex& operator()(int row, int col) { return entries[2 * row + col]; }

  static CoinMatrix identity();
  CoinMatrix adjoint() const;
  CoinMatrix operator*(const CoinMatrix& rhs) const;
  bool is_unitary(double tol = 1e-12) const;
  double max_abs_diff(const CoinMatrix& other) const;
};

// [[e^{i phi} cos, e^{i phi} sin], [-e^{-i phi} sin, e^{-i phi} cos]].
CoinMatrix coin_matrix(double theta, double phi);
CoinMatrix flip_matrix(Flip flip);
// (1/sqrt 2)[[1, 1], [1, -1]].
CoinMatrix hadamard_coin();

// Full description of one coined walk on a cycle of `positions` nodes.
// Immutable; angles are reduced on construction.
class WalkParams {
 public:
  WalkParams(int positions, double theta, double phi, long steps,
             Flip flip = Flip::I, StepOrder order = StepOrder::CoinThenShift);

  // Walk driven by an explicit coin instead of the (theta, phi) family.
  static WalkParams with_coin(int positions, const CoinMatrix& coin, long steps,
                              StepOrder order, ShiftSense sense);

  int positions() const { return positions_; }
  std::size_t dim() const { return 2 * static_cast<std::size_t>(positions_); }
  double theta() const { return theta_; }
  double phi() const { return phi_; }
  long steps() const { return steps_; }
  Flip flip() const { return flip_; }
  StepOrder order() const { return order_; }
  ShiftSense sense() const { return sense_; }
  const CoinMatrix& coin() const { return coin_; }
  bool has_custom_coin() const { return custom_coin_; }

  WalkParams with_steps(long steps) const;
  WalkParams with_flip(Flip flip) const;
  WalkParams with_order(StepOrder order) const;
  WalkParams with_sense(ShiftSense sense) const;

 private:
  WalkParams() = default;

  int positions_ = 1;
  double theta_ = 0.0;
  double phi_ = 0.0;
  long steps_ = 0;
  Flip flip_ = Flip::I;
  StepOrder order_ = StepOrder::CoinThenShift;
  ShiftSense sense_ = ShiftSense::RightIncrements;
  CoinMatrix coin_ = CoinMatrix::identity();
  bool custom_coin_ = false;
};

// Amplitudes of the joint position (x) coin system. Index i encodes
// position i/2 and coin i%2 (R=0, L=1). Always unit norm within 1e-10.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  static StateVector basis(int positions, int position, Coin coin);
  static StateVector basis_index(int positions, std::size_t index);
  // Throws std::invalid_argument on odd length or a norm off by more than `tol`.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes,
                                     double tol = kNormTolerance);

  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return amplitudes_.size(); }
  int positions() const { return static_cast<int>(amplitudes_.size() / 2); }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;
  double max_abs_diff(const StateVector& other) const;

 private:
  explicit StateVector(std::vector<Complex> amplitudes)
      : amplitudes_(std::move(amplitudes)) {}
  friend StateVector make_state_unchecked(std::vector<Complex> amplitudes);

  std::vector<Complex> amplitudes_;
};

StateVector basis_state(int positions, int position, Coin coin);
StateVector apply_coin(const StateVector& state, const CoinMatrix& coin);
StateVector apply_shift(const StateVector& state,
                        ShiftSense sense = ShiftSense::RightIncrements);
StateVector apply_inverse_shift(const StateVector& state,
                                ShiftSense sense = ShiftSense::RightIncrements);
// (I (x) F) once, then `steps` walk steps.
StateVector evolve(const StateVector& state, const WalkParams& params);
StateVector inverse_evolve(const StateVector& state, const WalkParams& params);
// T_r (x) I_c with 0 <= r < P.
StateVector translate(const StateVector& state, int shift);

// Column y = evolve(basis y). Entry (x, y) is the overlap <x| U^t (I(x)F) |y>.
ComplexMatrix walk_basis_amplitudes(const WalkParams& params);
// Same matrix built in the momentum basis; independent of the stepper.
ComplexMatrix fourier_amplitudes(const WalkParams& params);

std::vector<double> born_distribution(const StateVector& state);
std::vector<double> position_distribution(const StateVector& state);
std::size_t sample_measurement(const StateVector& state, Rng& rng);
int sample_position(const StateVector& state, Rng& rng);

// In-place kernels over raw amplitude buffers. A buffer may hold several
// stacked copies of the walk space when `stride` > 1: amplitude of walk
// index i in copy e sits at i * stride + e (walk (x) ancilla layout).
namespace kernels {

void apply_coin(std::span<Complex> amps, const CoinMatrix& coin,
                std::size_t stride = 1);
void apply_shift(std::span<Complex> amps, ShiftSense sense, bool inverse,
                 std::size_t stride = 1);
void step(std::span<Complex> amps, const WalkParams& params,
          std::size_t stride = 1);
void inverse_step(std::span<Complex> amps, const WalkParams& params,
                  std::size_t stride = 1);
void evolve(std::span<Complex> amps, const WalkParams& params,
            std::size_t stride = 1);
void inverse_evolve(std::span<Complex> amps, const WalkParams& params,
                    std::size_t stride = 1);

}  // namespace kernels

}  // namespace qwqkd
