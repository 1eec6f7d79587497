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

#include "qwqkd/walk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qwqkd/angle.hpp"
#include "qwqkd/rng.hpp"

namespace qwqkd {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_positions(int positions) {
  if (positions < 1) {
    throw std::invalid_argument("positions must be >= 1, got " +
                                std::to_string(positions));
  }
}

// 2x2 unitary raised to a non-negative integer power. The matrix is split
// as e^{i alpha} V with V in SU(2); V = cos(b) I + K with K traceless, whose
// eigenvalues are e^{+-i b}, so V^t = cos(t b) I + sin(t b)/sin(b) K.
CoinMatrix unitary_power(const CoinMatrix& a, long power) {
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const double alpha = std::arg(det) / 2.0;
  const Complex unphase = std::polar(1.0, -alpha);
  CoinMatrix v;
  for (std::size_t i = 0; i < 4; ++i) v.entries[i] = a.entries[i] * unphase;

  const double cos_b = 0.5 * (v(0, 0) + v(1, 1)).real();
  CoinMatrix k = v;
  k(0, 0) -= cos_b;
  k(1, 1) -= cos_b;
  double sin_b = 0.0;
  for (const Complex& z : k.entries) sin_b += std::norm(z);
  sin_b = std::sqrt(0.5 * sin_b);
  const double b = std::atan2(sin_b, cos_b);

  const double tb = b * static_cast<double>(power);
  const double ratio = sin_b > 1e-300 ? std::sin(tb) / sin_b : 0.0;
  CoinMatrix out;
  for (std::size_t i = 0; i < 4; ++i) out.entries[i] = ratio * k.entries[i];
  out(0, 0) += std::cos(tb);
  out(1, 1) += std::cos(tb);

  const Complex phase = std::polar(1.0, alpha * static_cast<double>(power));
  for (Complex& z : out.entries) z *= phase;
  return out;
}

// Moves every slot of one coin sub-lattice by +1 or -1 position.
void rotate_sublattice(std::span<Complex> amps, std::size_t positions,
                       std::size_t coin, int direction, std::size_t stride) {
  if (positions < 2) return;
  const std::size_t block = 2 * stride;
  for (std::size_t e = 0; e < stride; ++e) {
    auto at = [&](std::size_t x) -> Complex& {
      return amps[x * block + coin * stride + e];
    };
    if (direction > 0) {
      const Complex tmp = at(positions - 1);
      for (std::size_t x = positions - 1; x > 0; --x) at(x) = at(x - 1);
      at(0) = tmp;
    } else {
      const Complex tmp = at(0);
      for (std::size_t x = 0; x + 1 < positions; ++x) at(x) = at(x + 1);
      at(positions - 1) = tmp;
    }
  }
}

}  // namespace

StateVector make_state_unchecked(std::vector<Complex> amplitudes) {
  return StateVector(std::move(amplitudes));
}

std::string_view to_string(Flip flip) {
  switch (flip) {
    case Flip::I: return "I";
    case Flip::X: return "X";
    case Flip::Y: return "Y";
  }
  return "?";
}

std::string_view to_string(Coin coin) { return coin == Coin::R ? "R" : "L"; }

Flip parse_flip(std::string_view text) {
  if (text == "I" || text == "i") return Flip::I;
  if (text == "X" || text == "x") return Flip::X;
  if (text == "Y" || text == "y") return Flip::Y;
  throw std::invalid_argument("unknown flip '" + std::string(text) +
                              "' (expected I, X or Y)");
}

Coin parse_coin(std::string_view text) {
  if (text == "R" || text == "r" || text == "0") return Coin::R;
  if (text == "L" || text == "l" || text == "1") return Coin::L;
  throw std::invalid_argument("unknown coin label '" + std::string(text) +
                              "' (expected R or L)");
}

double reduce_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("angle must be finite");
  }
  double r = std::fmod(radians, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

CoinMatrix CoinMatrix::identity() {
  CoinMatrix m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  return m;
}

CoinMatrix CoinMatrix::adjoint() const {
  CoinMatrix m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

CoinMatrix CoinMatrix::operator*(const CoinMatrix& rhs) const {
  CoinMatrix m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      m(r, c) = (*this)(r, 0) * rhs(0, c) + (*this)(r, 1) * rhs(1, c);
  return m;
}

double CoinMatrix::max_abs_diff(const CoinMatrix& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    d = std::max(d, std::abs(entries[i] - other.entries[i]));
  return d;
}

bool CoinMatrix::is_unitary(double tol) const {
  return (adjoint() * *this).max_abs_diff(identity()) <= tol;
}

CoinMatrix coin_matrix(double theta, double phi) {
  const Complex up = std::polar(1.0, phi);
  const Complex down = std::polar(1.0, -phi);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CoinMatrix m;
  m(0, 0) = up * c;
  m(0, 1) = up * s;
  m(1, 0) = -down * s;
  m(1, 1) = down * c;
  return m;
}

CoinMatrix flip_matrix(Flip flip) {
  CoinMatrix m;
  switch (flip) {
    case Flip::I:
      return CoinMatrix::identity();
    case Flip::X:
      m(0, 0) = kInvSqrt2;
      m(0, 1) = kInvSqrt2;
      m(1, 0) = kInvSqrt2;
      m(1, 1) = -kInvSqrt2;
      return m;
    case Flip::Y:
      m(0, 0) = kInvSqrt2;
      m(0, 1) = kInvSqrt2;
      m(1, 0) = Complex(0.0, kInvSqrt2);
      m(1, 1) = Complex(0.0, -kInvSqrt2);
      return m;
  }
  return CoinMatrix::identity();
}

CoinMatrix hadamard_coin() { return flip_matrix(Flip::X); }

// ---------------------------------------------------------------------------
// WalkParams

WalkParams::WalkParams(int positions, double theta, double phi, long steps,
                       Flip flip, StepOrder order)
    : positions_(positions),
      theta_(reduce_angle(theta)),
      phi_(reduce_angle(phi)),
      steps_(steps),
      flip_(flip),
      order_(order),
      coin_(coin_matrix(theta_, phi_)) {
  require_positions(positions);
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
}

WalkParams WalkParams::with_coin(int positions, const CoinMatrix& coin,
                                 long steps, StepOrder order,
                                 ShiftSense sense) {
  require_positions(positions);
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  if (!coin.is_unitary(1e-12)) {
    throw std::invalid_argument("coin matrix is not unitary");
  }
  WalkParams p;
  p.positions_ = positions;
  p.steps_ = steps;
  p.order_ = order;
  p.sense_ = sense;
  p.coin_ = coin;
  p.custom_coin_ = true;
  return p;
}

WalkParams WalkParams::with_steps(long steps) const {
  if (steps < 0) throw std::invalid_argument("steps must be non-negative");
  WalkParams p = *this;
  p.steps_ = steps;
  return p;
}

WalkParams WalkParams::with_flip(Flip flip) const {
  WalkParams p = *this;
  p.flip_ = flip;
  return p;
}

WalkParams WalkParams::with_order(StepOrder order) const {
  WalkParams p = *this;
  p.order_ = order;
  return p;
}

WalkParams WalkParams::with_sense(ShiftSense sense) const {
  WalkParams p = *this;
  p.sense_ = sense;
  return p;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::basis(int positions, int position, Coin coin) {
  require_positions(positions);
  if (position < 0 || position >= positions) {
    throw std::out_of_range("position " + std::to_string(position) +
                            " outside [0, " + std::to_string(positions) + ")");
  }
  std::vector<Complex> amps(2 * static_cast<std::size_t>(positions));
  amps[2 * static_cast<std::size_t>(position) + static_cast<int>(coin)] = 1.0;
  return StateVector(std::move(amps));
}

StateVector StateVector::basis_index(int positions, std::size_t index) {
  require_positions(positions);
  const std::size_t dim = 2 * static_cast<std::size_t>(positions);
  if (index >= dim) {
    throw std::out_of_range("basis index " + std::to_string(index) +
                            " outside [0, " + std::to_string(dim) + ")");
  }
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return StateVector(std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes,
                                         double tol) {
  if (amplitudes.empty() || amplitudes.size() % 2 != 0) {
    throw std::invalid_argument("state dimension must be a positive even number");
  }
  StateVector s(std::move(amplitudes));
  if (std::abs(s.norm() - 1.0) > tol) {
    throw std::invalid_argument("state is not normalized");
  }
  return s;
}

double StateVector::norm() const {
  double acc = 0.0;
  for (const Complex& a : amplitudes_) acc += std::norm(a);
  return std::sqrt(acc);
}

double StateVector::max_abs_diff(const StateVector& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("state dimensions differ");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    d = std::max(d, std::abs(amplitudes_[i] - other.amplitudes_[i]));
  return d;
}

// ---------------------------------------------------------------------------
// Kernels

namespace kernels {

void apply_coin(std::span<Complex> amps, const CoinMatrix& coin,
                std::size_t stride) {
  const std::size_t block = 2 * stride;
  const Complex c00 = coin(0, 0), c01 = coin(0, 1);
  const Complex c10 = coin(1, 0), c11 = coin(1, 1);
  for (std::size_t base = 0; base < amps.size(); base += block) {
    for (std::size_t e = 0; e < stride; ++e) {
      Complex& r = amps[base + e];
      Complex& l = amps[base + stride + e];
      const Complex nr = c00 * r + c01 * l;
      const Complex nl = c10 * r + c11 * l;
      r = nr;
      l = nl;
    }
  }
}

void apply_shift(std::span<Complex> amps, ShiftSense sense, bool inverse,
                 std::size_t stride) {
  const std::size_t positions = amps.size() / (2 * stride);
  int right = sense == ShiftSense::RightIncrements ? 1 : -1;
  if (inverse) right = -right;
  rotate_sublattice(amps, positions, 0, right, stride);
  rotate_sublattice(amps, positions, 1, -right, stride);
}

void step(std::span<Complex> amps, const WalkParams& params,
          std::size_t stride) {
  if (params.order() == StepOrder::CoinThenShift) {
    apply_coin(amps, params.coin(), stride);
    apply_shift(amps, params.sense(), false, stride);
  } else {
    apply_shift(amps, params.sense(), false, stride);
    apply_coin(amps, params.coin(), stride);
  }
}

void inverse_step(std::span<Complex> amps, const WalkParams& params,
                  std::size_t stride) {
  const CoinMatrix adj = params.coin().adjoint();
  if (params.order() == StepOrder::CoinThenShift) {
    apply_shift(amps, params.sense(), true, stride);
    apply_coin(amps, adj, stride);
  } else {
    apply_coin(amps, adj, stride);
    apply_shift(amps, params.sense(), true, stride);
  }
}

void evolve(std::span<Complex> amps, const WalkParams& params,
            std::size_t stride) {
  if (params.flip() != Flip::I) apply_coin(amps, flip_matrix(params.flip()), stride);
  for (long t = 0; t < params.steps(); ++t) step(amps, params, stride);
}

void inverse_evolve(std::span<Complex> amps, const WalkParams& params,
                    std::size_t stride) {
  for (long t = 0; t < params.steps(); ++t) inverse_step(amps, params, stride);
  if (params.flip() != Flip::I) {
    apply_coin(amps, flip_matrix(params.flip()).adjoint(), stride);
  }
}

}  // namespace kernels

// ---------------------------------------------------------------------------
// Value-level operations

namespace {

void require_matching(const StateVector& state, const WalkParams& params) {
  if (state.dim() != params.dim()) {
    throw std::invalid_argument("state dimension " + std::to_string(state.dim()) +
                                " does not match walk dimension " +
                                std::to_string(params.dim()));
  }
}

std::vector<Complex> copy_amplitudes(const StateVector& s) {
  return {s.amplitudes().begin(), s.amplitudes().end()};
}

}  // namespace

StateVector basis_state(int positions, int position, Coin coin) {
  return StateVector::basis(positions, position, coin);
}

StateVector apply_coin(const StateVector& state, const CoinMatrix& coin) {
  auto amps = copy_amplitudes(state);
  kernels::apply_coin(amps, coin);
  return make_state_unchecked(std::move(amps));
}

StateVector apply_shift(const StateVector& state, ShiftSense sense) {
  auto amps = copy_amplitudes(state);
  kernels::apply_shift(amps, sense, false);
  return make_state_unchecked(std::move(amps));
}

StateVector apply_inverse_shift(const StateVector& state, ShiftSense sense) {
  auto amps = copy_amplitudes(state);
  kernels::apply_shift(amps, sense, true);
  return make_state_unchecked(std::move(amps));
}

StateVector evolve(const StateVector& state, const WalkParams& params) {
  require_matching(state, params);
  auto amps = copy_amplitudes(state);
  kernels::evolve(amps, params);
  return make_state_unchecked(std::move(amps));
}

StateVector inverse_evolve(const StateVector& state, const WalkParams& params) {
  require_matching(state, params);
  auto amps = copy_amplitudes(state);
  kernels::inverse_evolve(amps, params);
  return make_state_unchecked(std::move(amps));
}

StateVector translate(const StateVector& state, int shift) {
  const int positions = state.positions();
  if (shift < 0 || shift >= positions) {
    throw std::out_of_range("translation " + std::to_string(shift) +
                            " outside [0, " + std::to_string(positions) + ")");
  }
  std::vector<Complex> out(state.dim());
  for (int x = 0; x < positions; ++x) {
    const std::size_t to = 2 * static_cast<std::size_t>((x + shift) % positions);
    out[to] = state[2 * static_cast<std::size_t>(x)];
    out[to + 1] = state[2 * static_cast<std::size_t>(x) + 1];
  }
  return make_state_unchecked(std::move(out));
}

ComplexMatrix walk_basis_amplitudes(const WalkParams& params) {
  const std::size_t dim = params.dim();
  ComplexMatrix m(dim, dim);
  std::vector<Complex> column(dim);
  for (std::size_t y = 0; y < dim; ++y) {
    std::fill(column.begin(), column.end(), Complex{});
    column[y] = 1.0;
    kernels::evolve(column, params);
    for (std::size_t x = 0; x < dim; ++x) m(x, y) = column[x];
  }
  return m;
}

ComplexMatrix fourier_amplitudes(const WalkParams& params) {
  const int positions = params.positions();
  const std::size_t dim = params.dim();
  const CoinMatrix flip = flip_matrix(params.flip());

  // Per-momentum t-step propagator, including the initial flip.
  std::vector<CoinMatrix> momentum(static_cast<std::size_t>(positions));
  for (int k = 0; k < positions; ++k) {
    const double angle = 2.0 * kPi * k / positions;
    CoinMatrix shift;
    // S|k,R> = w^{-k}|k,R> when R increments the position.
    const double r_sign = params.sense() == ShiftSense::RightIncrements ? -1.0 : 1.0;
    shift(0, 0) = std::polar(1.0, r_sign * angle);
    shift(1, 1) = std::polar(1.0, -r_sign * angle);
    const CoinMatrix one_step = params.order() == StepOrder::CoinThenShift
                                    ? shift * params.coin()
                                    : params.coin() * shift;
    momentum[static_cast<std::size_t>(k)] =
        unitary_power(one_step, params.steps()) * flip;
  }

  ComplexMatrix m(dim, dim);
  const double inv = 1.0 / positions;
  for (int dx = 0; dx < positions; ++dx) {
    // Entries depend on x - y only.
    CoinMatrix block;
    for (int k = 0; k < positions; ++k) {
      const Complex w = std::polar(inv, 2.0 * kPi * ((static_cast<long>(k) * dx) % positions) / positions);
      const CoinMatrix& mk = momentum[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < 4; ++i) block.entries[i] += w * mk.entries[i];
    }
    for (int y = 0; y < positions; ++y) {
      const int x = (y + dx) % positions;
      for (int s = 0; s < 2; ++s)
        for (int sp = 0; sp < 2; ++sp)
          m(2 * x + s, 2 * y + sp) = block(s, sp);
    }
  }
  return m;
}

std::vector<double> born_distribution(const StateVector& state) {
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

std::vector<double> position_distribution(const StateVector& state) {
  std::vector<double> p(static_cast<std::size_t>(state.positions()));
  for (std::size_t x = 0; x < p.size(); ++x)
    p[x] = std::norm(state[2 * x]) + std::norm(state[2 * x + 1]);
  return p;
}

std::size_t sample_measurement(const StateVector& state, Rng& rng) {
  const auto p = born_distribution(state);
  return rng.discrete(p);
}

int sample_position(const StateVector& state, Rng& rng) {
  const auto p = position_distribution(state);
  return static_cast<int>(rng.discrete(p));
}

}  // namespace qwqkd
