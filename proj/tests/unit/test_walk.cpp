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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qwqkd/angle.hpp"
#include "qwqkd/rng.hpp"
#include "qwqkd/walk.hpp"

using namespace qwqkd;

namespace {

std::vector<Complex> to_vec(const StateVector& s) { return {s.amplitudes().begin(), s.amplitudes().end()}; }

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

StateVector random_state(int positions, Rng& rng) {
  std::vector<Complex> v(2 * static_cast<std::size_t>(positions));
  double n = 0.0;
  for (auto& a : v) {
    a = Complex(rng.normal(), rng.normal());
    n += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(n);
  return StateVector::from_amplitudes(v);
}

}  // namespace

TEST_SUITE("walk") {
  TEST_CASE("coins and flips are unitary") {
    for (double theta : {0.0, 0.3, 1.1, kPi / 4, 2.9}) {
      for (double phi : {0.0, 0.7, kPi, 5.0}) CHECK(coin_matrix(theta, phi).is_unitary());
    }
    for (Flip f : {Flip::I, Flip::X, Flip::Y}) CHECK(flip_matrix(f).is_unitary());
    CHECK(hadamard_coin().max_abs_diff(flip_matrix(Flip::X)) == 0.0);
  }

  TEST_CASE("coin entries follow the (theta, phi) family") {
    const CoinMatrix c = coin_matrix(0.3, 0.2);
    CHECK(std::abs(c(0, 0) - std::polar(std::cos(0.3), 0.2)) < 1e-15);
    CHECK(std::abs(c(0, 1) - std::polar(std::sin(0.3), 0.2)) < 1e-15);
    CHECK(std::abs(c(1, 0) + std::polar(std::sin(0.3), -0.2)) < 1e-15);
    CHECK(std::abs(c(1, 1) - std::polar(std::cos(0.3), -0.2)) < 1e-15);
  }

  TEST_CASE("angles reduce into [0, 2pi)") {
    CHECK(reduce_angle(-kPi / 2) == doctest::Approx(1.5 * kPi));
    CHECK(reduce_angle(2 * kPi) == doctest::Approx(0.0));
    CHECK(reduce_angle(5 * kPi) == doctest::Approx(kPi));
  }

  TEST_CASE("parse helpers reject junk") {
    CHECK(parse_flip("Y") == Flip::Y);
    CHECK(parse_coin("L") == Coin::L);
    CHECK_THROWS_AS(parse_flip("Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_coin("up"), std::invalid_argument);
  }

  TEST_CASE("state construction validates") {
    CHECK_THROWS_AS(basis_state(3, 3, Coin::R), std::out_of_range);
    CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(StateVector::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(WalkParams(0, 0.1, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(WalkParams(3, 0.1, 0.0, -1), std::invalid_argument);
    CHECK(StateVector::from_amplitudes({0.6, Complex(0.0, 0.8)}).norm() == doctest::Approx(1.0));
  }

  TEST_CASE("zero steps without a flip is the identity") {
    const WalkParams w(5, kPi / 4, 0.0, 0);
    const StateVector s = evolve(basis_state(5, 0, Coin::R), w);
    const auto probs = born_distribution(s);
    CHECK(probs[0] == 1.0);
    for (std::size_t i = 1; i < probs.size(); ++i) CHECK(probs[i] == 0.0);
  }

  TEST_CASE("one step of the Hadamard walk splits the walker") {
    const WalkParams w(5, kPi / 4, 0.0, 1);
    const auto pos = position_distribution(evolve(basis_state(5, 2, Coin::R), w));
    CHECK(pos[1] == doctest::Approx(0.5));
    CHECK(pos[3] == doctest::Approx(0.5));
  }

  TEST_CASE("stepper matches dense operators") {
    Rng rng(7);
    for (int p : {1, 2, 3, 4, 5, 7}) {
      for (Flip f : {Flip::I, Flip::X, Flip::Y}) {
        for (StepOrder order : {StepOrder::CoinThenShift, StepOrder::ShiftThenCoin}) {
          for (ShiftSense sense : {ShiftSense::RightIncrements, ShiftSense::RightDecrements}) {
            const double theta = rng.uniform() * 2 * kPi;
            const double phi = rng.uniform() * 2 * kPi;
            const long t = 1 + static_cast<long>(rng.below(12));
            const WalkParams w = WalkParams(p, theta, phi, t, f, order).with_sense(sense);
            CHECK(max_diff(walk_basis_amplitudes(w), oracle::walk_operator(w)) < 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("custom coins match dense operators") {
    const WalkParams w = WalkParams::with_coin(5, hadamard_coin(), 7, StepOrder::ShiftThenCoin,
                                               ShiftSense::RightDecrements);
    CHECK(max_diff(walk_basis_amplitudes(w), oracle::walk_operator(w)) < 1e-12);
    CHECK(w.has_custom_coin());
    CoinMatrix bad = CoinMatrix::identity();
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(WalkParams::with_coin(3, bad, 1, StepOrder::CoinThenShift,
                                          ShiftSense::RightIncrements),
                    std::invalid_argument);
  }

  TEST_CASE("momentum-space amplitudes agree with stepping") {
    for (int p : {1, 3, 5, 9}) {
      for (double theta : {0.1 * kPi, 0.25 * kPi, 0.7 * kPi}) {
        for (long t : {1L, 17L, 403L}) {
          for (Flip f : {Flip::I, Flip::Y}) {
            const WalkParams w(p, theta, 0.3 * kPi, t, f);
            CHECK(max_diff(fourier_amplitudes(w), walk_basis_amplitudes(w)) < 1e-9);
          }
        }
      }
    }
    const WalkParams lemma = WalkParams::with_coin(7, hadamard_coin(), 33, StepOrder::ShiftThenCoin,
                                                   ShiftSense::RightDecrements);
    CHECK(max_diff(fourier_amplitudes(lemma), walk_basis_amplitudes(lemma)) < 1e-9);
  }

  TEST_CASE("evolution preserves the norm and inverts exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      const int p = 1 + static_cast<int>(rng.below(9));
      const WalkParams w(p, rng.uniform() * 6, rng.uniform() * 6, static_cast<long>(rng.below(200)),
                         static_cast<Flip>(rng.below(3)));
      const StateVector s = random_state(p, rng);
      const StateVector e = evolve(s, w);
      CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(inverse_evolve(e, w).max_abs_diff(s) < 1e-10);
    }
  }

  TEST_CASE("translation commutes with the walk") {
    Rng rng(3);
    for (int p : {1, 3, 6, 11}) {
      const WalkParams w(p, 0.37, 1.2, 25, Flip::Y);
      const StateVector s = random_state(p, rng);
      for (int r = 0; r < p; ++r) {
        CHECK(evolve(translate(s, r), w).max_abs_diff(translate(evolve(s, w), r)) < 1e-12);
      }
    }
    CHECK_THROWS_AS(translate(basis_state(3, 0, Coin::R), 3), std::out_of_range);
  }

  TEST_CASE("shift and its inverse cancel") {
    Rng rng(5);
    const StateVector s = random_state(6, rng);
    for (ShiftSense sense : {ShiftSense::RightIncrements, ShiftSense::RightDecrements}) {
      CHECK(apply_inverse_shift(apply_shift(s, sense), sense).max_abs_diff(s) < 1e-15);
    }
    const auto moved = apply_shift(basis_state(4, 3, Coin::R));
    CHECK(std::abs(moved[0]) == 1.0);
  }

  TEST_CASE("strided kernels act on every stacked copy") {
    Rng rng(9);
    const int p = 5;
    const std::size_t stride = 3;
    const WalkParams w(p, 0.9, 0.4, 31, Flip::X);
    std::vector<StateVector> copies;
    std::vector<Complex> stacked(2 * p * stride);
    for (std::size_t e = 0; e < stride; ++e) {
      copies.push_back(random_state(p, rng));
      for (std::size_t i = 0; i < 2 * p; ++i) stacked[i * stride + e] = copies[e][i];
    }
    kernels::evolve(stacked, w, stride);
    for (std::size_t e = 0; e < stride; ++e) {
      const auto expect = to_vec(evolve(copies[e], w));
      for (std::size_t i = 0; i < 2 * p; ++i) CHECK(std::abs(stacked[i * stride + e] - expect[i]) < 1e-12);
    }
    kernels::inverse_evolve(stacked, w, stride);
    for (std::size_t e = 0; e < stride; ++e) {
      for (std::size_t i = 0; i < 2 * p; ++i) CHECK(std::abs(stacked[i * stride + e] - copies[e][i]) < 1e-12);
    }
  }

  TEST_CASE("measurement sampling follows the Born rule") {
    const WalkParams w(3, kPi / 4, 0.0, 2);
    const StateVector s = evolve(basis_state(3, 0, Coin::R), w);
    const auto probs = born_distribution(s);
    Rng rng(2024);
    const int n = 60000;
    std::vector<int> counts(probs.size(), 0);
    for (int i = 0; i < n; ++i) ++counts[sample_measurement(s, rng)];
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double sigma = std::sqrt(probs[i] * (1 - probs[i]) / n);
      CHECK(std::abs(counts[i] / static_cast<double>(n) - probs[i]) <= 4 * sigma + 1e-12);
    }
    const int x = sample_position(s, rng);
    CHECK(position_distribution(s)[static_cast<std::size_t>(x)] > 0.0);
  }
}

TEST_SUITE("rng") {
  TEST_CASE("streams are reproducible") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c = Rng::derive(42, 1), d = Rng::derive(42, 2), e = Rng::derive(42, 1);
    const auto cv = c.next_u64();
    CHECK(cv != d.next_u64());
    CHECK(cv == e.next_u64());
  }

  TEST_CASE("draws have the right moments") {
    Rng rng(1);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    std::vector<int> below(7, 0);
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      CHECK_UNARY(u >= 0.0);
      CHECK_UNARY(u < 1.0);
      su += u;
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
      ++below[rng.below(7)];
    }
    CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(std::abs(sn / n) < 0.01);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    for (int c : below) CHECK(std::abs(c - n / 7.0) < 5 * std::sqrt(n / 7.0));
  }

  TEST_CASE("discrete draws follow weights") {
    Rng rng(4);
    const std::vector<double> w{0.0, 3.0, 1.0};
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 40000; ++i) ++counts[rng.discrete(w)];
    CHECK(counts[0] == 0);
    CHECK(counts[1] / 40000.0 == doctest::Approx(0.75).epsilon(0.02));
    CHECK_THROWS(rng.discrete(std::vector<double>{0.0, 0.0}));
  }
}

TEST_SUITE("angle") {
  TEST_CASE("pi multiples parse exactly") {
    CHECK(parse_angle("0.4pi") == 0.4 * kPi);
    CHECK(parse_angle("pi") == kPi);
    CHECK(parse_angle("-pi") == -kPi);
    CHECK(parse_angle("pi/4") == kPi / 4);
    CHECK(parse_angle("0.5pi/2") == 0.25 * kPi);
    CHECK(parse_angle("1.25") == 1.25);
    CHECK(parse_angle(" 0 ") == 0.0);
    for (const char* bad : {"", "pi/0", "abc", "0.4pix", "pi*2"}) {
      CHECK_THROWS_AS(parse_angle(bad), std::invalid_argument);
    }
  }

  TEST_CASE("pi multiples format with six decimals") {
    CHECK(format_pi_multiple(0.4 * kPi) == "0.400000");
    CHECK(format_pi_multiple(0.0) == "0.000000");
    CHECK(format_pi_multiple(-1e-12) == "0.000000");
    CHECK(format_pi_multiple(std::sqrt(2.0) * kPi / 4) == "0.353553");
  }
}
