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
#include <vector>

#include "qwqkd/protocol/common.hpp"

namespace qwqkd::protocol {

// Coin theta_k = 2 pi k / K (phi = 0, F = I) driven for t steps.
WalkParams two_way_walk(const ProtocolConfig& config, int k, long t);

// N independent key transports. Alice prepares a random walk state, Bob
// encodes r by translating it, and Alice decodes r = i0 - l mod P after
// undoing the walk. The channel acts on both passes. Channel attacks: the
// intercept-resend variants measure on each pass (the W variant guesses its
// own (k, t)); MITM injects a fresh walk state forward and a random basis
// state on the way back. Entangling attacks are rejected.
ProtocolTranscript protocol1_run(const ProtocolConfig& config, const ChannelModel& channel,
                                 Rng& rng);

struct HeldState {
  std::size_t index = 0;  // position in Alice's batch of m
  int k = 1;
  long t = 0;
  int position = 0;
  Coin coin = Coin::R;
  std::vector<Complex> amps;  // as currently held by the receiver
};

struct Verification1Result {
  bool pass = true;
  std::size_t disclosed = 0;
  std::size_t failures = 0;
  std::vector<HeldState> surviving;
};

// Alice sends m states through `channel`; m/3 chosen at random are disclosed
// and Bob checks that undoing each walk gives back (l, s).
Verification1Result verification1(const ProtocolConfig& config, const ChannelModel& channel,
                                  Rng& rng);

struct Verification2Result {
  bool pass = true;
  std::size_t disclosed = 0;
  std::size_t failures = 0;
  std::vector<long> alice_key;  // r-hat for undisclosed states
  std::vector<long> bob_key;    // r for undisclosed states
  double key_bits = 0.0;
};

// Bob translates each surviving state by a random r and returns it through
// `channel`; half of the (j, r_j) pairs are disclosed and checked by Alice.
Verification2Result verification2(const ProtocolConfig& config, const ChannelModel& channel,
                                  Rng& rng, const Verification1Result& survivors);

struct BellResult {
  bool pass = false;
  bool qubit_path = false;
  std::size_t z_checks = 0;
  std::size_t conjugate_checks = 0;
  double z_agreement = 0.0;
  double conjugate_agreement = 0.0;
  double statistic = 0.0;  // min of the two agreement rates
};

// Shares (1/sqrt 2P) sum_i |i, i> per check and sends the second half through
// `channel`. Even checks compare both halves in the computational basis, odd
// ones in a conjugate basis: Hadamard on every qubit pair when 2P is a power
// of two, otherwise Fourier on Alice's side and its conjugate on Bob's.
// Passes when both agreement rates are at least 1 - epsilon.
BellResult bell_verification(int positions, std::size_t n_checks, const ChannelModel& channel,
                             Rng& rng, double epsilon = 0.05);

}  // namespace qwqkd::protocol
