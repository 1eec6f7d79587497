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

// Squared amplitude both targets must exceed.
inline constexpr double kLemmaAmplitudeFloor = 1e-18;

// Hadamard coin, shift before coin, |x,R> moving to x-1.
WalkParams lemma_walk_params(int positions, long steps);

// Walk that takes |q+1, R> to a state overlapping both |l,s> and |l',s'>,
// where q - q0 = l and q + q0 = l' (mod P) with |q0| minimal. A negative q0
// is handled by swapping the two targets.
struct LemmaWalk {
  int positions = 1;
  int l = 0;
  Coin s = Coin::R;
  int l2 = 0;
  Coin s2 = Coin::R;
  bool swapped = false;
  long q = 0;
  long q0 = 0;
  std::size_t initial = 0;  // basis index of |q+1, R>
  long steps = 1;
  double weight_first = 0.0;   // |<l,s|psi>|^2
  double weight_second = 0.0;  // |<l',s'|psi>|^2

  WalkParams walk() const { return lemma_walk_params(positions, steps); }
};

// Tries q0 + 1 steps first and keeps adding steps up to P^2. Throws
// std::runtime_error if no step count reaches both targets, and
// std::invalid_argument for even P or out-of-range targets.
LemmaWalk lemma_walk(int l, Coin s, int l2, Coin s2, int positions);

struct QSetMember {
  long steps = 0;                  // 0 is the identity
  std::size_t witness_initial = 0;  // initial state used by the construction
  WalkParams walk(int positions) const { return lemma_walk_params(positions, steps); }
};

// Identity first, then one member per distinct (steps, initial state) over
// every ordered target pair.
std::vector<QSetMember> build_q_set(int positions);

// N rounds of the semi-quantum protocol. Alice sends W|l,s> for a random
// member W; Bob measures and resends in Z or reflects, each with
// probability 1/2; Alice measures in Z or undoes W and measures. Measure/Z
// rounds are key material (a random config.check_fraction of them is
// disclosed and compared); reflect/undo rounds are checked against (l,s).
//
// Entangling attacks are simulated on the joint (walk) x (ancilla) state and
// fill eve_info_proxy: the mean pairwise trace distance between Eve's
// ancilla states conditioned on Bob's key symbol. The intercept-resend
// attacks act on both passes (the W variant guesses a member); MITM
// replaces the forward state with a random member's state.
ProtocolTranscript protocol3_run(const ProtocolConfig& config,
                                 const std::vector<QSetMember>& q_set,
                                 const ChannelModel& channel, Rng& rng);

struct RobustnessResult {
  double detection_rate = 0.0;
  double eve_info_proxy = 0.0;
  std::size_t reflect_checks = 0;
  std::size_t reflect_errors = 0;
  std::size_t key_checks = 0;
  std::size_t key_errors = 0;
};

// protocol3_run under an entangling attack, reduced to detection and leak.
RobustnessResult robustness_experiment(const ProtocolConfig& config,
                                       const std::vector<QSetMember>& q_set,
                                       const AttackModel& attack, Rng& rng);

// 0.5 * || a - b ||_1 for Hermitian matrices.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qwqkd::protocol
