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

#include "qwqkd/protocol/semi_quantum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace qwqkd::protocol {

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

std::size_t basis_index(long x, Coin c) {
  return 2 * static_cast<std::size_t>(x) + static_cast<std::size_t>(c);
}

enum class Pass { Forward, Return };

}  // namespace

WalkParams lemma_walk_params(int positions, long steps) {
  return WalkParams::with_coin(positions, hadamard_coin(), steps, StepOrder::ShiftThenCoin,
                               ShiftSense::RightDecrements);
}

LemmaWalk lemma_walk(int l, Coin s, int l2, Coin s2, int positions) {
  if (positions < 1 || positions % 2 == 0) {
    throw std::invalid_argument("the covering walk needs odd P, got " + std::to_string(positions));
  }
  if (l < 0 || l >= positions || l2 < 0 || l2 >= positions) {
    throw std::invalid_argument("target positions must lie in [0, P)");
  }
  const long p = positions;
  const long half = (p + 1) / 2;  // inverse of 2 mod P

  LemmaWalk out;
  out.positions = positions;
  out.l = l;
  out.s = s;
  out.l2 = l2;
  out.s2 = s2;
  out.q = mod((l + l2) * half, p);
  long q0 = mod((l2 - l) * half, p);
  if (q0 > p / 2) q0 -= p;
  if (q0 < 0) {
    std::swap(out.l, out.l2);
    std::swap(out.s, out.s2);
    out.swapped = true;
    q0 = -q0;
  }
  out.q0 = q0;
  out.initial = basis_index(mod(out.q + 1, p), Coin::R);

  const std::size_t first = basis_index(out.l, out.s);
  const std::size_t second = basis_index(out.l2, out.s2);
  const WalkParams one_step = lemma_walk_params(positions, 1);
  std::vector<Complex> amps = basis_buffer(2 * static_cast<std::size_t>(p), out.initial);
  const long limit = std::max(p * p, q0 + 1);
  for (long t = 1; t <= limit; ++t) {
    kernels::step(amps, one_step);
    if (t < q0 + 1) continue;
    const double w1 = std::norm(amps[first]);
    const double w2 = std::norm(amps[second]);
    if (w1 >= kLemmaAmplitudeFloor && w2 >= kLemmaAmplitudeFloor) {
      out.steps = t;
      out.weight_first = w1;
      out.weight_second = w2;
      return out;
    }
  }
  throw std::runtime_error("covering walk construction failed for P=" + std::to_string(p) +
                           " targets (" + std::to_string(l) + "," + std::string(to_string(s)) +
                           "), (" + std::to_string(l2) + "," + std::string(to_string(s2)) +
                           "): no step count up to P^2 reaches both");
}

std::vector<QSetMember> build_q_set(int positions) {
  std::vector<QSetMember> out{QSetMember{0, 0}};
  std::set<std::pair<long, std::size_t>> seen;
  for (int l = 0; l < positions; ++l) {
    for (Coin s : {Coin::R, Coin::L}) {
      for (int l2 = 0; l2 < positions; ++l2) {
        for (Coin s2 : {Coin::R, Coin::L}) {
          const LemmaWalk w = lemma_walk(l, s, l2, s2, positions);
          if (seen.emplace(w.steps, w.initial).second) {
            out.push_back(QSetMember{w.steps, w.initial});
          }
        }
      }
    }
  }
  return out;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const ComplexMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

ProtocolTranscript protocol3_run(const ProtocolConfig& config,
                                 const std::vector<QSetMember>& q_set,
                                 const ChannelModel& channel, Rng& rng) {
  config.validate();
  if (q_set.empty()) throw std::invalid_argument("Q-set is empty");
  const int p = config.positions;
  const std::size_t d = 2 * static_cast<std::size_t>(p);

  const AttackModel* attack = channel.attack() ? &*channel.attack() : nullptr;
  const bool entangling = attack && attack->kind() == AttackKind::EntanglingPair;
  if (entangling && attack->positions() != p) {
    throw std::invalid_argument("attack and config disagree on P");
  }
  const std::size_t de = entangling ? attack->ancilla_dim() : 1;
  const auto dei = static_cast<Eigen::Index>(de);
  std::optional<PauliChannel> noise;
  if (channel.kind() == ChannelModel::Kind::Pauli) {
    noise = PauliChannel::from_error_weight(channel.error_weight(), p);
  }

  std::vector<WalkParams> walks;
  walks.reserve(q_set.size());
  for (const QSetMember& m : q_set) walks.push_back(m.walk(p));

  // Eve's ancilla state summed per Bob key symbol, weighted by its probability.
  std::vector<ComplexMatrix> eve_sum;
  std::vector<double> eve_weight;
  if (entangling) {
    eve_sum.assign(d, ComplexMatrix::Zero(dei, dei));
    eve_weight.assign(d, 0.0);
  }

  auto transmit = [&](std::vector<Complex>& amps, Pass pass) {
    if (channel.kind() == ChannelModel::Kind::Pauli) {
      apply_pauli_noise(amps, *noise, de, rng);
      return;
    }
    if (!attack) return;
    switch (attack->kind()) {
      case AttackKind::InterceptResendZ:
        amps = basis_buffer(d, measure_walk_index(amps, 1, rng));
        return;
      case AttackKind::InterceptResendW: {
        const WalkParams& guess = walks[rng.below(walks.size())];
        kernels::inverse_evolve(amps, guess);
        amps = basis_buffer(d, measure_walk_index(amps, 1, rng));
        kernels::evolve(amps, guess);
        return;
      }
      case AttackKind::ImpersonateMITM:
        if (pass == Pass::Forward) {
          const WalkParams& fake = walks[rng.below(walks.size())];
          amps = basis_buffer(d, rng.below(d));
          kernels::evolve(amps, fake);
        }
        return;
      case AttackKind::EntanglingPair:
        apply_matrix(amps, pass == Pass::Forward ? attack->forward() : attack->reverse());
        return;
    }
  };

  ProtocolTranscript out;
  out.protocol = ProtocolKind::SemiQuantum;
  out.positions = p;
  out.symbol_bits = std::log2(static_cast<double>(d));
  out.records.reserve(config.iterations);

  for (std::size_t n = 0; n < config.iterations; ++n) {
    IterationRecord rec;
    rec.index = n;
    const std::size_t a = rng.below(d);
    const std::size_t member = rng.below(q_set.size());
    const bool bob_measures = rng.bit();
    const bool alice_z = rng.bit();
    const WalkParams& walk = walks[member];

    std::vector<Complex> amps = basis_buffer(d, a, de);
    kernels::evolve(amps, walk, de);
    transmit(amps, Pass::Forward);

    if (bob_measures) {
      if (entangling && alice_z) {
        for (std::size_t b = 0; b < d; ++b) {
          std::vector<Complex> branch(d * de);
          double weight = 0.0;
          for (std::size_t e = 0; e < de; ++e) {
            branch[b * de + e] = amps[b * de + e];
            weight += std::norm(amps[b * de + e]);
          }
          if (weight <= 0.0) continue;
          apply_matrix(branch, attack->reverse());
          // Rows are ancilla, columns walk index.
          const Eigen::Map<const ComplexMatrix> psi(branch.data(), dei, static_cast<Eigen::Index>(d));
          eve_sum[b] += psi * psi.adjoint();  // already carries the weight
          eve_weight[b] += weight;
        }
      }
      rec.received = static_cast<long>(measure_walk_index(amps, de, rng));
    }

    transmit(amps, Pass::Return);

    if (!alice_z) kernels::inverse_evolve(amps, walk, de);
    const std::size_t alpha = measure_walk_index(amps, de, rng);

    rec.alice_choice = alice_z ? 0 : 1;
    rec.bob_choice = bob_measures ? 0 : 1;
    rec.sent = static_cast<long>(a);
    rec.steps = q_set[member].steps;
    rec.alice_value = static_cast<long>(alpha);
    if (bob_measures && alice_z) {
      ++out.raw_key_rounds;
      rec.bob_value = rec.received;
      rec.error = rec.alice_value != rec.bob_value;
      if (rng.bernoulli(config.check_fraction)) {
        rec.tag = RoundTag::KeyCheck;
        ++out.key_checks;
        out.key_errors += rec.error ? 1 : 0;
      } else {
        rec.tag = RoundTag::Key;
        out.alice_key.push_back(rec.alice_value);
        out.bob_key.push_back(rec.bob_value);
        if (rec.error) ++out.key_symbol_errors;
      }
    } else if (!bob_measures && !alice_z) {
      rec.tag = RoundTag::Check;
      rec.error = alpha != a;
      ++out.reflect_checks;
      out.reflect_errors += rec.error ? 1 : 0;
    }
    out.records.push_back(rec);
  }
  out.raw_key_bits = static_cast<double>(out.raw_key_rounds) * out.symbol_bits;

  if (entangling) {
    std::vector<ComplexMatrix> states;
    for (std::size_t b = 0; b < d; ++b) {
      if (eve_weight[b] > 0.0) states.push_back(eve_sum[b] / eve_weight[b]);
    }
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        total += trace_distance(states[i], states[j]);
        ++pairs;
      }
    }
    out.eve_info_proxy = pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
  }
  return out;
}

RobustnessResult robustness_experiment(const ProtocolConfig& config,
                                       const std::vector<QSetMember>& q_set,
                                       const AttackModel& attack, Rng& rng) {
  if (attack.kind() != AttackKind::EntanglingPair) {
    throw std::invalid_argument("robustness experiments need an entangling attack");
  }
  const ProtocolTranscript t = protocol3_run(config, q_set, ChannelModel::adversary(attack), rng);
  RobustnessResult r;
  r.detection_rate = t.detection_rate();
  r.eve_info_proxy = t.eve_info_proxy.value_or(0.0);
  r.reflect_checks = t.reflect_checks;
  r.reflect_errors = t.reflect_errors;
  r.key_checks = t.key_checks;
  r.key_errors = t.key_errors;
  return r;
}

}  // namespace qwqkd::protocol
