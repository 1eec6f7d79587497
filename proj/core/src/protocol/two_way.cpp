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

#include "qwqkd/protocol/two_way.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qwqkd::protocol {

namespace {

enum class Pass { Forward, Return };

std::size_t mod(long a, long n) { return static_cast<std::size_t>(((a % n) + n) % n); }

int draw_coin(const ProtocolConfig& config, Rng& rng) {
  return 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.coin_count)));
}

long draw_steps(const ProtocolConfig& config, Rng& rng) {
  return config.t_min +
         static_cast<long>(rng.below(static_cast<std::uint64_t>(config.t_max - config.t_min + 1)));
}

std::vector<Complex> random_walk_state(const ProtocolConfig& config, Rng& rng) {
  const WalkParams walk = two_way_walk(config, draw_coin(config, rng), draw_steps(config, rng));
  std::vector<Complex> amps = basis_buffer(walk.dim(), rng.below(walk.dim()));
  kernels::evolve(amps, walk);
  return amps;
}

void translate_buffer(std::vector<Complex>& amps, long r) {
  const std::size_t shift = 2 * mod(r, static_cast<long>(amps.size() / 2));
  std::rotate(amps.rbegin(), amps.rbegin() + static_cast<long>(shift), amps.rend());
}

void transmit(std::vector<Complex>& amps, const ChannelModel& channel,
              const std::optional<PauliChannel>& noise, Pass pass,
              const ProtocolConfig& config, Rng& rng) {
  switch (channel.kind()) {
    case ChannelModel::Kind::Ideal:
      return;
    case ChannelModel::Kind::Pauli:
      apply_pauli_noise(amps, *noise, 1, rng);
      return;
    case ChannelModel::Kind::Adversary:
      break;
  }
  switch (channel.attack()->kind()) {
    case AttackKind::InterceptResendZ: {
      const std::size_t i = measure_walk_index(amps, 1, rng);
      amps = basis_buffer(amps.size(), i);
      return;
    }
    case AttackKind::InterceptResendW: {
      const WalkParams guess = two_way_walk(config, draw_coin(config, rng), draw_steps(config, rng));
      kernels::inverse_evolve(amps, guess);
      const std::size_t i = measure_walk_index(amps, 1, rng);
      amps = basis_buffer(amps.size(), i);
      kernels::evolve(amps, guess);
      return;
    }
    case AttackKind::ImpersonateMITM:
      if (pass == Pass::Forward) {
        amps = random_walk_state(config, rng);
      } else {
        amps = basis_buffer(amps.size(), rng.below(amps.size()));
      }
      return;
    case AttackKind::EntanglingPair:
      throw std::invalid_argument("entangling attacks apply to the semi-quantum protocol only");
  }
}

std::optional<PauliChannel> noise_for(const ChannelModel& channel, int positions) {
  if (channel.kind() != ChannelModel::Kind::Pauli) return std::nullopt;
  return PauliChannel::from_error_weight(channel.error_weight(), positions);
}

// First `count` entries of a uniformly random permutation of 0..n-1, sorted.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

WalkParams two_way_walk(const ProtocolConfig& config, int k, long t) {
  const double theta = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(config.coin_count);
  return WalkParams(config.positions, theta, 0.0, t, Flip::I);
}

ProtocolTranscript protocol1_run(const ProtocolConfig& config, const ChannelModel& channel,
                                 Rng& rng) {
  config.validate();
  const int p = config.positions;
  const auto noise = noise_for(channel, p);

  ProtocolTranscript out;
  out.protocol = ProtocolKind::TwoWay;
  out.positions = p;
  out.symbol_bits = std::log2(static_cast<double>(p));
  out.records.reserve(config.iterations);

  for (std::size_t n = 0; n < config.iterations; ++n) {
    IterationRecord rec;
    rec.index = n;
    const int k = draw_coin(config, rng);
    const long t = draw_steps(config, rng);
    const auto l = static_cast<long>(rng.below(static_cast<std::uint64_t>(p)));
    const auto s = static_cast<long>(rng.below(2));
    const auto r = static_cast<long>(rng.below(static_cast<std::uint64_t>(p)));
    const WalkParams walk = two_way_walk(config, k, t);

    std::vector<Complex> amps = basis_buffer(walk.dim(), static_cast<std::size_t>(2 * l + s));
    kernels::evolve(amps, walk);
    transmit(amps, channel, noise, Pass::Forward, config, rng);
    translate_buffer(amps, r);
    transmit(amps, channel, noise, Pass::Return, config, rng);
    kernels::inverse_evolve(amps, walk);
    const std::size_t i = measure_walk_index(amps, 1, rng);
    const long r_hat = static_cast<long>(mod(static_cast<long>(i / 2) - l, p));

    rec.alice_choice = k;
    rec.bob_choice = static_cast<int>(r);
    rec.sent = 2 * l + s;
    rec.received = static_cast<long>(i);
    rec.alice_value = r_hat;
    rec.bob_value = r;
    rec.steps = t;
    rec.tag = RoundTag::Key;
    rec.error = r_hat != r;
    if (rec.error) ++out.key_symbol_errors;
    out.alice_key.push_back(r_hat);
    out.bob_key.push_back(r);
    out.records.push_back(rec);
  }
  out.raw_key_rounds = config.iterations;
  out.raw_key_bits = static_cast<double>(out.raw_key_rounds) * out.symbol_bits;
  return out;
}

Verification1Result verification1(const ProtocolConfig& config, const ChannelModel& channel,
                                  Rng& rng) {
  config.validate();
  if (config.states % 3 != 0) throw std::invalid_argument("m must be divisible by 3");
  const int p = config.positions;
  const auto noise = noise_for(channel, p);

  std::vector<HeldState> batch(config.states);
  for (std::size_t j = 0; j < batch.size(); ++j) {
    HeldState& h = batch[j];
    h.index = j;
    h.k = draw_coin(config, rng);
    h.t = draw_steps(config, rng);
    h.position = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
    h.coin = rng.bit() ? Coin::L : Coin::R;
    const WalkParams walk = two_way_walk(config, h.k, h.t);
    h.amps = basis_buffer(walk.dim(), 2 * static_cast<std::size_t>(h.position) +
                                          static_cast<std::size_t>(h.coin));
    kernels::evolve(h.amps, walk);
    transmit(h.amps, channel, noise, Pass::Forward, config, rng);
  }

  Verification1Result out;
  const std::vector<std::size_t> disclosed = random_subset(batch.size(), batch.size() / 3, rng);
  out.disclosed = disclosed.size();
  std::size_t next = 0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    if (next < disclosed.size() && disclosed[next] == j) {
      ++next;
      HeldState& h = batch[j];
      kernels::inverse_evolve(h.amps, two_way_walk(config, h.k, h.t));
      const std::size_t i = measure_walk_index(h.amps, 1, rng);
      if (i != 2 * static_cast<std::size_t>(h.position) + static_cast<std::size_t>(h.coin)) {
        ++out.failures;
      }
    } else {
      out.surviving.push_back(std::move(batch[j]));
    }
  }
  out.pass = out.failures == 0;
  return out;
}

Verification2Result verification2(const ProtocolConfig& config, const ChannelModel& channel,
                                  Rng& rng, const Verification1Result& survivors) {
  config.validate();
  const int p = config.positions;
  const auto noise = noise_for(channel, p);

  std::vector<HeldState> held = survivors.surviving;
  std::vector<long> r(held.size());
  for (std::size_t j = 0; j < held.size(); ++j) {
    r[j] = static_cast<long>(rng.below(static_cast<std::uint64_t>(p)));
    translate_buffer(held[j].amps, r[j]);
    transmit(held[j].amps, channel, noise, Pass::Return, config, rng);
  }

  std::vector<long> r_hat(held.size());
  for (std::size_t j = 0; j < held.size(); ++j) {
    HeldState& h = held[j];
    kernels::inverse_evolve(h.amps, two_way_walk(config, h.k, h.t));
    const std::size_t i = measure_walk_index(h.amps, 1, rng);
    r_hat[j] = static_cast<long>(mod(static_cast<long>(i / 2) - h.position, p));
  }

  Verification2Result out;
  const std::vector<std::size_t> disclosed = random_subset(held.size(), held.size() / 2, rng);
  out.disclosed = disclosed.size();
  std::size_t next = 0;
  for (std::size_t j = 0; j < held.size(); ++j) {
    if (next < disclosed.size() && disclosed[next] == j) {
      ++next;
      if (r_hat[j] != r[j]) ++out.failures;
    } else {
      out.alice_key.push_back(r_hat[j]);
      out.bob_key.push_back(r[j]);
    }
  }
  out.pass = out.failures == 0;
  out.key_bits = static_cast<double>(out.alice_key.size()) * std::log2(static_cast<double>(p));
  return out;
}

BellResult bell_verification(int positions, std::size_t n_checks, const ChannelModel& channel,
                             Rng& rng, double epsilon) {
  if (positions < 1) throw std::invalid_argument("P must be >= 1");
  if (n_checks < 2) throw std::invalid_argument("need at least two Bell checks");
  const std::size_t d = 2 * static_cast<std::size_t>(positions);
  const auto di = static_cast<Eigen::Index>(d);
  const auto noise = noise_for(channel, positions);

  BellResult out;
  out.qubit_path = (d & (d - 1)) == 0;
  // Alice measures in basis `a`, Bob in `b`; perfect correlation on |Phi>
  // needs b = conj(a).
  ComplexMatrix a(di, di);
  if (out.qubit_path) {
    for (Eigen::Index r = 0; r < di; ++r) {
      for (Eigen::Index c = 0; c < di; ++c) {
        const int sign = (std::popcount(static_cast<unsigned long>(r & c)) % 2) ? -1 : 1;
        a(r, c) = static_cast<double>(sign) / std::sqrt(static_cast<double>(d));
      }
    }
  } else {
    for (Eigen::Index r = 0; r < di; ++r) {
      for (Eigen::Index c = 0; c < di; ++c) {
        a(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                             2.0 * kPi * static_cast<double>((r * c) % di) / static_cast<double>(d));
      }
    }
  }
  const ComplexMatrix b = a.conjugate();

  std::size_t z_agree = 0;
  std::size_t conj_agree = 0;
  for (std::size_t check = 0; check < n_checks; ++check) {
    // Psi(bob, alice): Bob's half is the walk index (outer), Alice's the stride.
    std::vector<Complex> amps(d * d);
    for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));

    if (channel.kind() == ChannelModel::Kind::Pauli) {
      apply_pauli_noise(amps, *noise, d, rng);
    } else if (channel.kind() == ChannelModel::Kind::Adversary) {
      switch (channel.attack()->kind()) {
        case AttackKind::InterceptResendZ:
          measure_walk_index(amps, d, rng);
          break;
        case AttackKind::InterceptResendW: {
          Eigen::Map<ComplexMatrix> psi(amps.data(), di, di);  // column-major: psi(alice, bob)
          ComplexMatrix rotated = psi * b.conjugate();
          std::vector<Complex> tmp(rotated.data(), rotated.data() + rotated.size());
          const std::size_t k = measure_walk_index(tmp, d, rng);
          Eigen::VectorXcd alice(di);
          for (Eigen::Index x = 0; x < di; ++x) alice(x) = tmp[k * d + static_cast<std::size_t>(x)];
          psi = alice * b.col(static_cast<Eigen::Index>(k)).transpose();
          break;
        }
        case AttackKind::ImpersonateMITM: {
          // Alice's half is maximally mixed once Eve keeps the original;
          // any pure decomposition gives the same statistics.
          std::fill(amps.begin(), amps.end(), Complex(0.0, 0.0));
          amps[rng.below(d) * d + static_cast<std::size_t>(rng.below(d))] = 1.0;
          break;
        }
        case AttackKind::EntanglingPair:
          throw std::invalid_argument("entangling attacks apply to the semi-quantum protocol only");
      }
    }

    if (check % 2 == 0) {
      ++out.z_checks;
      const std::size_t outcome = rng.discrete([&] {
        std::vector<double> w(amps.size());
        for (std::size_t i = 0; i < amps.size(); ++i) w[i] = std::norm(amps[i]);
        return w;
      }());
      if (outcome / d == outcome % d) ++z_agree;
    } else {
      ++out.conjugate_checks;
      const Eigen::Map<const ComplexMatrix> psi(amps.data(), di, di);  // psi(alice, bob)
      // m(j, k) = <a_j (x) b_k | Psi>
      const ComplexMatrix m = a.adjoint() * psi * b.conjugate();
      std::vector<double> w(static_cast<std::size_t>(m.size()));
      for (Eigen::Index i = 0; i < m.size(); ++i) w[static_cast<std::size_t>(i)] = std::norm(m.data()[i]);
      const std::size_t outcome = rng.discrete(w);
      if (outcome / d == outcome % d) ++conj_agree;
    }
  }
  out.z_agreement = static_cast<double>(z_agree) / static_cast<double>(out.z_checks);
  out.conjugate_agreement = static_cast<double>(conj_agree) / static_cast<double>(out.conjugate_checks);
  out.statistic = std::min(out.z_agreement, out.conjugate_agreement);
  out.pass = out.z_agreement >= 1.0 - epsilon && out.conjugate_agreement >= 1.0 - epsilon;
  return out;
}

}  // namespace qwqkd::protocol
