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

#include "qwqkd/protocol/one_way.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace qwqkd::protocol {

namespace {

void transmit(std::vector<Complex>& amps, const ChannelModel& channel,
              const std::optional<PauliChannel>& noise, const WalkParams& walk, Rng& rng) {
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
    case AttackKind::InterceptResendZ:
      amps = basis_buffer(amps.size(), measure_walk_index(amps, 1, rng));
      return;
    case AttackKind::InterceptResendW:
      kernels::inverse_evolve(amps, walk);
      amps = basis_buffer(amps.size(), measure_walk_index(amps, 1, rng));
      kernels::evolve(amps, walk);
      return;
    case AttackKind::ImpersonateMITM: {
      const bool w = rng.bit();
      amps = basis_buffer(amps.size(), rng.below(amps.size()));
      if (w) kernels::evolve(amps, walk);
      return;
    }
    case AttackKind::EntanglingPair:
      throw std::invalid_argument("entangling attacks apply to the semi-quantum protocol only");
  }
}

}  // namespace

ProtocolTranscript protocol2_run(const ProtocolConfig& config, const WalkParams& walk,
                                 const ChannelModel& channel, Rng& rng) {
  config.validate();
  if (walk.positions() != config.positions) {
    throw std::invalid_argument("walk and config disagree on P");
  }
  const std::size_t d = walk.dim();
  std::optional<PauliChannel> noise;
  if (channel.kind() == ChannelModel::Kind::Pauli) {
    noise = PauliChannel::from_error_weight(channel.error_weight(), walk.positions());
  }

  ProtocolTranscript out;
  out.protocol = ProtocolKind::OneWay;
  out.positions = walk.positions();
  out.symbol_bits = std::log2(static_cast<double>(d));
  out.records.reserve(config.iterations);

  for (std::size_t n = 0; n < config.iterations; ++n) {
    IterationRecord rec;
    rec.index = n;
    rec.steps = walk.steps();
    const int w_a = rng.bit() ? 1 : 0;
    const std::size_t i_a = rng.below(d);
    std::vector<Complex> amps = basis_buffer(d, i_a);
    if (w_a) kernels::evolve(amps, walk);

    transmit(amps, channel, noise, walk, rng);

    const int w_b = rng.bit() ? 1 : 0;
    if (w_b) kernels::inverse_evolve(amps, walk);
    const std::size_t i_b = measure_walk_index(amps, 1, rng);

    rec.alice_choice = w_a;
    rec.bob_choice = w_b;
    rec.sent = static_cast<long>(i_a);
    rec.received = static_cast<long>(i_b);
    if (w_a == w_b) {
      ++out.raw_key_rounds;
      rec.alice_value = static_cast<long>(i_a);
      rec.bob_value = static_cast<long>(i_b);
      rec.error = i_a != i_b;
      if (rng.bernoulli(config.check_fraction)) {
        rec.tag = RoundTag::Check;
        if (w_a == 0) {
          ++out.checks_z;
          out.errors_z += rec.error ? 1 : 0;
        } else {
          ++out.checks_w;
          out.errors_w += rec.error ? 1 : 0;
        }
      } else {
        rec.tag = RoundTag::Key;
        out.alice_key.push_back(rec.alice_value);
        out.bob_key.push_back(rec.bob_value);
        if (rec.error) ++out.key_symbol_errors;
      }
    }
    out.records.push_back(rec);
  }
  out.raw_key_bits = static_cast<double>(out.raw_key_rounds) * out.symbol_bits;

  out.c = overlap_constant(walk_basis_amplitudes(walk));
  out.key_rate = key_rate(*out.c, symmetric_error_entropy(out.qber_z(), d),
                          symmetric_error_entropy(out.qber_w(), d));
  return out;
}

}  // namespace qwqkd::protocol
