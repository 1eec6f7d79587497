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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwqkd/angle.hpp"
#include "qwqkd/rng.hpp"
#include "qwqkd/security.hpp"
#include "qwqkd/walk.hpp"

namespace qwqkd::protocol {

enum class ProtocolKind { TwoWay, OneWay, SemiQuantum };
enum class AttackKind { InterceptResendZ, InterceptResendW, ImpersonateMITM, EntanglingPair };

std::string_view to_string(ProtocolKind kind);
std::string_view to_string(AttackKind kind);
ProtocolKind parse_protocol_kind(std::string_view text);
AttackKind parse_attack_kind(std::string_view text);

inline constexpr double kUnitaryTolerance = 1e-10;

bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTolerance);
// Haar-distributed unitary from the QR decomposition of a complex Gaussian matrix.
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);

// Eavesdropper strategy applied on every pass of the quantum channel.
//
// InterceptResendZ / InterceptResendW: Eve measures in the computational or
// a walk basis and resends the outcome state. ImpersonateMITM: Eve drops the
// sender's state and injects one of her own. EntanglingPair: U_F on the
// forward pass and U_R on the return pass act on (walk) x (Eve's ancilla),
// laid out as walk index * d_E + ancilla index; the ancilla starts in |0>.
class AttackModel {
 public:
  static AttackModel intercept_resend_z();
  static AttackModel intercept_resend_w();
  static AttackModel impersonate_mitm();
  // Throws std::invalid_argument unless both matrices are unitary on the
  // (2P * d_E)-dimensional joint space.
  static AttackModel entangling_pair(int positions, std::size_t ancilla_dim,
                                     ComplexMatrix forward, ComplexMatrix reverse);
  static AttackModel identity_pair(int positions, std::size_t ancilla_dim);
  // d_E = 2P, U_F |i, e> = |i, e + i mod 2P>, U_R = I.
  static AttackModel controlled_shift(int positions);
  static AttackModel random_pair(int positions, std::size_t ancilla_dim, Rng& rng);

  AttackKind kind() const { return kind_; }
  std::size_t ancilla_dim() const { return ancilla_dim_; }
  int positions() const { return positions_; }
  const ComplexMatrix& forward() const { return forward_; }
  const ComplexMatrix& reverse() const { return reverse_; }

 private:
  explicit AttackModel(AttackKind kind) : kind_(kind) {}

  AttackKind kind_;
  int positions_ = 0;
  std::size_t ancilla_dim_ = 1;
  ComplexMatrix forward_;
  ComplexMatrix reverse_;
};

class ChannelModel {
 public:
  enum class Kind { Ideal, Pauli, Adversary };

  static ChannelModel ideal();
  static ChannelModel pauli(double error_weight);
  static ChannelModel adversary(AttackModel attack);

  Kind kind() const { return kind_; }
  double error_weight() const { return error_weight_; }
  const std::optional<AttackModel>& attack() const { return attack_; }
  bool is_attack(AttackKind kind) const { return attack_ && attack_->kind() == kind; }

 private:
  ChannelModel() = default;

  Kind kind_ = Kind::Ideal;
  double error_weight_ = 0.0;
  std::optional<AttackModel> attack_;
};

struct ProtocolConfig {
  ProtocolKind protocol = ProtocolKind::OneWay;
  int positions = 3;
  int coin_count = 8;      // K; two-way coins are theta_k = 2 pi k / K
  long t_min = 1;          // T_0
  long t_max = 64;
  std::size_t iterations = 1000;  // N
  std::size_t states = 9;         // m, two-way verification
  std::uint64_t seed = Rng::kDefaultSeed;

  // One-way walk.
  double theta = kPi / 4.0;
  double phi = 0.0;
  Flip flip = Flip::I;
  long steps = 1;

  // Fraction of sifted rounds disclosed for checking.
  double check_fraction = 0.5;
  // Acceptance threshold slack for Bell checks.
  double bell_epsilon = 0.05;

  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
  // Non-fatal problems, e.g. a coin set too small for the key length.
  std::vector<std::string> warnings() const;
  WalkParams one_way_walk() const;
};

ProtocolConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ProtocolConfig& config);
// {"kind": "ideal" | "pauli" | "adversary", "error_weight": E_r,
//  "attack": "intercept_resend_z" | ..., "ancilla_dim": d_E,
//  "preset": "identity" | "controlled_shift" | "random", "seed": s}
ChannelModel channel_from_json(const nlohmann::json& doc, int positions);

enum class RoundTag { Key, Check, KeyCheck, Discard };
std::string_view to_string(RoundTag tag);

struct IterationRecord {
  std::size_t index = 0;
  int alice_choice = 0;  // basis / operation bit or coin index
  int bob_choice = 0;
  long sent = -1;        // basis index prepared by the sender
  long received = -1;    // basis index observed by the receiver
  long alice_value = -1;
  long bob_value = -1;
  long steps = 0;
  RoundTag tag = RoundTag::Discard;
  bool error = false;
};

struct ProtocolTranscript {
  ProtocolKind protocol = ProtocolKind::OneWay;
  int positions = 1;
  std::vector<IterationRecord> records;

  std::vector<long> alice_key;  // undisclosed key symbols
  std::vector<long> bob_key;
  double symbol_bits = 0.0;
  std::size_t raw_key_rounds = 0;  // sifted key material before disclosure
  double raw_key_bits = 0.0;

  std::size_t checks_z = 0;
  std::size_t errors_z = 0;
  std::size_t checks_w = 0;
  std::size_t errors_w = 0;
  std::size_t reflect_checks = 0;
  std::size_t reflect_errors = 0;
  std::size_t key_checks = 0;
  std::size_t key_errors = 0;
  std::size_t key_symbol_errors = 0;  // all compared symbols, two-way runs

  std::optional<double> c;
  std::optional<double> key_rate;
  std::optional<double> eve_info_proxy;

  double qber_z() const;
  double qber_w() const;
  std::size_t check_rounds() const;
  std::size_t check_errors() const;
  double detection_rate() const;
};

nlohmann::json to_json(const ProtocolTranscript& transcript, bool include_records = true);
// Header then one line of aggregates.
std::string summary_csv(const ProtocolTranscript& transcript);

// Buffer helpers shared by the protocol runners. Buffers use the layout
// walk index * stride + ancilla.
void apply_pauli_noise(std::span<Complex> amps, const PauliChannel& channel,
                       std::size_t stride, Rng& rng);
// Measures the walk index, collapses the buffer and returns the outcome.
std::size_t measure_walk_index(std::span<Complex> amps, std::size_t stride, Rng& rng);
std::vector<Complex> basis_buffer(std::size_t dim, std::size_t index, std::size_t stride = 1);
void apply_matrix(std::span<Complex> amps, const ComplexMatrix& u);

}  // namespace qwqkd::protocol
