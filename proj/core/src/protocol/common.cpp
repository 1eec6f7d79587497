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

#include "qwqkd/protocol/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace qwqkd::protocol {

namespace {

template <typename Enum, std::size_t N>
Enum parse_name(std::string_view text, const std::array<std::pair<std::string_view, Enum>, N>& names,
                std::string_view what) {
  for (const auto& [name, value] : names) {
    if (name == text) return value;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

constexpr std::array<std::pair<std::string_view, ProtocolKind>, 3> kProtocolNames{{
    {"two_way", ProtocolKind::TwoWay},
    {"one_way", ProtocolKind::OneWay},
    {"semi_quantum", ProtocolKind::SemiQuantum},
}};

constexpr std::array<std::pair<std::string_view, AttackKind>, 4> kAttackNames{{
    {"intercept_resend_z", AttackKind::InterceptResendZ},
    {"intercept_resend_w", AttackKind::InterceptResendW},
    {"impersonate_mitm", AttackKind::ImpersonateMITM},
    {"entangling_pair", AttackKind::EntanglingPair},
}};

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  for (const auto& [name, value] : kProtocolNames) {
    if (value == kind) return name;
  }
  return "?";
}

std::string_view to_string(AttackKind kind) {
  for (const auto& [name, value] : kAttackNames) {
    if (value == kind) return name;
  }
  return "?";
}

ProtocolKind parse_protocol_kind(std::string_view text) {
  return parse_name(text, kProtocolNames, "protocol");
}

AttackKind parse_attack_kind(std::string_view text) {
  return parse_name(text, kAttackNames, "attack");
}

std::string_view to_string(RoundTag tag) {
  switch (tag) {
    case RoundTag::Key: return "key";
    case RoundTag::Check: return "check";
    case RoundTag::KeyCheck: return "key_check";
    case RoundTag::Discard: return "discard";
  }
  return "?";
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() == 0 || u.rows() != u.cols()) return false;
  const ComplexMatrix g = u.adjoint() * u;
  return (g - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("unitary dimension must be positive");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix z(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(r, c) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

AttackModel AttackModel::intercept_resend_z() { return AttackModel(AttackKind::InterceptResendZ); }
AttackModel AttackModel::intercept_resend_w() { return AttackModel(AttackKind::InterceptResendW); }
AttackModel AttackModel::impersonate_mitm() { return AttackModel(AttackKind::ImpersonateMITM); }

AttackModel AttackModel::entangling_pair(int positions, std::size_t ancilla_dim,
                                         ComplexMatrix forward, ComplexMatrix reverse) {
  if (positions < 1) throw std::invalid_argument("P must be >= 1");
  if (ancilla_dim < 1) throw std::invalid_argument("ancilla dimension must be >= 1");
  const auto joint = static_cast<Eigen::Index>(2 * static_cast<std::size_t>(positions) * ancilla_dim);
  if (forward.rows() != joint || reverse.rows() != joint) {
    throw std::invalid_argument("attack unitaries must act on the 2P * d_E joint space");
  }
  if (!is_unitary(forward)) throw std::invalid_argument("forward attack U_F is not unitary");
  if (!is_unitary(reverse)) throw std::invalid_argument("return attack U_R is not unitary");
  AttackModel a(AttackKind::EntanglingPair);
  a.positions_ = positions;
  a.ancilla_dim_ = ancilla_dim;
  a.forward_ = std::move(forward);
  a.reverse_ = std::move(reverse);
  return a;
}

AttackModel AttackModel::identity_pair(int positions, std::size_t ancilla_dim) {
  const auto joint = static_cast<Eigen::Index>(2 * static_cast<std::size_t>(std::max(positions, 1)) *
                                               std::max<std::size_t>(ancilla_dim, 1));
  return entangling_pair(positions, ancilla_dim, ComplexMatrix::Identity(joint, joint),
                         ComplexMatrix::Identity(joint, joint));
}

AttackModel AttackModel::controlled_shift(int positions) {
  if (positions < 1) throw std::invalid_argument("P must be >= 1");
  const std::size_t d = 2 * static_cast<std::size_t>(positions);
  const auto joint = static_cast<Eigen::Index>(d * d);
  ComplexMatrix u = ComplexMatrix::Zero(joint, joint);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t e = 0; e < d; ++e) {
      u(static_cast<Eigen::Index>(i * d + (e + i) % d), static_cast<Eigen::Index>(i * d + e)) = 1.0;
    }
  }
  return entangling_pair(positions, d, std::move(u), ComplexMatrix::Identity(joint, joint));
}

AttackModel AttackModel::random_pair(int positions, std::size_t ancilla_dim, Rng& rng) {
  const std::size_t joint = 2 * static_cast<std::size_t>(std::max(positions, 1)) * ancilla_dim;
  ComplexMatrix forward = haar_unitary(joint, rng);
  ComplexMatrix reverse = haar_unitary(joint, rng);
  return entangling_pair(positions, ancilla_dim, std::move(forward), std::move(reverse));
}

ChannelModel ChannelModel::ideal() { return ChannelModel(); }

ChannelModel ChannelModel::pauli(double error_weight) {
  if (!(error_weight >= 0.0 && error_weight <= 1.0)) {
    throw std::invalid_argument("error weight must lie in [0, 1]");
  }
  ChannelModel ch;
  ch.kind_ = Kind::Pauli;
  ch.error_weight_ = error_weight;
  return ch;
}

ChannelModel ChannelModel::adversary(AttackModel attack) {
  ChannelModel ch;
  ch.kind_ = Kind::Adversary;
  ch.attack_ = std::move(attack);
  return ch;
}

void ProtocolConfig::validate() const {
  if (positions < 1) throw std::invalid_argument("P must be >= 1");
  if (coin_count < 1) throw std::invalid_argument("K must be >= 1");
  if (t_min < 0 || t_min > t_max) throw std::invalid_argument("need 0 <= T_0 <= T_max");
  if (iterations < 1) throw std::invalid_argument("N must be >= 1");
  if (protocol == ProtocolKind::TwoWay && (states < 3 || states % 3 != 0)) {
    throw std::invalid_argument("m must be a positive multiple of 3");
  }
  if (protocol == ProtocolKind::SemiQuantum && positions % 2 == 0) {
    throw std::invalid_argument("the semi-quantum protocol needs odd P");
  }
  if (steps < 0) throw std::invalid_argument("walk steps must be >= 0");
  if (!(check_fraction > 0.0 && check_fraction < 1.0)) {
    throw std::invalid_argument("check fraction must lie in (0, 1)");
  }
  if (!(bell_epsilon >= 0.0 && bell_epsilon < 1.0)) {
    throw std::invalid_argument("Bell epsilon must lie in [0, 1)");
  }
}

std::vector<std::string> ProtocolConfig::warnings() const {
  std::vector<std::string> out;
  if (protocol == ProtocolKind::TwoWay) {
    const double key_bits = static_cast<double>(states / 3) * std::log2(static_cast<double>(positions));
    if (std::log2(static_cast<double>(coin_count)) < key_bits) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "coin set K=%d is not exponential in the %.1f-bit key; the two-way "
                    "protocol's security argument does not apply",
                    coin_count, key_bits);
      out.emplace_back(buf);
    }
  }
  return out;
}

WalkParams ProtocolConfig::one_way_walk() const {
  return WalkParams(positions, theta, phi, steps, flip);
}

ProtocolConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("protocol config must be a JSON object");
  static const std::array<std::string_view, 14> known{
      "protocol", "P", "K", "T0", "T_max", "N", "m", "seed", "theta", "phi", "F", "t",
      "check_fraction", "bell_epsilon"};
  for (const auto& [key, value] : doc.items()) {
    if (key == "channel") continue;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown protocol config field '" + key + "'");
    }
  }
  auto angle = [](const nlohmann::json& v) {
    return v.is_string() ? parse_angle(v.get<std::string>()) : v.get<double>();
  };
  ProtocolConfig c;
  try {
    if (doc.contains("protocol")) c.protocol = parse_protocol_kind(doc["protocol"].get<std::string>());
    if (doc.contains("P")) c.positions = doc["P"].get<int>();
    if (doc.contains("K")) c.coin_count = doc["K"].get<int>();
    if (doc.contains("T0")) c.t_min = doc["T0"].get<long>();
    if (doc.contains("T_max")) c.t_max = doc["T_max"].get<long>();
    if (doc.contains("N")) c.iterations = doc["N"].get<std::size_t>();
    if (doc.contains("m")) c.states = doc["m"].get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("theta")) c.theta = angle(doc["theta"]);
    if (doc.contains("phi")) c.phi = angle(doc["phi"]);
    if (doc.contains("F")) c.flip = parse_flip(doc["F"].get<std::string>());
    if (doc.contains("t")) c.steps = doc["t"].get<long>();
    if (doc.contains("check_fraction")) c.check_fraction = doc["check_fraction"].get<double>();
    if (doc.contains("bell_epsilon")) c.bell_epsilon = doc["bell_epsilon"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad protocol config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ProtocolConfig& c) {
  return {{"protocol", std::string(to_string(c.protocol))},
          {"P", c.positions},
          {"K", c.coin_count},
          {"T0", c.t_min},
          {"T_max", c.t_max},
          {"N", c.iterations},
          {"m", c.states},
          {"seed", c.seed},
          {"theta", format_pi_multiple(c.theta) + "pi"},
          {"phi", format_pi_multiple(c.phi) + "pi"},
          {"F", std::string(to_string(c.flip))},
          {"t", c.steps},
          {"check_fraction", c.check_fraction},
          {"bell_epsilon", c.bell_epsilon}};
}

ChannelModel channel_from_json(const nlohmann::json& doc, int positions) {
  if (doc.is_null()) return ChannelModel::ideal();
  try {
    const std::string kind = doc.value("kind", "ideal");
    if (kind == "ideal") return ChannelModel::ideal();
    if (kind == "pauli") return ChannelModel::pauli(doc.at("error_weight").get<double>());
    if (kind != "adversary") throw std::invalid_argument("unknown channel kind '" + kind + "'");
    const AttackKind attack = parse_attack_kind(doc.at("attack").get<std::string>());
    switch (attack) {
      case AttackKind::InterceptResendZ: return ChannelModel::adversary(AttackModel::intercept_resend_z());
      case AttackKind::InterceptResendW: return ChannelModel::adversary(AttackModel::intercept_resend_w());
      case AttackKind::ImpersonateMITM: return ChannelModel::adversary(AttackModel::impersonate_mitm());
      case AttackKind::EntanglingPair: break;
    }
    const std::string preset = doc.value("preset", "identity");
    const auto d_e = doc.value("ancilla_dim", static_cast<std::size_t>(2 * positions));
    if (preset == "identity") return ChannelModel::adversary(AttackModel::identity_pair(positions, d_e));
    if (preset == "controlled_shift") return ChannelModel::adversary(AttackModel::controlled_shift(positions));
    if (preset == "random") {
      Rng rng(doc.value("seed", Rng::kDefaultSeed));
      return ChannelModel::adversary(AttackModel::random_pair(positions, d_e, rng));
    }
    throw std::invalid_argument("unknown entangling preset '" + preset + "'");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad channel config: ") + e.what());
  }
}

double ProtocolTranscript::qber_z() const { return ratio(errors_z, checks_z); }
double ProtocolTranscript::qber_w() const { return ratio(errors_w, checks_w); }

std::size_t ProtocolTranscript::check_rounds() const {
  return checks_z + checks_w + reflect_checks + key_checks;
}

std::size_t ProtocolTranscript::check_errors() const {
  return errors_z + errors_w + reflect_errors + key_errors;
}

double ProtocolTranscript::detection_rate() const { return ratio(check_errors(), check_rounds()); }

nlohmann::json to_json(const ProtocolTranscript& t, bool include_records) {
  nlohmann::json summary{{"protocol", std::string(to_string(t.protocol))},
                         {"P", t.positions},
                         {"iterations", t.records.size()},
                         {"raw_key_rounds", t.raw_key_rounds},
                         {"raw_key_bits", t.raw_key_bits},
                         {"final_key_symbols", t.alice_key.size()},
                         {"qber_z", t.qber_z()},
                         {"qber_w", t.qber_w()},
                         {"checks_z", t.checks_z},
                         {"errors_z", t.errors_z},
                         {"checks_w", t.checks_w},
                         {"errors_w", t.errors_w},
                         {"reflect_checks", t.reflect_checks},
                         {"reflect_errors", t.reflect_errors},
                         {"key_checks", t.key_checks},
                         {"key_errors", t.key_errors},
                         {"key_symbol_errors", t.key_symbol_errors},
                         {"detection_rate", t.detection_rate()}};
  if (t.c) summary["c"] = *t.c;
  if (t.key_rate) summary["key_rate"] = *t.key_rate;
  if (t.eve_info_proxy) summary["eve_info_proxy"] = *t.eve_info_proxy;
  nlohmann::json doc{{"summary", summary}};
  if (include_records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const IterationRecord& r : t.records) {
      arr.push_back({{"i", r.index},
                     {"alice_choice", r.alice_choice},
                     {"bob_choice", r.bob_choice},
                     {"sent", r.sent},
                     {"received", r.received},
                     {"alice_value", r.alice_value},
                     {"bob_value", r.bob_value},
                     {"t", r.steps},
                     {"tag", std::string(to_string(r.tag))},
                     {"error", r.error}});
    }
    doc["records"] = std::move(arr);
  }
  return doc;
}

std::string summary_csv(const ProtocolTranscript& t) {
  std::string out =
      "protocol,P,N,raw_key_bits,final_key_symbols,qber_z,qber_w,check_rounds,check_errors,"
      "detection_rate,key_rate\n";
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%d,%zu,%.6f,%zu,%.6f,%.6f,%zu,%zu,%.6f,",
                std::string(to_string(t.protocol)).c_str(), t.positions, t.records.size(),
                t.raw_key_bits, t.alice_key.size(), t.qber_z(), t.qber_w(), t.check_rounds(),
                t.check_errors(), t.detection_rate());
  out += buf;
  if (t.key_rate) {
    std::snprintf(buf, sizeof buf, "%.6f", *t.key_rate);
    out += buf;
  }
  out += '\n';
  return out;
}

void apply_pauli_noise(std::span<Complex> amps, const PauliChannel& channel, std::size_t stride,
                       Rng& rng) {
  const auto [m, n] = channel.sample(rng);
  if (m == 0 && n == 0) return;
  apply_pauli(amps, m, n, channel.dim(), stride);
}

std::size_t measure_walk_index(std::span<Complex> amps, std::size_t stride, Rng& rng) {
  const std::size_t dim = amps.size() / stride;
  std::vector<double> weights(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t e = 0; e < stride; ++e) weights[i] += std::norm(amps[i * stride + e]);
  }
  const std::size_t outcome = rng.discrete(weights);
  const double scale = 1.0 / std::sqrt(weights[outcome]);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t e = 0; e < stride; ++e) {
      Complex& a = amps[i * stride + e];
      a = i == outcome ? a * scale : Complex(0.0, 0.0);
    }
  }
  return outcome;
}

std::vector<Complex> basis_buffer(std::size_t dim, std::size_t index, std::size_t stride) {
  if (index >= dim) throw std::out_of_range("basis index out of range");
  std::vector<Complex> v(dim * stride);
  v[index * stride] = 1.0;
  return v;
}

void apply_matrix(std::span<Complex> amps, const ComplexMatrix& u) {
  if (static_cast<std::size_t>(u.cols()) != amps.size()) {
    throw std::invalid_argument("matrix does not match buffer size");
  }
  Eigen::Map<Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  const Eigen::VectorXcd out = u * v;
  v = out;
}

}  // namespace qwqkd::protocol
