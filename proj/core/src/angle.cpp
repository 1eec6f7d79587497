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

#include "qwqkd/angle.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace qwqkd {

namespace {

double parse_number(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw std::invalid_argument("malformed angle '" + std::string(whole) + "'");
  }
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("malformed angle '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

double parse_angle(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

  const auto pi_at = text.find("pi");
  if (pi_at == std::string_view::npos) return parse_number(text, whole);

  const std::string_view head = text.substr(0, pi_at);
  std::string_view tail = text.substr(pi_at + 2);
  double multiple = 1.0;
  if (!head.empty()) {
    std::string_view h = head;
    if (h.back() == '*') h.remove_suffix(1);
    multiple = (h == "-") ? -1.0 : parse_number(h, whole);
  }
  if (!tail.empty()) {
    if (tail.front() != '/') {
      throw std::invalid_argument("malformed angle '" + std::string(whole) + "'");
    }
    tail.remove_prefix(1);
    const double den = parse_number(tail, whole);
    if (den == 0.0) {
      throw std::invalid_argument("zero denominator in angle '" +
                                  std::string(whole) + "'");
    }
    multiple /= den;
  }
  return multiple * kPi;
}

std::string format_pi_multiple(double radians) {
  char buf[64];
  double m = radians / kPi;
  if (std::abs(m) < 5e-7) m = 0.0;
  std::snprintf(buf, sizeof buf, "%.6f", m);
  return buf;
}

}  // namespace qwqkd
