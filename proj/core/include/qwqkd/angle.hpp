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

#include <string>
#include <string_view>

namespace qwqkd {

inline constexpr double kPi = 3.14159265358979323846;

// Parses an angle written as a multiple of pi ("0.4pi", "pi/4", "0.5pi/2",
// "pi") or as plain radians ("1.25"). Throws std::invalid_argument.
double parse_angle(std::string_view text);

// Angle as a multiple of pi with six decimals, e.g. "0.400000".
std::string format_pi_multiple(double radians);

}  // namespace qwqkd
