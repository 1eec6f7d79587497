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
#include <random>
#include <span>

namespace qwqkd {

// Seeded pseudo-random source. Every draw is derived from the raw 64-bit
// engine output so sequences are identical across standard libraries.
class Rng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 20180516;

  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer on [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bit() { return (engine_() >> 63) != 0; }
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  // Index drawn from an (unnormalized) non-negative weight vector.
  std::size_t discrete(std::span<const double> weights);

  // Independent stream derived from this seed and a label.
  static Rng derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qwqkd
