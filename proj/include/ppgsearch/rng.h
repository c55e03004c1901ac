// Copyright 2026 The ppgsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPGSEARCH_RNG_H_
#define PPGSEARCH_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ppgsearch {

// Seedable generator shared by every sampler. The underlying engine is
// std::mt19937_64, whose output sequence is fixed by the standard, and all
// derived variates are computed here rather than through <random>
// distributions so draws are identical across standard library vendors.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Independent stream for a (seed, key) pair, e.g. one per query.
  static Rng ForStream(uint64_t seed, std::string_view key);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Always consumes exactly one draw. p <= 0 never succeeds, p >= 1 always.
  bool Bernoulli(double p) { return Uniform() < p; }

  // Uniform integer in [0, n). n must be positive.
  int UniformInt(int n);

  // Standard Gumbel(0, 1).
  double Gumbel();

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive stream seeds.
uint64_t MixSeed(uint64_t x);

}  // namespace ppgsearch

#endif  // PPGSEARCH_RNG_H_
