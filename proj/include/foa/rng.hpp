/*
Copyright 2026 The Foakit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef FOA_RNG_HPP_
#define FOA_RNG_HPP_

#include <cstdint>
#include <random>

namespace foa {

// SplitMix64 scrambler, used to turn seeds and stream ids into
// well-mixed engine states.
uint64_t SplitMix64(uint64_t x);

// Deterministic random stream. All randomness in the library flows through
// explicit Rng values; there is no hidden global state. Distributions are
// implemented on top of the raw 64-bit output so a (seed, stream) pair pins
// the produced sequence regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64();

  // Uniform in [0, 1) with 53-bit resolution.
  double Uniform();
  double Uniform(double lo, double hi);

  // Uniform integer in [lo, hi] inclusive, bias-free.
  int64_t UniformInt(int64_t lo, int64_t hi);

  bool Bernoulli(double p);

  // Standard normal via Box-Muller; pairs are cached.
  double Normal();

  // Derives an independent child stream. Forking depends only on the seed
  // and the stream id, never on how many values were drawn, so sub-streams
  // can be handed to parallel workers in any order.
  Rng Fork(uint64_t stream) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_ = 0;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace foa

#endif  // FOA_RNG_HPP_
