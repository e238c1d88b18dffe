//
// Copyright 2026 The Pancake Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PANCAKE_RNG_H_
#define PANCAKE_RNG_H_

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace pancake {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The 128-bit
// counter holds a 64-bit block index in its low half and a 64-bit stream id
// in its high half; the 64-bit key is the seed. Streams with different ids
// never share a counter value.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter Block(Counter counter, Key key);
};

// Deterministic random stream identified by (seed, stream_id). Satisfies
// UniformRandomBitGenerator with 64-bit output so it can drive <random>
// distributions directly. A single stream must not be shared across threads.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Standard normal variate.
  double Normal();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();
  // Uniform on {0, ..., n - 1}; n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);
  bool Bernoulli(double p);

  // Child stream for sub-task `index`. Same parent and index give the same
  // child; the child's stream id is a SplitMix64 hash of (stream_id, index).
  RngStream Fork(std::uint64_t index) const;

 private:
  void Refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace pancake

#endif  // PANCAKE_RNG_H_
