// Copyright 2026 The qtherm Authors
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

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

namespace qtherm {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 64-bit key is the master seed; the upper half of the 128-bit counter
/// selects an independent substream and the lower half counts blocks. Every
/// substream is therefore reproducible on its own, independent of how work is
/// split across threads.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(key),
             static_cast<std::uint32_t>(key >> 32)},
        counter_{0, 0, static_cast<std::uint32_t>(stream),
                 static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (index_ == 4) {
      block_ = generate(counter_, key_);
      increment();
      index_ = 0;
    }
    return block_[index_++];
  }

  static std::array<std::uint32_t, 4> generate(
      std::array<std::uint32_t, 4> ctr,
      std::array<std::uint32_t, 2> key) noexcept {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  void increment() noexcept {
    if (++counter_[0] == 0) ++counter_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int index_ = 4;
};

/// What a substream is used for; part of the substream identity.
enum class StreamPurpose : std::uint16_t {
  Noise = 1,      // OU noise of a trajectory
  Shots = 2,      // Hadamard-test shot sampling
  Readout = 3,    // per-shot measurement collapse and confusion flips
  Test = 0xFFFF,  // reserved for test fixtures
};

/// (master_seed, trajectory, channel, purpose) identifies one substream.
struct StreamId {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory = 0;  // < 2^40
  std::uint8_t channel = 0;
  StreamPurpose purpose = StreamPurpose::Noise;
};

inline Philox4x32 make_stream(const StreamId& id) noexcept {
  const std::uint64_t stream = (id.trajectory << 24) |
                               (std::uint64_t{id.channel} << 16) |
                               static_cast<std::uint64_t>(id.purpose);
  return Philox4x32(id.master_seed, stream);
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Engine>
double uniform01(Engine& rng) {
  const std::uint64_t hi = rng();
  const std::uint64_t lo = rng();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

/// Standard circularly-symmetric complex normal CN(0, 1): E|u|^2 = 1.
/// Box-Muller written out so that streams are identical across standard
/// libraries.
template <typename Engine>
std::complex<double> complex_normal(Engine& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::polar(std::sqrt(-std::log(u1)), 2.0 * std::numbers::pi * u2);
}

}  // namespace qtherm
