// Copyright 2026 The riskcore Authors.
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

#ifndef RISKCORE_RANDOM_HPP_
#define RISKCORE_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace riskcore {

/// Philox4x32-10 block function (Salmon et al., Random123).
inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// (seed, stream) identifies an independent, platform-stable random stream.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

/// Counter-based generator: the key is the seed, the counter is (stream, block).
/// Satisfies UniformRandomBitGenerator; draws depend only on (seed, stream, position).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(RngSpec spec) : spec_(spec) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 2) refill();
    const std::uint64_t v = (static_cast<std::uint64_t>(block_[2 * lane_]) << 32) |
                            block_[2 * lane_ + 1];
    ++lane_;
    return v;
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform01() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform index in [0, n) by multiply-shift.
  std::uint64_t index(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  RngSpec spec() const noexcept { return spec_; }

 private:
  void refill() {
    const std::array<std::uint32_t, 4> ctr{
        static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
        static_cast<std::uint32_t>(spec_.stream_id),
        static_cast<std::uint32_t>(spec_.stream_id >> 32)};
    const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(spec_.seed),
                                           static_cast<std::uint32_t>(spec_.seed >> 32)};
    block_ = philox4x32_10(ctr, key);
    ++counter_;
    lane_ = 0;
  }

  RngSpec spec_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int lane_ = 2;
};

/// Packs two indices into one stream id (outer in the high word).
constexpr std::uint64_t stream_of(std::uint64_t outer, std::uint64_t inner) {
  return (outer << 32) | (inner & 0xFFFFFFFFull);
}

}  // namespace riskcore

#endif  // RISKCORE_RANDOM_HPP_
