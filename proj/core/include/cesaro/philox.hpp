// Copyright 2026 The cesaro-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw 2011,
// as in Random123). A draw is a pure function of (seed, stream, position),
// so results never depend on how replications are scheduled.

#ifndef CESARO_PHILOX_HPP_
#define CESARO_PHILOX_HPP_

#include <array>
#include <compare>
#include <cstdint>

namespace cesaro {

struct Seed {
  std::uint64_t value = 0;
  std::uint64_t stream_id = 0;

  auto operator<=>(const Seed&) const = default;
};

namespace philox {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Block round(const Block& ctr, const Key& key) noexcept {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0)};
}

/// Ten-round Philox4x32 bijection of `ctr` under `key`.
constexpr Block philox4x32_10(Block ctr, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round(ctr, key);
  }
  return ctr;
}

/// 53 random bits mapped to [0, 1).
constexpr double to_unit(std::uint32_t lo, std::uint32_t hi) noexcept {
  const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace philox

/// Uniform draws for one (seed, stream). Position i lives in counter block
/// i/2, half i%2; counter words 2..3 hold the stream id and the key is the
/// seed value.
class CounterStream {
 public:
  explicit CounterStream(Seed seed) noexcept
      : key_{static_cast<std::uint32_t>(seed.value),
             static_cast<std::uint32_t>(seed.value >> 32)},
        stream_lo_(static_cast<std::uint32_t>(seed.stream_id)),
        stream_hi_(static_cast<std::uint32_t>(seed.stream_id >> 32)) {}

  /// Uniform on [0, 1) at an absolute position.
  double uniform_at(std::uint64_t position) const noexcept {
    const auto out = block(position >> 1);
    return (position & 1u) ? philox::to_unit(out[2], out[3])
                           : philox::to_unit(out[0], out[1]);
  }

  /// Sequential draw; equivalent to uniform_at(position()) then advance.
  double next() noexcept {
    if ((position_ & 1u) == 0) cached_ = block(position_ >> 1);
    const double u = (position_ & 1u) ? philox::to_unit(cached_[2], cached_[3])
                                      : philox::to_unit(cached_[0], cached_[1]);
    ++position_;
    return u;
  }

  void seek(std::uint64_t position) noexcept {
    position_ = position;
    if (position_ & 1u) cached_ = block(position_ >> 1);
  }

  std::uint64_t position() const noexcept { return position_; }

 private:
  philox::Block block(std::uint64_t index) const noexcept {
    return philox::philox4x32_10(
        {static_cast<std::uint32_t>(index),
         static_cast<std::uint32_t>(index >> 32), stream_lo_, stream_hi_},
        key_);
  }

  philox::Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t position_ = 0;
  philox::Block cached_{};
};

}  // namespace cesaro

#endif  // CESARO_PHILOX_HPP_
