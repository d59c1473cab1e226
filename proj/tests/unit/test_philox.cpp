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


#include <gtest/gtest.h>

#include <cmath>

#include <set>

#include "cesaro/philox.hpp"

namespace {

using cesaro::CounterStream;
using cesaro::Seed;
using namespace cesaro::philox;

// Known-answer vectors published with the Random123 library.
TEST(Philox4x32, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox4x32, UsableAtCompileTime) {
  constexpr auto b = philox4x32_10({0, 0, 0, 0}, {0, 0});
  static_assert(b[0] == 0x6627e8d5);
}

TEST(ToUnit, Range) {
  EXPECT_EQ(to_unit(0, 0), 0.0);
  EXPECT_LT(to_unit(0xffffffff, 0xffffffff), 1.0);
  EXPECT_EQ(to_unit(0, 0x80000000), 0.5);
}

TEST(CounterStream, SequentialMatchesRandomAccess) {
  CounterStream a(Seed{42, 7});
  const CounterStream b(Seed{42, 7});
  for (std::uint64_t i = 0; i < 1001; ++i) {
    ASSERT_EQ(a.next(), b.uniform_at(i)) << "position " << i;
  }
  EXPECT_EQ(a.position(), 1001u);
}

TEST(CounterStream, SeekToOddPosition) {
  CounterStream a(Seed{5, 0});
  const CounterStream b(Seed{5, 0});
  a.seek(77);
  EXPECT_EQ(a.next(), b.uniform_at(77));
  EXPECT_EQ(a.next(), b.uniform_at(78));
}

TEST(CounterStream, StreamsAndSeedsDiffer) {
  std::set<double> first;
  for (std::uint64_t s = 0; s < 64; ++s) {
    first.insert(CounterStream(Seed{1, s}).uniform_at(0));
    first.insert(CounterStream(Seed{s + 100, 0}).uniform_at(0));
  }
  EXPECT_EQ(first.size(), 128u);
  // High seed bits reach the key.
  EXPECT_NE(CounterStream(Seed{1, 0}).uniform_at(0),
            CounterStream(Seed{1 + (std::uint64_t{1} << 40), 0}).uniform_at(0));
  EXPECT_NE(CounterStream(Seed{1, 0}).uniform_at(0),
            CounterStream(Seed{1, std::uint64_t{1} << 40}).uniform_at(0));
}

TEST(CounterStream, MomentsLookUniform) {
  CounterStream s(Seed{2026, 3});
  const int n = 200000;
  double sum = 0;
  double sq = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.next();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sq / n, 1.0 / 3, 5 * std::sqrt(4.0 / 45 / n));
}

}  // namespace
