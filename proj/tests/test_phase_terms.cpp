// Copyright 2026 The nvclock Authors
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

#include <gtest/gtest.h>

#include <algorithm>

#include "nvclock/phase_terms.hpp"

namespace {

using nvclock::kPi;
using nvclock::PulseAreas;

bool rows_within(const nvclock::PhaseTermReport& r, std::initializer_list<int> allowed) {
  for (int row : r.rows()) {
    if (std::find(allowed.begin(), allowed.end(), row) == allowed.end()) return false;
  }
  return true;
}

TEST(PhaseTerms, ClassifierMatchesSignFlippedCharacters) {
  const auto& table = nvclock::tabulated_phase_terms();
  for (int i = 0; i < 24; ++i) {
    nvclock::PhaseCharacter neg{};
    for (int k = 0; k < 6; ++k) neg[k] = -table[i][k];
    EXPECT_EQ(nvclock::classify_phase_character(table[i]), i + 1);
    EXPECT_EQ(nvclock::classify_phase_character(neg), i + 1);
  }
  EXPECT_EQ(nvclock::classify_phase_character({3, 0, 0, 0, 0, 0}), 0);
}

TEST(PhaseTerms, IdealAreasGiveOnlyFirstThreeTerms) {
  const auto r = nvclock::detect_phase_terms(nvclock::single_sequence_family(PulseAreas{}));
  EXPECT_FALSE(r.inconclusive);
  EXPECT_TRUE(r.has_row(1));
  EXPECT_TRUE(r.has_row(2));
  EXPECT_TRUE(r.has_row(3));
  EXPECT_TRUE(rows_within(r, {1, 2, 3}));
}

TEST(PhaseTerms, AreaErrorAddsTabulatedTerms) {
  const auto r = nvclock::detect_phase_terms(nvclock::single_sequence_family(PulseAreas{}.scaled(1.1)));
  EXPECT_FALSE(r.inconclusive);
  int extra = 0;
  for (int row : r.rows()) {
    EXPECT_GT(row, 0) << "untabulated term detected";
    if (row > 3) ++extra;
  }
  EXPECT_GE(extra, 8);
}

TEST(PhaseTerms, CycledSumLeavesFirstTwoTerms) {
  const auto r =
      nvclock::detect_phase_terms(nvclock::cycled_family(PulseAreas{}.scaled(1.2), nvclock::ttzfs8_scheme()));
  EXPECT_FALSE(r.inconclusive);
  EXPECT_TRUE(rows_within(r, {1, 2}));
  EXPECT_TRUE(r.has_row(1) && r.has_row(2));
}

TEST(PhaseTerms, ExactEchoSuppressesErrorTerms) {
  for (double s : {0.7, 1.3}) {
    const auto r = nvclock::detect_phase_terms(nvclock::single_sequence_family(PulseAreas{}.scaled_keep_echo(s)));
    EXPECT_FALSE(r.inconclusive);
    EXPECT_TRUE(rows_within(r, {1, 2, 3})) << s;
  }
}

}  // namespace
