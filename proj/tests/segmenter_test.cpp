// Copyright (c) 2026 The itnaug Authors.
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

#include "itnaug/segmenter.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace itnaug {
namespace {

using testing::locale;

struct Expect {
  EntityClass cls;
  std::string surface;
  CanonicalValue value;
};

void expect_spans(const std::string& lang, const std::string& text, const std::vector<Expect>& want) {
  auto r = segment(text, locale(lang));
  ASSERT_EQ(r.spans.size(), want.size()) << text;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto& s = r.spans[i];
    EXPECT_EQ(s.cls, want[i].cls) << text;
    EXPECT_EQ(s.surface, want[i].surface) << text;
    EXPECT_EQ(s.value, want[i].value) << text << " -> " << value_to_json(s.value).dump();
    EXPECT_EQ(text.substr(s.start, s.end - s.start), s.surface);
  }
}

TEST(PickTest, Basic) {
  EXPECT_TRUE(pick("Room 801 is open", locale("en")));
  EXPECT_FALSE(pick("hello world", locale("en")));
  EXPECT_FALSE(pick("", locale("en")));
}

TEST(PickTest, RespectsEnabledClasses) {
  EXPECT_FALSE(pick("Room 801 is open", locale("en"), {EntityClass::Time}));
  EXPECT_TRUE(pick("meet at 6:15 am", locale("en"), {EntityClass::Time}));
}

TEST(SegmentTest, OneOfEachClassEn) {
  using C = EntityClass;
  expect_spans("en", "Room 801 is open", {{C::Cardinal, "801", Cardinal{801}}});
  expect_spans("en", "she came 21st", {{C::Ordinal, "21st", Ordinal{21}}});
  expect_spans("en", "pi is 3.14", {{C::Decimal, "3.14", Decimal{3, "14"}}});
  expect_spans("en", "3 1/4 miles", {{C::Fraction, "3 1/4", Fraction{1, 4, 3}}});
  expect_spans("en", "call 555-123-4567 now", {{C::Telephone, "555-123-4567", Telephone{{"555", "123", "4567"}}}});
  expect_spans("en", "it weighs 123g", {{C::Measure, "123g", Measure{Decimal{123, ""}, "gram"}}});
  expect_spans("en", "code 007", {{C::DigitSequence, "007", DigitSequence{"007"}}});
  expect_spans("en", "at 13:45", {{C::Time, "13:45", Time{13, 45, std::nullopt, Meridiem::NoneExplicit}}});
}

TEST(SegmentTest, SeveralSpansInOrder) {
  using C = EntityClass;
  expect_spans("en", "I paid $1.20 at 6:15 am on 12/31/2022",
               {{C::Money, "$1.20", Money{1, "20", "USD"}},
                {C::Time, "6:15 am", Time{6, 15, std::nullopt, Meridiem::Am}},
                {C::Date, "12/31/2022", Date{31, 12, 2022}}});
}

TEST(SegmentTest, GroupedAndMagnitudeNumbersStayWhole) {
  using C = EntityClass;
  expect_spans("en", "24,000 people", {{C::Cardinal, "24,000", Cardinal{24000}}});
  expect_spans("en", "2.5M users", {{C::Cardinal, "2.5M", Cardinal{2500000}}});
  expect_spans("fr", "24 mille personnes", {{C::Cardinal, "24 mille", Cardinal{24000}}});
}

TEST(SegmentTest, LocaleSeparators) {
  using C = EntityClass;
  expect_spans("fr", "à 13h30 il a payé 25 000,00 €",
               {{C::Time, "13h30", Time{13, 30, std::nullopt, Meridiem::NoneExplicit}},
                {C::Money, "25 000,00 €", Money{25000, "00", "EUR"}}});
  expect_spans("de", "am 3. Mai kostet es 25.000,00 €",
               {{C::Date, "3. Mai", Date{3, 5, std::nullopt}}, {C::Money, "25.000,00 €", Money{25000, "00", "EUR"}}});
}

TEST(SegmentTest, OffsetsAreBytes) {
  std::string text = "café 12 ünïcode 5";
  auto r = segment(text, locale("en"));
  ASSERT_EQ(r.spans.size(), 2u);
  EXPECT_EQ(r.spans[0].start, 6u);
  EXPECT_EQ(r.spans[0].end, 8u);
  EXPECT_EQ(r.spans[1].surface, "5");
  EXPECT_EQ(r.spans[1].start, text.size() - 1);
}

TEST(SegmentTest, SpansNeverOverlap) {
  std::string text = "On 12/31/2022 at 6:15 am I paid $1.20 for 3 1/4 miles, 2.5 kg and 555-123-4567.";
  auto r = segment(text, locale("en"));
  ASSERT_FALSE(r.spans.empty());
  for (std::size_t i = 1; i < r.spans.size(); ++i) EXPECT_LE(r.spans[i - 1].end, r.spans[i].start);
}

TEST(SegmentTest, InvalidUtf8YieldsNoSpans) {
  EXPECT_TRUE(segment("room \xff 801", locale("en")).spans.empty());
}

}  // namespace
}  // namespace itnaug
