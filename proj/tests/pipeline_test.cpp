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

#include "itnaug/pipeline.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wer_oracle.hpp"

namespace itnaug {
namespace {

using testing::locale;

std::vector<std::string> toks(const std::string& s) { return split_whitespace(s); }

TEST(WerTest, HandValues) {
  EXPECT_EQ(wer(toks("a b c"), toks("a b c")), Rational(0));
  EXPECT_EQ(wer(toks("a b c"), toks("a x c")), Rational(1, 3));
  EXPECT_EQ(wer(toks("a b c d"), toks("a c d")), Rational(1, 4));
  EXPECT_EQ(wer(toks("a"), toks("b c d")), Rational(3));
  EXPECT_EQ(wer(toks("a b"), {}), Rational(1));
}

TEST(WerTest, EmptyReferenceThrows) { EXPECT_THROW(wer({}, toks("a")), EmptyInputError); }

TEST(WerTest, AgreesWithEditGraph) {
  testing::EditGraph g("abc");
  const auto& nodes = g.nodes();
  ASSERT_EQ(nodes.size(), 1093u);
  std::size_t checked = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].empty()) continue;
    auto dist = g.distances_from(i);
    auto ref = testing::as_tokens(nodes[i]);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      auto want = Rational(dist[j], static_cast<std::int64_t>(ref.size()));
      auto got = wer(ref, testing::as_tokens(nodes[j]));
      if (got != want) {
        ADD_FAILURE() << "'" << nodes[i] << "' vs '" << nodes[j] << "'";
        return;
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1092u * 1093u);
}

TEST(BackTranslationTest, Wer) {
  EXPECT_EQ(back_translation_check("the cat sat", "the cat sat"), Rational(0));
  EXPECT_EQ(back_translation_check("the cat sat", "a cat sat"), Rational(1, 3));
}

TEST(IngestTest, IdsAreLineNumbers) {
  auto s = ingest_text("first line\n\n  third line  \n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], (Sentence{"1", "first line"}));
  EXPECT_EQ(s[1], (Sentence{"3", "third line"}));
  EXPECT_TRUE(ingest_text("").empty());
}

TEST(IngestTest, InvalidUtf8ReportsByteOffset) {
  try {
    ingest_text("ok\nbad \xc3\x28 here\n", "corpus.txt");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("corpus.txt"), std::string::npos) << msg;
    EXPECT_NE(msg.find("offset 7"), std::string::npos) << msg;
  }
}

TEST(PairIoTest, JsonlRoundTripAndTsv) {
  SpokenWrittenPair p;
  p.id = "a";
  p.spoken = toks("nine out of ten");
  p.written = "9 out of 10";
  std::ostringstream os;
  write_pairs_jsonl(os, {p, p});
  auto back = read_pairs_text(os.str(), "mem");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], p);

  std::ostringstream tsv;
  write_pairs_tsv(tsv, {p});
  EXPECT_EQ(tsv.str(), "nine out of ten\t9 out of 10\n");
}

TEST(PairIoTest, BadLineNamesTheLine) {
  try {
    read_pairs_text("{\"spoken\": \"a\", \"written\": \"a\"}\n{broken\n", "pairs.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("pairs.jsonl:2"), std::string::npos) << e.what();
  }
}

TEST(TextItemsTest, Read) {
  auto items = read_text_items_text("{\"id\": 1, \"text\": \"x\"}\n\n{\"id\": \"b\", \"text\": \"y\"}\n", "mem");
  EXPECT_EQ(items, (std::vector<TextItem>{{"1", "x"}, {"b", "y"}}));
}

TEST(MaskTest, WrittenAndSpokenLineUp) {
  EXPECT_EQ(mask_written("I paid $20 yesterday", locale("en")), toks("I paid <E> yesterday"));
  EXPECT_EQ(mask_spoken("I paid twenty dollars yesterday", locale("en")), toks("I paid <E> yesterday"));
  EXPECT_EQ(mask_spoken("meet at six fifteen a m sharp", locale("en")), toks("meet at <E> sharp"));
  EXPECT_EQ(mask_spoken("costa venti euro", locale("it")), toks("costa <E>"));
}

TEST(AlignByIdTest, Misaligned) {
  std::vector<TextItem> a{{"1", ""}, {"2", ""}}, b{{"2", ""}, {"1", ""}}, c{{"1", ""}}, d{{"1", ""}, {"3", ""}};
  auto ok = align_by_id(a, b);
  ASSERT_EQ(ok.size(), 2u);
  EXPECT_EQ(ok[0].second->id, "1");
  EXPECT_THROW(align_by_id(a, c), MisalignedStreamError);
  EXPECT_THROW(align_by_id(c, a), MisalignedStreamError);
  EXPECT_THROW(align_by_id(a, d), MisalignedStreamError);
}

TEST(FilterTest, FixtureHasOneRejectionPerReason) {
  auto source = read_pairs(testing::kDataDir / "filter" / "source_en.jsonl");
  auto translated = read_pairs(testing::kDataDir / "filter" / "translated_it.jsonl");
  auto res = filter_pairs(source, translated, locale("it"), Rational(0), locale("en"));
  EXPECT_EQ(res.report.total, 6u);
  EXPECT_EQ(res.report.kept, 3u);
  EXPECT_EQ(res.report.rejected.at(RejectReason::Conformity), 1u);
  EXPECT_EQ(res.report.rejected.at(RejectReason::Mismatch), 1u);
  EXPECT_EQ(res.report.rejected.at(RejectReason::HighWer), 1u);
  EXPECT_TRUE(res.report.reconciles());
  std::vector<std::string> kept;
  for (const auto& p : res.kept) kept.push_back(p.id);
  EXPECT_EQ(kept, (std::vector<std::string>{"4", "5", "6"}));
}

TEST(FilterTest, EachFixtureItemLandsInItsBucket) {
  auto source = read_pairs(testing::kDataDir / "filter" / "source_en.jsonl");
  auto translated = read_pairs(testing::kDataDir / "filter" / "translated_it.jsonl");
  const std::vector<std::optional<RejectReason>> want = {
      RejectReason::Conformity, RejectReason::Mismatch, RejectReason::HighWer, std::nullopt, std::nullopt,
      std::nullopt};
  for (std::size_t i = 0; i < want.size(); ++i)
    EXPECT_EQ(check_pair(source[i], translated[i], locale("en"), locale("it"), Rational(0)), want[i])
        << "item " << source[i].id;
}

TEST(FilterTest, LooserThresholdKeepsTheWerPair) {
  auto source = read_pairs(testing::kDataDir / "filter" / "source_en.jsonl");
  auto translated = read_pairs(testing::kDataDir / "filter" / "translated_it.jsonl");
  auto res = filter_pairs(source, translated, locale("it"), Rational(1), locale("en"));
  EXPECT_EQ(res.report.kept, 4u);
  EXPECT_EQ(res.report.rejected.at(RejectReason::HighWer), 0u);
}

TEST(FilterReportTest, JsonAndSum) {
  FilterReport a;
  a.total = 3;
  a.kept = 2;
  a.rejected[RejectReason::HighWer] = 1;
  FilterReport b = a;
  b += a;
  EXPECT_EQ(b.total, 6u);
  EXPECT_TRUE(b.reconciles());
  auto j = b.to_json();
  EXPECT_EQ(j["rejected-by-reason"]["high-wer"], 2);
  EXPECT_EQ(j["kept"], 4);
}

}  // namespace
}  // namespace itnaug
