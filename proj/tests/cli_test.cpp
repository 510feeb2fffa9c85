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

// Drives the built itnaug executable end to end.

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <cstdlib>
#include <string>

#include "itnaug/evaluator.hpp"
#include "itnaug/pipeline.hpp"
#include "test_util.hpp"

namespace itnaug {
namespace {

using testing::read_text;
using testing::write_text;

const std::string kCli = ITNAUG_CLI;

int run(const std::string& args) {
  int rc = std::system((kCli + " " + args).c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

class CliTest : public ::testing::Test {
 protected:
  testing::TempDir dir_;
  std::filesystem::path at(const std::string& name) const { return dir_ / name; }
};

TEST_F(CliTest, Itn) {
  write_text(at("in.txt"), "nine out of ten\n\nroom eight oh one is open\n");
  ASSERT_EQ(run("itn -i " + q(at("in.txt")) + " -o " + q(at("out.txt"))), 0);
  EXPECT_EQ(read_text(at("out.txt")), "9 out of 10\n\nroom 801 is open\n");
}

TEST_F(CliTest, ItnFromStdin) {
  ASSERT_EQ(std::system(("echo 'nine out of ten' | " + kCli + " itn > " + q(at("out.txt"))).c_str()), 0);
  EXPECT_EQ(read_text(at("out.txt")), "9 out of 10\n");
}

TEST_F(CliTest, EmptyInputs) {
  write_text(at("empty.txt"), "");
  ASSERT_EQ(run("itn -i " + q(at("empty.txt")) + " -o " + q(at("a.txt"))), 0);
  EXPECT_EQ(read_text(at("a.txt")), "");
  ASSERT_EQ(run("augment -i " + q(at("empty.txt")) + " -o " + q(at("b.jsonl")) + " --stats " + q(at("s.json"))), 0);
  EXPECT_EQ(read_text(at("b.jsonl")), "");
  auto st = json::parse(read_text(at("s.json")));
  EXPECT_EQ(st["pairs"], 0);
  EXPECT_TRUE(st["diversity-factor"].is_null());
}

TEST_F(CliTest, AugmentIsDeterministic) {
  write_text(at("corpus.txt"),
             "Room 801 is open\nhello world\nOn 12/31/2022 I paid $1.20 for 123g\nCall 555-123-4567 at 6:15 am\n"
             "It is 3 1/4 miles and 2.5 kg\nShe came 21st out of 9,000\n");
  std::string base = "augment --seed 42 -i " + q(at("corpus.txt"));
  ASSERT_EQ(run(base + " -o " + q(at("a.jsonl"))), 0);
  ASSERT_EQ(run(base + " -o " + q(at("b.jsonl"))), 0);
  ASSERT_EQ(run(base + " --jobs 4 -o " + q(at("c.jsonl"))), 0);
  auto a = read_text(at("a.jsonl"));
  ASSERT_FALSE(a.empty());
  std::hash<std::string> h;
  EXPECT_EQ(h(a), h(read_text(at("b.jsonl"))));
  EXPECT_EQ(h(a), h(read_text(at("c.jsonl"))));
  ASSERT_EQ(run("augment --seed 43 -i " + q(at("corpus.txt")) + " -o " + q(at("d.jsonl"))), 0);
  EXPECT_NE(h(a), h(read_text(at("d.jsonl"))));

  for (const auto& p : read_pairs(at("a.jsonl"))) {
    EXPECT_NO_THROW(validate_pair(p));
    EXPECT_NE(p.written, "hello world");
  }
}

TEST_F(CliTest, AugmentOneTimeEntity) {
  write_text(at("t.txt"), "6:15 am\n");
  ASSERT_EQ(run("augment -i " + q(at("t.txt")) + " -o " + q(at("t.jsonl")) + " --max-variants 100"), 0);
  auto pairs = read_pairs(at("t.jsonl"));
  EXPECT_GE(pairs.size(), 7u);
  for (const auto& p : pairs) EXPECT_EQ(p.id.rfind("1-", 0), 0u) << p.id;
}

TEST_F(CliTest, AugmentTsvAndClasses) {
  write_text(at("t.txt"), "at 6:15 am in room 801\n");
  ASSERT_EQ(run("augment --classes time --format tsv -i " + q(at("t.txt")) + " -o " + q(at("t.tsv"))), 0);
  auto out = read_text(at("t.tsv"));
  EXPECT_NE(out.find("\tat 6:15 am in room 801\n"), std::string::npos);
  EXPECT_NE(out.find("room 801\t"), std::string::npos) << "cardinal should be left alone";
}

TEST_F(CliTest, Filter) {
  auto data = testing::kDataDir / "filter";
  ASSERT_EQ(run("filter --locale it --source " + q(data / "source_en.jsonl") + " --translated " +
                q(data / "translated_it.jsonl") + " -o " + q(at("kept.jsonl")) + " --report " + q(at("r.json"))),
            0);
  auto rep = json::parse(read_text(at("r.json")));
  EXPECT_EQ(rep["kept"], 3);
  EXPECT_EQ(rep["rejected-by-reason"]["conformity-failure"], 1);
  EXPECT_EQ(rep["rejected-by-reason"]["spoken-written-mismatch"], 1);
  EXPECT_EQ(rep["rejected-by-reason"]["high-wer"], 1);
  EXPECT_EQ(read_pairs(at("kept.jsonl")).size(), 3u);
}

TEST_F(CliTest, FilterMisalignedExitsThree) {
  write_text(at("a.jsonl"), R"({"id": "1", "spoken": "x", "written": "x"})" "\n");
  write_text(at("b.jsonl"), R"({"id": "2", "spoken": "x", "written": "x"})" "\n");
  EXPECT_EQ(run("filter --source " + q(at("a.jsonl")) + " --translated " + q(at("b.jsonl")) + " -o " +
                q(at("o.jsonl")) + " 2>/dev/null"),
            3);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("filter --source x 2>/dev/null"), 2);
  EXPECT_EQ(run("frobnicate 2>/dev/null >/dev/null"), 2);
  EXPECT_EQ(run("2>/dev/null >/dev/null"), 2);
  EXPECT_EQ(run("itn --locale xx -i /dev/null 2>/dev/null"), 1);
}

TEST_F(CliTest, EvaluateCaseB) {
  auto data = testing::kDataDir / "case_b";
  ASSERT_EQ(run("evaluate --case b --locale fr --references " + q(data / "en_reference.jsonl") + " --spoken " +
                q(data / "fr_spoken.jsonl") + " --predictions " + q(data / "fr_predictions.jsonl") + " -o " +
                q(at("r.json")) + " --tsv " + q(at("r.tsv"))),
            0);
  auto rep = json::parse(read_text(at("r.json")));
  auto want = json::parse(read_text(data / "expected_report.json"));
  EXPECT_EQ(rep["overall-accuracy"]["fraction"], want["overall-accuracy"]);
  EXPECT_EQ(rep["skipped-already-written"], want["skipped-already-written"]);
  EXPECT_NE(read_text(at("r.tsv")).find("overall\t20\t75.00\n"), std::string::npos);
}

TEST_F(CliTest, EvaluateCaseA) {
  auto data = testing::kDataDir / "case_a";
  ASSERT_EQ(run("evaluate --references " + q(data / "references.jsonl") + " --predictions " +
                q(data / "predictions.jsonl") + " -o " + q(at("r.json"))),
            0);
  auto rep = json::parse(read_text(at("r.json")));
  EXPECT_EQ(rep["overall-accuracy"]["fraction"], "4/5");
  EXPECT_EQ(rep["non-itn-accuracy"]["fraction"], "1/1");
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  write_text(at("corpus.txt"), "Room 801 is open\n");
  write_text(at("cfg.json"), "{\"input\": " + json(at("corpus.txt").string()).dump() +
                                 ", \"seed\": 5, \"format\": \"tsv\", \"max-variants\": 2}");
  ASSERT_EQ(run("augment --config " + q(at("cfg.json")) + " -o " + q(at("a.tsv"))), 0);
  ASSERT_EQ(run("augment --config " + q(at("cfg.json")) + " --format jsonl -o " + q(at("b.jsonl"))), 0);
  auto tsv = read_text(at("a.tsv"));
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 2);
  EXPECT_EQ(read_pairs(at("b.jsonl")).size(), 2u);
}

TEST_F(CliTest, BridgeRun) {
  write_text(at("bridge.json"), "{\"command\": [" + json(std::string(ITNAUG_STUB_MODEL)).dump() +
                                    ", \"drop\", \"3\"], \"timeout-ms\": 2000}");
  std::string in;
  for (int i = 1; i <= 9; ++i) in += json{{"id", i}, {"text", "t" + std::to_string(i)}}.dump() + "\n";
  write_text(at("in.jsonl"), in);
  ASSERT_EQ(run("bridge-run --jobs 2 --bridge " + q(at("bridge.json")) + " -i " + q(at("in.jsonl")) + " -o " +
                q(at("out.jsonl")) + " 2>/dev/null"),
            0);
  auto ok = read_text_items(at("out.jsonl"));
  auto failed = read_text(at("out.jsonl.failed.jsonl"));
  EXPECT_EQ(ok.size() + static_cast<std::size_t>(std::count(failed.begin(), failed.end(), '\n')), 9u);
  EXPECT_GE(ok.size(), 6u);
  for (const auto& t : ok) EXPECT_EQ(t.text, "t" + t.id);
}

TEST_F(CliTest, Stats) {
  write_text(at("t.txt"), "at 6:15 am in room 801\n");
  ASSERT_EQ(run("augment -i " + q(at("t.txt")) + " -o " + q(at("p.jsonl"))), 0);
  ASSERT_EQ(run("stats -i " + q(at("p.jsonl")) + " -o " + q(at("s.json"))), 0);
  auto st = json::parse(read_text(at("s.json")));
  EXPECT_EQ(st["per-class"]["time"], st["pairs"]);
  EXPECT_EQ(st["per-class"]["cardinal"], st["pairs"]);
}

}  // namespace
}  // namespace itnaug
