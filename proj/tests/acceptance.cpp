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

// End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
// if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "golden.hpp"
#include "itnaug/evaluator.hpp"
#include "itnaug/itn_rules.hpp"
#include "itnaug/model_bridge.hpp"
#include "itnaug/pipeline.hpp"
#include "itnaug/spoken_generator.hpp"
#include "test_util.hpp"
#include "wer_oracle.hpp"

using namespace itnaug;
using testing::locale;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------

Outcome golden_variants() {
  AugmentationConfig c;
  c.max_variants_per_entity = kUnlimited;
  std::size_t want = 0, found = 0;
  std::string missing;
  for (const auto& row : testing::golden_rows()) {
    auto seg = segment(row.written, locale("en"));
    if (seg.spans.size() != 1) return {false, "'" + row.written + "' did not segment as one entity"};
    std::set<std::string> got;
    for (const auto& v : entity_variants(seg.spans[0].value, locale("en"), c)) got.insert(normalize_whitespace(v.text()));
    for (const auto& v : row.variants) {
      ++want;
      if (got.count(v))
        ++found;
      else if (missing.empty())
        missing = "; first missing: " + row.written + " -> '" + v + "'";
    }
  }
  return {found == want, std::to_string(found) + "/" + std::to_string(want) + " reference variants" + missing};
}

Outcome number_round_trip() {
  std::size_t variants = 0, bad = 0;
  std::string first;
  for (std::int64_t n = 0; n <= 99999; ++n) {
    for (const auto& v : number_variants(n, locale("en"))) {
      ++variants;
      auto e = parse_spoken(v.tokens, locale("en"));
      if (e.size() != 1 || e[0].begin != 0 || e[0].end != v.tokens.size() || !(e[0].value == CanonicalValue(Cardinal{n}))) {
        if (!bad++) first = "; first failure: " + std::to_string(n) + " '" + v.text() + "'";
      }
    }
  }
  return {bad == 0, std::to_string(variants) + " variants, " + std::to_string(bad) + " failed" + first};
}

// Seeded synthetic corpus, one entity per sentence, classes in rotation.
std::vector<std::pair<EntityClass, std::string>> synthetic_corpus(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  auto r = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };
  auto s = [](std::int64_t v) { return std::to_string(v); };
  auto pad = [](std::int64_t v, int w) {
    auto t = std::to_string(v);
    return std::string(static_cast<std::size_t>(w) - std::min<std::size_t>(t.size(), w), '0') + t;
  };
  auto pick = [&](const std::vector<std::string>& xs) { return xs[rng.below(xs.size())]; };
  auto ordinal = [&](std::int64_t v) {
    auto m = v % 100;
    std::string suf = (m >= 11 && m <= 13) ? "th" : v % 10 == 1 ? "st" : v % 10 == 2 ? "nd" : v % 10 == 3 ? "rd" : "th";
    return s(v) + suf;
  };
  auto grouped = [&](std::int64_t v) { return render_written(Cardinal{v}, locale("en"), {true}); };

  std::vector<std::pair<EntityClass, std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto cls = kAllClasses[i % kAllClasses.size()];
    std::string text;
    switch (cls) {
      case EntityClass::Cardinal:
        text = pick({"There were ", "We sold ", "The town has "}) + grouped(r(10, 999999)) + pick({" tickets", " people", " cars"});
        break;
      case EntityClass::Ordinal: text = "She finished " + ordinal(r(1, 120)) + " in the race"; break;
      case EntityClass::Decimal: text = "The ratio was " + s(r(0, 99)) + "." + pad(r(1, 99), static_cast<int>(r(1, 2))); break;
      case EntityClass::Fraction: {
        auto d = r(2, 16);
        text = "Mix in " + s(r(1, 9)) + " " + s(r(1, d - 1)) + "/" + s(d) + " parts";
        break;
      }
      case EntityClass::Money:
        text = "It costs $" + grouped(r(1, 9999)) + (r(0, 1) ? "." + pad(r(0, 99), 2) : "");
        break;
      case EntityClass::Time:
        text = r(0, 1) ? "We meet at " + s(r(1, 12)) + ":" + pad(r(0, 59), 2) + pick({" am", " pm"})
                       : "The shift starts at " + s(r(13, 23)) + ":" + pad(r(0, 59), 2);
        break;
      case EntityClass::Date: text = "It happened on " + s(r(1, 12)) + "/" + s(r(1, 28)) + "/" + s(r(1950, 2030)); break;
      case EntityClass::Measure:
        text = "It weighs " + s(r(2, 999)) + (r(0, 1) ? "." + s(r(1, 9)) : "") + pick({" kg", "g", " km", " miles", " cm"});
        break;
      case EntityClass::Telephone:
        text = "Call " + s(r(2, 9)) + pad(r(0, 99), 2) + "-" + s(r(2, 9)) + pad(r(0, 99), 2) + "-" + pad(r(0, 9999), 4) + " now";
        break;
      case EntityClass::DigitSequence: text = "Use code 0" + pad(r(0, 999), 3); break;
    }
    out.push_back({cls, text});
  }
  return out;
}

Outcome itn_round_trip(std::string& table) {
  auto corpus = synthetic_corpus(1000, 2026);
  AugmentationConfig config;  // default caps
  config.sampling_seed = 11;
  EvalReport canonical, all;
  std::set<EntityClass> covered;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& text = corpus[i].second;
    auto seg = segment(text, locale("en"));
    auto ref = extract_normalized_entities(text, locale("en"));
    for (const auto& s : seg.spans) covered.insert(s.cls);
    for (const auto& s : seg.spans) {
      // Canonical reading of this entity, rest of the sentence as written.
      auto spoken = text.substr(0, s.start) + join(verbalize(s.value, locale("en")).canonical_verbal) + text.substr(s.end);
      detail::score_item(ref, extract_normalized_entities(itn(spoken, locale("en")), locale("en")), locale("en"),
                         canonical);
    }
    for (const auto& p : rewrite(text, seg, locale("en"), config, i))
      detail::score_item(ref, extract_normalized_entities(itn(p.spoken_text(), locale("en")), locale("en")),
                         locale("en"), all);
  }
  std::ostringstream t;
  t << "    class        canonical        all variants\n";
  for (auto c : kAllClasses) {
    auto a = canonical.per_class[c], b = all.per_class[c];
    char buf[160];
    std::snprintf(buf, sizeof buf, "    %-12s %5zu/%-5zu %6.2f%%  %6zu/%-6zu %6.2f%%\n", std::string(class_name(c)).c_str(),
                  a.correct, a.total, a.total ? 100.0 * a.correct / a.total : 0.0, b.correct, b.total,
                  b.total ? 100.0 * b.correct / b.total : 0.0);
    t << buf;
  }
  table = t.str();
  auto ca = canonical.overall_accuracy(), aa = all.overall_accuracy();
  bool pass = covered.size() == kAllClasses.size() && ca >= Rational(95, 100) && aa >= Rational(85, 100);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu sentences, %zu classes; canonical %.2f%% (>= 95), all variants %.2f%% (>= 85) over %zu entities",
                corpus.size(), covered.size(), 100 * to_double(ca), 100 * to_double(aa), all.total());
  return {pass, buf};
}

Outcome equivalences() {
  auto one = [](const std::string& text, const std::string& lang) {
    auto v = extract_normalized_entities(text, locale(lang));
    NormalizedEntity none;
    none.digits = "<none>";
    return v.size() == 1 ? v[0] : none;
  };
  struct Case {
    std::string a, la, b, lb;
    bool want;
  };
  std::vector<Case> cases = {
      {"1:30 p.m.", "en", "13h30", "fr", true},
      {"24,000", "en", "24 mille", "fr", true},
      {"two children", "en", "2 enfants", "fr", true},
      {"25,000.00", "en", "25 000,00", "fr", true},
      {"25 000,00", "fr", "25.000,00", "de", true},
      {"9", "en", "neuf", "fr", false},
  };
  std::size_t ok = 0;
  std::string bad;
  for (const auto& c : cases) {
    bool got = entities_equivalent(one(c.a, c.la), one(c.b, c.lb), locale(c.lb));
    if (got == c.want)
      ++ok;
    else
      bad += " [" + c.a + " vs " + c.b + "]";
  }
  return {ok == cases.size(), std::to_string(ok) + "/" + std::to_string(cases.size()) + " as expected" + bad};
}

Outcome case_b_fixture() {
  auto dir = testing::kDataDir / "case_b";
  auto r = evaluate_case_b(read_pairs(dir / "en_reference.jsonl"), read_text_items(dir / "fr_spoken.jsonl"),
                           read_text_items(dir / "fr_predictions.jsonl"), locale("fr"), locale("en"));
  auto want = json::parse(testing::read_text(dir / "expected_report.json"));
  std::vector<std::string> diffs;
  auto check = [&](const std::string& what, const json& got, const json& exp) {
    if (got != exp) diffs.push_back(what + " " + got.dump() + " != " + exp.dump());
  };
  check("items", r.items, want["items"]);
  check("skipped", r.skipped_already_written, want["skipped-already-written"]);
  check("unmatched", r.unmatched_predictions, want["unmatched-predictions"]);
  check("correct", r.correct(), want["correct"]);
  check("total", r.total(), want["total"]);
  check("overall", rational_to_json(r.overall_accuracy())["fraction"], want["overall-accuracy"]);
  json per = json::object();
  for (const auto& [k, c] : r.per_class) per[std::string(class_name(k))] = {{"correct", c.correct}, {"total", c.total}};
  check("per-class", per, want["per-class"]);
  std::string d = rational_to_json(r.overall_accuracy())["fraction"].get<std::string>() + " overall, " +
                  std::to_string(r.skipped_already_written) + " skipped";
  for (const auto& x : diffs) d += "; " + x;
  return {diffs.empty(), d};
}

Outcome filter_fixture() {
  auto dir = testing::kDataDir / "filter";
  auto res = filter_pairs(read_pairs(dir / "source_en.jsonl"), read_pairs(dir / "translated_it.jsonl"), locale("it"),
                          Rational(0), locale("en"));
  const auto& r = res.report.rejected;
  bool pass = r.at(RejectReason::Conformity) == 1 && r.at(RejectReason::Mismatch) == 1 &&
              r.at(RejectReason::HighWer) == 1 && res.report.reconciles();
  return {pass, res.report.to_json().dump()};
}

Outcome diversity() {
  std::vector<SpokenWrittenPair> pairs;
  for (const auto& row : testing::golden_rows()) {
    auto out = rewrite(row.written, segment(row.written, locale("en")), locale("en"), AugmentationConfig{});
    pairs.insert(pairs.end(), out.begin(), out.end());
  }
  auto d = diversity_factor(pairs);
  char buf[120];
  std::snprintf(buf, sizeof buf, "diversity factor %.2f (>= 5; the corpus-level reference value is 22)", to_double(d));
  return {d >= Rational(5), buf};
}

Outcome wer_oracle() {
  testing::EditGraph g("abc");
  std::size_t pairs = 0, bad = 0;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    if (g.nodes()[i].empty()) continue;
    auto dist = g.distances_from(i);
    auto ref = testing::as_tokens(g.nodes()[i]);
    for (std::size_t j = 0; j < g.nodes().size(); ++j, ++pairs)
      if (wer(ref, testing::as_tokens(g.nodes()[j])) != Rational(dist[j], static_cast<std::int64_t>(ref.size()))) ++bad;
  }
  return {bad == 0, std::to_string(pairs) + " sequence pairs, " + std::to_string(bad) + " disagreements"};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

Outcome determinism() {
  testing::TempDir dir;
  std::string corpus;
  for (const auto& [_, text] : synthetic_corpus(200, 9)) corpus += text + "\n";
  testing::write_text(dir / "corpus.txt", corpus);
  std::vector<std::uint64_t> hashes;
  for (const std::string run : {"a", "b"}) {
    auto out = dir / (run + ".jsonl");
    std::string cmd = std::string(ITNAUG_CLI) + " augment --seed 1234 --jobs " + (run == "a" ? "1" : "4") + " -i '" +
                      (dir / "corpus.txt").string() + "' -o '" + out.string() + "'";
    int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) return {false, "augment exited with status " + std::to_string(rc)};
    hashes.push_back(fnv1a(testing::read_text(out)));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "fnv1a %016llx vs %016llx", static_cast<unsigned long long>(hashes[0]),
                static_cast<unsigned long long>(hashes[1]));
  return {hashes[0] == hashes[1] && hashes[0] != fnv1a(""), buf};
}

Outcome bridge() {
  std::vector<TextItem> items;
  for (int i = 0; i < 10000; ++i) items.push_back({"r" + std::to_string(i), "line " + std::to_string(i)});
  BridgeSpec spec;
  spec.command = {ITNAUG_STUB_MODEL, "echo"};
  auto out = run_batch(items, spec);
  std::size_t echo_ok = 0;
  for (std::size_t i = 0; i < items.size() && i < out.size(); ++i)
    echo_ok += out[i].id == items[i].id && out[i].text == items[i].text;

  spec.command = {ITNAUG_STUB_MODEL, "drop", "7"};
  spec.timeout = std::chrono::milliseconds(3000);
  std::vector<TextItem> few(items.begin(), items.begin() + 500);
  auto faulty = run_batch(few, spec);
  std::size_t right = 0, failed = 0;
  for (std::size_t i = 0; i < few.size() && i < faulty.size(); ++i) {
    bool should_fail = (i + 1) % 7 == 0;
    failed += !faulty[i].ok();
    right += faulty[i].id == few[i].id && (should_fail ? !faulty[i].ok() : faulty[i].text == few[i].text);
  }
  bool pass = out.size() == items.size() && echo_ok == items.size() && faulty.size() == few.size() && right == few.size();
  return {pass, "echo " + std::to_string(echo_ok) + "/" + std::to_string(items.size()) + "; fault injection " +
                    std::to_string(failed) + " failed ids, " + std::to_string(right) + "/" + std::to_string(few.size()) +
                    " as expected"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::string table;
  std::vector<Criterion> criteria = {
      {"golden variant sets", golden_variants},
      {"number round trip 0..99999", number_round_trip},
      {"generator/ITN round trip", [&] { return itn_round_trip(table); }},
      {"evaluation equivalences", equivalences},
      {"case B scoring fixture", case_b_fixture},
      {"filter criteria fixture", filter_fixture},
      {"diversity on golden set", diversity},
      {"WER vs edit-graph oracle", wer_oracle},
      {"augment determinism", determinism},
      {"bridge robustness", bridge},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu %-28s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (i == 2 && !table.empty()) std::printf("%s", table.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
