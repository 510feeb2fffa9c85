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

// Corpus ingestion, pair-file I/O and the translated-pair quality filter.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/itn_rules.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/segmenter.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

struct Sentence {
  std::string id;  // 1-based source line number
  std::string text;
  bool operator==(const Sentence&) const = default;
};

// Reads one sentence per line. Blank lines are dropped but keep their line
// numbers out of the id space.
inline std::vector<Sentence> ingest_text(const std::string& data, const std::string& origin = "<input>") {
  if (auto bad = find_invalid_utf8(data))
    throw ParseError(origin + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  std::vector<Sentence> out;
  std::size_t line = 0, pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    auto end = nl == std::string::npos ? data.size() : nl;
    ++line;
    auto t = trim(std::string_view(data).substr(pos, end - pos));
    if (!t.empty()) out.push_back({std::to_string(line), std::string(t)});
    pos = end + 1;
  }
  return out;
}

inline std::vector<Sentence> ingest(const std::filesystem::path& path) {
  return ingest_text(detail::read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Pair files

inline std::vector<SpokenWrittenPair> read_pairs_text(const std::string& data, const std::string& origin) {
  if (auto bad = find_invalid_utf8(data))
    throw ParseError(origin + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  std::vector<SpokenWrittenPair> out;
  std::size_t line = 0, pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    auto end = nl == std::string::npos ? data.size() : nl;
    ++line;
    auto t = trim(std::string_view(data).substr(pos, end - pos));
    pos = end + 1;
    if (t.empty()) continue;
    std::string where = origin + ":" + std::to_string(line);
    json j;
    try {
      j = json::parse(t);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    try {
      out.push_back(pair_from_json(j));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<SpokenWrittenPair> read_pairs(const std::filesystem::path& path) {
  return read_pairs_text(detail::read_file(path), path.string());
}

inline void write_pairs_jsonl(std::ostream& os, const std::vector<SpokenWrittenPair>& pairs) {
  for (const auto& p : pairs) os << pair_to_json(p).dump() << '\n';
}

inline void write_pairs_tsv(std::ostream& os, const std::vector<SpokenWrittenPair>& pairs) {
  for (const auto& p : pairs) os << p.spoken_text() << '\t' << p.written << '\n';
}

// {"id", "text"} lines, as used for sentence streams and model I/O.
struct TextItem {
  std::string id;
  std::string text;
  bool operator==(const TextItem&) const = default;
};

inline std::vector<TextItem> read_text_items_text(const std::string& data, const std::string& origin) {
  if (auto bad = find_invalid_utf8(data))
    throw ParseError(origin + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  std::vector<TextItem> out;
  std::size_t line = 0, pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    auto end = nl == std::string::npos ? data.size() : nl;
    ++line;
    auto t = trim(std::string_view(data).substr(pos, end - pos));
    pos = end + 1;
    if (t.empty()) continue;
    std::string where = origin + ":" + std::to_string(line);
    try {
      auto j = json::parse(t);
      out.push_back({id_from_json(j.at("id")), j.at("text").get<std::string>()});
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<TextItem> read_text_items(const std::filesystem::path& path) {
  return read_text_items_text(detail::read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Word error rate

// Token edit distance over |reference|.
inline Rational wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  if (reference.empty()) throw EmptyInputError("wer needs a non-empty reference");
  const std::size_t n = reference.size(), m = hypothesis.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return Rational(static_cast<std::int64_t>(prev[m]), static_cast<std::int64_t>(n));
}

// WER of a back-translation against the original sentence.
inline Rational back_translation_check(const std::string& original, const std::string& back) {
  return wer(split_whitespace(original), split_whitespace(back));
}

// ---------------------------------------------------------------------------
// Masking

inline const std::string kEntityMask = "<E>";

// Written side: segmenter spans become one mask token each.
inline std::vector<std::string> mask_written(const std::string& text, const LocaleProfile& locale) {
  auto seg = segment(text, locale);
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (const auto& s : seg.spans) {
    for (auto& t : token_texts(tokenize(std::string_view(text).substr(pos, s.start - pos)))) out.push_back(t);
    out.push_back(kEntityMask);
    pos = s.end;
  }
  for (auto& t : token_texts(tokenize(std::string_view(text).substr(pos)))) out.push_back(t);
  return out;
}

namespace detail {

inline bool entity_word(const std::string& low, const LocaleProfile& locale) {
  if (locale.currency_lexicon.count(low)) return true;
  for (const auto& [code, c] : locale.currencies)
    if (!low.empty() && (low == to_lower(c.minor_plural) || low == to_lower(c.minor_singular))) return true;
  for (const auto& [id, u] : locale.units) {
    for (const auto& f : {u.singular, u.plural})
      for (const auto& w : split_whitespace(to_lower(f)))
        if (w == low) return true;
    for (const auto& a : u.alternates)
      if (to_lower(a) == low) return true;
  }
  return false;
}

}  // namespace detail

// Spoken side: number-word runs, together with adjacent currency and unit
// words, and any digit-bearing spans become one mask token each.
inline std::vector<std::string> mask_spoken(const std::string& text, const LocaleProfile& locale) {
  auto w = mask_written(text, locale);
  std::vector<bool> hit(w.size(), false);
  for (const auto& r : number_runs(w, locale))
    for (std::size_t k = r.begin; k < r.end; ++k) hit[k] = true;
  // Whole spoken entities, which pick up meridiem and other cue words.
  for (const auto& e : parse_spoken(w, locale))
    for (std::size_t k = e.begin; k < e.end; ++k) hit[k] = true;
  // Grow runs over entity words and connectors inside an entity.
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (hit[k]) continue;
    bool left = k > 0 && hit[k - 1];
    if (left && detail::entity_word(to_lower(w[k]), locale)) hit[k] = true;
  }
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] == kEntityMask) hit[k] = true;
  std::vector<std::string> out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!hit[k]) {
      out.push_back(w[k]);
    } else if (out.empty() || out.back() != kEntityMask || (k > 0 && !hit[k - 1])) {
      out.push_back(kEntityMask);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filtering

enum class RejectReason { Mismatch, HighWer, Conformity };

inline std::string_view reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::Mismatch: return "spoken-written-mismatch";
    case RejectReason::HighWer: return "high-wer";
    case RejectReason::Conformity: return "conformity-failure";
  }
  return "";
}

struct FilterReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::map<RejectReason, std::size_t> rejected{
      {RejectReason::Mismatch, 0}, {RejectReason::HighWer, 0}, {RejectReason::Conformity, 0}};

  bool reconciles() const {
    std::size_t r = 0;
    for (const auto& [_, n] : rejected) r += n;
    return kept + r == total;
  }

  FilterReport& operator+=(const FilterReport& o) {
    total += o.total;
    kept += o.kept;
    for (const auto& [k, n] : o.rejected) rejected[k] += n;
    return *this;
  }

  json to_json() const {
    json r = json::object();
    for (const auto& [k, n] : rejected) r[std::string(reason_name(k))] = n;
    return json{{"total", total}, {"kept", kept}, {"rejected-by-reason", r}};
  }
};

namespace detail {

// Integers read from the spoken number runs, both per run and per chunk.
inline std::pair<std::multiset<std::string>, std::multiset<std::string>> spoken_numbers(
    const std::string& text, const LocaleProfile& locale) {
  std::multiset<std::string> runs, chunks;
  for (const auto& r : number_runs(token_texts(tokenize(text)), locale)) {
    std::string d;
    for (const auto& c : r.chunks) {
      d += c;
      chunks.insert(c);
    }
    runs.insert(d);
  }
  return {runs, chunks};
}

}  // namespace detail

// The first failed criterion, or nothing when the pair is kept.
inline std::optional<RejectReason> check_pair(const SpokenWrittenPair& source, const SpokenWrittenPair& translated,
                                              const LocaleProfile& source_locale,
                                              const LocaleProfile& target_locale, const Rational& wer_threshold) {
  // (a) spoken side stays spoken; written side keeps every entity.
  auto spoken = translated.spoken_text();
  if (contains_digit(spoken)) return RejectReason::Mismatch;
  if (segment(translated.written, target_locale).spans.size() != segment(source.written, source_locale).spans.size())
    return RejectReason::Mismatch;
  // (c) the spoken numbers survive translation.
  auto [src_runs, src_chunks] = detail::spoken_numbers(source.spoken_text(), source_locale);
  auto [tgt_runs, tgt_chunks] = detail::spoken_numbers(spoken, target_locale);
  if (src_runs != tgt_runs && src_chunks != tgt_chunks) return RejectReason::Conformity;
  // (b) the two renditions agree outside entities.
  auto ms = mask_spoken(spoken, target_locale);
  auto mw = mask_written(translated.written, target_locale);
  if (mw.empty()) mw.push_back(kEntityMask);
  if (wer(mw, ms) > wer_threshold) return RejectReason::HighWer;
  return std::nullopt;
}

// Pairs both streams by id; throws on the first id present in only one.
template <class A, class B>
std::vector<std::pair<const A*, const B*>> align_by_id(const std::vector<A>& a, const std::vector<B>& b) {
  std::map<std::string, const B*> index;
  for (const auto& p : b) {
    if (!index.emplace(p.id, &p).second) throw MisalignedStreamError(p.id);
  }
  std::vector<std::pair<const A*, const B*>> out;
  std::set<std::string> seen;
  for (const auto& p : a) {
    auto it = index.find(p.id);
    if (it == index.end() || !seen.insert(p.id).second) throw MisalignedStreamError(p.id);
    out.push_back({&p, it->second});
  }
  if (out.size() != b.size()) {
    for (const auto& p : b)
      if (!seen.count(p.id)) throw MisalignedStreamError(p.id);
  }
  return out;
}

struct FilterResult {
  std::vector<SpokenWrittenPair> kept;
  FilterReport report;
};

inline FilterResult filter_pairs(const std::vector<SpokenWrittenPair>& source,
                                 const std::vector<SpokenWrittenPair>& translated,
                                 const LocaleProfile& target_locale, const Rational& wer_threshold,
                                 const LocaleProfile& source_locale) {
  FilterResult res;
  for (const auto& [s, t] : align_by_id(source, translated)) {
    ++res.report.total;
    if (auto why = check_pair(*s, *t, source_locale, target_locale, wer_threshold)) {
      ++res.report.rejected[*why];
    } else {
      ++res.report.kept;
      res.kept.push_back(*t);
    }
  }
  return res;
}

}  // namespace itnaug
