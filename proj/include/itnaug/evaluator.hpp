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

// Locale-aware scoring of written-form ITN output.

#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/itn_rules.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/pipeline.hpp"
#include "itnaug/segmenter.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

struct NormalizedEntity {
  EntityClass cls = EntityClass::Cardinal;
  std::string digits;                  // ^[0-9]+(\.[0-9]+)?$
  std::optional<std::string> clock24;  // "HH:MM" or "HH:MM:SS"; times only
  std::optional<std::string> expanded;  // set when a magnitude word was folded in
  bool word_form = false;               // a spelled-out small cardinal
  std::string surface;
  bool operator==(const NormalizedEntity&) const = default;
};

namespace detail {

inline std::string pad2(std::int64_t v) { return (v < 10 ? "0" : "") + std::to_string(v); }

inline std::string abs_digits(std::int64_t v) { return std::to_string(v < 0 ? -v : v); }

inline std::string with_fraction(std::int64_t integer, const std::string& fraction) {
  auto s = abs_digits(integer);
  if (!fraction.empty()) s += "." + fraction;
  return s;
}

inline NormalizedEntity normalize_value(const CanonicalValue& value, const std::string& surface) {
  NormalizedEntity e;
  e.cls = class_of(value);
  e.surface = surface;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cardinal> || std::is_same_v<T, Ordinal>) {
          e.digits = abs_digits(x.value);
        } else if constexpr (std::is_same_v<T, Decimal>) {
          e.digits = with_fraction(x.integer, x.fraction);
        } else if constexpr (std::is_same_v<T, Fraction>) {
          e.digits = (x.whole ? abs_digits(*x.whole) : "") + abs_digits(x.numerator) + abs_digits(x.denominator);
        } else if constexpr (std::is_same_v<T, Money>) {
          // $5.00 and $5 are the same amount.
          auto minor = x.minor.value_or("");
          if (minor.find_first_not_of('0') == std::string::npos) minor.clear();
          e.digits = with_fraction(x.major, minor);
        } else if constexpr (std::is_same_v<T, Time>) {
          e.digits = std::to_string(x.hour) + pad2(x.minute) + (x.second ? pad2(*x.second) : "");
          int h = x.hour;
          if (x.meridiem == Meridiem::Am || x.meridiem == Meridiem::Pm) {
            h %= 12;
            if (x.meridiem == Meridiem::Pm) h += 12;
          }
          e.clock24 = pad2(h) + ":" + pad2(x.minute) + (x.second ? ":" + pad2(*x.second) : "");
        } else if constexpr (std::is_same_v<T, Date>) {
          if (x.year) e.digits += std::to_string(*x.year);
          if (x.month) e.digits += pad2(*x.month);
          if (x.day) e.digits += pad2(*x.day);
        } else if constexpr (std::is_same_v<T, Measure>) {
          e.digits = with_fraction(x.magnitude.integer, x.magnitude.fraction);
        } else if constexpr (std::is_same_v<T, Telephone>) {
          for (const auto& g : x.groups) e.digits += g;
        } else if constexpr (std::is_same_v<T, DigitSequence>) {
          e.digits = x.digits;
        }
      },
      value);
  // Magnitude words leave fewer digits on the surface than in the value.
  if (e.cls == EntityClass::Cardinal || e.cls == EntityClass::Decimal) {
    if (strip_to_digits(surface).size() < e.digits.size() - (e.digits.find('.') != std::string::npos ? 1 : 0))
      e.expanded = e.digits;
  }
  return e;
}

}  // namespace detail

// Digit-bearing entities in reading order, plus spelled-out small cardinals
// standing on their own. One is left out of the latter: it doubles as an
// article or pronoun in every supported language.
inline std::vector<NormalizedEntity> extract_normalized_entities(const std::string& written,
                                                                 const LocaleProfile& locale) {
  auto seg = segment(written, locale);
  std::vector<std::pair<std::size_t, NormalizedEntity>> found;
  for (const auto& s : seg.spans) found.push_back({s.start, detail::normalize_value(s.value, s.surface)});

  auto toks = tokenize(written);
  auto texts = token_texts(toks);
  for (const auto& r : number_runs(texts, locale)) {
    if (r.end - r.begin != 1) continue;
    const auto& t = toks[r.begin];
    auto nw = locale.number_word(t.text);
    if (!nw || nw->role != NumberRole::Unit) continue;
    if (nw->value == 1 || nw->value > locale.small_cardinal.threshold) continue;
    bool inside = false;
    for (const auto& s : seg.spans) inside |= t.begin < s.end && s.start < t.end;
    if (inside) continue;
    NormalizedEntity e;
    e.cls = EntityClass::Cardinal;
    e.digits = std::to_string(nw->value);
    e.word_form = true;
    e.surface = t.text;
    found.push_back({t.begin, e});
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<NormalizedEntity> out;
  for (auto& [_, e] : found) out.push_back(std::move(e));
  return out;
}

// `source` is the reference side; the small-cardinal rule is one-way.
inline bool entities_equivalent(const NormalizedEntity& source, const NormalizedEntity& target,
                                const LocaleProfile& locale) {
  // 12/24 hour clocks.
  if (source.cls == EntityClass::Time && target.cls == EntityClass::Time && source.clock24 && target.clock24)
    return *source.clock24 == *target.clock24;
  // Alternate magnitudes.
  const std::string& a = source.expanded ? *source.expanded : source.digits;
  const std::string& b = target.expanded ? *target.expanded : target.digits;
  // Small cardinals: a word may stand for a digit, not the other way round
  // unless the locale writes small numbers as words.
  if (target.word_form && !source.word_form) {
    if (!locale.small_cardinal.prefer_words) return false;
    if (std::stoll(b) > locale.small_cardinal.threshold) return false;
  }
  if (source.word_form && !target.word_form && std::stoll(a) > locale.small_cardinal.threshold) return false;
  // Separators were normalized at extraction.
  return a == b;
}

// ---------------------------------------------------------------------------
// Reports

struct ClassCount {
  std::size_t correct = 0;
  std::size_t total = 0;
  bool operator==(const ClassCount&) const = default;
};

struct EvalReport {
  std::map<EntityClass, ClassCount> per_class;
  std::optional<Rational> translation_accuracy;
  std::optional<Rational> non_itn_accuracy;
  std::size_t skipped_already_written = 0;
  std::size_t unmatched_predictions = 0;
  std::size_t items = 0;

  std::size_t correct() const {
    std::size_t n = 0;
    for (const auto& [_, c] : per_class) n += c.correct;
    return n;
  }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : per_class) n += c.total;
    return n;
  }
  // Vacuously 1 with nothing to score.
  Rational overall_accuracy() const {
    auto t = total();
    return t ? Rational(static_cast<std::int64_t>(correct()), static_cast<std::int64_t>(t)) : Rational(1);
  }

  EvalReport& operator+=(const EvalReport& o) {
    for (const auto& [k, c] : o.per_class) {
      per_class[k].correct += c.correct;
      per_class[k].total += c.total;
    }
    skipped_already_written += o.skipped_already_written;
    unmatched_predictions += o.unmatched_predictions;
    items += o.items;
    return *this;
  }

  bool operator==(const EvalReport&) const = default;
};

inline json rational_to_json(const Rational& r) {
  std::string frac = std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
  return json{{"fraction", frac}, {"value", boost::rational_cast<double>(r)}};
}

inline json report_to_json(const EvalReport& r) {
  json classes = json::object();
  for (const auto& [k, c] : r.per_class) {
    Rational acc = c.total ? Rational(static_cast<std::int64_t>(c.correct), static_cast<std::int64_t>(c.total))
                           : Rational(1);
    classes[std::string(class_name(k))] = json{{"correct", c.correct}, {"total", c.total}, {"accuracy", rational_to_json(acc)}};
  }
  json j{{"per-class", classes},
         {"overall-accuracy", rational_to_json(r.overall_accuracy())},
         {"correct", r.correct()},
         {"total", r.total()},
         {"items", r.items},
         {"skipped-already-written", r.skipped_already_written},
         {"unmatched-predictions", r.unmatched_predictions}};
  j["translation-accuracy"] = r.translation_accuracy ? rational_to_json(*r.translation_accuracy) : json(nullptr);
  j["non-itn-accuracy"] = r.non_itn_accuracy ? rational_to_json(*r.non_itn_accuracy) : json(nullptr);
  return j;
}

// class, size, accuracy -- one row per class with at least one entity.
inline void write_report_tsv(std::ostream& os, const EvalReport& r) {
  auto pct = [](std::size_t c, std::size_t t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", t ? 100.0 * static_cast<double>(c) / static_cast<double>(t) : 100.0);
    return std::string(buf);
  };
  os << "class\tsize\taccuracy\n";
  for (const auto& [k, c] : r.per_class) os << class_name(k) << '\t' << c.total << '\t' << pct(c.correct, c.total) << '\n';
  os << "overall\t" << r.total() << '\t' << pct(r.correct(), r.total()) << '\n';
}

// ---------------------------------------------------------------------------
// Scoring

namespace detail {

// Longest common subsequence under the equivalence, one class at a time.
inline std::size_t lcs_matches(const std::vector<const NormalizedEntity*>& ref,
                               const std::vector<const NormalizedEntity*>& hyp, const LocaleProfile& locale) {
  std::vector<std::vector<std::size_t>> t(ref.size() + 1, std::vector<std::size_t>(hyp.size() + 1, 0));
  for (std::size_t i = 1; i <= ref.size(); ++i)
    for (std::size_t j = 1; j <= hyp.size(); ++j)
      t[i][j] = entities_equivalent(*ref[i - 1], *hyp[j - 1], locale) ? t[i - 1][j - 1] + 1
                                                                     : std::max(t[i - 1][j], t[i][j - 1]);
  return t[ref.size()][hyp.size()];
}

inline void score_item(const std::vector<NormalizedEntity>& ref, const std::vector<NormalizedEntity>& hyp,
                       const LocaleProfile& locale, EvalReport& report) {
  std::map<EntityClass, std::pair<std::vector<const NormalizedEntity*>, std::vector<const NormalizedEntity*>>> by;
  for (const auto& e : ref) by[e.cls].first.push_back(&e);
  for (const auto& e : hyp) by[e.cls].second.push_back(&e);
  for (const auto& [cls, sides] : by) {
    std::size_t m = lcs_matches(sides.first, sides.second, locale);
    if (!sides.first.empty()) {
      report.per_class[cls].correct += m;
      report.per_class[cls].total += sides.first.size();
    }
    report.unmatched_predictions += sides.second.size() - m;
  }
  ++report.items;
}

}  // namespace detail

// References and predictions in the same language.
inline EvalReport evaluate_case_a(const std::vector<SpokenWrittenPair>& predictions,
                                  const std::vector<SpokenWrittenPair>& references, const LocaleProfile& locale) {
  EvalReport report;
  for (const auto& [ref, hyp] : align_by_id(references, predictions)) {
    detail::score_item(extract_normalized_entities(ref->written, locale),
                       extract_normalized_entities(hyp->written, locale), locale, report);
  }
  return report;
}

// English references against predictions made from translated spoken text.
inline EvalReport evaluate_case_b(const std::vector<SpokenWrittenPair>& english_reference,
                                  const std::vector<TextItem>& target_spoken,
                                  const std::vector<TextItem>& target_predictions, const LocaleProfile& locale,
                                  const LocaleProfile& english) {
  auto spoken = align_by_id(english_reference, target_spoken);
  auto preds = align_by_id(english_reference, target_predictions);
  EvalReport report;
  for (std::size_t i = 0; i < spoken.size(); ++i) {
    // The translation already produced written form: nothing left to test.
    if (contains_digit(spoken[i].second->text)) {
      ++report.skipped_already_written;
      continue;
    }
    detail::score_item(extract_normalized_entities(spoken[i].first->written, english),
                       extract_normalized_entities(preds[i].second->text, locale), locale, report);
  }
  return report;
}

inline EvalReport evaluate_case_b(const std::vector<SpokenWrittenPair>& english_reference,
                                  const std::vector<TextItem>& target_spoken,
                                  const std::vector<TextItem>& target_predictions, const LocaleProfile& locale) {
  return evaluate_case_b(english_reference, target_spoken, target_predictions, locale, resolve_locale("en"));
}

// Per source entity: kept written on the written side and kept spoken on the
// spoken side.
inline Rational translation_accuracy(const std::vector<SpokenWrittenPair>& source,
                                     const std::vector<SpokenWrittenPair>& translated,
                                     const LocaleProfile& target_locale, const LocaleProfile& source_locale) {
  std::int64_t ok = 0, total = 0;
  for (const auto& [s, t] : align_by_id(source, translated)) {
    auto src = extract_normalized_entities(s->written, source_locale);
    std::erase_if(src, [](const NormalizedEntity& e) { return e.word_form; });
    auto n = static_cast<std::int64_t>(src.size());
    if (!n) continue;
    EvalReport tmp;
    auto tgt = extract_normalized_entities(t->written, target_locale);
    detail::score_item(src, tgt, target_locale, tmp);
    auto written_kept = static_cast<std::int64_t>(tmp.correct());
    auto flipped = static_cast<std::int64_t>(segment(t->spoken_text(), target_locale).spans.size());
    auto spoken_kept = std::max<std::int64_t>(0, n - flipped);
    ok += std::min(written_kept, spoken_kept);
    total += n;
  }
  return total ? Rational(ok, total) : Rational(1);
}

// Sentences whose text outside entity spans matches the reference exactly.
inline Rational non_itn_accuracy(const std::vector<SpokenWrittenPair>& predictions,
                                 const std::vector<SpokenWrittenPair>& references, const LocaleProfile& locale) {
  std::int64_t ok = 0, total = 0;
  for (const auto& [ref, hyp] : align_by_id(references, predictions)) {
    ++total;
    if (mask_written(ref->written, locale) == mask_written(hyp->written, locale)) ++ok;
  }
  return total ? Rational(ok, total) : Rational(1);
}

}  // namespace itnaug
