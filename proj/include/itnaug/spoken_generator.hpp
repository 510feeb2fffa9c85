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

// Spoken variant expansion and sentence rewriting.
//
// Variant sets are kept as ordered maps keyed by the space-joined token
// string, which gives deduplication and the lexicographic order the sampler
// works on in one structure.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/segmenter.hpp"
#include "itnaug/text.hpp"
#include "itnaug/verbalizer.hpp"

namespace itnaug {

struct SpokenVariant {
  Words tokens;
  std::vector<std::string> derivation;
  bool operator==(const SpokenVariant&) const = default;
  std::string text() const { return join(tokens); }
};

// text -> derivation of the first rule that produced it
using VariantSet = std::map<std::string, std::vector<std::string>>;

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

// ---------------------------------------------------------------------------
// Sampling. SplitMix64 (Steele, Lea & Flood) with rejection-based bounded
// draws, so the sample is identical on every platform and standard library.

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

// Derives a child seed, e.g. per sentence or per entity.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
  return g.next();
}

// k distinct indices from [0, n), ascending. Partial Fisher-Yates over the
// identity permutation.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

// Caps a variant set at n, always keeping `keep`.
inline VariantSet cap_variants(const VariantSet& full, std::size_t n, const std::string& keep,
                               std::uint64_t seed) {
  if (full.size() <= n) return full;
  std::vector<VariantSet::const_iterator> rest;
  for (auto it = full.begin(); it != full.end(); ++it)
    if (it->first != keep) rest.push_back(it);
  VariantSet out;
  if (auto k = full.find(keep); k != full.end()) {
    out.insert(*k);
    --n;
  }
  for (auto i : sample_indices(rest.size(), n, seed)) out.insert(*rest[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Digit-chunk readings

// Shapes a spoken digit run is read back as when it is not a long form.
inline bool telephone_shaped(std::string_view digits) {
  if (digits.size() == 7 || digits.size() == 10) return digits[0] >= '2' && digits[0] <= '9';
  if (digits.size() == 11) return digits[0] == '1';
  return false;
}

namespace detail {

struct ChunkReading {
  Words words;
  bool ends_tens = false;     // ... twenty
  bool starts_unit = false;   // one ...
  bool ends_hundred = false;  // ... hundred
  bool is_zero = false;
};

inline ChunkReading read_chunk(std::string_view c, bool oh, bool with_and, const LocaleProfile& locale) {
  ChunkReading r;
  std::int64_t v = 0;
  for (char ch : c) v = v * 10 + (ch - '0');
  if (c.size() == 1) {
    r.words = {digit_word(c[0], locale, oh)};
    r.is_zero = v == 0;
    r.starts_unit = v != 0;
  } else if (c.size() == 2) {
    r.words = sub_hundred_words(v, locale);
    r.ends_tens = v >= 20 && v % 10 == 0;
  } else {
    r.words = sub_thousand_words(v, locale, with_and);
    r.starts_unit = true;
    r.ends_hundred = v % 100 == 0;
    r.ends_tens = v % 100 >= 20 && v % 10 == 0;
  }
  return r;
}

// All splits of `s` into 1-3 digit chunks; multi-digit chunks never start
// with 0.
inline void enumerate_chunkings(std::string_view s, std::size_t pos, std::vector<std::string>& cur,
                                std::vector<std::vector<std::string>>& out) {
  if (pos == s.size()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t len = 1; len <= 3 && pos + len <= s.size(); ++len) {
    if (len > 1 && s[pos] == '0') break;
    cur.emplace_back(s.substr(pos, len));
    enumerate_chunkings(s, pos + len, cur, out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<std::string>> chunkings(std::string_view s) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  enumerate_chunkings(s, 0, cur, out);
  return out;
}

// Whether chunk b may follow chunk a without the pair being read back as
// one number.
inline bool may_follow(const ChunkReading& a, const ChunkReading& b) {
  if (a.ends_tens && b.starts_unit) return false;
  if (a.ends_hundred && !b.is_zero) return false;
  return true;
}

// Readings of one chunk sequence for a fixed oh/and choice, or nothing when
// an adjacency rule is broken. `prev` carries state across calls.
inline bool read_chunk_sequence(const std::vector<std::string>& chunks, bool oh, bool with_and,
                                const LocaleProfile& locale, std::optional<ChunkReading>& prev,
                                Words& out) {
  for (const auto& c : chunks) {
    auto r = read_chunk(c, oh, with_and, locale);
    if (prev && !may_follow(*prev, r)) return false;
    append(out, r.words);
    prev = std::move(r);
  }
  return true;
}

inline void add(VariantSet& set, const Words& w, std::vector<std::string> derivation) {
  set.emplace(join(w), std::move(derivation));
}

inline std::string chunk_tag(const std::vector<std::string>& chunks) {
  std::string t = "chunk:";
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i) t += '-';
    t += std::to_string(chunks[i].size());
  }
  return t;
}

// Chunked readings of a digit string (no long forms).
inline VariantSet digit_string_variants(std::string_view digits, const LocaleProfile& locale) {
  VariantSet out;
  auto all = chunkings(digits);
  for (const auto& ch : all) {
    bool has_zero = false, has_three = false;
    for (const auto& c : ch) {
      has_zero |= c == "0";
      has_three |= c.size() == 3 && c.substr(1) != "00";
    }
    for (int oh = 0; oh <= (has_zero && ch.size() > 1 ? 1 : 0); ++oh) {
      for (int wa = 0; wa <= (has_three ? 1 : 0); ++wa) {
        Words w;
        std::optional<ChunkReading> prev;
        if (!read_chunk_sequence(ch, oh, wa, locale, prev, w)) continue;
        std::vector<std::string> d{chunk_tag(ch)};
        if (oh) d.push_back("oh");
        if (wa) d.push_back("and");
        add(out, w, d);
      }
    }
  }
  return out;
}

inline VariantSet merge(VariantSet a, const VariantSet& b) {
  for (const auto& kv : b) a.insert(kv);
  return a;
}

inline std::vector<Words> as_words(const VariantSet& s) {
  std::vector<Words> out;
  for (const auto& [k, _] : s) out.push_back(split_whitespace(k));
  return out;
}

inline Words cat(std::initializer_list<Words> parts) {
  Words w;
  for (const auto& p : parts) append(w, p);
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Numbers

inline VariantSet number_variant_set(std::int64_t n, const LocaleProfile& locale) {
  detail::require_grammar(locale);
  if (n < 0) throw ValidationError("number_variants needs a non-negative integer");
  if (n >= 1'000'000'000'000'000) throw ValidationError("number too large");
  VariantSet out;
  detail::add(out, long_form_words(n, locale, false), {"long"});
  detail::add(out, long_form_words(n, locale, true), {"long", "and"});
  std::string digits = std::to_string(n);
  // Chunked readings of telephone-shaped numbers are read back as telephone
  // numbers, so those numbers keep their long forms only.
  if (digits.size() > 1 && !telephone_shaped(digits))
    out = detail::merge(std::move(out), detail::digit_string_variants(digits, locale));
  if (n >= 1000 && n <= 9999 && n % 100 == 0 && (n / 100) % 10 != 0) {
    auto w = sub_hundred_words(n / 100, locale);
    w.push_back(detail::word_or_throw(locale, NumberRole::Hundred, 100));
    detail::add(out, w, {"hundreds"});
  }
  return out;
}

inline std::vector<SpokenVariant> to_variants(const VariantSet& s) {
  std::vector<SpokenVariant> out;
  out.reserve(s.size());
  for (const auto& [k, d] : s) out.push_back({split_whitespace(k), d});
  return out;
}

inline std::vector<SpokenVariant> number_variants(std::int64_t n, const LocaleProfile& locale) {
  return to_variants(number_variant_set(n, locale));
}

namespace detail {

inline VariantSet year_variant_set(std::int64_t y, const LocaleProfile& locale) {
  VariantSet out;
  add(out, year_words(y, locale), {"year"});
  add(out, long_form_words(y, locale, false), {"long"});
  add(out, long_form_words(y, locale, true), {"long", "and"});
  return out;
}

// Fraction digits after "point": read digit by digit.
inline VariantSet point_digit_set(std::string_view frac, const LocaleProfile& locale) {
  VariantSet out;
  add(out, digit_words(frac, locale, false), {"digits"});
  if (frac.find('0') != std::string_view::npos) add(out, digit_words(frac, locale, true), {"digits", "oh"});
  return out;
}

inline VariantSet decimal_variant_set(std::int64_t integer, std::string_view frac, const LocaleProfile& locale) {
  VariantSet out;
  auto point = locale.connective("point");
  auto fr = point_digit_set(frac, locale);
  for (const auto& [iw, id] : number_variant_set(integer, locale)) {
    for (const auto& [fw, fd] : fr) {
      auto d = id;
      d.insert(d.end(), fd.begin(), fd.end());
      out.emplace(iw + " " + point + " " + fw, d);
    }
  }
  if (integer == 0)
    for (const auto& [fw, fd] : fr) out.emplace(point + " " + fw, fd);
  return out;
}

// Plural of a spelled ordinal, e.g. third -> thirds.
inline std::string plural_ordinal(const std::string& w) { return w + "s"; }

inline VariantSet fraction_variant_set(const Fraction& f, const LocaleProfile& locale) {
  VariantSet bodies;
  auto nums = number_variant_set(f.numerator, locale);
  auto over = locale.connective("over");
  for (const auto& [nw, nd] : nums)
    for (const auto& [dw, dd] : number_variant_set(f.denominator, locale)) bodies.emplace(nw + " " + over + " " + dw, Words{"over"});
  std::vector<std::string> denoms;
  bool plural = f.numerator != 1;
  if (auto it = locale.fraction_words.find(f.denominator); it != locale.fraction_words.end())
    denoms.push_back(plural ? it->second.second : it->second.first);
  if (f.denominator >= 3 && f.denominator <= 10) {
    auto ord = word_or_throw(locale, NumberRole::Ordinal, f.denominator);
    denoms.push_back(plural ? plural_ordinal(ord) : ord);
  }
  for (const auto& den : denoms) {
    for (const auto& [nw, nd] : nums) bodies.emplace(nw + " " + den, Words{"denominator"});
    if (!plural) bodies.emplace(locale.connective("a") + " " + den, Words{"denominator", "article"});
  }
  if (!f.whole) return bodies;
  VariantSet out;
  auto and_w = locale.connective("and");
  for (const auto& [ww, wd] : number_variant_set(*f.whole, locale))
    for (const auto& [bw, bd] : bodies) out.emplace(ww + " " + and_w + " " + bw, bd);
  return out;
}

inline VariantSet money_variant_set(const Money& m, const LocaleProfile& locale) {
  const auto& cur = currency_or_throw(locale, m.currency);
  VariantSet out;
  std::int64_t minor = m.minor ? std::stoll(*m.minor) : 0;
  auto majors = number_variant_set(m.major, locale);
  VariantSet major_forms = majors;
  if (m.major == 1) major_forms.emplace(locale.connective("a"), Words{"article"});
  std::vector<std::string> cur_forms{cur.singular};
  if (m.major != 1 && cur.plural != cur.singular) cur_forms.push_back(cur.plural);
  bool has_minor_words = !cur.minor_plural.empty();
  auto and_w = locale.connective("and");

  if (minor == 0 || !has_minor_words) {
    for (const auto& [mw, md] : major_forms) {
      for (const auto& cf : cur_forms) {
        out.emplace(mw + " " + cf, md);
        if (has_minor_words) {
          out.emplace(mw + " " + cf + " " + digit_word('0', locale) + " " + cur.minor_plural,
                      Words{"zero-minor"});
        }
      }
    }
    return out;
  }
  const std::string& minor_unit = minor == 1 ? cur.minor_singular : cur.minor_plural;
  auto minors = merge(number_variant_set(minor, locale), digit_string_variants(*m.minor, locale));
  for (const auto& [mw, md] : major_forms) {
    for (const auto& cf : cur_forms) {
      for (const auto& [cw, cd] : minors) {
        out.emplace(mw + " " + cf + " " + and_w + " " + cw + " " + minor_unit, Words{"and"});
        out.emplace(mw + " " + cf + " " + cw + " " + minor_unit, Words{"minor"});
      }
    }
  }
  if (m.major == 0)
    for (const auto& [cw, cd] : minors) out.emplace(cw + " " + minor_unit, Words{"minor-only"});
  auto point = locale.connective("point");
  for (const auto& [mw, md] : majors)
    for (const auto& [fw, fd] : point_digit_set(*m.minor, locale))
      out.emplace(mw + " " + point + " " + fw + " " + cur.plural, Words{"point"});
  return out;
}

inline VariantSet measure_variant_set(const Measure& m, const LocaleProfile& locale) {
  const auto& unit = unit_or_throw(locale, m.unit);
  VariantSet nums = m.magnitude.fraction.empty()
                        ? number_variant_set(m.magnitude.integer, locale)
                        : decimal_variant_set(m.magnitude.integer, m.magnitude.fraction, locale);
  std::vector<std::string> forms{unit.singular, unit.plural};
  forms.insert(forms.end(), unit.alternates.begin(), unit.alternates.end());
  VariantSet out;
  for (const auto& [nw, nd] : nums)
    for (const auto& f : forms) out.emplace(nw + " " + f, nd);
  return out;
}

inline std::vector<Words> meridiem_suffixes(const Time& t, const LocaleProfile& locale) {
  std::vector<Words> out;
  bool pm = *t.meridiem == Meridiem::Pm;
  out.push_back(split_whitespace(locale.connective(pm ? "pm" : "am")));
  std::string part = !pm ? "morning" : (t.hour == 12 || t.hour <= 5) ? "afternoon" : "evening";
  out.push_back({locale.connective("in"), locale.connective("the"), locale.connective(part)});
  out.push_back({locale.connective(part)});
  return out;
}

inline VariantSet time_variant_set(const Time& t, const LocaleProfile& locale) {
  VariantSet out;
  add(out, verbalize(t, locale).canonical_verbal, {"canonical"});
  if (t.second) return out;
  bool twelve = t.meridiem && *t.meridiem != Meridiem::NoneExplicit;
  auto H = long_form_words(t.hour, locale);
  auto M = long_form_words(t.minute, locale);
  auto oh = word_or_throw(locale, NumberRole::ZeroAlt, 0);
  auto past = locale.connective("past");
  auto and_w = locale.connective("and");
  std::vector<std::pair<Words, std::string>> bodies;  // body, rule id
  if (t.minute == 0) {
    bodies.push_back({H, "hour"});
  } else {
    bodies.push_back({t.minute < 10 ? cat({H, {oh}, M}) : cat({H, M}), "hour-minute"});
  }
  if (t.hour <= 12 && t.hour >= 1 && t.minute >= 1 && t.minute <= 30)
    bodies.push_back({cat({M, {past}, H}), "minute-past-hour"});
  if (twelve && t.minute > 12) bodies.push_back({cat({H, {past}, M}), "hour-past-minute"});
  if (t.hour <= 12 && t.hour >= 1 && (t.minute == 15 || t.minute == 30)) {
    auto word = locale.connective(t.minute == 15 ? "quarter" : "half");
    bodies.push_back({cat({{word, past}, H}), "quarter-past"});
    bodies.push_back({cat({H, {and_w, word}}), "and-quarter"});
  }
  for (const auto& [b, rule] : bodies) {
    if (twelve) {
      for (const auto& suf : meridiem_suffixes(t, locale)) add(out, cat({b, suf}), {rule, "meridiem"});
      if (rule != "hour") add(out, b, {rule, "elided"});
    } else if (rule != "hour") {
      add(out, b, {rule});
    }
  }
  return out;
}

inline VariantSet date_variant_set(const Date& d, const LocaleProfile& locale) {
  VariantSet out;
  add(out, verbalize(d, locale).canonical_verbal, {"canonical"});
  std::vector<std::string> years{""};
  if (d.year) {
    years.clear();
    for (const auto& [yw, _] : year_variant_set(*d.year, locale)) years.push_back(yw);
  }
  auto with_year = [&](const std::string& body, const std::string& rule) {
    for (const auto& y : years) out.emplace(y.empty() ? body : body + " " + y, Words{rule});
  };
  if (!d.month) return out;
  const std::string& mon = locale.month_names.at(*d.month - 1);
  if (!d.day) {
    with_year(mon, "month-year");
    return out;
  }
  auto card = join(long_form_words(*d.day, locale));
  auto ord = join(ordinal_words(*d.day, locale));
  auto the = locale.connective("the"), of = locale.connective("of");
  with_year(card + " " + mon, "day-month");
  with_year(ord + " " + mon, "ordinal-month");
  with_year(the + " " + ord + " " + of + " " + mon, "the-ordinal-of-month");
  with_year(mon + " " + ord, "month-ordinal");
  with_year(mon + " " + the + " " + ord, "month-the-ordinal");
  return out;
}

inline VariantSet telephone_variant_set(const Telephone& t, const LocaleProfile& locale) {
  // Per group chunkings, chained with adjacency checks across groups.
  std::vector<std::vector<std::vector<std::string>>> per_group;
  for (const auto& g : t.groups) per_group.push_back(chunkings(g));
  VariantSet out;
  bool intl = t.groups.size() == 4;
  for (int oh = 0; oh <= 1; ++oh) {
    for (int wa = 0; wa <= 1; ++wa) {
      // Odometer over the per-group chunkings.
      std::vector<std::size_t> idx(per_group.size(), 0);
      for (;;) {
        Words w;
        if (intl) w.push_back(locale.connective("plus"));
        std::optional<ChunkReading> prev;
        bool ok = true;
        for (std::size_t g = 0; g < per_group.size() && ok; ++g)
          ok = read_chunk_sequence(per_group[g][idx[g]], oh, wa, locale, prev, w);
        if (ok) add(out, w, {"groups"});
        std::size_t g = per_group.size();
        while (g > 0) {
          --g;
          if (++idx[g] < per_group[g].size()) break;
          idx[g] = 0;
          if (g == 0) goto done;
        }
        if (per_group.empty()) break;
      }
    done:;
    }
  }
  return out;
}

}  // namespace detail

// Full variant set for a value, before capping.
inline VariantSet full_variant_set(const CanonicalValue& value, const LocaleProfile& locale) {
  detail::require_grammar(locale);
  validate_value(value, std::holds_alternative<Money>(value)
                            ? locale.minor_digits_for(std::get<Money>(value).currency)
                            : 2);
  VariantSet out = std::visit(
      [&](const auto& x) -> VariantSet {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cardinal>) {
          if (x.value >= 0) return number_variant_set(x.value, locale);
          VariantSet neg;
          for (const auto& [w, d] : number_variant_set(-x.value, locale))
            neg.emplace(locale.connective("minus") + " " + w, d);
          return neg;
        } else if constexpr (std::is_same_v<T, Ordinal>) {
          VariantSet s;
          detail::add(s, ordinal_words(x.value, locale, false), {"long"});
          detail::add(s, ordinal_words(x.value, locale, true), {"long", "and"});
          return s;
        } else if constexpr (std::is_same_v<T, Decimal>) {
          return detail::decimal_variant_set(x.integer, x.fraction, locale);
        } else if constexpr (std::is_same_v<T, Fraction>) {
          return detail::fraction_variant_set(x, locale);
        } else if constexpr (std::is_same_v<T, Money>) {
          return detail::money_variant_set(x, locale);
        } else if constexpr (std::is_same_v<T, Time>) {
          return detail::time_variant_set(x, locale);
        } else if constexpr (std::is_same_v<T, Date>) {
          return detail::date_variant_set(x, locale);
        } else if constexpr (std::is_same_v<T, Measure>) {
          return detail::measure_variant_set(x, locale);
        } else if constexpr (std::is_same_v<T, Telephone>) {
          return detail::telephone_variant_set(x, locale);
        } else {
          return detail::digit_string_variants(x.digits, locale);
        }
      },
      value);
  detail::add(out, verbalize(value, locale).canonical_verbal, {"canonical"});
  return out;
}

// Variants for one value, capped at config.max_variants_per_entity with the
// canonical verbal form always kept.
inline std::vector<SpokenVariant> entity_variants(const CanonicalValue& value, const LocaleProfile& locale,
                                                  const AugmentationConfig& config) {
  auto full = full_variant_set(value, locale);
  auto canonical = join(verbalize(value, locale).canonical_verbal);
  return to_variants(cap_variants(full, config.max_variants_per_entity, canonical, config.sampling_seed));
}

// ---------------------------------------------------------------------------
// Rewriting

// Builds spoken/written pairs for one sentence. `sentence_index` feeds the
// seed so parallel workers reproduce the sequential output.
inline std::vector<SpokenWrittenPair> rewrite(const std::string& sentence, const SegmentationResult& seg,
                                              const LocaleProfile& locale, const AugmentationConfig& config,
                                              std::uint64_t sentence_index = 0,
                                              const std::string& id_prefix = "") {
  std::vector<SpokenWrittenPair> out;
  if (seg.spans.empty()) return out;
  std::uint64_t seed = mix_seed(config.sampling_seed, sentence_index);
  std::vector<std::vector<SpokenVariant>> variants;
  for (std::size_t i = 0; i < seg.spans.size(); ++i) {
    AugmentationConfig c = config;
    c.sampling_seed = mix_seed(seed, i);
    variants.push_back(entity_variants(seg.spans[i].value, locale, c));
  }
  // Plain text between spans, tokenized once.
  std::vector<Words> gaps;
  std::size_t pos = 0;
  for (const auto& s : seg.spans) {
    gaps.push_back(token_texts(tokenize(std::string_view(sentence).substr(pos, s.start - pos))));
    pos = s.end;
  }
  gaps.push_back(token_texts(tokenize(std::string_view(sentence).substr(pos))));

  std::vector<std::size_t> combos;
  if (variants.size() == 1) {
    combos.resize(variants[0].size());
    std::iota(combos.begin(), combos.end(), std::size_t{0});
  } else {
    std::size_t total = 1;
    bool overflow = false;
    for (const auto& v : variants) {
      if (total > kUnlimited / v.size()) overflow = true;
      total = overflow ? kUnlimited : total * v.size();
    }
    combos = sample_indices(total, config.max_pairs_per_sentence, mix_seed(seed, 0xC0B0ULL));
  }
  for (std::size_t k = 0; k < combos.size(); ++k) {
    // Mixed radix decode, first span most significant.
    std::vector<std::size_t> pick(variants.size());
    std::size_t rem = combos[k];
    for (std::size_t i = variants.size(); i-- > 0;) {
      pick[i] = rem % variants[i].size();
      rem /= variants[i].size();
    }
    SpokenWrittenPair p;
    p.id = id_prefix.empty() ? std::to_string(k) : id_prefix + "-" + std::to_string(k);
    p.written = sentence;
    p.language = locale.language;
    p.provenance = Provenance::Augmented;
    for (std::size_t i = 0; i < variants.size(); ++i) {
      detail::append(p.spoken, gaps[i]);
      Alignment al;
      al.spoken_begin = p.spoken.size();
      detail::append(p.spoken, variants[i][pick[i]].tokens);
      al.spoken_end = p.spoken.size();
      al.span = seg.spans[i];
      p.alignments.push_back(std::move(al));
    }
    detail::append(p.spoken, gaps.back());
    out.push_back(std::move(p));
  }
  return out;
}

// Mean number of distinct spoken variants per distinct written entity.
inline Rational diversity_factor(const std::vector<SpokenWrittenPair>& pairs) {
  std::map<std::string, std::set<std::string>> seen;
  for (const auto& p : pairs) {
    for (const auto& al : p.alignments) {
      std::string key = std::string(class_name(al.span.cls)) + "\t" + al.span.surface;
      Words w(p.spoken.begin() + static_cast<std::ptrdiff_t>(al.spoken_begin),
              p.spoken.begin() + static_cast<std::ptrdiff_t>(al.spoken_end));
      seen[key].insert(join(w));
    }
  }
  if (seen.empty()) throw EmptyInputError("diversity_factor needs at least one aligned pair");
  std::int64_t total = 0;
  for (const auto& [_, s] : seen) total += static_cast<std::int64_t>(s.size());
  return Rational(total, static_cast<std::int64_t>(seen.size()));
}

}  // namespace itnaug
