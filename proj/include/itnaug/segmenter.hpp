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

// Written-form entity detection. Each class is matched by the locale's
// pattern table, in a fixed claiming order: once bytes are claimed by an
// earlier class no later class may use them.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "itnaug/domain.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

struct SegmentationResult {
  std::string sentence;
  std::vector<EntitySpan> spans;  // sorted by start, non-overlapping
};

namespace detail {

inline std::uint32_t decode_at(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) return c;
  int len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
  std::uint32_t cp = len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
  for (int k = 1; k < len && i + k < s.size(); ++k)
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  return cp;
}

inline bool is_word_cp(std::uint32_t cp) {
  if (cp < 0x80) return is_ascii_alnum(static_cast<char>(cp));
  // Latin-1 letters, Latin Extended, Greek, Cyrillic.
  return (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) || (cp >= 0x370 && cp <= 0x52F);
}

inline bool word_char_before(std::string_view s, std::size_t pos) {
  if (pos == 0) return false;
  std::size_t i = pos - 1;
  while (i > 0 && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) --i;
  return is_word_cp(decode_at(s, i));
}

inline bool word_char_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return false;
  return is_word_cp(decode_at(s, pos));
}

// Parses a digit string with group separators; nullopt past 18 digits.
inline std::optional<std::int64_t> digits_value(std::string_view digits) {
  if (digits.empty() || digits.size() > 18) return std::nullopt;
  std::int64_t v = 0;
  for (char c : digits) v = v * 10 + (c - '0');
  return v;
}

inline std::string strip_to_digits(std::string_view s) {
  std::string out;
  for (char c : s)
    if (is_ascii_digit(c)) out += c;
  return out;
}

// Shifts `fraction` digits into the integer part by `exponent` places.
inline std::pair<std::string, std::string> shift_magnitude(std::string integer, std::string fraction,
                                                           int exponent) {
  for (int k = 0; k < exponent; ++k) {
    if (!fraction.empty()) {
      integer += fraction.front();
      fraction.erase(fraction.begin());
    } else {
      integer += '0';
    }
  }
  auto nz = integer.find_first_not_of('0');
  integer = nz == std::string::npos ? "0" : integer.substr(nz);
  return {integer, fraction};
}

struct Captures {
  const boost::smatch* m = nullptr;
  const PatternSpec* spec = nullptr;

  std::optional<std::string> get(const std::string& name) const {
    auto it = spec->bindings.find(name);
    if (it == spec->bindings.end()) return std::nullopt;
    const auto& sub = (*m)[it->second];
    if (!sub.matched || sub.length() == 0) return std::nullopt;
    return sub.str();
  }
};

struct BuiltValue {
  CanonicalValue value;
  bool ambiguous = false;
};

inline std::optional<BuiltValue> build_value(EntityClass cls, const Captures& cap,
                                             const LocaleProfile& locale) {
  auto int_part = [&](const char* name) -> std::optional<std::string> {
    auto s = cap.get(name);
    if (!s) return std::nullopt;
    return strip_to_digits(*s);
  };
  auto exponent = [&]() -> std::optional<int> {
    auto w = cap.get("magnitude");
    if (!w) return 0;
    return locale.magnitude(*w);
  };
  try {
    switch (cls) {
      case EntityClass::Cardinal: {
        auto digits = int_part("integer");
        auto exp = exponent();
        if (!digits || !exp) return std::nullopt;
        auto [i, f] = shift_magnitude(*digits, "", *exp);
        auto v = digits_value(i);
        if (!v) return std::nullopt;
        if (cap.get("sign")) *v = -*v;
        return BuiltValue{Cardinal{*v}};
      }
      case EntityClass::Ordinal: {
        auto digits = int_part("integer");
        if (!digits) return std::nullopt;
        auto v = digits_value(*digits);
        if (!v || *v < 1) return std::nullopt;
        return BuiltValue{Ordinal{*v}};
      }
      case EntityClass::Decimal: {
        auto digits = int_part("integer").value_or("0");
        auto frac = cap.get("fraction");
        auto exp = exponent();
        if (!frac || !exp) return std::nullopt;
        auto [i, f] = shift_magnitude(digits, *frac, *exp);
        auto v = digits_value(i);
        if (!v) return std::nullopt;
        if (f.empty()) return BuiltValue{Cardinal{*v}};
        return BuiltValue{Decimal{*v, f}};
      }
      case EntityClass::Fraction: {
        auto n = int_part("numerator");
        auto d = int_part("denominator");
        if (!n || !d) return std::nullopt;
        Fraction fr{*digits_value(*n), *digits_value(*d), std::nullopt};
        if (auto w = int_part("whole")) fr.whole = digits_value(*w);
        if (fr.denominator <= 0) return std::nullopt;
        return BuiltValue{fr};
      }
      case EntityClass::Money: {
        auto cur = cap.get("currency");
        auto digits = int_part("integer");
        auto exp = exponent();
        if (!cur || !digits || !exp) return std::nullopt;
        auto code = locale.currency_code(*cur);
        if (!code) return std::nullopt;
        int minor_digits = locale.minor_digits_for(*code);
        auto [i, f] = shift_magnitude(*digits, cap.get("fraction").value_or(""), *exp);
        auto v = digits_value(i);
        if (!v) return std::nullopt;
        Money m{*v, std::nullopt, *code};
        if (!f.empty()) {
          if (static_cast<int>(f.size()) > minor_digits) return std::nullopt;
          f.append(static_cast<std::size_t>(minor_digits) - f.size(), '0');
          m.minor = f;
        }
        return BuiltValue{m};
      }
      case EntityClass::Time: {
        auto h = int_part("hour");
        if (!h) return std::nullopt;
        Time t;
        t.hour = static_cast<int>(*digits_value(*h));
        if (auto mi = int_part("minute")) t.minute = static_cast<int>(*digits_value(*mi));
        if (auto se = int_part("second")) t.second = static_cast<int>(*digits_value(*se));
        if (auto me = cap.get("meridiem")) {
          char c = static_cast<char>(std::tolower(static_cast<unsigned char>(me->front())));
          t.meridiem = c == 'p' ? Meridiem::Pm : Meridiem::Am;
        } else {
          t.meridiem = Meridiem::NoneExplicit;
        }
        validate_value(t);
        return BuiltValue{t};
      }
      case EntityClass::Date: {
        Date d;
        bool ambiguous = false;
        if (auto mn = cap.get("month_name")) {
          d.month = locale.month_index(*mn);
          if (!d.month) return std::nullopt;
        }
        if (auto m = int_part("month")) d.month = static_cast<int>(*digits_value(*m));
        if (auto dd = int_part("day")) d.day = static_cast<int>(*digits_value(*dd));
        if (auto y = int_part("year")) d.year = *digits_value(*y);
        auto first = int_part("first");
        auto second = int_part("second");
        if (first && second) {
          int a = static_cast<int>(*digits_value(*first));
          int b = static_cast<int>(*digits_value(*second));
          auto valid = [](int day, int month) {
            return day >= 1 && day <= 31 && month >= 1 && month <= 12;
          };
          bool month_first = locale.date_field_order == FieldOrder::MDY;
          int pref_day = month_first ? b : a, pref_month = month_first ? a : b;
          int alt_day = month_first ? a : b, alt_month = month_first ? b : a;
          if (valid(pref_day, pref_month)) {
            d.day = pref_day;
            d.month = pref_month;
            ambiguous = a != b && valid(alt_day, alt_month);
          } else if (valid(alt_day, alt_month)) {
            d.day = alt_day;
            d.month = alt_month;
          } else {
            return std::nullopt;
          }
        }
        validate_value(d);
        return BuiltValue{d, ambiguous};
      }
      case EntityClass::Measure: {
        auto digits = int_part("integer");
        auto unit = cap.get("unit");
        auto exp = exponent();
        if (!digits || !unit || !exp) return std::nullopt;
        auto id = locale.unit_id(*unit);
        if (!id) return std::nullopt;
        auto [i, f] = shift_magnitude(*digits, cap.get("fraction").value_or(""), *exp);
        auto v = digits_value(i);
        if (!v) return std::nullopt;
        return BuiltValue{Measure{Decimal{*v, f}, *id}};
      }
      case EntityClass::Telephone: {
        Telephone t;
        for (int g : cap.spec->groups) {
          const auto& sub = (*cap.m)[g];
          if (!sub.matched) return std::nullopt;
          t.groups.push_back(sub.str());
        }
        validate_value(t);
        return BuiltValue{t};
      }
      case EntityClass::DigitSequence: {
        auto s = cap.get("digits");
        if (!s) return std::nullopt;
        auto digits = strip_to_digits(*s);
        if (digits.size() < 2) return std::nullopt;
        return BuiltValue{DigitSequence{digits}};
      }
    }
  } catch (const ValidationError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

struct Candidate {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t pattern = 0;
  BuiltValue built;
};

inline void collect_candidates(EntityClass cls, const std::string& masked, std::string_view original,
                               const LocaleProfile& locale, std::vector<Candidate>& out) {
  const auto& patterns = locale.patterns_for(cls);
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const auto& cp = patterns[pi];
    std::size_t pos = 0;
    while (pos <= masked.size()) {
      boost::smatch m;
      auto flags = boost::match_default;
      if (pos > 0) flags |= boost::match_prev_avail;
      bool found = false;
      try {
        found = boost::regex_search(masked.cbegin() + static_cast<std::ptrdiff_t>(pos), masked.cend(), m,
                                    cp.re, flags);
      } catch (const std::runtime_error&) {
        found = false;  // pathological backtracking
      }
      if (!found) break;
      std::size_t s = static_cast<std::size_t>(m[0].first - masked.cbegin());
      std::size_t e = static_cast<std::size_t>(m[0].second - masked.cbegin());
      if (e == s) {
        pos = s + 1;
        continue;
      }
      bool ok = true;
      if (cp.spec.boundary &&
          (word_char_before(original, s) || word_char_at(original, e)))
        ok = false;
      if (ok) {
        Captures cap{&m, &cp.spec};
        if (auto built = build_value(cls, cap, locale); built && class_of(built->value) == cls) {
          out.push_back({s, e, pi, std::move(*built)});
          pos = e;
          continue;
        } else if (built && cls == EntityClass::Decimal) {
          // Magnitude expansion can turn a decimal into a whole number.
          out.push_back({s, e, pi, std::move(*built)});
          pos = e;
          continue;
        }
      }
      pos = s + 1;
    }
  }
}

}  // namespace detail

// Detects entity spans in a written sentence.
inline SegmentationResult segment(std::string_view sentence, const LocaleProfile& locale,
                                  const std::set<EntityClass>& enabled = {kAllClasses.begin(),
                                                                          kAllClasses.end()}) {
  SegmentationResult result;
  result.sentence = std::string(sentence);
  if (find_invalid_utf8(sentence)) return result;
  std::string masked(sentence);
  std::vector<bool> claimed(sentence.size(), false);
  for (auto cls : kPrecedence) {
    if (!enabled.count(cls)) continue;
    std::vector<detail::Candidate> cands;
    detail::collect_candidates(cls, masked, sentence, locale, cands);
    // Leftmost, then longest, then pattern order.
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      if (a.start != b.start) return a.start < b.start;
      if (a.end - a.start != b.end - b.start) return a.end - a.start > b.end - b.start;
      return a.pattern < b.pattern;
    });
    for (auto& c : cands) {
      bool free = true;
      for (std::size_t i = c.start; i < c.end; ++i) {
        if (claimed[i]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (std::size_t i = c.start; i < c.end; ++i) {
        claimed[i] = true;
        masked[i] = '\x1F';
      }
      EntitySpan span;
      span.cls = class_of(c.built.value);
      span.start = c.start;
      span.end = c.end;
      span.surface = std::string(sentence.substr(c.start, c.end - c.start));
      span.value = std::move(c.built.value);
      span.ambiguous = c.built.ambiguous;
      result.spans.push_back(std::move(span));
    }
  }
  std::sort(result.spans.begin(), result.spans.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  return result;
}

// True iff the sentence holds at least one entity span.
inline bool pick(std::string_view sentence, const LocaleProfile& locale,
                 const std::set<EntityClass>& enabled = {kAllClasses.begin(), kAllClasses.end()}) {
  if (!contains_digit(sentence)) return false;
  return !segment(sentence, locale, enabled).spans.empty();
}

// Re-reads a span surface against its class patterns. Returns the built
// value and the captures of the first pattern that matches the whole surface.
struct SurfaceMatch {
  CanonicalValue value;
  std::map<std::string, std::string> captures;
  bool ambiguous = false;
};

inline std::optional<SurfaceMatch> match_surface(EntityClass cls, const std::string& surface,
                                                 const LocaleProfile& locale) {
  // A decimal surface may denote a whole number after magnitude expansion.
  std::vector<EntityClass> classes{cls};
  if (cls == EntityClass::Cardinal) classes.push_back(EntityClass::Decimal);
  for (auto c : classes) {
    for (const auto& cp : locale.patterns_for(c)) {
      boost::smatch m;
      bool ok = false;
      try {
        ok = boost::regex_match(surface.cbegin(), surface.cend(), m, cp.re);
      } catch (const std::runtime_error&) {
        ok = false;
      }
      if (!ok) continue;
      detail::Captures cap{&m, &cp.spec};
      auto built = detail::build_value(c, cap, locale);
      if (!built || class_of(built->value) != cls) continue;
      SurfaceMatch out{built->value, {}, built->ambiguous};
      for (const auto& [name, idx] : cp.spec.bindings) {
        if (m[idx].matched) out.captures[name] = m[idx].str();
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace itnaug
