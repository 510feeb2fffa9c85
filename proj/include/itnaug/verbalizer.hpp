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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/segmenter.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

using Words = std::vector<std::string>;

struct VerbalizedEntity {
  CanonicalValue value;
  Words canonical_verbal;
};

namespace detail {

inline void require_grammar(const LocaleProfile& locale) {
  if (!locale.has_verbal_grammar)
    throw UnsupportedLocaleError("no verbalization grammar for locale '" + locale.language + "'");
}

inline const std::string& word_or_throw(const LocaleProfile& locale, NumberRole role, std::int64_t v) {
  auto it = locale.reverse_words.find({role, v});
  if (it == locale.reverse_words.end())
    throw UnsupportedLocaleError("locale '" + locale.language + "' lacks a number word for " +
                                 std::to_string(v));
  return it->second;
}

inline void append(Words& out, const Words& more) { out.insert(out.end(), more.begin(), more.end()); }

inline Words split_words(const std::string& s) { return split_whitespace(s); }

}  // namespace detail

// 1..99.
inline Words sub_hundred_words(std::int64_t n, const LocaleProfile& locale) {
  using detail::word_or_throw;
  if (n < 10) return {word_or_throw(locale, NumberRole::Unit, n)};
  if (n < 20) return {word_or_throw(locale, NumberRole::Teen, n)};
  Words w{word_or_throw(locale, NumberRole::Tens, n - n % 10)};
  if (n % 10) w.push_back(word_or_throw(locale, NumberRole::Unit, n % 10));
  return w;
}

// 1..999; `with_and` puts the connector between hundreds and the remainder.
inline Words sub_thousand_words(std::int64_t n, const LocaleProfile& locale, bool with_and) {
  Words w;
  std::int64_t h = n / 100, r = n % 100;
  if (h) {
    w.push_back(detail::word_or_throw(locale, NumberRole::Unit, h));
    w.push_back(detail::word_or_throw(locale, NumberRole::Hundred, 100));
    if (r && with_and) w.push_back(locale.connective("and"));
  }
  if (r) detail::append(w, sub_hundred_words(r, locale));
  return w;
}

// Full long form, e.g. 1234 -> one thousand two hundred thirty four.
inline Words long_form_words(std::int64_t n, const LocaleProfile& locale, bool with_and = false) {
  if (n == 0) return {detail::word_or_throw(locale, NumberRole::Unit, 0)};
  if (n < 0) {
    Words w{locale.connective("minus")};
    detail::append(w, long_form_words(-n, locale, with_and));
    return w;
  }
  Words w;
  std::int64_t scale = 1'000'000'000'000;
  std::int64_t rest = n;
  if (rest >= scale * 1000) throw ValidationError("number too large to verbalize");
  for (; scale >= 1000; scale /= 1000) {
    std::int64_t g = rest / scale;
    if (!g) continue;
    detail::append(w, sub_thousand_words(g, locale, with_and));
    w.push_back(detail::word_or_throw(locale, NumberRole::Scale, scale));
    rest %= scale;
  }
  if (rest) {
    if (with_and && n >= 1000 && rest < 100) w.push_back(locale.connective("and"));
    detail::append(w, sub_thousand_words(rest, locale, with_and));
  }
  return w;
}

// Replaces the last word with its ordinal counterpart.
inline Words ordinalize(Words w, const LocaleProfile& locale) {
  auto nw = locale.number_word(w.back());
  if (!nw) throw ValidationError("cannot ordinalize '" + w.back() + "'");
  w.back() = detail::word_or_throw(locale, NumberRole::Ordinal, nw->value);
  return w;
}

inline Words ordinal_words(std::int64_t n, const LocaleProfile& locale, bool with_and = false) {
  return ordinalize(long_form_words(n, locale, with_and), locale);
}

inline std::string digit_word(char d, const LocaleProfile& locale, bool oh = false) {
  if (d == '0' && oh) return detail::word_or_throw(locale, NumberRole::ZeroAlt, 0);
  return detail::word_or_throw(locale, NumberRole::Unit, d - '0');
}

inline Words digit_words(std::string_view digits, const LocaleProfile& locale, bool oh = false) {
  Words w;
  for (char c : digits) w.push_back(digit_word(c, locale, oh));
  return w;
}

// Pairwise year reading: 2022 twenty twenty two, 2005 twenty oh five,
// 1900 nineteen hundred. Round thousands fall back to the long form.
inline Words year_words(std::int64_t y, const LocaleProfile& locale) {
  if (y < 1000 || y > 9999) return long_form_words(y, locale);
  std::int64_t hi = y / 100, lo = y % 100;
  if (hi % 10 == 0 && lo < 10) return long_form_words(y, locale);
  Words w = sub_hundred_words(hi, locale);
  if (lo == 0) {
    w.push_back(detail::word_or_throw(locale, NumberRole::Hundred, 100));
  } else if (lo < 10) {
    w.push_back(detail::word_or_throw(locale, NumberRole::ZeroAlt, 0));
    detail::append(w, sub_hundred_words(lo, locale));
  } else {
    detail::append(w, sub_hundred_words(lo, locale));
  }
  return w;
}

inline std::string unit_form(const UnitDef& u, bool plural) { return plural ? u.plural : u.singular; }

inline const UnitDef& unit_or_throw(const LocaleProfile& locale, const std::string& id) {
  auto it = locale.units.find(id);
  if (it == locale.units.end()) throw ValidationError("unknown unit '" + id + "'");
  return it->second;
}

inline const CurrencyForms& currency_or_throw(const LocaleProfile& locale, const std::string& code) {
  const auto* c = locale.currency(code);
  if (!c) throw ValidationError("unknown currency '" + code + "'");
  return *c;
}

// Re-reads a span against its class patterns.
inline CanonicalValue canonicalize(const EntitySpan& span, const LocaleProfile& locale) {
  auto m = match_surface(span.cls, span.surface, locale);
  if (!m) throw MalformedSpanError("span '" + span.surface + "' no longer matches a " +
                                   std::string(class_name(span.cls)) + " pattern");
  return m->value;
}

inline VerbalizedEntity verbalize(const CanonicalValue& value, const LocaleProfile& locale) {
  detail::require_grammar(locale);
  validate_value(value, std::holds_alternative<Money>(value)
                            ? locale.minor_digits_for(std::get<Money>(value).currency)
                            : 2);
  Words w;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cardinal>) {
          w = long_form_words(x.value, locale);
        } else if constexpr (std::is_same_v<T, Ordinal>) {
          w = ordinal_words(x.value, locale);
        } else if constexpr (std::is_same_v<T, Decimal>) {
          w = long_form_words(x.integer, locale);
          w.push_back(locale.connective("point"));
          detail::append(w, digit_words(x.fraction, locale));
        } else if constexpr (std::is_same_v<T, Fraction>) {
          if (x.whole) {
            w = long_form_words(*x.whole, locale);
            w.push_back(locale.connective("and"));
          }
          detail::append(w, long_form_words(x.numerator, locale));
          w.push_back(locale.connective("over"));
          detail::append(w, long_form_words(x.denominator, locale));
        } else if constexpr (std::is_same_v<T, Money>) {
          const auto& cur = currency_or_throw(locale, x.currency);
          w = long_form_words(x.major, locale);
          w.push_back(x.major == 1 ? cur.singular : cur.plural);
          if (x.minor && !cur.minor_plural.empty()) {
            std::int64_t minor = std::stoll(*x.minor);
            if (minor > 0) {
              w.push_back(locale.connective("and"));
              detail::append(w, long_form_words(minor, locale));
              w.push_back(minor == 1 ? cur.minor_singular : cur.minor_plural);
            }
          }
        } else if constexpr (std::is_same_v<T, Time>) {
          bool twelve = x.meridiem && *x.meridiem != Meridiem::NoneExplicit;
          if (!twelve || x.second) {
            w = long_form_words(x.hour, locale);
            w.push_back(locale.connective("hours"));
            if (x.minute || x.second) {
              detail::append(w, long_form_words(x.minute, locale));
              w.push_back(locale.connective("minutes"));
            }
            if (x.second) {
              detail::append(w, long_form_words(*x.second, locale));
              w.push_back(locale.connective("seconds"));
            }
          } else {
            w = long_form_words(x.hour, locale);
            if (x.minute) {
              if (x.minute < 10) w.push_back(detail::word_or_throw(locale, NumberRole::ZeroAlt, 0));
              detail::append(w, long_form_words(x.minute, locale));
            }
          }
          if (twelve) {
            detail::append(w, detail::split_words(
                                  locale.connective(*x.meridiem == Meridiem::Am ? "am" : "pm")));
          }
        } else if constexpr (std::is_same_v<T, Date>) {
          Words day, month, year;
          if (x.day) day = long_form_words(*x.day, locale);
          if (x.month) month = detail::split_words(locale.month_names.at(*x.month - 1));
          if (x.year) year = year_words(*x.year, locale);
          if (locale.verbal_date_order == FieldOrder::MDY && x.day) {
            w = month;
            detail::append(w, ordinalize(day, locale));
          } else if (locale.verbal_date_order == FieldOrder::YMD) {
            w = year;
            detail::append(w, month);
            detail::append(w, day);
            year.clear();
          } else {
            w = day;
            detail::append(w, month);
          }
          detail::append(w, year);
        } else if constexpr (std::is_same_v<T, Measure>) {
          const auto& unit = unit_or_throw(locale, x.unit);
          w = long_form_words(x.magnitude.integer, locale);
          if (!x.magnitude.fraction.empty()) {
            w.push_back(locale.connective("point"));
            detail::append(w, digit_words(x.magnitude.fraction, locale));
          }
          bool plural = !(x.magnitude.integer == 1 && x.magnitude.fraction.empty());
          detail::append(w, detail::split_words(unit_form(unit, plural)));
        } else if constexpr (std::is_same_v<T, Telephone>) {
          for (std::size_t i = 0; i < x.groups.size(); ++i) {
            if (i == 0 && x.groups.size() == 4) w.push_back(locale.connective("plus"));
            detail::append(w, digit_words(x.groups[i], locale));
          }
        } else if constexpr (std::is_same_v<T, DigitSequence>) {
          w = digit_words(x.digits, locale);
        }
      },
      value);
  return {value, w};
}

}  // namespace itnaug
