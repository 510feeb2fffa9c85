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

#include <array>
#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"

namespace itnaug {

using json = nlohmann::json;
using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class MalformedSpanError : public Error {
 public:
  using Error::Error;
};

class UnsupportedLocaleError : public Error {
 public:
  using Error::Error;
};

class MisalignedStreamError : public Error {
 public:
  explicit MisalignedStreamError(std::string id)
      : Error("misaligned streams at id '" + id + "'"), id_(std::move(id)) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Entity taxonomy

// Order is the variant index of CanonicalValue.
enum class EntityClass {
  Cardinal,
  Ordinal,
  Decimal,
  Fraction,
  Money,
  Time,
  Date,
  Measure,
  Telephone,
  DigitSequence,
};

inline constexpr std::array<EntityClass, 10> kAllClasses = {
    EntityClass::Cardinal, EntityClass::Ordinal,   EntityClass::Decimal,
    EntityClass::Fraction, EntityClass::Money,     EntityClass::Time,
    EntityClass::Date,     EntityClass::Measure,   EntityClass::Telephone,
    EntityClass::DigitSequence};

inline std::string_view class_name(EntityClass c) {
  switch (c) {
    case EntityClass::Cardinal: return "cardinal";
    case EntityClass::Ordinal: return "ordinal";
    case EntityClass::Decimal: return "decimal";
    case EntityClass::Fraction: return "fraction";
    case EntityClass::Money: return "money";
    case EntityClass::Time: return "time";
    case EntityClass::Date: return "date";
    case EntityClass::Measure: return "measure";
    case EntityClass::Telephone: return "telephone";
    case EntityClass::DigitSequence: return "digit";
  }
  return "?";
}

inline EntityClass parse_class(std::string_view name) {
  for (auto c : kAllClasses) {
    if (class_name(c) == name) return c;
  }
  throw ParseError("unknown entity class '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Canonical values

struct Cardinal {
  std::int64_t value = 0;
  bool operator==(const Cardinal&) const = default;
};

struct Ordinal {
  std::int64_t value = 1;
  bool operator==(const Ordinal&) const = default;
};

// An empty fraction string only occurs inside Measure, where it marks an
// integral magnitude.
struct Decimal {
  std::int64_t integer = 0;
  std::string fraction;
  bool operator==(const Decimal&) const = default;
};

struct Fraction {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  std::optional<std::int64_t> whole;
  bool operator==(const Fraction&) const = default;
};

struct Money {
  std::int64_t major = 0;
  std::optional<std::string> minor;
  std::string currency = "USD";
  bool operator==(const Money&) const = default;
};

enum class Meridiem { Am, Pm, NoneExplicit };

// An absent meridiem means the spoken form elided it.
struct Time {
  int hour = 0;
  int minute = 0;
  std::optional<int> second;
  std::optional<Meridiem> meridiem;
  bool operator==(const Time&) const = default;
};

struct Date {
  std::optional<int> day;
  std::optional<int> month;
  std::optional<std::int64_t> year;
  bool operator==(const Date&) const = default;
};

struct Measure {
  Decimal magnitude;
  std::string unit;
  bool operator==(const Measure&) const = default;
};

struct Telephone {
  std::vector<std::string> groups;
  bool operator==(const Telephone&) const = default;
};

struct DigitSequence {
  std::string digits;
  bool operator==(const DigitSequence&) const = default;
};

using CanonicalValue = std::variant<Cardinal, Ordinal, Decimal, Fraction, Money,
                                    Time, Date, Measure, Telephone, DigitSequence>;

inline EntityClass class_of(const CanonicalValue& v) {
  return static_cast<EntityClass>(v.index());
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Checks the per-class invariants. `minor_digits` is the locale minor-unit
// digit count for Money.
inline void validate_value(const CanonicalValue& v, int minor_digits = 2) {
  auto fail = [](const std::string& what) { throw ValidationError(what); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Ordinal>) {
          if (x.value < 1) fail("ordinal must be positive");
        } else if constexpr (std::is_same_v<T, Decimal>) {
          if (x.integer < 0) fail("decimal integer part must be non-negative");
          if (!all_digits(x.fraction)) fail("decimal fraction must be digits");
        } else if constexpr (std::is_same_v<T, Fraction>) {
          if (x.denominator <= 0) fail("fraction denominator must be positive");
          if (x.numerator < 0) fail("fraction numerator must be non-negative");
        } else if constexpr (std::is_same_v<T, Money>) {
          if (x.major < 0) fail("money amount must be non-negative");
          if (x.minor && (!all_digits(*x.minor) ||
                          static_cast<int>(x.minor->size()) != minor_digits))
            fail("money minor part must have exactly " + std::to_string(minor_digits) +
                 " digits");
          if (x.currency.size() != 3) fail("currency must be an ISO-4217 code");
        } else if constexpr (std::is_same_v<T, Time>) {
          if (x.minute < 0 || x.minute > 59) fail("minute out of range");
          if (x.second && (*x.second < 0 || *x.second > 59)) fail("second out of range");
          bool twelve = x.meridiem && *x.meridiem != Meridiem::NoneExplicit;
          if (twelve && (x.hour < 1 || x.hour > 12)) fail("12h hour out of range");
          if (!twelve && (x.hour < 0 || x.hour > 23)) fail("hour out of range");
        } else if constexpr (std::is_same_v<T, Date>) {
          if (!x.day && !x.month && !x.year) fail("date needs at least one field");
          if (x.day && (*x.day < 1 || *x.day > 31)) fail("day out of range");
          if (x.month && (*x.month < 1 || *x.month > 12)) fail("month out of range");
        } else if constexpr (std::is_same_v<T, Measure>) {
          if (x.magnitude.integer < 0) fail("measure magnitude must be non-negative");
          if (!x.magnitude.fraction.empty() && !all_digits(x.magnitude.fraction))
            fail("measure fraction must be digits");
          if (x.unit.empty()) fail("measure needs a unit");
        } else if constexpr (std::is_same_v<T, Telephone>) {
          if (x.groups.empty()) fail("telephone needs digit groups");
          for (const auto& g : x.groups)
            if (!all_digits(g)) fail("telephone group must be digits");
        } else if constexpr (std::is_same_v<T, DigitSequence>) {
          if (!all_digits(x.digits)) fail("digit sequence must be digits");
        }
      },
      v);
}

// ---------------------------------------------------------------------------
// Interchange format: JSON object with a "class" discriminator.

inline std::string_view meridiem_name(Meridiem m) {
  switch (m) {
    case Meridiem::Am: return "am";
    case Meridiem::Pm: return "pm";
    case Meridiem::NoneExplicit: return "none";
  }
  return "none";
}

inline Meridiem parse_meridiem(std::string_view s) {
  if (s == "am") return Meridiem::Am;
  if (s == "pm") return Meridiem::Pm;
  if (s == "none") return Meridiem::NoneExplicit;
  throw ParseError("unknown meridiem '" + std::string(s) + "'");
}

inline json value_to_json(const CanonicalValue& v) {
  json j;
  j["class"] = class_name(class_of(v));
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cardinal> || std::is_same_v<T, Ordinal>) {
          j["value"] = x.value;
        } else if constexpr (std::is_same_v<T, Decimal>) {
          j["integer"] = x.integer;
          j["fraction"] = x.fraction;
        } else if constexpr (std::is_same_v<T, Fraction>) {
          j["numerator"] = x.numerator;
          j["denominator"] = x.denominator;
          if (x.whole) j["whole"] = *x.whole;
        } else if constexpr (std::is_same_v<T, Money>) {
          j["major"] = x.major;
          if (x.minor) j["minor"] = *x.minor;
          j["currency"] = x.currency;
        } else if constexpr (std::is_same_v<T, Time>) {
          j["hour"] = x.hour;
          j["minute"] = x.minute;
          if (x.second) j["second"] = *x.second;
          if (x.meridiem) j["meridiem"] = meridiem_name(*x.meridiem);
        } else if constexpr (std::is_same_v<T, Date>) {
          if (x.day) j["day"] = *x.day;
          if (x.month) j["month"] = *x.month;
          if (x.year) j["year"] = *x.year;
        } else if constexpr (std::is_same_v<T, Measure>) {
          j["integer"] = x.magnitude.integer;
          j["fraction"] = x.magnitude.fraction;
          j["unit"] = x.unit;
        } else if constexpr (std::is_same_v<T, Telephone>) {
          j["groups"] = x.groups;
        } else if constexpr (std::is_same_v<T, DigitSequence>) {
          j["digits"] = x.digits;
        }
      },
      v);
  return j;
}

namespace detail {
template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}
}  // namespace detail

inline CanonicalValue value_from_json(const json& j) {
  try {
    auto cls = parse_class(j.at("class").get<std::string>());
    switch (cls) {
      case EntityClass::Cardinal: return Cardinal{j.at("value").get<std::int64_t>()};
      case EntityClass::Ordinal: return Ordinal{j.at("value").get<std::int64_t>()};
      case EntityClass::Decimal:
        return Decimal{j.at("integer").get<std::int64_t>(), j.at("fraction").get<std::string>()};
      case EntityClass::Fraction:
        return Fraction{j.at("numerator").get<std::int64_t>(),
                        j.at("denominator").get<std::int64_t>(),
                        detail::opt_field<std::int64_t>(j, "whole")};
      case EntityClass::Money:
        return Money{j.at("major").get<std::int64_t>(), detail::opt_field<std::string>(j, "minor"),
                     j.at("currency").get<std::string>()};
      case EntityClass::Time: {
        Time t{j.at("hour").get<int>(), j.at("minute").get<int>(),
               detail::opt_field<int>(j, "second"), std::nullopt};
        if (auto m = detail::opt_field<std::string>(j, "meridiem")) t.meridiem = parse_meridiem(*m);
        return t;
      }
      case EntityClass::Date:
        return Date{detail::opt_field<int>(j, "day"), detail::opt_field<int>(j, "month"),
                    detail::opt_field<std::int64_t>(j, "year")};
      case EntityClass::Measure:
        return Measure{Decimal{j.at("integer").get<std::int64_t>(),
                               j.value("fraction", std::string{})},
                       j.at("unit").get<std::string>()};
      case EntityClass::Telephone:
        return Telephone{j.at("groups").get<std::vector<std::string>>()};
      case EntityClass::DigitSequence: return DigitSequence{j.at("digits").get<std::string>()};
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad canonical value: ") + e.what());
  }
  throw ParseError("bad canonical value");
}

// ---------------------------------------------------------------------------
// Spans and pairs

// Offsets are UTF-8 byte offsets into the source sentence.
struct EntitySpan {
  EntityClass cls = EntityClass::Cardinal;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  CanonicalValue value;
  bool ambiguous = false;
  bool operator==(const EntitySpan&) const = default;
};

inline json span_to_json(const EntitySpan& s) {
  json j{{"class", class_name(s.cls)},
         {"start", s.start},
         {"end", s.end},
         {"surface", s.surface},
         {"value", value_to_json(s.value)}};
  if (s.ambiguous) j["ambiguous"] = true;
  return j;
}

inline EntitySpan span_from_json(const json& j) {
  EntitySpan s;
  s.cls = parse_class(j.at("class").get<std::string>());
  s.start = j.at("start").get<std::size_t>();
  s.end = j.at("end").get<std::size_t>();
  s.surface = j.at("surface").get<std::string>();
  s.value = value_from_json(j.at("value"));
  s.ambiguous = j.value("ambiguous", false);
  return s;
}

enum class Provenance { Augmented, Translated, Human };

inline std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Augmented: return "augmented";
    case Provenance::Translated: return "translated";
    case Provenance::Human: return "human";
  }
  return "human";
}

inline Provenance parse_provenance(std::string_view s) {
  if (s == "augmented") return Provenance::Augmented;
  if (s == "translated") return Provenance::Translated;
  if (s == "human") return Provenance::Human;
  throw ParseError("unknown provenance '" + std::string(s) + "'");
}

struct Alignment {
  std::size_t spoken_begin = 0;  // token index, inclusive
  std::size_t spoken_end = 0;    // token index, exclusive
  EntitySpan span;
  bool operator==(const Alignment&) const = default;
};

struct SpokenWrittenPair {
  std::string id;
  std::vector<std::string> spoken;
  std::string written;
  std::string language = "en";
  std::vector<Alignment> alignments;
  Provenance provenance = Provenance::Augmented;
  bool operator==(const SpokenWrittenPair&) const = default;

  std::string spoken_text() const {
    std::string out;
    for (const auto& t : spoken) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  }
};

inline std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    std::size_t b = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

// Throws ValidationError if alignments are out of range or overlap.
inline void validate_pair(const SpokenWrittenPair& p) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (const auto& a : p.alignments) {
    if (a.spoken_begin >= a.spoken_end || a.spoken_end > p.spoken.size())
      throw ValidationError("alignment spoken range out of bounds");
    if (a.span.start >= a.span.end || a.span.end > p.written.size() ||
        p.written.compare(a.span.start, a.span.end - a.span.start, a.span.surface) != 0)
      throw ValidationError("alignment span does not match written text");
    ranges.emplace_back(a.spoken_begin, a.spoken_end);
  }
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 1; i < ranges.size(); ++i) {
    if (ranges[i].first < ranges[i - 1].second)
      throw ValidationError("overlapping alignments");
  }
}

inline json pair_to_json(const SpokenWrittenPair& p) {
  json al = json::array();
  for (const auto& a : p.alignments) {
    al.push_back({{"spoken", {a.spoken_begin, a.spoken_end}}, {"span", span_to_json(a.span)}});
  }
  return json{{"id", p.id},
              {"spoken", p.spoken},
              {"written", p.written},
              {"language", p.language},
              {"alignments", al},
              {"provenance", provenance_name(p.provenance)}};
}

inline std::string id_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw ParseError("id must be a string or integer");
}

// "spoken" may be a token array or a plain string.
inline SpokenWrittenPair pair_from_json(const json& j) {
  try {
    SpokenWrittenPair p;
    if (j.contains("id")) p.id = id_from_json(j.at("id"));
    const auto& sp = j.at("spoken");
    if (sp.is_string()) {
      p.spoken = split_whitespace(sp.get<std::string>());
    } else {
      p.spoken = sp.get<std::vector<std::string>>();
    }
    p.written = j.at("written").get<std::string>();
    p.language = j.value("language", std::string("en"));
    if (j.contains("alignments")) {
      for (const auto& a : j.at("alignments")) {
        Alignment al;
        al.spoken_begin = a.at("spoken").at(0).get<std::size_t>();
        al.spoken_end = a.at("spoken").at(1).get<std::size_t>();
        al.span = span_from_json(a.at("span"));
        p.alignments.push_back(std::move(al));
      }
    }
    if (j.contains("provenance")) p.provenance = parse_provenance(j.at("provenance").get<std::string>());
    return p;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad pair record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Augmentation configuration

struct AugmentationConfig {
  std::size_t max_variants_per_entity = 16;
  std::size_t max_pairs_per_sentence = 8;
  std::uint64_t sampling_seed = 0;
  std::set<EntityClass> enabled_classes{kAllClasses.begin(), kAllClasses.end()};

  void validate() const {
    if (max_variants_per_entity == 0) throw ValidationError("max-variants-per-entity must be positive");
    if (max_pairs_per_sentence == 0) throw ValidationError("max-pairs-per-sentence must be positive");
  }
};

}  // namespace itnaug
