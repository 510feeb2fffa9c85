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

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/regex.hpp>

#include "itnaug/domain.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

enum class NumberRole { Unit, Teen, Tens, Hundred, Hundreds, Scale, Ordinal, ZeroAlt, Connector };

inline NumberRole parse_role(std::string_view s) {
  if (s == "unit") return NumberRole::Unit;
  if (s == "teen") return NumberRole::Teen;
  if (s == "tens") return NumberRole::Tens;
  if (s == "hundred") return NumberRole::Hundred;
  if (s == "hundreds") return NumberRole::Hundreds;
  if (s == "scale") return NumberRole::Scale;
  if (s == "ordinal") return NumberRole::Ordinal;
  if (s == "zero-alt") return NumberRole::ZeroAlt;
  if (s == "connector") return NumberRole::Connector;
  throw ParseError("unknown number-word role '" + std::string(s) + "'");
}

struct NumberWord {
  std::int64_t value = 0;
  NumberRole role = NumberRole::Unit;
  bool operator==(const NumberWord&) const = default;
};

struct SmallCardinalPolicy {
  bool prefer_words = false;
  int threshold = 9;
  bool operator==(const SmallCardinalPolicy&) const = default;
};

struct CurrencyForms {
  std::string symbol;
  std::string singular;
  std::string plural;
  std::string minor_singular;
  std::string minor_plural;
  int minor_unit_digits = 2;
  bool operator==(const CurrencyForms&) const = default;
};

struct UnitDef {
  std::vector<std::string> abbreviations;
  std::string singular;
  std::string plural;
  std::vector<std::string> alternates;
  std::string written;
  bool space = true;
  bool operator==(const UnitDef&) const = default;
};

enum class FieldOrder { MDY, DMY, YMD };

inline FieldOrder parse_field_order(std::string_view s) {
  if (s == "MDY") return FieldOrder::MDY;
  if (s == "DMY") return FieldOrder::DMY;
  if (s == "YMD") return FieldOrder::YMD;
  throw ParseError("unknown date field order '" + std::string(s) + "'");
}

// One named regex with capture-group bindings onto CanonicalValue fields.
struct PatternSpec {
  std::string name;
  std::string regex;
  bool icase = false;
  bool boundary = true;
  std::map<std::string, int> bindings;
  std::vector<int> groups;  // telephone digit groups
  bool operator==(const PatternSpec&) const = default;
};

struct PatternTable {
  EntityClass cls = EntityClass::Cardinal;
  std::vector<PatternSpec> patterns;
  bool operator==(const PatternTable&) const = default;
};

// Claiming order used by the segmenter.
inline constexpr std::array<EntityClass, 10> kPrecedence = {
    EntityClass::Time,     EntityClass::Date,    EntityClass::Measure,
    EntityClass::Money,    EntityClass::Fraction, EntityClass::Decimal,
    EntityClass::Ordinal,  EntityClass::Telephone, EntityClass::DigitSequence,
    EntityClass::Cardinal};

struct CompiledPattern {
  PatternSpec spec;
  boost::regex re;
};

struct CompiledPatterns {
  std::map<EntityClass, std::vector<CompiledPattern>> by_class;
};

// Shared immutable cache; ignored by equality.
struct CompiledHandle {
  std::shared_ptr<const CompiledPatterns> ptr;
  bool operator==(const CompiledHandle&) const { return true; }
};

struct LocaleProfile {
  std::string language;
  std::string decimal_separator = ".";
  std::vector<std::string> group_separators;
  int group_size = 3;
  int group_min_digits = 5;
  bool prefers_24h = false;
  std::string time_separator = ":";
  bool time_hour_only = false;
  std::string am_written = "am";
  std::string pm_written = "pm";
  SmallCardinalPolicy small_cardinal;
  std::map<std::string, int> magnitude_lexicon;
  std::map<std::string, NumberWord> number_words;
  std::map<std::string, std::string> number_aliases;
  std::map<std::string, std::string> connectives;
  std::map<std::int64_t, std::pair<std::string, std::string>> fraction_words;
  std::map<std::string, std::string> currency_lexicon;
  std::map<std::string, CurrencyForms> currencies;
  std::string default_currency = "USD";
  bool currency_prefix = true;
  int minor_unit_digits = 2;
  std::map<std::string, UnitDef> units;
  std::vector<std::string> month_names;
  std::vector<std::string> month_abbreviations;
  FieldOrder date_field_order = FieldOrder::MDY;
  FieldOrder verbal_date_order = FieldOrder::DMY;
  std::string date_separator = "/";
  std::map<std::string, std::string> ordinal_suffixes;
  bool has_verbal_grammar = false;
  bool compound_numbers = false;  // number words are written closed up
  std::vector<PatternTable> pattern_tables;

  // Derived at load.
  std::map<std::pair<NumberRole, std::int64_t>, std::string> reverse_words;
  CompiledHandle compiled;

  bool operator==(const LocaleProfile&) const = default;

  // Resolves aliases, then looks the lowercased token up.
  std::optional<NumberWord> number_word(std::string_view token) const {
    std::string t = to_lower(token);
    if (auto a = number_aliases.find(t); a != number_aliases.end()) t = a->second;
    if (auto it = number_words.find(t); it != number_words.end()) return it->second;
    return std::nullopt;
  }

  std::optional<std::string> word_for(NumberRole role, std::int64_t value) const {
    if (auto it = reverse_words.find({role, value}); it != reverse_words.end()) return it->second;
    return std::nullopt;
  }

  std::string connective(const std::string& key) const {
    if (auto it = connectives.find(key); it != connectives.end()) return it->second;
    return key;
  }

  bool is_group_separator(std::string_view s) const {
    return std::find(group_separators.begin(), group_separators.end(), s) != group_separators.end();
  }

  const CurrencyForms* currency(const std::string& code) const {
    auto it = currencies.find(code);
    return it == currencies.end() ? nullptr : &it->second;
  }

  int minor_digits_for(const std::string& code) const {
    if (const auto* c = currency(code)) return c->minor_unit_digits;
    return minor_unit_digits;
  }

  // Matches symbols, ISO codes and currency words.
  std::optional<std::string> currency_code(std::string_view surface) const {
    std::string low = to_lower(surface);
    if (auto it = currency_lexicon.find(low); it != currency_lexicon.end()) return it->second;
    for (const auto& [code, forms] : currencies) {
      if (forms.symbol == surface || to_lower(code) == low) return code;
    }
    return std::nullopt;
  }

  // Unit id for an abbreviation or a spelled form.
  std::optional<std::string> unit_id(std::string_view surface) const {
    std::string low = to_lower(surface);
    for (const auto& [id, u] : units) {
      for (const auto& a : u.abbreviations)
        if (a == surface) return id;
    }
    for (const auto& [id, u] : units) {
      for (const auto& a : u.abbreviations)
        if (to_lower(a) == low) return id;
      if (to_lower(u.singular) == low || to_lower(u.plural) == low) return id;
      for (const auto& a : u.alternates)
        if (to_lower(a) == low) return id;
    }
    return std::nullopt;
  }

  std::optional<int> month_index(std::string_view name) const {
    std::string low = to_lower(name);
    if (!low.empty() && low.back() == '.') low.pop_back();
    for (std::size_t i = 0; i < month_names.size(); ++i)
      if (to_lower(month_names[i]) == low) return static_cast<int>(i) + 1;
    for (std::size_t i = 0; i < month_abbreviations.size(); ++i)
      if (to_lower(month_abbreviations[i]) == low) return static_cast<int>(i) + 1;
    return std::nullopt;
  }

  std::optional<int> magnitude(std::string_view word) const {
    auto it = magnitude_lexicon.find(to_lower(word));
    if (it == magnitude_lexicon.end()) return std::nullopt;
    return it->second;
  }

  // Keys: "=N" for exactly N, then the last two digits, the last digit,
  // "default".
  std::string ordinal_suffix(std::int64_t n) const {
    if (auto it = ordinal_suffixes.find("=" + std::to_string(n)); it != ordinal_suffixes.end()) return it->second;
    auto last2 = std::to_string(n % 100);
    auto last1 = std::to_string(n % 10);
    if (auto it = ordinal_suffixes.find(last2); it != ordinal_suffixes.end() && n % 100 >= 10)
      return it->second;
    if (auto it = ordinal_suffixes.find(last1); it != ordinal_suffixes.end()) return it->second;
    if (auto it = ordinal_suffixes.find("default"); it != ordinal_suffixes.end()) return it->second;
    return "";
  }

  const std::vector<CompiledPattern>& patterns_for(EntityClass c) const {
    static const std::vector<CompiledPattern> empty;
    if (!compiled.ptr) return empty;
    auto it = compiled.ptr->by_class.find(c);
    return it == compiled.ptr->by_class.end() ? empty : it->second;
  }
};

// ---------------------------------------------------------------------------
// Loading

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_json_document(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T field(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) throw ParseError(origin + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(origin + ": field '" + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& origin) {
  if (!j.contains(key)) return fallback;
  return field<T>(j, key, origin);
}

}  // namespace detail

inline PatternTable pattern_table_from_json(const json& j, const std::string& origin) {
  PatternTable t;
  t.cls = parse_class(detail::field<std::string>(j, "class", origin));
  if (!j.contains("patterns") || !j.at("patterns").is_array())
    throw ParseError(origin + ": missing field 'patterns'");
  for (const auto& p : j.at("patterns")) {
    PatternSpec s;
    s.name = detail::field<std::string>(p, "name", origin);
    s.regex = detail::field<std::string>(p, "regex", origin);
    s.icase = detail::field_or<std::string>(p, "flags", "", origin).find('i') != std::string::npos;
    s.boundary = detail::field_or<bool>(p, "boundary", true, origin);
    if (p.contains("bindings")) {
      for (const auto& [k, v] : p.at("bindings").items()) {
        if (v.is_array()) {
          s.groups = v.get<std::vector<int>>();
        } else {
          s.bindings[k] = v.get<int>();
        }
      }
    }
    t.patterns.push_back(std::move(s));
  }
  return t;
}

// Compiles the pattern tables. Throws ValidationError naming the pattern on
// bad regex syntax.
inline void compile_patterns(LocaleProfile& p) {
  auto compiled = std::make_shared<CompiledPatterns>();
  for (const auto& table : p.pattern_tables) {
    auto& bucket = compiled->by_class[table.cls];
    for (const auto& spec : table.patterns) {
      try {
        boost::regex::flag_type flags = boost::regex::perl;
        if (spec.icase) flags |= boost::regex::icase;
        bucket.push_back({spec, boost::regex(spec.regex, flags)});
      } catch (const boost::regex_error& e) {
        throw ValidationError("pattern '" + spec.name + "' (" + std::string(class_name(table.cls)) +
                              "): " + e.what());
      }
    }
  }
  p.compiled.ptr = std::move(compiled);
}

inline void validate_locale(const LocaleProfile& p) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("locale '" + p.language + "': " + what);
  };
  if (p.language.empty()) fail("language is empty");
  if (p.decimal_separator.empty()) fail("decimal-separator is empty");
  if (p.is_group_separator(p.decimal_separator))
    fail("decimal-separator must not be one of the group-separators");
  if (p.group_size < 1) fail("group-size must be positive");
  if (p.small_cardinal.threshold < 0) fail("small-cardinal threshold must be non-negative");
  if (p.number_words.empty()) fail("number-word-lexicon is empty");
  if (p.magnitude_lexicon.empty()) fail("magnitude-lexicon is empty");
  if (p.currency_lexicon.empty()) fail("currency-lexicon is empty");
  if (p.month_names.size() != 12) fail("month-names must list 12 months");
  if (p.minor_unit_digits < 0) fail("minor-unit-digits must be non-negative");
  std::map<std::pair<NumberRole, std::int64_t>, std::string> seen;
  for (const auto& [w, nw] : p.number_words) {
    auto [it, fresh] = seen.emplace(std::make_pair(nw.role, nw.value), w);
    if (!fresh && nw.role != NumberRole::Connector)
      fail("number-word-lexicon is ambiguous: '" + w + "' and '" + it->second +
           "' share a role and value");
  }
  for (const auto& [alias, target] : p.number_aliases) {
    if (!p.number_words.count(target))
      fail("number-word alias '" + alias + "' points at unknown word '" + target + "'");
  }
  for (const auto& [word, code] : p.currency_lexicon) {
    if (code.size() != 3) fail("currency-lexicon entry '" + word + "' is not an ISO-4217 code");
  }
}

// Builds a profile from its JSON document. Pattern tables are read from
// `pattern_dir/<class>.json` when the directory exists.
inline LocaleProfile locale_from_json(const json& j, const std::string& origin,
                                      const std::filesystem::path& pattern_dir = {}) {
  using detail::field;
  using detail::field_or;
  LocaleProfile p;
  if (!j.is_object()) throw ParseError(origin + ": locale document must be an object");
  p.language = field<std::string>(j, "language", origin);
  p.decimal_separator = field<std::string>(j, "decimal-separator", origin);
  p.group_separators = field<std::vector<std::string>>(j, "group-separators", origin);
  p.group_size = field<int>(j, "group-size", origin);
  p.group_min_digits = field_or<int>(j, "group-min-digits", 5, origin);
  auto clock = field<std::string>(j, "clock", origin);
  if (clock != "prefers-12h" && clock != "prefers-24h")
    throw ParseError(origin + ": field 'clock': expected prefers-12h or prefers-24h");
  p.prefers_24h = clock == "prefers-24h";
  p.time_separator = field_or<std::string>(j, "time-separator", ":", origin);
  p.time_hour_only = field_or<bool>(j, "time-hour-only", false, origin);
  if (j.contains("meridiem-written")) {
    const auto& m = j.at("meridiem-written");
    p.am_written = field_or<std::string>(m, "am", "am", origin);
    p.pm_written = field_or<std::string>(m, "pm", "pm", origin);
  }
  {
    auto sc = field<json>(j, "small-cardinal-written-preference", origin);
    auto policy = field<std::string>(sc, "policy", origin);
    if (policy != "words" && policy != "digits")
      throw ParseError(origin + ": field 'small-cardinal-written-preference.policy': expected words or digits");
    p.small_cardinal.prefer_words = policy == "words";
    p.small_cardinal.threshold = field_or<int>(sc, "threshold", 9, origin);
  }
  const auto mag = field<json>(j, "magnitude-lexicon", origin);
  for (const auto& [k, v] : mag.items())
    p.magnitude_lexicon[to_lower(k)] = v.get<int>();
  const auto words = field<json>(j, "number-word-lexicon", origin);
  for (const auto& [k, v] : words.items()) {
    NumberWord nw;
    nw.value = field<std::int64_t>(v, "value", origin + ": number-word '" + k + "'");
    nw.role = parse_role(field<std::string>(v, "role", origin + ": number-word '" + k + "'"));
    p.number_words[to_lower(k)] = nw;
  }
  p.number_aliases = field_or<std::map<std::string, std::string>>(j, "number-word-aliases", {}, origin);
  p.connectives = field_or<std::map<std::string, std::string>>(j, "connectives", {}, origin);
  if (j.contains("fraction-words")) {
    for (const auto& [k, v] : j.at("fraction-words").items()) {
      p.fraction_words[std::stoll(k)] = {field<std::string>(v, "singular", origin),
                                         field<std::string>(v, "plural", origin)};
    }
  }
  const auto curlex = field<json>(j, "currency-lexicon", origin);
  for (const auto& [k, v] : curlex.items())
    p.currency_lexicon[to_lower(k)] = v.get<std::string>();
  if (j.contains("currencies")) {
    for (const auto& [code, v] : j.at("currencies").items()) {
      CurrencyForms c;
      c.symbol = field_or<std::string>(v, "symbol", "", origin);
      c.singular = field_or<std::string>(v, "singular", "", origin);
      c.plural = field_or<std::string>(v, "plural", "", origin);
      c.minor_singular = field_or<std::string>(v, "minor-singular", "", origin);
      c.minor_plural = field_or<std::string>(v, "minor-plural", "", origin);
      c.minor_unit_digits = field_or<int>(v, "minor-unit-digits", 2, origin);
      p.currencies[code] = c;
    }
  }
  p.default_currency = field_or<std::string>(j, "default-currency", "USD", origin);
  p.currency_prefix = field_or<std::string>(j, "currency-position", "prefix", origin) == "prefix";
  p.minor_unit_digits = field<int>(j, "minor-unit-digits", origin);
  if (j.contains("units")) {
    for (const auto& [id, v] : j.at("units").items()) {
      UnitDef u;
      u.abbreviations = field_or<std::vector<std::string>>(v, "abbreviations", {}, origin);
      u.singular = field<std::string>(v, "singular", origin);
      u.plural = field_or<std::string>(v, "plural", u.singular, origin);
      u.alternates = field_or<std::vector<std::string>>(v, "alternates", {}, origin);
      u.written = field_or<std::string>(v, "written", u.abbreviations.empty() ? u.singular : u.abbreviations.front(), origin);
      u.space = field_or<bool>(v, "space", true, origin);
      p.units[id] = u;
    }
  }
  p.month_names = field<std::vector<std::string>>(j, "month-names", origin);
  p.month_abbreviations = field_or<std::vector<std::string>>(j, "month-abbreviations", {}, origin);
  p.date_field_order = parse_field_order(field_or<std::string>(j, "date-field-order", "MDY", origin));
  p.verbal_date_order = parse_field_order(field_or<std::string>(j, "verbal-date-order", "DMY", origin));
  p.date_separator = field_or<std::string>(j, "date-separator", "/", origin);
  p.ordinal_suffixes = field_or<std::map<std::string, std::string>>(j, "ordinal-suffixes", {}, origin);
  p.has_verbal_grammar = field_or<bool>(j, "has-verbal-grammar", false, origin);
  p.compound_numbers = field_or<bool>(j, "compound-number-words", false, origin);

  for (const auto& [w, nw] : p.number_words) p.reverse_words.emplace(std::make_pair(nw.role, nw.value), w);

  if (!pattern_dir.empty() && std::filesystem::is_directory(pattern_dir)) {
    for (auto cls : kPrecedence) {
      auto file = pattern_dir / (std::string(class_name(cls)) + ".json");
      if (!std::filesystem::exists(file)) continue;
      auto text = detail::read_file(file);
      auto doc = detail::parse_json_document(text, file.string());
      auto table = pattern_table_from_json(doc, file.string());
      if (table.cls != cls)
        throw ValidationError(file.string() + ": class field does not match file name");
      p.pattern_tables.push_back(std::move(table));
    }
  }
  validate_locale(p);
  compile_patterns(p);
  return p;
}

// Loads `<dir>/<lang>.json`; pattern tables live in `<dir>/<lang>/`.
inline LocaleProfile load_locale(const std::filesystem::path& path) {
  auto text = detail::read_file(path);
  if (auto bad = find_invalid_utf8(text))
    throw ParseError(path.string() + ": invalid UTF-8 at byte " + std::to_string(*bad));
  auto doc = detail::parse_json_document(text, path.string());
  auto pattern_dir = path.parent_path() / path.stem();
  return locale_from_json(doc, path.string(), pattern_dir);
}

inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("ITNAUG_DATA_DIR")) return env;
#ifdef ITNAUG_DEFAULT_DATA_DIR
  return ITNAUG_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

// Accepts a file path or a bare language tag resolved against the data dir.
inline LocaleProfile resolve_locale(const std::string& path_or_tag) {
  std::filesystem::path p(path_or_tag);
  if (std::filesystem::exists(p) && std::filesystem::is_regular_file(p)) return load_locale(p);
  auto candidate = default_data_dir() / "locales" / (path_or_tag + ".json");
  if (std::filesystem::exists(candidate)) return load_locale(candidate);
  throw UnsupportedLocaleError("unknown locale '" + path_or_tag + "'");
}

}  // namespace itnaug
