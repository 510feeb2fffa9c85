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

// Rule-based inverse normalization: a greedy parser over spoken tokens and a
// locale-aware renderer for canonical values.
//
// A spoken number is read as a run of chunks. Each chunk is either a zero
// word or a long-form number ("one hundred twenty three"); the run's digit
// string is the concatenation of its chunks, so "twenty twenty three" and
// "two oh two three" both read as 2023.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/spoken_generator.hpp"
#include "itnaug/text.hpp"

namespace itnaug {

enum class Confidence { Exact, Ambiguous };

struct ParsedEntity {
  std::size_t begin = 0;  // token index, inclusive
  std::size_t end = 0;    // exclusive
  CanonicalValue value;
  Confidence confidence = Confidence::Exact;
  bool digit_context = false;  // small cardinal next to an "out of" cue
};

namespace detail {

struct NumTok {
  std::int64_t value = 0;
  NumberRole role = NumberRole::Unit;
  bool ordinal = false;
  bool zero_alt = false;
};

inline NumberRole role_for_value(std::int64_t v) {
  if (v < 10) return NumberRole::Unit;
  if (v < 100) return (v < 20 || v % 10 != 0) ? NumberRole::Teen : NumberRole::Tens;
  if (v == 100) return NumberRole::Hundred;
  if (v < 1000) return NumberRole::Hundreds;
  return NumberRole::Scale;
}

class Parser {
 public:
  Parser(const std::vector<std::string>& toks, const LocaleProfile& locale) : t_(toks), loc_(locale) {
    for (const auto& [id, u] : locale.units) {
      for (const auto* form : {&u.singular, &u.plural}) add_unit(*form, id);
      for (const auto& a : u.alternates) add_unit(a, id);
    }
    std::sort(units_.begin(), units_.end(),
              [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  }

  std::vector<ParsedEntity> parse() {
    std::vector<ParsedEntity> out;
    std::size_t i = 0;
    while (i < t_.size()) {
      if (auto e = entity_at(i)) {
        out.push_back(std::move(*e));
        i = out.back().end;
      } else {
        ++i;
      }
    }
    return out;
  }

  struct RunSpan {
    std::size_t begin = 0, end = 0;
    std::vector<std::string> chunks;
  };

  // Maximal spoken number runs, left to right.
  std::vector<RunSpan> runs() const {
    std::vector<RunSpan> out;
    std::size_t i = 0;
    while (i < t_.size()) {
      if (auto r = run(i)) {
        out.push_back({r->begin, r->end, r->chunks});
        i = r->end;
      } else {
        ++i;
      }
    }
    return out;
  }

 private:
  struct Chunked {
    std::string digits;
    std::size_t next = 0;
    bool ordinal = false;
  };

  struct Run {
    std::size_t begin = 0, end = 0;
    std::vector<std::string> chunks;
    bool ordinal = false;

    std::string digits() const {
      std::string d;
      for (const auto& c : chunks) d += c;
      return d;
    }
    bool single() const { return chunks.size() == 1; }
    std::optional<std::int64_t> value() const {
      auto d = digits();
      if (d.empty() || d.size() > 18) return std::nullopt;
      return std::stoll(d);
    }
  };

  const std::vector<std::string>& t_;
  const LocaleProfile& loc_;
  std::vector<std::pair<std::vector<std::string>, std::string>> units_;

  void add_unit(const std::string& form, const std::string& id) {
    if (form.empty()) return;
    units_.push_back({split_whitespace(to_lower(form)), id});
  }

  const std::string* tok(std::size_t i) const { return i < t_.size() ? &t_[i] : nullptr; }
  bool is(std::size_t i, std::string_view w) const { return i < t_.size() && t_[i] == w; }
  bool is_conn(std::size_t i, const char* key) const { return is(i, loc_.connective(key)); }

  std::optional<NumTok> num(std::size_t i) const {
    if (i >= t_.size()) return std::nullopt;
    auto w = loc_.number_word(t_[i]);
    if (!w) return std::nullopt;
    NumTok n{w->value, w->role, false, false};
    if (w->role == NumberRole::Ordinal) {
      n.ordinal = true;
      n.role = role_for_value(w->value);
    } else if (w->role == NumberRole::ZeroAlt) {
      n.zero_alt = true;
      n.role = NumberRole::Unit;
    }
    return n;
  }
  bool is_connector(std::size_t i) const {
    auto n = num(i);
    return n && n->role == NumberRole::Connector;
  }

  // ---- number grammar

  struct Part {
    std::int64_t value = 0;
    std::size_t next = 0;
    bool ordinal = false;
  };

  std::optional<Part> sub_hundred(std::size_t j) const {
    auto a = num(j);
    if (!a || a->zero_alt) return std::nullopt;
    if (a->role == NumberRole::Unit && a->value >= 1) return Part{a->value, j + 1, a->ordinal};
    if (a->role == NumberRole::Teen) return Part{a->value, j + 1, a->ordinal};
    if (a->role != NumberRole::Tens) return std::nullopt;
    Part p{a->value, j + 1, a->ordinal};
    if (a->ordinal) return p;
    std::size_t k = j + 1;
    if (is_connector(k)) {
      auto u = num(k + 1);
      if (u && !u->zero_alt && u->role == NumberRole::Unit && u->value >= 1)
        return Part{a->value + u->value, k + 2, u->ordinal};
      return p;
    }
    auto b = num(k);
    if (b && !b->zero_alt && b->role == NumberRole::Unit && b->value >= 1)
      return Part{a->value + b->value, k + 1, b->ordinal};
    // Vigesimal tens, e.g. soixante dix: only when no tens word exists.
    if (b && b->role == NumberRole::Teen && b->value < 20 && a->value < 90 && !loc_.word_for(NumberRole::Tens, a->value + 10))
      return Part{a->value + b->value, k + 1, b->ordinal};
    return p;
  }

  // Optional "and" plus sub-hundred after a hundreds word.
  Part hundred_tail(Part p) const {
    if (p.ordinal) return p;
    std::size_t k = p.next;
    if (is_connector(k)) {
      if (auto r = sub_hundred(k + 1)) return Part{p.value + r->value, r->next, r->ordinal};
      return p;
    }
    if (auto r = sub_hundred(k)) return Part{p.value + r->value, r->next, r->ordinal};
    return p;
  }

  bool is_hundred(std::size_t j) const {
    auto n = num(j);
    return n && n->role == NumberRole::Hundred;
  }

  std::optional<Part> sub_thousand(std::size_t j) const {
    auto a = num(j);
    if (!a || a->zero_alt) return std::nullopt;
    if (a->role == NumberRole::Hundreds) return hundred_tail(Part{a->value, j + 1, a->ordinal});
    if (a->role == NumberRole::Hundred) return hundred_tail(Part{100, j + 1, a->ordinal});
    if (a->role == NumberRole::Unit && a->value >= 1 && !a->ordinal && is_hundred(j + 1)) {
      auto h = num(j + 1);
      return hundred_tail(Part{a->value * 100, j + 2, h->ordinal});
    }
    auto r = sub_hundred(j);
    if (!r) return std::nullopt;
    if (!r->ordinal && r->value >= 10 && is_hundred(r->next)) {
      auto h = num(r->next);
      return hundred_tail(Part{r->value * 100, r->next + 1, h->ordinal});
    }
    return r;
  }

  std::optional<Part> long_number(std::size_t j) const {
    std::int64_t total = 0;
    std::int64_t last_scale = std::numeric_limits<std::int64_t>::max();
    bool any = false;
    std::size_t k = j;
    for (;;) {
      auto st = sub_thousand(k);
      std::size_t after = st ? st->next : k;
      auto sc = num(after);
      bool scale_next = (!st || !st->ordinal) && sc && sc->role == NumberRole::Scale && sc->value < last_scale &&
                        (st || !any);
      if (scale_next) {
        total += (st ? st->value : 1) * sc->value;
        last_scale = sc->value;
        k = after + 1;
        any = true;
        if (sc->ordinal) return Part{total, k, true};
        if (is_connector(k) && sub_thousand(k + 1)) ++k;
        continue;
      }
      if (st) {
        if (st->value >= last_scale) break;
        return Part{total + st->value, st->next, st->ordinal};
      }
      break;
    }
    if (!any) return std::nullopt;
    // Drop a dangling connector.
    return Part{total, k > j && is_connector(k - 1) ? k - 1 : k, false};
  }

  std::optional<Chunked> chunk(std::size_t j, bool first) const {
    auto a = num(j);
    if (!a || a->role == NumberRole::Connector) return std::nullopt;
    if (!first && (a->ordinal || a->role == NumberRole::Scale || a->role == NumberRole::Hundred))
      return std::nullopt;
    if (a->role == NumberRole::Unit && a->value == 0) return Chunked{"0", j + 1, false};
    auto p = long_number(j);
    if (!p) return std::nullopt;
    return Chunked{std::to_string(p->value), p->next, p->ordinal};
  }

  std::optional<Run> run(std::size_t i) const {
    Run r;
    r.begin = i;
    std::size_t j = i;
    bool only_alt = true;
    while (auto c = chunk(j, r.chunks.empty())) {
      for (std::size_t k = j; k < c->next; ++k) {
        auto n = num(k);
        if (!(n && n->zero_alt)) only_alt = false;
      }
      r.chunks.push_back(c->digits);
      j = c->next;
      if (c->ordinal) {
        r.ordinal = true;
        break;
      }
    }
    if (r.chunks.empty()) return std::nullopt;
    // "oh" needs company; a lone one is an interjection.
    if (only_alt && r.chunks.size() == 1) return std::nullopt;
    if (r.ordinal && r.chunks.size() > 1) {
      // Only the last chunk is ordinal; keep the cardinal prefix.
      r.chunks.pop_back();
      r.ordinal = false;
      j = chunk_start(i, r.chunks.size());
    }
    r.end = j;
    return r;
  }

  std::size_t chunk_start(std::size_t i, std::size_t n) const {
    std::size_t j = i;
    for (std::size_t c = 0; c < n; ++c) j = chunk(j, c == 0)->next;
    return j;
  }

  // Digit words after "point".
  std::optional<std::pair<std::string, std::size_t>> point_digits(std::size_t j) const {
    std::string d;
    while (auto n = num(j)) {
      if (n->role != NumberRole::Unit || n->ordinal) break;
      d += static_cast<char>('0' + n->value);
      ++j;
    }
    if (d.empty()) return std::nullopt;
    return std::make_pair(d, j);
  }

  // ---- cue words

  struct Mer {
    Meridiem m;
    std::size_t len;
  };

  std::optional<Mer> meridiem(std::size_t j) const {
    auto am = split_whitespace(loc_.connective("am"));
    auto pm = split_whitespace(loc_.connective("pm"));
    auto seq = [&](const std::vector<std::string>& w) {
      for (std::size_t k = 0; k < w.size(); ++k)
        if (!is(j + k, w[k])) return false;
      return !w.empty();
    };
    if (seq(am)) return Mer{Meridiem::Am, am.size()};
    if (seq(pm)) return Mer{Meridiem::Pm, pm.size()};
    if (is(j, "am") || is(j, "a.m")) return Mer{Meridiem::Am, 1};
    if (is(j, "pm") || is(j, "p.m")) return Mer{Meridiem::Pm, 1};
    auto part = [&](std::size_t k) -> std::optional<Meridiem> {
      if (is_conn(k, "morning")) return Meridiem::Am;
      if (is_conn(k, "afternoon") || is_conn(k, "evening")) return Meridiem::Pm;
      return std::nullopt;
    };
    if (is_conn(j, "in") && is_conn(j + 1, "the"))
      if (auto p = part(j + 2)) return Mer{*p, 3};
    if (auto p = part(j)) return Mer{*p, 1};
    return std::nullopt;
  }

  std::optional<std::string> currency_at(std::size_t j) const {
    if (j >= t_.size()) return std::nullopt;
    auto it = loc_.currency_lexicon.find(t_[j]);
    if (it == loc_.currency_lexicon.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::pair<std::string, std::size_t>> unit_at(std::size_t j) const {
    for (const auto& [words, id] : units_) {
      bool ok = true;
      for (std::size_t k = 0; k < words.size() && ok; ++k) ok = is(j + k, words[k]);
      if (ok) return std::make_pair(id, j + words.size());
    }
    return std::nullopt;
  }

  std::optional<std::int64_t> month_at(std::size_t j) const {
    if (j >= t_.size()) return std::nullopt;
    for (std::size_t m = 0; m < loc_.month_names.size(); ++m)
      if (to_lower(loc_.month_names[m]) == t_[j]) return static_cast<std::int64_t>(m + 1);
    return std::nullopt;
  }

  // Denominator word: half/halves/quarter(s) or a spelled ordinal 3..10.
  std::optional<std::int64_t> denominator_at(std::size_t j) const {
    if (j >= t_.size()) return std::nullopt;
    for (const auto& [d, forms] : loc_.fraction_words)
      if (t_[j] == forms.first || t_[j] == forms.second) return d;
    auto check = [&](const std::string& w) -> std::optional<std::int64_t> {
      auto n = loc_.number_word(w);
      if (n && n->role == NumberRole::Ordinal && n->value >= 3 && n->value <= 10) return n->value;
      return std::nullopt;
    };
    if (auto v = check(t_[j])) return v;
    if (t_[j].size() > 1 && t_[j].back() == 's') return check(t_[j].substr(0, t_[j].size() - 1));
    return std::nullopt;
  }

  // ---- entity rules

  std::optional<ParsedEntity> entity_at(std::size_t i) const {
    if (auto e = quarter_past(i)) return e;
    if (auto e = article_forms(i)) return e;
    if (auto e = month_first(i)) return e;
    if (auto e = the_ordinal_of(i)) return e;
    if (is_conn(i, "plus"))
      if (auto e = international(i)) return e;
    if (is_conn(i, "point"))
      if (auto d = point_digits(i + 1)) return ParsedEntity{i, d->second, Decimal{0, d->first}};
    bool negative = is_conn(i, "minus") || is(i, "negative");
    std::size_t start = negative ? i + 1 : i;
    auto r = run(start);
    if (!r) return std::nullopt;
    auto e = after_run(*r);
    if (!e) return std::nullopt;
    if (negative) {
      if (auto* c = std::get_if<Cardinal>(&e->value)) {
        c->value = -c->value;
        e->begin = i;
      }
    }
    return e;
  }

  static ParsedEntity make(std::size_t b, std::size_t e, CanonicalValue v) { return ParsedEntity{b, e, std::move(v)}; }

  std::optional<ParsedEntity> quarter_past(std::size_t i) const {
    std::int64_t minute = is_conn(i, "quarter") ? 15 : is_conn(i, "half") ? 30 : -1;
    if (minute < 0 || !is_conn(i + 1, "past")) return std::nullopt;
    auto h = run(i + 2);
    if (!h || !h->single() || h->ordinal) return std::nullopt;
    auto hv = h->value();
    if (!hv || *hv < 1 || *hv > 12) return std::nullopt;
    Time t{static_cast<int>(*hv), static_cast<int>(minute), std::nullopt, std::nullopt};
    std::size_t end = h->end;
    if (auto m = meridiem(end)) {
      t.meridiem = m->m;
      end += m->len;
    }
    return make(i, end, t);
  }

  std::optional<ParsedEntity> article_forms(std::size_t i) const {
    if (!is_conn(i, "a")) return std::nullopt;
    if (auto code = currency_at(i + 1)) return money_tail(i, 1, i + 2, *code);
    if (auto d = denominator_at(i + 1)) {
      if (is_conn(i + 2, "past")) return std::nullopt;
      return make(i, i + 2, Fraction{1, *d, std::nullopt});
    }
    return std::nullopt;
  }

  std::optional<std::int64_t> year_run(std::size_t j, std::size_t* end) const {
    auto y = run(j);
    if (!y || y->ordinal) return std::nullopt;
    auto d = y->digits();
    if (d.size() != 4 || d[0] == '0') return std::nullopt;
    *end = y->end;
    return std::stoll(d);
  }

  std::optional<std::pair<std::int64_t, std::size_t>> ordinal_day(std::size_t j) const {
    auto d = run(j);
    if (!d || !d->ordinal || !d->single()) return std::nullopt;
    auto v = d->value();
    if (!v || *v < 1 || *v > 31) return std::nullopt;
    return std::make_pair(*v, d->end);
  }

  std::optional<ParsedEntity> month_first(std::size_t i) const {
    auto m = month_at(i);
    if (!m) return std::nullopt;
    Date d;
    d.month = static_cast<int>(*m);
    std::size_t j = i + 1;
    std::size_t k = is_conn(j, "the") ? j + 1 : j;
    if (auto od = ordinal_day(k)) {
      d.day = static_cast<int>(od->first);
      j = od->second;
    }
    std::size_t end = j;
    if (auto y = year_run(j, &end)) d.year = *y;
    if (!d.day && !d.year) return std::nullopt;
    return make(i, end, d);
  }

  std::optional<ParsedEntity> the_ordinal_of(std::size_t i) const {
    if (!is_conn(i, "the")) return std::nullopt;
    auto od = ordinal_day(i + 1);
    if (!od || !is_conn(od->second, "of")) return std::nullopt;
    auto m = month_at(od->second + 1);
    if (!m) return std::nullopt;
    Date d{static_cast<int>(od->first), static_cast<int>(*m), std::nullopt};
    std::size_t end = od->second + 2;
    if (auto y = year_run(end, &end)) d.year = *y;
    return make(i, end, d);
  }

  std::optional<ParsedEntity> international(std::size_t i) const {
    auto r = run(i + 1);
    if (!r || r->ordinal) return std::nullopt;
    auto d = r->digits();
    if (d.size() <= 10 || d.size() > 13) return std::nullopt;
    std::size_t cc = d.size() - 10;
    Telephone t{{d.substr(0, cc), d.substr(cc, 3), d.substr(cc + 3, 3), d.substr(cc + 6)}};
    return make(i, r->end, t);
  }

  // Money after the major amount; `j` points past the currency word.
  std::optional<ParsedEntity> money_tail(std::size_t b, std::int64_t major, std::size_t j,
                                         const std::string& code) const {
    Money m{major, std::nullopt, code};
    const auto* cur = loc_.currency(code);
    int digits = loc_.minor_digits_for(code);
    std::size_t end = j;
    if (cur && !cur->minor_plural.empty()) {
      std::size_t k = is_connector(j) ? j + 1 : j;
      auto r = run(k);
      if (r && !r->ordinal && (is(r->end, cur->minor_plural) || is(r->end, cur->minor_singular))) {
        auto ds = r->digits();
        auto v = r->value();
        std::int64_t limit = 1;
        for (int k = 0; k < digits; ++k) limit *= 10;
        if (v && *v < limit) {
          std::string minor = static_cast<int>(ds.size()) == digits ? ds : std::to_string(*v);
          if (static_cast<int>(minor.size()) < digits)
            minor = std::string(static_cast<std::size_t>(digits) - minor.size(), '0') + minor;
          if (*v > 0) m.minor = minor;
          end = r->end + 1;
        }
      }
    }
    return make(b, end, m);
  }

  std::optional<Time> clock_from_run(const Run& r) const {
    if (r.ordinal || r.chunks.empty() || r.chunks[0].size() > 2) return std::nullopt;
    Time t;
    t.hour = std::stoi(r.chunks[0]);
    std::string rest;
    for (std::size_t c = 1; c < r.chunks.size(); ++c) rest += r.chunks[c];
    if (!rest.empty()) {
      if (rest.size() != 2) return std::nullopt;
      t.minute = std::stoi(rest);
    }
    if (t.hour < 1 || t.hour > 12 || t.minute > 59) return std::nullopt;
    return t;
  }

  // "at H MM": the cue word settles the clock reading, 24-hour included.
  std::optional<Time> cued_clock(const Run& r) const {
    if (r.begin == 0 || !loc_.connectives.count("at") || !is_conn(r.begin - 1, "at")) return std::nullopt;
    if (r.ordinal || r.chunks.size() < 2 || r.chunks[0].size() > 2) return std::nullopt;
    std::string rest;
    for (std::size_t c = 1; c < r.chunks.size(); ++c) rest += r.chunks[c];
    if (rest.size() != 2) return std::nullopt;
    Time t{std::stoi(r.chunks[0]), std::stoi(rest), std::nullopt, std::nullopt};
    if (t.hour > 23 || t.minute > 59) return std::nullopt;
    if (t.hour == 0 || t.hour > 12) t.meridiem = Meridiem::NoneExplicit;
    return t;
  }

  std::optional<ParsedEntity> after_run(const Run& r) const {
    std::size_t e = r.end;
    auto value = r.value();
    // Day before a month name.
    if (auto m = month_at(e); m && r.single() && value && *value >= 1 && *value <= 31) {
      Date d{static_cast<int>(*value), static_cast<int>(*m), std::nullopt};
      std::size_t end = e + 1;
      if (auto y = year_run(end, &end)) d.year = *y;
      return make(r.begin, end, d);
    }
    if (r.ordinal) return make(r.begin, e, Ordinal{*value});
    // H hours [M minutes] [S seconds] [meridiem]
    if ((is(e, "hours") || is(e, "hour")) && r.single() && value && *value <= 23) {
      Time t{static_cast<int>(*value), 0, std::nullopt, Meridiem::NoneExplicit};
      std::size_t end = e + 1;
      if (auto mr = run(end); mr && mr->single() && (is(mr->end, "minutes") || is(mr->end, "minute"))) {
        auto mv = mr->value();
        if (mv && *mv < 60) {
          t.minute = static_cast<int>(*mv);
          end = mr->end + 1;
        }
      }
      if (auto sr = run(end); sr && sr->single() && (is(sr->end, "seconds") || is(sr->end, "second"))) {
        auto sv = sr->value();
        if (sv && *sv < 60) {
          t.second = static_cast<int>(*sv);
          end = sr->end + 1;
        }
      }
      if (auto m = meridiem(end); m && t.hour >= 1 && t.hour <= 12) {
        t.meridiem = m->m;
        end += m->len;
      }
      return make(r.begin, end, t);
    }
    // X past Y
    if (is_conn(e, "past") && r.single() && value) {
      auto r2 = run(e + 1);
      if (r2 && r2->single() && !r2->ordinal) {
        auto v2 = *r2->value();
        std::optional<Time> t;
        if (v2 > 12 && v2 <= 59 && *value >= 1 && *value <= 12)
          t = Time{static_cast<int>(*value), static_cast<int>(v2), std::nullopt, std::nullopt};
        else if (v2 >= 1 && v2 <= 12 && *value >= 1 && *value <= 30)
          t = Time{static_cast<int>(v2), static_cast<int>(*value), std::nullopt, std::nullopt};
        if (t) {
          std::size_t end = r2->end;
          if (auto m = meridiem(end)) {
            t->meridiem = m->m;
            end += m->len;
          }
          return make(r.begin, end, *t);
        }
      }
    }
    // H and quarter / half
    if (is_connector(e) && r.single() && value && *value >= 1 && *value <= 12 &&
        (is_conn(e + 1, "quarter") || is_conn(e + 1, "half"))) {
      Time t{static_cast<int>(*value), is_conn(e + 1, "quarter") ? 15 : 30, std::nullopt, std::nullopt};
      std::size_t end = e + 2;
      if (auto m = meridiem(end)) {
        t.meridiem = m->m;
        end += m->len;
      }
      return make(r.begin, end, t);
    }
    // Clock reading followed by a meridiem.
    if (auto m = meridiem(e)) {
      if (auto t = clock_from_run(r)) {
        t->meridiem = m->m;
        return make(r.begin, e + m->len, *t);
      }
    }
    if (is_conn(e, "point")) {
      if (auto pd = point_digits(e + 1); pd && value) {
        std::size_t end = pd->second;
        if (auto code = currency_at(end)) {
          int digits = loc_.minor_digits_for(code.value());
          if (static_cast<int>(pd->first.size()) <= digits && digits > 0) {
            auto minor = pd->first + std::string(static_cast<std::size_t>(digits) - pd->first.size(), '0');
            return make(r.begin, end + 1, Money{*value, minor, *code});
          }
        }
        if (auto u = unit_at(end)) return make(r.begin, u->second, Measure{Decimal{*value, pd->first}, u->first});
        return make(r.begin, end, Decimal{*value, pd->first});
      }
    }
    if (!value) return std::nullopt;
    if (auto code = currency_at(e)) return money_tail(r.begin, *value, e + 1, *code);
    if (auto code = minor_only(e)) {
      int digits = loc_.minor_digits_for(*code);
      auto s = std::to_string(*value);
      if (static_cast<int>(s.size()) <= digits && *value > 0)
        return make(r.begin, e + 1,
                    Money{0, std::string(static_cast<std::size_t>(digits) - s.size(), '0') + s, *code});
    }
    if (auto u = unit_at(e)) return make(r.begin, u->second, Measure{Decimal{*value, ""}, u->first});
    // Fractions.
    if (is_conn(e, "over")) {
      if (auto d = run(e + 1); d && !d->ordinal && d->value() && *d->value() > 0)
        return make(r.begin, d->end, Fraction{*value, *d->value(), std::nullopt});
    }
    if (auto d = denominator_at(e)) return make(r.begin, e + 1, Fraction{*value, *d, std::nullopt});
    if (is_connector(e)) {
      std::size_t k = e + 1;
      if (is_conn(k, "a")) {
        if (auto d = denominator_at(k + 1)) return make(r.begin, k + 2, Fraction{1, *d, *value});
      } else if (auto n = run(k); n && !n->ordinal && n->value()) {
        if (auto d = denominator_at(n->end)) return make(r.begin, n->end + 1, Fraction{*n->value(), *d, *value});
        if (is_conn(n->end, "over"))
          if (auto dd = run(n->end + 1); dd && dd->value() && *dd->value() > 0)
            return make(r.begin, dd->end, Fraction{*n->value(), *dd->value(), *value});
      }
    }
    // Plain number.
    ParsedEntity p{r.begin, e, Cardinal{0}};
    auto d = r.digits();
    if (r.single()) {
      p.value = Cardinal{*value};
    } else if (d[0] == '0') {
      p.value = DigitSequence{d};
    } else if (telephone_shaped(d)) {
      Telephone t;
      if (d.size() == 7) t.groups = {d.substr(0, 3), d.substr(3)};
      else if (d.size() == 10) t.groups = {d.substr(0, 3), d.substr(3, 3), d.substr(6)};
      else t.groups = {d.substr(0, 1), d.substr(1, 3), d.substr(4, 3), d.substr(7)};
      p.value = t;
    } else if (auto t = cued_clock(r)) {
      p.value = *t;
    } else {
      p.value = Cardinal{*value};
      // Bare "H M" could be a clock reading.
      if (r.chunks.size() >= 2 && clock_from_run(r)) p.confidence = Confidence::Ambiguous;
    }
    if (std::holds_alternative<Cardinal>(p.value)) {
      bool before = is_conn(e, "out") && is_conn(e + 1, "of");
      bool after = r.begin >= 2 && is_conn(r.begin - 2, "out") && is_conn(r.begin - 1, "of");
      p.digit_context = before || after;
    }
    return p;
  }

  std::optional<std::string> minor_only(std::size_t j) const {
    if (j >= t_.size()) return std::nullopt;
    const auto* def = loc_.currency(loc_.default_currency);
    if (def && !def->minor_plural.empty() && (t_[j] == def->minor_plural || t_[j] == def->minor_singular))
      return loc_.default_currency;
    return std::nullopt;
  }
};

}  // namespace detail

// Entities in a lowercased token list, leftmost-longest, non-overlapping.
inline std::vector<ParsedEntity> parse_spoken(const std::vector<std::string>& tokens, const LocaleProfile& locale) {
  std::vector<std::string> low;
  low.reserve(tokens.size());
  for (const auto& t : tokens) low.push_back(to_lower(t));
  return detail::Parser(low, locale).parse();
}

namespace detail {

inline bool is_vowel(char c) { return std::string_view("aeiou").find(c) != std::string_view::npos; }

}  // namespace detail

// Splits a closed-up number word into lexicon words with the fewest pieces,
// e.g. centoventicinque -> cento venticinque. A piece may drop its final
// vowel before a vowel ("centottanta"). Empty when no full split exists.
inline std::vector<std::string> split_number_compound(const std::string& word, const LocaleProfile& locale) {
  const std::size_t n = word.size();
  if (n < 4 || locale.number_word(word)) return {};
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  // best[i]: fewest pieces covering word[i..]; piece[i]: (length, lexicon form).
  std::vector<std::size_t> best(n + 1, kNone);
  std::vector<std::pair<std::size_t, std::string>> piece(n + 1);
  best[n] = 0;
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t len = 2; i + len <= n; ++len) {
      if (best[i + len] == kNone) continue;
      std::string part = word.substr(i, len);
      std::string form;
      if (locale.number_word(part)) {
        form = part;
      } else if (i + len < n && detail::is_vowel(word[i + len])) {
        for (char v : std::string_view("aeiou"))
          if (locale.number_word(part + v)) {
            form = part + v;
            break;
          }
      }
      if (form.empty()) continue;
      if (best[i] == kNone || best[i + len] + 1 < best[i]) {
        best[i] = best[i + len] + 1;
        piece[i] = {len, form};
      }
    }
  }
  if (best[0] == kNone || best[0] < 2) return {};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; i += piece[i].first) out.push_back(piece[i].second);
  return out;
}

using NumberRun = detail::Parser::RunSpan;

// Spoken number runs in a token list; each run lists its digit chunks. Run
// bounds index `tokens`, also when closed-up compounds were split.
inline std::vector<NumberRun> number_runs(const std::vector<std::string>& tokens, const LocaleProfile& locale) {
  std::vector<std::string> low;
  std::vector<std::size_t> origin;
  low.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto t = to_lower(tokens[i]);
    auto parts = locale.compound_numbers ? split_number_compound(t, locale) : std::vector<std::string>{};
    if (parts.empty()) parts.push_back(std::move(t));
    for (auto& p : parts) {
      low.push_back(std::move(p));
      origin.push_back(i);
    }
  }
  auto runs = detail::Parser(low, locale).runs();
  for (auto& r : runs) {
    r.begin = origin[r.begin];
    r.end = origin[r.end - 1] + 1;
  }
  // Runs that met inside one compound collapse into the earlier one.
  std::vector<NumberRun> out;
  for (auto& r : runs) {
    if (!out.empty() && r.begin < out.back().end) {
      out.back().end = std::max(out.back().end, r.end);
      out.back().chunks.insert(out.back().chunks.end(), r.chunks.begin(), r.chunks.end());
    } else {
      out.push_back(std::move(r));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

struct RenderContext {
  bool digit_context = false;
};

namespace detail {

inline std::string group_digits(const std::string& digits, const LocaleProfile& locale) {
  if (static_cast<int>(digits.size()) < locale.group_min_digits || locale.group_separators.empty() ||
      locale.group_size <= 0)
    return digits;
  const std::string& sep = locale.group_separators.front();
  std::string out;
  std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i && (n - i) % static_cast<std::size_t>(locale.group_size) == 0) out += sep;
    out += digits[i];
  }
  return out;
}

inline std::string render_int(std::int64_t v, const LocaleProfile& locale) {
  if (v < 0) return "-" + group_digits(std::to_string(-v), locale);
  return group_digits(std::to_string(v), locale);
}

inline std::string two(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

inline std::string render_amount(std::int64_t integer, const std::string& frac, const LocaleProfile& locale) {
  auto s = render_int(integer, locale);
  if (!frac.empty()) s += locale.decimal_separator + frac;
  return s;
}

}  // namespace detail

inline std::string render_written(const CanonicalValue& value, const LocaleProfile& locale,
                                  RenderContext ctx = {}) {
  using detail::render_int;
  using detail::two;
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cardinal>) {
          const auto& pol = locale.small_cardinal;
          if (pol.prefer_words && !ctx.digit_context && x.value >= 1 && x.value <= pol.threshold)
            if (auto w = locale.word_for(NumberRole::Unit, x.value)) return *w;
          return render_int(x.value, locale);
        } else if constexpr (std::is_same_v<T, Ordinal>) {
          return render_int(x.value, locale) + locale.ordinal_suffix(x.value);
        } else if constexpr (std::is_same_v<T, Decimal>) {
          return detail::render_amount(x.integer, x.fraction, locale);
        } else if constexpr (std::is_same_v<T, Fraction>) {
          std::string s = std::to_string(x.numerator) + "/" + std::to_string(x.denominator);
          return x.whole ? std::to_string(*x.whole) + " " + s : s;
        } else if constexpr (std::is_same_v<T, Money>) {
          const auto* cur = locale.currency(x.currency);
          std::string sym = cur ? cur->symbol : x.currency;
          auto amount = detail::render_amount(x.major, x.minor.value_or(""), locale);
          return locale.currency_prefix ? sym + amount : amount + " " + sym;
        } else if constexpr (std::is_same_v<T, Time>) {
          bool twelve = x.meridiem && *x.meridiem != Meridiem::NoneExplicit;
          int h = x.hour;
          if (locale.prefers_24h) {
            if (twelve) {
              if (*x.meridiem == Meridiem::Pm && h != 12) h += 12;
              if (*x.meridiem == Meridiem::Am && h == 12) h = 0;
            }
            if (locale.time_hour_only && x.minute == 0 && !x.second)
              return std::to_string(h) + locale.time_separator;
            std::string s = std::to_string(h) + locale.time_separator + two(x.minute);
            if (x.second) s += ":" + two(*x.second);
            return s;
          }
          std::string s = std::to_string(h);
          if (x.minute || x.second || !twelve) s += locale.time_separator + two(x.minute);
          if (x.second) s += locale.time_separator + two(*x.second);
          if (twelve) s += " " + (*x.meridiem == Meridiem::Am ? locale.am_written : locale.pm_written);
          return s;
        } else if constexpr (std::is_same_v<T, Date>) {
          const auto& sep = locale.date_separator;
          if (x.day && x.month && x.year) {
            auto d = two(*x.day), m = two(*x.month), y = std::to_string(*x.year);
            switch (locale.date_field_order) {
              case FieldOrder::MDY: return m + sep + d + sep + y;
              case FieldOrder::DMY: return d + sep + m + sep + y;
              case FieldOrder::YMD: return y + "-" + m + "-" + d;
            }
          }
          std::string mon = x.month ? locale.month_names.at(*x.month - 1) : "";
          if (x.month && x.year && !x.day) {
            if (locale.language == "es") return mon + " de " + std::to_string(*x.year);
            return mon + " " + std::to_string(*x.year);
          }
          if (x.day && x.month) {
            if (locale.date_field_order == FieldOrder::MDY) return mon + " " + std::to_string(*x.day);
            if (locale.language == "de") return std::to_string(*x.day) + ". " + mon;
            if (locale.language == "es") return std::to_string(*x.day) + " de " + mon;
            return std::to_string(*x.day) + " " + mon;
          }
          if (x.year) return std::to_string(*x.year);
          return mon;
        } else if constexpr (std::is_same_v<T, Measure>) {
          auto it = locale.units.find(x.unit);
          std::string unit = it == locale.units.end() ? x.unit : it->second.written;
          bool space = it == locale.units.end() || it->second.space;
          return detail::render_amount(x.magnitude.integer, x.magnitude.fraction, locale) + (space ? " " : "") + unit;
        } else if constexpr (std::is_same_v<T, Telephone>) {
          if (locale.language == "en") {
            std::string s = x.groups.size() == 4 ? "+" : "";
            s += join(x.groups, "-");
            return s;
          }
          return join(x.groups, " ");
        } else {
          return x.digits;
        }
      },
      value);
}

// Replaces every spoken entity with its written form; other bytes are kept.
inline std::string itn(const std::string& sentence, const LocaleProfile& locale) {
  auto toks = tokenize(sentence);
  auto texts = token_texts(toks);
  auto ents = parse_spoken(texts, locale);
  std::string out;
  std::size_t pos = 0;
  for (const auto& e : ents) {
    std::size_t b = toks[e.begin].begin;
    std::size_t en = toks[e.end - 1].end;
    out.append(sentence, pos, b - pos);
    auto surface = sentence.substr(b, en - b);
    auto written = render_written(e.value, locale, {e.digit_context});
    // Small cardinals kept as words keep their original casing.
    out += to_lower(surface) == written ? surface : written;
    pos = en;
  }
  out.append(sentence, pos, std::string::npos);
  return out;
}

}  // namespace itnaug
