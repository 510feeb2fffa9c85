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

// Subcommand implementations behind the itnaug executable.

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "itnaug/domain.hpp"
#include "itnaug/evaluator.hpp"
#include "itnaug/itn_rules.hpp"
#include "itnaug/locale.hpp"
#include "itnaug/model_bridge.hpp"
#include "itnaug/pipeline.hpp"
#include "itnaug/segmenter.hpp"
#include "itnaug/spoken_generator.hpp"

namespace itnaug {

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string output;
  std::string locale = "en";
  std::string source_locale = "en";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  // augment
  std::size_t max_variants = 16;
  std::size_t max_pairs = 8;
  std::vector<std::string> classes;  // empty: all
  std::string format = "jsonl";
  std::string stats;
  // filter
  std::string source;
  std::string translated;
  std::string report;
  std::string wer_threshold = "0";
  // evaluate
  std::string eval_case = "a";
  std::string predictions;
  std::string references;
  std::string spoken;
  std::string tsv;
  // bridge-run
  std::string bridge;
  std::string failed;
};

// "1/10", "0.1" or "0".
inline Rational parse_rational(const std::string& s) {
  auto bad = [&] { return ParseError("not a number: '" + s + "'"); };
  if (s.empty()) throw bad();
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::size_t a = 0, b = 0;
      auto n = std::stoll(s.substr(0, slash), &a);
      auto d = std::stoll(s.substr(slash + 1), &b);
      if (a != slash || b != s.size() - slash - 1 || d == 0) throw bad();
      return Rational(n, d);
    }
    auto dot = s.find('.');
    std::string ip = s.substr(0, dot), fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        fp.size() > 12)
      throw bad();
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    return Rational((ip.empty() ? 0 : std::stoll(ip)) * den + (fp.empty() ? 0 : std::stoll(fp)), den);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

namespace detail {

class OutFile {
 public:
  explicit OutFile(const std::string& path) : path_(path) {
    if (path.empty() || path == "-") return;
    if (auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) std::filesystem::create_directories(dir);
    file_.open(path, std::ios::binary);
    if (!file_) throw IoError("cannot write '" + path + "'");
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close() {
    if (!file_.is_open()) {
      std::cout.flush();
      return;
    }
    file_.close();
    if (!file_) throw IoError("error writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
};

inline std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

// Runs f(i) for i in [0, n) on `jobs` threads; the first exception wins.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& f) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errs(jobs);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < jobs; ++k)
    pool.emplace_back([&, k] {
      try {
        for (std::size_t i; (i = next++) < n;) f(i);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

// JSON Lines whose records carry "written" or, failing that, "text".
inline std::vector<SpokenWrittenPair> read_written_stream(const std::string& path) {
  std::vector<SpokenWrittenPair> out;
  auto data = read_file(path);
  if (auto bad = find_invalid_utf8(data)) throw ParseError(path + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  std::istringstream in(data);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      SpokenWrittenPair p;
      p.id = id_from_json(j.at("id"));
      p.written = j.contains("written") ? j.at("written").get<std::string>() : j.at("text").get<std::string>();
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

// Same, for a stream of spoken sentences.
inline std::vector<TextItem> read_spoken_stream(const std::string& path) {
  auto data = read_file(path);
  if (auto bad = find_invalid_utf8(data)) throw ParseError(path + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  std::vector<TextItem> out;
  std::istringstream in(data);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      TextItem t;
      t.id = id_from_json(j.at("id"));
      if (j.contains("text")) {
        t.text = j.at("text").get<std::string>();
      } else if (j.at("spoken").is_string()) {
        t.text = j.at("spoken").get<std::string>();
      } else {
        t.text = join(j.at("spoken").get<std::vector<std::string>>());
      }
      out.push_back(std::move(t));
    } catch (const std::exception& e) {
      throw ParseError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<TextItem> as_text_items(const std::vector<SpokenWrittenPair>& pairs) {
  std::vector<TextItem> out;
  for (const auto& p : pairs) out.push_back({p.id, p.written});
  return out;
}

inline json pair_stats(const std::vector<SpokenWrittenPair>& pairs) {
  std::map<std::string, std::size_t> per_class;
  for (auto c : kAllClasses) per_class[std::string(class_name(c))] = 0;
  std::size_t entities = 0;
  for (const auto& p : pairs)
    for (const auto& a : p.alignments) {
      ++per_class[std::string(class_name(a.span.cls))];
      ++entities;
    }
  json j{{"pairs", pairs.size()}, {"aligned-entities", entities}, {"per-class", per_class}};
  if (entities) {
    j["diversity-factor"] = rational_to_json(diversity_factor(pairs));
  } else {
    j["diversity-factor"] = nullptr;
  }
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands. Each returns the process exit status.

inline int cmd_augment(const RunConfig& cfg) {
  auto locale = resolve_locale(cfg.locale);
  AugmentationConfig ac;
  ac.max_variants_per_entity = cfg.max_variants;
  ac.max_pairs_per_sentence = cfg.max_pairs;
  ac.sampling_seed = cfg.seed;
  if (!cfg.classes.empty()) {
    ac.enabled_classes.clear();
    for (const auto& c : cfg.classes) ac.enabled_classes.insert(parse_class(c));
  }
  ac.validate();
  if (cfg.format != "jsonl" && cfg.format != "tsv") throw ValidationError("--format must be jsonl or tsv");

  auto sentences = ingest_text(detail::read_input(cfg.input), cfg.input.empty() ? "<stdin>" : cfg.input);
  std::vector<std::vector<SpokenWrittenPair>> out(sentences.size());
  std::vector<std::string> errors(sentences.size());
  std::vector<std::map<EntityClass, std::size_t>> counts(sentences.size());
  detail::parallel_for(sentences.size(), cfg.jobs, [&](std::size_t i) {
    const auto& s = sentences[i];
    try {
      auto seg = segment(s.text, locale, ac.enabled_classes);
      for (const auto& sp : seg.spans) ++counts[i][sp.cls];
      out[i] = rewrite(s.text, seg, locale, ac, std::stoull(s.id), s.id);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });

  detail::OutFile file(cfg.output);
  std::vector<SpokenWrittenPair> all;
  std::size_t picked = 0, failed = 0;
  std::map<std::string, std::size_t> per_class;
  for (auto c : kAllClasses) per_class[std::string(class_name(c))] = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      std::cerr << "itnaug: line " << sentences[i].id << ": " << errors[i] << "\n";
      continue;
    }
    if (!out[i].empty()) ++picked;
    for (const auto& [c, n] : counts[i]) per_class[std::string(class_name(c))] += n;
    if (cfg.format == "tsv") {
      write_pairs_tsv(file.os(), out[i]);
    } else {
      write_pairs_jsonl(file.os(), out[i]);
    }
    all.insert(all.end(), std::make_move_iterator(out[i].begin()), std::make_move_iterator(out[i].end()));
  }
  file.close();

  if (!cfg.stats.empty()) {
    std::size_t entities = 0;
    for (const auto& [_, n] : per_class) entities += n;
    json st{{"sentences", sentences.size()},
            {"picked", picked},
            {"failed", failed},
            {"pairs", all.size()},
            {"entities", entities},
            {"per-class", per_class},
            {"seed", cfg.seed}};
    st["diversity-factor"] = all.empty() ? json(nullptr) : rational_to_json(diversity_factor(all));
    detail::OutFile sf(cfg.stats);
    sf.os() << st.dump(2) << "\n";
    sf.close();
  }
  return 0;
}

// Line for line; blank lines stay blank.
inline int cmd_itn(const RunConfig& cfg) {
  auto locale = resolve_locale(cfg.locale);
  auto data = detail::read_input(cfg.input);
  if (auto bad = find_invalid_utf8(data))
    throw ParseError((cfg.input.empty() ? std::string("<stdin>") : cfg.input) + ": invalid UTF-8 at byte offset " +
                     std::to_string(*bad));
  std::vector<std::string> lines;
  std::istringstream in(data);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    lines.push_back(std::move(l));
  }
  std::vector<std::string> out(lines.size());
  detail::parallel_for(lines.size(), cfg.jobs, [&](std::size_t i) { out[i] = itn(lines[i], locale); });
  detail::OutFile file(cfg.output);
  for (const auto& l : out) file.os() << l << '\n';
  file.close();
  return 0;
}

inline int cmd_filter(const RunConfig& cfg) {
  auto target = resolve_locale(cfg.locale);
  auto source_locale = resolve_locale(cfg.source_locale);
  auto threshold = parse_rational(cfg.wer_threshold);
  auto src = read_pairs(cfg.source);
  auto tgt = read_pairs(cfg.translated);
  auto res = filter_pairs(src, tgt, target, threshold, source_locale);
  detail::OutFile file(cfg.output);
  write_pairs_jsonl(file.os(), res.kept);
  file.close();
  auto rep = res.report.to_json();
  rep["wer-threshold"] = rational_to_json(threshold);
  if (cfg.report.empty()) {
    std::cerr << rep.dump(2) << "\n";
  } else {
    detail::OutFile rf(cfg.report);
    rf.os() << rep.dump(2) << "\n";
    rf.close();
  }
  return 0;
}

inline int cmd_evaluate(const RunConfig& cfg) {
  auto locale = resolve_locale(cfg.locale);
  EvalReport report;
  if (cfg.eval_case == "a") {
    auto refs = detail::read_written_stream(cfg.references);
    auto preds = detail::read_written_stream(cfg.predictions);
    report = evaluate_case_a(preds, refs, locale);
    report.non_itn_accuracy = non_itn_accuracy(preds, refs, locale);
  } else if (cfg.eval_case == "b") {
    auto english = resolve_locale(cfg.source_locale);
    auto refs = read_pairs(cfg.references);
    auto spoken = detail::read_spoken_stream(cfg.spoken);
    auto preds = detail::as_text_items(detail::read_written_stream(cfg.predictions));
    report = evaluate_case_b(refs, spoken, preds, locale, english);
  } else {
    throw ValidationError("--case must be a or b");
  }
  detail::OutFile file(cfg.output);
  file.os() << report_to_json(report).dump(2) << "\n";
  file.close();
  if (!cfg.tsv.empty()) {
    detail::OutFile tf(cfg.tsv);
    write_report_tsv(tf.os(), report);
    tf.close();
  }
  return 0;
}

inline int cmd_bridge_run(const RunConfig& cfg) {
  auto spec = load_bridge_spec(cfg.bridge);
  auto items = read_text_items_text(detail::read_input(cfg.input), cfg.input.empty() ? "<stdin>" : cfg.input);
  auto results = run_parallel(items, spec, cfg.jobs);
  detail::OutFile file(cfg.output);
  std::string failed_path = cfg.failed.empty() && !cfg.output.empty() && cfg.output != "-"
                                ? cfg.output + ".failed.jsonl"
                                : cfg.failed;
  detail::OutFile ff(failed_path.empty() ? "-" : failed_path);
  std::size_t nfail = 0;
  for (const auto& r : results) {
    if (r.ok()) {
      file.os() << json{{"id", r.id}, {"text", *r.text}}.dump() << '\n';
    } else {
      ++nfail;
      (failed_path.empty() ? std::cerr : ff.os()) << json{{"id", r.id}, {"error", r.error}}.dump() << '\n';
    }
  }
  file.close();
  ff.close();
  std::cerr << "itnaug: " << results.size() - nfail << " ok, " << nfail << " failed\n";
  return 0;
}

inline int cmd_stats(const RunConfig& cfg) {
  auto pairs = read_pairs_text(detail::read_input(cfg.input), cfg.input.empty() ? "<stdin>" : cfg.input);
  detail::OutFile file(cfg.output);
  file.os() << detail::pair_stats(pairs).dump(2) << "\n";
  file.close();
  return 0;
}

// ---------------------------------------------------------------------------
// Argument handling

namespace detail {

// Applies --config values that the command line did not set explicitly.
inline void apply_config_file(RunConfig& cfg, const json& j, const std::function<bool(const std::string&)>& on_cli) {
  auto str = [&](const char* k, std::string& dst) {
    if (j.contains(k) && !on_cli(k)) dst = j.at(k).is_string() ? j.at(k).get<std::string>() : j.at(k).dump();
  };
  auto num = [&](const char* k, auto& dst) {
    if (j.contains(k) && !on_cli(k)) dst = j.at(k).get<std::decay_t<decltype(dst)>>();
  };
  str("input", cfg.input);
  str("output", cfg.output);
  str("locale", cfg.locale);
  str("source-locale", cfg.source_locale);
  num("seed", cfg.seed);
  num("jobs", cfg.jobs);
  num("max-variants", cfg.max_variants);
  num("max-pairs", cfg.max_pairs);
  if (j.contains("classes") && !on_cli("classes")) cfg.classes = j.at("classes").get<std::vector<std::string>>();
  str("format", cfg.format);
  str("stats", cfg.stats);
  str("source", cfg.source);
  str("translated", cfg.translated);
  str("report", cfg.report);
  str("wer-threshold", cfg.wer_threshold);
  str("case", cfg.eval_case);
  str("predictions", cfg.predictions);
  str("references", cfg.references);
  str("spoken", cfg.spoken);
  str("tsv", cfg.tsv);
  str("bridge", cfg.bridge);
  str("failed", cfg.failed);
}

}  // namespace detail

inline int run_cli(int argc, char** argv) {
  CLI::App app{"Spoken/written text pair augmentation, rule-based ITN and ITN evaluation"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  auto shared = [&](CLI::App* sc) {
    sc->add_option("--locale", cfg.locale, "Locale tag or profile path")->capture_default_str();
    sc->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
    sc->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sc->add_option("--config", config_path, "JSON file with option values; flags win");
    sc->add_option("-i,--input", cfg.input, "Input file (default stdin)");
    sc->add_option("-o,--output", cfg.output, "Output file (default stdout)");
  };

  auto* augment = app.add_subcommand("augment", "Generate spoken/written pairs from a written corpus");
  shared(augment);
  augment->add_option("--max-variants", cfg.max_variants, "Variants kept per entity")->capture_default_str();
  augment->add_option("--max-pairs", cfg.max_pairs, "Pairs kept per multi-entity sentence")->capture_default_str();
  augment->add_option("--classes", cfg.classes, "Entity classes to enable")->delimiter(',');
  augment->add_option("--format", cfg.format, "jsonl or tsv")->capture_default_str();
  augment->add_option("--stats", cfg.stats, "Write run statistics here");

  auto* itn_cmd = app.add_subcommand("itn", "Rule-based spoken-to-written conversion, line by line");
  shared(itn_cmd);

  auto* filter = app.add_subcommand("filter", "Quality-filter translated pairs");
  shared(filter);
  filter->add_option("--source", cfg.source, "Source pair file");
  filter->add_option("--translated", cfg.translated, "Translated pair file");
  filter->add_option("--source-locale", cfg.source_locale, "Locale of the source pairs")->capture_default_str();
  filter->add_option("--report", cfg.report, "FilterReport output (default stderr)");
  filter->add_option("--wer-threshold", cfg.wer_threshold, "Maximum WER outside entities")->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Score ITN output");
  shared(evaluate);
  evaluate->add_option("--case", cfg.eval_case, "a: target references; b: English references")->capture_default_str();
  evaluate->add_option("--predictions", cfg.predictions, "Predicted written text");
  evaluate->add_option("--references", cfg.references, "Reference pairs");
  evaluate->add_option("--spoken", cfg.spoken, "Translated spoken input (case b)");
  evaluate->add_option("--source-locale", cfg.source_locale, "Reference locale (case b)")->capture_default_str();
  evaluate->add_option("--tsv", cfg.tsv, "Per-class table output");

  auto* bridge = app.add_subcommand("bridge-run", "Run an external model over {id,text} lines");
  shared(bridge);
  bridge->add_option("--bridge", cfg.bridge, "Bridge spec JSON");
  bridge->add_option("--failed", cfg.failed, "Failed-id sidecar (default <output>.failed.jsonl)");

  auto* stats = app.add_subcommand("stats", "Summarize a pair file");
  shared(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse problem is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  CLI::App* sc = app.get_subcommands().front();
  cfg.subcommand = sc->get_name();
  try {
    if (!config_path.empty()) {
      json j = detail::parse_json_document(detail::read_file(config_path), config_path);
      detail::apply_config_file(cfg, j, [&](const std::string& k) {
        try {
          return sc->get_option("--" + k)->count() > 0;
        } catch (const CLI::OptionNotFound&) {
          return false;
        }
      });
    }
    // Checked after the config merge, so the file may supply them.
    std::string missing;
    auto need = [&](const std::string& v, const char* flag) {
      if (v.empty() && missing.empty()) missing = flag;
    };
    if (cfg.subcommand == "filter") {
      need(cfg.source, "--source");
      need(cfg.translated, "--translated");
    } else if (cfg.subcommand == "evaluate") {
      need(cfg.predictions, "--predictions");
      need(cfg.references, "--references");
      if (cfg.eval_case == "b") need(cfg.spoken, "--spoken");
    } else if (cfg.subcommand == "bridge-run") {
      need(cfg.bridge, "--bridge");
    }
    if (!missing.empty()) {
      std::cerr << "itnaug " << cfg.subcommand << ": " << missing << " is required\n";
      return 2;
    }
    if (cfg.subcommand == "augment") return cmd_augment(cfg);
    if (cfg.subcommand == "itn") return cmd_itn(cfg);
    if (cfg.subcommand == "filter") return cmd_filter(cfg);
    if (cfg.subcommand == "evaluate") return cmd_evaluate(cfg);
    if (cfg.subcommand == "bridge-run") return cmd_bridge_run(cfg);
    if (cfg.subcommand == "stats") return cmd_stats(cfg);
  } catch (const MisalignedStreamError& e) {
    std::cerr << "itnaug: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "itnaug: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace itnaug
