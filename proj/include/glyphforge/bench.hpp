#pragma once

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/evr.hpp"
#include "glyphforge/image.hpp"
#include "glyphforge/parallel.hpp"
#include "glyphforge/reward.hpp"

namespace glyphforge::bench {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ===========================================================================
// Cases
// ===========================================================================

struct BenchCase {
  std::string id;
  fs::path source;
  std::string instruction;
  Operation operation = Operation::replace;
  std::string language = "en";
  std::optional<fs::path> reference;
};

// Manifest: one JSON object per line with id, source, instruction, operation,
// language and an optional reference. Paths are relative to the manifest.
inline std::vector<BenchCase> load_cases(const fs::path& manifest) {
  if (!fs::exists(manifest)) fail(ErrorKind::io, "load_cases", "missing manifest " + manifest.string());
  const auto base = manifest.parent_path();
  const auto text = read_text(manifest);
  std::vector<BenchCase> cases;
  std::set<std::string> ids;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto where = manifest.string() + ":" + std::to_string(line_no);
    BenchCase c;
    try {
      const auto j = json::parse(line);
      c.id = j.at("id").get<std::string>();
      c.source = base / j.at("source").get<std::string>();
      c.instruction = j.at("instruction").get<std::string>();
      c.operation = require_operation(j.at("operation").get<std::string>(), "load_cases");
      c.language = j.value("language", std::string("en"));
      if (j.contains("reference") && !j["reference"].is_null()) c.reference = base / j["reference"].get<std::string>();
    } catch (const json::exception& e) {
      fail(ErrorKind::parse, "load_cases", where + ": " + e.what());
    }
    if (!ids.insert(c.id).second) fail(ErrorKind::config, "load_cases", where + ": duplicate case id '" + c.id + "'");
    if (!fs::exists(c.source)) fail(ErrorKind::io, "load_cases", where + ": missing source " + c.source.string());
    if (c.reference && !fs::exists(*c.reference))
      fail(ErrorKind::io, "load_cases", where + ": missing reference " + c.reference->string());
    cases.push_back(std::move(c));
  }
  return cases;
}

// A manifest file, or a directory holding cases.jsonl.
inline fs::path manifest_path(const fs::path& p) { return fs::is_directory(p) ? p / "cases.jsonl" : p; }

// Offline editor: answers each case with its reference image. Cases without a
// reference fail, which exercises the failed-editor path.
class ReferenceEditor : public evr::Executor {
 public:
  explicit ReferenceEditor(const std::vector<BenchCase>& cases) {
    for (const auto& c : cases)
      if (c.reference) refs_[c.id] = *c.reference;
  }
  Image execute(const evr::ExecuteRequest& r) override {
    ++calls_;
    auto it = refs_.find(r.id);
    if (it == refs_.end()) fail(ErrorKind::io, "editor", "case '" + r.id + "' has no reference image");
    return read_png(it->second);
  }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::map<std::string, fs::path> refs_;
  std::atomic<std::size_t> calls_{0};
};

// ===========================================================================
// Running
// ===========================================================================

struct CaseResult {
  std::string id;
  std::string edited;  // relative to the output directory
  double ia = 0.0;
  double tc = 0.0;
  double bp = 0.0;
  std::array<std::string, 3> rationales;
  bool failed = false;
  std::string error;
};

inline constexpr std::array<reward::Dimension, 3> kBenchDimensions = {
    reward::Dimension::adherence, reward::Dimension::clarity, reward::Dimension::preservation};

// Dimension score on the 0-9 scale.
inline double bench_score(const reward::ScoreDistribution& d) {
  return reward::kMaxScore * reward::expected_score(d);
}

struct BenchOptions {
  fs::path out_dir;
  std::string editor_model = "editor";
  std::size_t workers = 1;
};

namespace detail {

inline std::string cache_key(const std::string& case_id, const std::string& editor_model, const std::string& judge_model) {
  return hex64(Fnv1a64{}.update(case_id).update_byte(0x1F).update(editor_model).update_byte(0x1F).update(judge_model).digest());
}

inline ordered_json result_json(const CaseResult& r) {
  ordered_json j;
  j["id"] = r.id;
  j["edited"] = r.edited;
  j["ia"] = r.ia;
  j["tc"] = r.tc;
  j["bp"] = r.bp;
  j["rationales"] = r.rationales;
  return j;
}

inline CaseResult result_from_json(const json& j) {
  CaseResult r;
  r.id = j.at("id").get<std::string>();
  r.edited = j.at("edited").get<std::string>();
  r.ia = j.at("ia").get<double>();
  r.tc = j.at("tc").get<double>();
  r.bp = j.at("bp").get<double>();
  r.rationales = j.at("rationales").get<std::array<std::string, 3>>();
  return r;
}

inline std::string safe_name(const std::string& id) {
  std::string out;
  for (char c : id) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

}  // namespace detail

// Edits every case, then scores IA/TC/BP with three judge calls. Completed
// results are cached under out_dir/cache by (case id, editor model, judge
// model); a warm rerun makes no editor or judge calls. Editor failures mark
// the case failed and are not cached.
inline std::vector<CaseResult> run_bench(const std::vector<BenchCase>& cases, evr::Executor& editor,
                                         reward::JudgeClient& judge, const BenchOptions& options) {
  const auto cache_dir = options.out_dir / "cache";
  const auto edited_dir = options.out_dir / "edited";
  fs::create_directories(cache_dir);
  fs::create_directories(edited_dir);
  std::vector<CaseResult> results(cases.size());
  parallel_for(cases.size(), options.workers, [&](std::size_t i) {
    const auto& c = cases[i];
    const auto cache_file = cache_dir / (detail::cache_key(c.id, options.editor_model, judge.model_id()) + ".json");
    if (fs::exists(cache_file)) {
      results[i] = detail::result_from_json(json::parse(read_text(cache_file)));
      return;
    }
    CaseResult r;
    r.id = c.id;
    const Image source = read_png(c.source);
    Image edited;
    try {
      edited = editor.execute({c.id, 1, c.instruction, {}, &source});
    } catch (const Error& e) {
      r.failed = true;
      r.error = e.what();
      results[i] = std::move(r);
      return;
    }
    r.edited = "edited/" + detail::safe_name(c.id) + ".png";
    write_png(options.out_dir / r.edited, edited);
    std::array<double*, 3> slots = {&r.ia, &r.tc, &r.bp};
    for (std::size_t d = 0; d < kBenchDimensions.size(); ++d) {
      reward::JudgeRequest req;
      req.id = c.id;
      req.dimension = kBenchDimensions[d];
      req.operation = c.operation;
      req.instruction = c.instruction;
      req.source = &source;
      req.edited = &edited;
      const auto res = judge.judge(req);
      *slots[d] = bench_score(res.distribution);
      r.rationales[d] = res.rationale;
    }
    for (double s : {r.ia, r.tc, r.bp})
      if (!(s >= 0.0 && s <= 9.0)) fail(ErrorKind::invariant, "run_bench", "score outside [0,9] for " + c.id);
    const auto tmp = cache_file.string() + ".tmp";
    write_text(tmp, detail::result_json(r).dump());
    fs::rename(tmp, cache_file);
    results[i] = std::move(r);
  });
  return results;
}

// ===========================================================================
// Aggregation and reports
// ===========================================================================

struct Cell {
  std::size_t cases = 0;   // scored cases
  std::size_t failed = 0;  // editor failures, excluded from the means
  double ia = 0.0;
  double tc = 0.0;
  double bp = 0.0;
  bool empty() const noexcept { return cases == 0; }
};

struct ReportConfig {
  std::string judge_endpoint = "mock";
  std::string judge_model;
  std::string editor_model;
  std::uint64_t seed = 0;
  reward::RewardWeights weights{};
};

struct BenchReport {
  std::array<Cell, 8> operations;  // kAllOperations order
  Cell overall;
  ReportConfig config;
};

// Per-operation means and the case-level (micro) overall mean. Results are
// summed in case-id order so the report does not depend on scheduling.
inline BenchReport aggregate(std::vector<CaseResult> results, const std::vector<BenchCase>& cases,
                             const ReportConfig& config = {}) {
  std::map<std::string, Operation> op_of;
  for (const auto& c : cases) op_of[c.id] = c.operation;
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  BenchReport rep;
  rep.config = config;
  auto add = [](Cell& cell, const CaseResult& r) {
    if (r.failed) {
      ++cell.failed;
      return;
    }
    ++cell.cases;
    cell.ia += r.ia;
    cell.tc += r.tc;
    cell.bp += r.bp;
  };
  for (const auto& r : results) {
    auto it = op_of.find(r.id);
    if (it == op_of.end()) fail(ErrorKind::consistency, "aggregate", "result '" + r.id + "' has no matching case");
    add(rep.operations[static_cast<std::size_t>(it->second)], r);
    add(rep.overall, r);
  }
  auto finish = [](Cell& cell) {
    if (cell.empty()) return;
    const auto n = static_cast<double>(cell.cases);
    cell.ia /= n;
    cell.tc /= n;
    cell.bp /= n;
  };
  for (auto& cell : rep.operations) finish(cell);
  finish(rep.overall);
  return rep;
}

namespace detail {

inline std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

inline constexpr std::array<const char*, 8> kColumnTitles = {"Add",       "Replace", "Delete",   "Rearrange",
                                                             "Translate", "Style",   "Combined", "Reasoning"};

inline std::vector<std::string> config_lines(const ReportConfig& c) {
  const auto w = c.weights.normalized();
  return {"judge_endpoint: " + c.judge_endpoint,
          "judge_model: " + c.judge_model,
          "editor_model: " + c.editor_model,
          "seed: " + std::to_string(c.seed),
          "lambda: adherence=" + format("%g", w.adherence) + " clarity=" + format("%g", w.clarity) +
              " preservation=" + format("%g", w.preservation) + " quality=" + format("%g", w.quality),
          "overall: micro-average over scored cases"};
}

}  // namespace detail

inline std::string report_markdown(const BenchReport& rep) {
  std::ostringstream out;
  out << "<!--\n";
  for (const auto& l : detail::config_lines(rep.config)) out << l << "\n";
  out << "-->\n# Benchmark report\n\n| Model |";
  for (const auto* t : detail::kColumnTitles) out << " " << t << " IA | " << t << " TC | " << t << " BP |";
  out << " Overall IA | Overall TC | Overall BP |\n|---|";
  for (int i = 0; i < 27; ++i) out << "---:|";
  out << "\n| " << rep.config.editor_model << " |";
  auto wide = [&](const Cell& c) {
    if (c.empty()) {
      out << " empty | empty | empty |";
      return;
    }
    for (double v : {c.ia, c.tc, c.bp}) out << " " << detail::format("%.2f", v) << " |";
  };
  for (const auto& c : rep.operations) wide(c);
  wide(rep.overall);
  out << "\n\n| Operation | Cases | Failed | IA | TC | BP |\n|---|---:|---:|---:|---:|---:|\n";
  auto row = [&](std::string_view name, const Cell& c) {
    out << "| " << name << " | " << c.cases << " | " << c.failed << " |";
    if (c.empty()) {
      out << " empty | empty | empty |\n";
      return;
    }
    for (double v : {c.ia, c.tc, c.bp}) out << " " << detail::format("%.4f", v) << " |";
    out << "\n";
  };
  for (std::size_t i = 0; i < kAllOperations.size(); ++i) row(to_string(kAllOperations[i]), rep.operations[i]);
  row("overall", rep.overall);
  return out.str();
}

inline std::string report_csv(const BenchReport& rep) {
  std::ostringstream out;
  for (const auto& l : detail::config_lines(rep.config)) out << "# " << l << "\n";
  out << "operation,cases,failed,ia,tc,bp\n";
  auto row = [&](std::string_view name, const Cell& c) {
    out << name << "," << c.cases << "," << c.failed;
    for (double v : {c.ia, c.tc, c.bp}) out << "," << (c.empty() ? std::string() : detail::format("%.17g", v));
    out << "\n";
  };
  for (std::size_t i = 0; i < kAllOperations.size(); ++i) row(to_string(kAllOperations[i]), rep.operations[i]);
  row("overall", rep.overall);
  return out.str();
}

inline std::string emit_report(const BenchReport& rep, std::string_view format) {
  if (format == "md" || format == "markdown") return report_markdown(rep);
  if (format == "csv") return report_csv(rep);
  fail(ErrorKind::config, "emit_report", "unknown report format '" + std::string(format) + "'");
}

// Reads the cells back from report_csv output (config comments ignored).
inline BenchReport parse_report_csv(std::string_view text) {
  BenchReport rep;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      if (line != "operation,cases,failed,ia,tc,bp") fail(ErrorKind::parse, "parse_report_csv", "unexpected header");
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::size_t p = 0;
    while (true) {
      const auto comma = line.find(',', p);
      f.push_back(line.substr(p, comma == std::string::npos ? std::string::npos : comma - p));
      if (comma == std::string::npos) break;
      p = comma + 1;
    }
    if (f.size() != 6) fail(ErrorKind::parse, "parse_report_csv", "expected 6 fields in '" + line + "'");
    Cell c;
    try {
      c.cases = std::stoull(f[1]);
      c.failed = std::stoull(f[2]);
      if (!f[3].empty()) {
        c.ia = std::stod(f[3]);
        c.tc = std::stod(f[4]);
        c.bp = std::stod(f[5]);
      }
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "parse_report_csv", "bad number in '" + line + "'");
    }
    if (f[0] == "overall") {
      rep.overall = c;
    } else {
      const auto op = parse_operation(f[0]);
      if (!op) fail(ErrorKind::parse, "parse_report_csv", "unknown operation '" + f[0] + "'");
      rep.operations[static_cast<std::size_t>(*op)] = c;
    }
  }
  return rep;
}

inline void write_report(const BenchReport& rep, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text(out_dir / "report.md", emit_report(rep, "md"));
  write_text(out_dir / "report.csv", emit_report(rep, "csv"));
}

// ===========================================================================
// Corpus statistics
// ===========================================================================

struct BundleMeta {
  Operation operation = Operation::replace;
  std::string language;
  std::optional<std::size_t> regions;
  std::optional<std::size_t> edited_chars;
};

inline constexpr std::array<const char*, 6> kLengthBuckets = {"0-20", "21-50", "51-100", "101-300", "301-1000", ">1000"};

inline std::size_t length_bucket(std::size_t chars) {
  if (chars <= 20) return 0;
  if (chars <= 50) return 1;
  if (chars <= 100) return 2;
  if (chars <= 300) return 3;
  if (chars <= 1000) return 4;
  return 5;
}

struct StatsReport {
  std::size_t bundles = 0;
  std::size_t skipped = 0;  // bundles without a readable meta.json
  std::map<Operation, std::size_t> operations;
  std::map<std::string, std::size_t> languages;
  std::map<std::size_t, std::size_t> regions;  // region count -> bundles
  std::array<std::size_t, 6> lengths{};
  std::size_t without_regions = 0;  // unstructured bundles carry no boxes

  double operation_share(Operation op) const {
    auto it = operations.find(op);
    return bundles == 0 || it == operations.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / static_cast<double>(bundles);
  }
  double language_share(const std::string& lang) const {
    auto it = languages.find(lang);
    return bundles == 0 || it == languages.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / static_cast<double>(bundles);
  }
};

inline StatsReport stats(const std::vector<BundleMeta>& metas) {
  StatsReport s;
  for (const auto& m : metas) {
    ++s.bundles;
    ++s.operations[m.operation];
    ++s.languages[m.language];
    if (m.regions) ++s.regions[*m.regions];
    else ++s.without_regions;
    if (m.edited_chars) ++s.lengths[length_bucket(*m.edited_chars)];
  }
  return s;
}

// Reads meta.json from every immediate subdirectory; unreadable or missing
// metadata counts as skipped.
inline StatsReport stats_from_bundles(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::io, "stats", "bundle directory " + dir.string() + " does not exist");
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  std::vector<BundleMeta> metas;
  std::size_t skipped = 0;
  for (const auto& d : dirs) {
    try {
      const auto j = json::parse(read_text(d / "meta.json"));
      BundleMeta m;
      m.operation = require_operation(j.at("operation").get<std::string>(), "stats");
      m.language = j.value("language", std::string("unknown"));
      if (j.contains("regions")) m.regions = j["regions"].get<std::size_t>();
      if (j.contains("edited_chars")) m.edited_chars = j["edited_chars"].get<std::size_t>();
      metas.push_back(m);
    } catch (const std::exception&) {
      ++skipped;
    }
  }
  auto s = stats(metas);
  s.skipped = skipped;
  return s;
}

// Operation mix of the published training corpus, in percent. The seven
// shares sum to 99.9 and are renormalized when sampled.
inline constexpr std::array<std::pair<Operation, double>, 7> kCorpusMix = {{{Operation::translate, 36.5},
                                                                            {Operation::replace, 23.8},
                                                                            {Operation::rearrange, 14.1},
                                                                            {Operation::remove, 10.7},
                                                                            {Operation::add, 7.1},
                                                                            {Operation::change_style, 4.1},
                                                                            {Operation::combined, 3.6}}};

// Draws n bundle records from a categorical sampler over the corpus mix.
inline std::vector<BundleMeta> synthetic_corpus(std::size_t n, std::uint64_t seed) {
  double total = 0.0;
  for (const auto& [op, p] : kCorpusMix) total += p;
  Rng rng(derive_seed(seed, "synthetic_corpus"));
  std::vector<BundleMeta> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform() * total;
    Operation pick = kCorpusMix.back().first;
    for (const auto& [op, p] : kCorpusMix) {
      if (u < p) {
        pick = op;
        break;
      }
      u -= p;
    }
    const auto regions = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const auto chars = static_cast<std::size_t>(rng.uniform_int(1, 400));
    out.push_back({pick, std::string(kLanguages[rng.uniform_int(0, kLanguages.size() - 1)]), regions, chars});
  }
  return out;
}

inline std::string stats_markdown(const StatsReport& s) {
  std::ostringstream out;
  auto pct = [&](std::size_t count) {
    return detail::format("%.2f", s.bundles == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(s.bundles));
  };
  out << "# Corpus statistics\n\nBundles: " << s.bundles << " (skipped without metadata: " << s.skipped << ")\n\n";
  out << "## Operations\n\n| Operation | Count | Share % |\n|---|---:|---:|\n";
  for (auto op : kPairOperations) {
    const auto it = s.operations.find(op);
    const std::size_t n = it == s.operations.end() ? 0 : it->second;
    out << "| " << to_string(op) << " | " << n << " | " << pct(n) << " |\n";
  }
  if (auto it = s.operations.find(Operation::reasoning); it != s.operations.end())
    out << "| reasoning | " << it->second << " | " << pct(it->second) << " |\n";
  out << "\n## Languages\n\n| Language | Count | Share % |\n|---|---:|---:|\n";
  for (const auto& [lang, n] : s.languages) out << "| " << lang << " | " << n << " | " << pct(n) << " |\n";
  out << "\n## Edited regions\n\n| Regions | Count |\n|---:|---:|\n";
  for (const auto& [r, n] : s.regions) out << "| " << r << " | " << n << " |\n";
  if (s.without_regions) out << "| n/a | " << s.without_regions << " |\n";
  out << "\n## Edited text length\n\n| Characters | Count |\n|---|---:|\n";
  for (std::size_t b = 0; b < kLengthBuckets.size(); ++b) out << "| " << kLengthBuckets[b] << " | " << s.lengths[b] << " |\n";
  return out.str();
}

inline ordered_json stats_json(const StatsReport& s) {
  ordered_json j;
  j["bundles"] = s.bundles;
  j["skipped"] = s.skipped;
  ordered_json ops = ordered_json::object();
  for (const auto& [op, n] : s.operations) ops[std::string(to_string(op))] = n;
  j["operations"] = ops;
  j["languages"] = s.languages;
  ordered_json regions = ordered_json::object();
  for (const auto& [r, n] : s.regions) regions[std::to_string(r)] = n;
  j["regions"] = regions;
  ordered_json lengths = ordered_json::object();
  for (std::size_t b = 0; b < kLengthBuckets.size(); ++b) lengths[kLengthBuckets[b]] = s.lengths[b];
  j["edited_chars"] = lengths;
  return j;
}

}  // namespace glyphforge::bench
