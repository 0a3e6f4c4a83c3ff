#include <gtest/gtest.h>

#include <numeric>

#include "glyphforge/bench.hpp"
#include "glyphforge/mini_bench.hpp"
#include "support.hpp"

using namespace glyphforge;
using namespace glyphforge::bench;
using testsupport::TempDir;

namespace {

void write_case_set(const std::filesystem::path& dir, const std::vector<std::pair<std::string, Operation>>& ids,
                    bool with_reference = true) {
  std::filesystem::create_directories(dir / "images");
  std::string manifest;
  for (const auto& [id, op] : ids) {
    write_png(dir / "images" / (id + "-src.png"), testsupport::solid_image(16, 16, 10, 20, 30));
    nlohmann::json line = {{"id", id},
                           {"source", "images/" + id + "-src.png"},
                           {"instruction", "edit " + id},
                           {"operation", std::string(to_string(op))},
                           {"language", "en"}};
    if (with_reference) {
      write_png(dir / "images" / (id + "-ref.png"), testsupport::solid_image(16, 16, 200, 20, 30));
      line["reference"] = "images/" + id + "-ref.png";
    }
    manifest += line.dump() + "\n";
  }
  write_text(dir / "cases.jsonl", manifest);
}

CaseResult scored(const std::string& id, double ia, double tc, double bp) {
  CaseResult r;
  r.id = id;
  r.ia = ia;
  r.tc = tc;
  r.bp = bp;
  return r;
}

BenchCase case_of(const std::string& id, Operation op) {
  BenchCase c;
  c.id = id;
  c.operation = op;
  return c;
}

// Runs a checked-in case set with the reference editor and its scripted judge,
// returning (markdown, csv).
std::pair<std::string, std::string> run_golden_set(const std::filesystem::path& dir, const std::filesystem::path& out,
                                                   std::size_t workers) {
  const auto cases = load_cases(dir / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(0, reward::MockProfile::scripted);
  judge.load_script(nlohmann::json::parse(read_text(dir / "judge_script.json")));
  BenchOptions opts;
  opts.out_dir = out;
  opts.editor_model = "reference";
  opts.workers = workers;
  const auto results = run_bench(cases, editor, judge, opts);
  ReportConfig cfg;
  cfg.judge_model = judge.model_id();
  cfg.editor_model = "reference";
  const auto rep = aggregate(results, cases, cfg);
  return {report_markdown(rep), report_csv(rep)};
}

}  // namespace

TEST(RunBench, OracleJudgeGivesNine) {
  TempDir tmp;
  write_case_set(tmp / "set", {{"c1", Operation::replace}});
  const auto cases = load_cases(tmp / "set" / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(0, reward::MockProfile::oracle);
  judge.set_ground_truth("c1", read_png(*cases[0].reference));
  const auto results = run_bench(cases, editor, judge, {tmp / "out", "ref", 1});
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].ia, 9.0);
  EXPECT_EQ(results[0].tc, 9.0);
  EXPECT_EQ(results[0].bp, 9.0);
}

TEST(RunBench, UniformJudgeGivesFourAndAHalf) {
  TempDir tmp;
  write_case_set(tmp / "set", {{"u1", Operation::add}, {"u2", Operation::translate}});
  const auto cases = load_cases(tmp / "set" / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(0, reward::MockProfile::uniform);
  for (const auto& r : run_bench(cases, editor, judge, {tmp / "out", "ref", 2})) {
    EXPECT_DOUBLE_EQ(r.ia, 4.5);
    EXPECT_DOUBLE_EQ(r.tc, 4.5);
    EXPECT_DOUBLE_EQ(r.bp, 4.5);
  }
}

TEST(RunBench, WarmCacheMakesNoCalls) {
  TempDir tmp;
  write_case_set(tmp / "set", {{"a", Operation::add}, {"b", Operation::replace}, {"c", Operation::remove}});
  const auto cases = load_cases(tmp / "set" / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(3);
  const auto cold = run_bench(cases, editor, judge, {tmp / "out", "ref", 2});
  EXPECT_EQ(judge.calls(), 9u);
  EXPECT_EQ(editor.calls(), 3u);
  const auto warm = run_bench(cases, editor, judge, {tmp / "out", "ref", 2});
  EXPECT_EQ(judge.calls(), 9u);
  EXPECT_EQ(editor.calls(), 3u);
  EXPECT_EQ(report_csv(aggregate(cold, cases)), report_csv(aggregate(warm, cases)));

  // A different judge model misses the cache.
  reward::MockJudge other(4);
  run_bench(cases, editor, other, {tmp / "out", "ref", 1});
  EXPECT_EQ(other.calls(), 9u);
}

TEST(RunBench, EditorFailureExcludedButCounted) {
  TempDir tmp;
  write_case_set(tmp / "set", {{"x", Operation::add}}, false);
  const auto cases = load_cases(tmp / "set" / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(0);
  const auto results = run_bench(cases, editor, judge, {tmp / "out", "ref", 1});
  ASSERT_TRUE(results[0].failed);
  EXPECT_EQ(judge.calls(), 0u);
  const auto rep = aggregate(results, cases);
  EXPECT_EQ(rep.overall.failed, 1u);
  EXPECT_TRUE(rep.overall.empty());
}

TEST(RunBench, ScoresStayOnTheScale) {
  TempDir tmp;
  std::vector<std::pair<std::string, Operation>> ids;
  for (int i = 0; i < 16; ++i) ids.push_back({"s" + std::to_string(i), kAllOperations[static_cast<std::size_t>(i % 8)]});
  write_case_set(tmp / "set", ids);
  const auto cases = load_cases(tmp / "set" / "cases.jsonl");
  ReferenceEditor editor(cases);
  reward::MockJudge judge(11);
  for (const auto& r : run_bench(cases, editor, judge, {tmp / "out", "ref", 4}))
    for (double s : {r.ia, r.tc, r.bp}) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 9.0);
    }
}

TEST(LoadCases, RejectsBadManifests) {
  TempDir tmp;
  write_case_set(tmp / "set", {{"a", Operation::add}});
  write_text(tmp / "dup.jsonl", read_text(tmp / "set" / "cases.jsonl") + read_text(tmp / "set" / "cases.jsonl"));
  std::filesystem::copy(tmp / "set" / "images", tmp / "images");
  EXPECT_THROW(load_cases(tmp / "dup.jsonl"), Error);
  write_text(tmp / "badop.jsonl",
             R"({"id":"z","source":"images/a-src.png","instruction":"i","operation":"paint"})" "\n");
  EXPECT_THROW(load_cases(tmp / "badop.jsonl"), Error);
  write_text(tmp / "missing.jsonl",
             R"({"id":"z","source":"images/nope.png","instruction":"i","operation":"add"})" "\n");
  EXPECT_THROW(load_cases(tmp / "missing.jsonl"), Error);
}

TEST(Aggregate, TwoOperationExample) {
  const std::vector<BenchCase> cases = {case_of("a1", Operation::add), case_of("a2", Operation::add),
                                        case_of("r1", Operation::replace), case_of("r2", Operation::replace)};
  const auto rep = aggregate({scored("a1", 8, 8, 8), scored("a2", 6, 6, 6), scored("r1", 4, 4, 4), scored("r2", 2, 2, 2)},
                             cases);
  const auto& add = rep.operations[static_cast<std::size_t>(Operation::add)];
  const auto& rep_ = rep.operations[static_cast<std::size_t>(Operation::replace)];
  EXPECT_EQ(add.ia, 7.0);
  EXPECT_EQ(add.bp, 7.0);
  EXPECT_EQ(rep_.tc, 3.0);
  EXPECT_EQ(rep.overall.ia, 5.0);
  EXPECT_EQ(rep.overall.tc, 5.0);
  EXPECT_EQ(rep.overall.cases, 4u);
  EXPECT_TRUE(rep.operations[static_cast<std::size_t>(Operation::reasoning)].empty());
}

TEST(Aggregate, SingleCase) {
  const auto rep = aggregate({scored("only", 1.5, 2.5, 3.5)}, {case_of("only", Operation::combined)});
  const auto& cell = rep.operations[static_cast<std::size_t>(Operation::combined)];
  EXPECT_EQ(cell.ia, rep.overall.ia);
  EXPECT_EQ(rep.overall.tc, 2.5);
  EXPECT_EQ(rep.overall.bp, 3.5);
}

TEST(Aggregate, OrphanResultRejected) {
  try {
    aggregate({scored("ghost", 1, 1, 1)}, {case_of("real", Operation::add)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::consistency);
  }
}

TEST(Aggregate, DuplicationLeavesMeansUnchanged) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BenchCase> cases, doubled_cases;
    std::vector<CaseResult> results, doubled;
    const auto n = rng.uniform_int(1, 30);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto op = kAllOperations[rng.uniform_int(0, 7)];
      const auto id = "c" + std::to_string(i);
      auto r = scored(id, rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9));
      cases.push_back(case_of(id, op));
      results.push_back(r);
      for (const char* suffix : {"#a", "#b"}) {
        doubled_cases.push_back(case_of(id + suffix, op));
        r.id = id + suffix;
        doubled.push_back(r);
      }
    }
    const auto a = aggregate(results, cases), b = aggregate(doubled, doubled_cases);
    for (std::size_t k = 0; k < 8; ++k) {
      EXPECT_EQ(a.operations[k].cases * 2, b.operations[k].cases);
      EXPECT_NEAR(a.operations[k].ia, b.operations[k].ia, 1e-12);
      EXPECT_NEAR(a.operations[k].bp, b.operations[k].bp, 1e-12);
    }
    EXPECT_NEAR(a.overall.tc, b.overall.tc, 1e-12);
  }
}

TEST(Aggregate, IndependentOfResultOrder) {
  const std::vector<BenchCase> cases = {case_of("x", Operation::add), case_of("y", Operation::add),
                                        case_of("z", Operation::translate)};
  std::vector<CaseResult> results = {scored("x", 0.1, 0.2, 0.3), scored("y", 0.7, 0.11, 0.13), scored("z", 5, 6, 7)};
  const auto forward = report_csv(aggregate(results, cases));
  std::reverse(results.begin(), results.end());
  EXPECT_EQ(report_csv(aggregate(results, cases)), forward);
}

TEST(Report, TwentyFourCaseGolden) {
  TempDir tmp;
  const auto dir = testsupport::source_dir() / "tests/data/bench24";
  const auto [md, csv] = run_golden_set(dir, tmp / "out", 4);
  EXPECT_EQ(md, read_text(dir / "golden/report.md"));
  EXPECT_EQ(csv, read_text(dir / "golden/report.csv"));
}

TEST(Report, MiniBenchmarkGolden) {
  TempDir tmp;
  const auto dir = testsupport::source_dir() / "data/bench/mini";
  const auto [md, csv] = run_golden_set(dir, tmp / "out", 8);
  EXPECT_EQ(md, read_text(dir / "golden/report.md"));
  EXPECT_EQ(csv, read_text(dir / "golden/report.csv"));
}

TEST(Report, MiniBenchmarkRegeneratesIdentically) {
  TempDir tmp;
  html::MockTextService svc;
  const auto n = build_mini_benchmark(testsupport::source_dir() / "data/corpus/manifest.jsonl", tmp / "mini", svc);
  EXPECT_EQ(n, 48u);
  const auto dir = testsupport::source_dir() / "data/bench/mini";
  EXPECT_EQ(read_text(tmp / "mini" / "cases.jsonl"), read_text(dir / "cases.jsonl"));
  EXPECT_EQ(read_text(tmp / "mini" / "judge_script.json"), read_text(dir / "judge_script.json"));
  EXPECT_EQ(testsupport::tree_digest(tmp / "mini" / "images"), testsupport::tree_digest(dir / "images"));
}

TEST(Report, EmptyResultsMarkEveryCellEmpty) {
  const auto rep = aggregate({}, {});
  const auto md = report_markdown(rep);
  std::size_t empties = 0;
  for (std::size_t p = md.find("empty"); p != std::string::npos; p = md.find("empty", p + 1)) ++empties;
  EXPECT_EQ(empties, 27u + 27u);
  EXPECT_NE(report_csv(rep).find("overall,0,0,,,"), std::string::npos);
}

TEST(Report, CsvRoundTripAndFormats) {
  Rng rng(2);
  std::vector<BenchCase> cases;
  std::vector<CaseResult> results;
  for (int i = 0; i < 20; ++i) {
    const auto id = "k" + std::to_string(i);
    cases.push_back(case_of(id, kAllOperations[static_cast<std::size_t>(i % 7)]));
    results.push_back(scored(id, rng.uniform(0, 9), rng.uniform(0, 9), rng.uniform(0, 9)));
  }
  const auto rep = aggregate(results, cases);
  const auto back = parse_report_csv(report_csv(rep));
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(back.operations[k].cases, rep.operations[k].cases);
    EXPECT_EQ(back.operations[k].ia, rep.operations[k].ia);
    EXPECT_EQ(back.operations[k].tc, rep.operations[k].tc);
    EXPECT_EQ(back.operations[k].bp, rep.operations[k].bp);
  }
  EXPECT_EQ(back.overall.ia, rep.overall.ia);
  EXPECT_EQ(emit_report(rep, "md"), report_markdown(rep));
  EXPECT_THROW(emit_report(rep, "xlsx"), Error);
}

TEST(Stats, SharesExample) {
  const std::vector<BundleMeta> metas = {{Operation::translate, "de", 1, 10},
                                         {Operation::translate, "fr", 2, 30},
                                         {Operation::replace, "en", 3, 60},
                                         {Operation::remove, "en", 3, 2000}};
  const auto s = stats(metas);
  EXPECT_DOUBLE_EQ(s.operation_share(Operation::translate), 50.0);
  EXPECT_DOUBLE_EQ(s.operation_share(Operation::replace), 25.0);
  EXPECT_DOUBLE_EQ(s.operation_share(Operation::remove), 25.0);
  EXPECT_EQ(s.regions.at(3), 2u);
  EXPECT_EQ(s.lengths, (std::array<std::size_t, 6>{1, 1, 1, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(s.language_share("en"), 50.0);
}

TEST(Stats, BucketEdges) {
  EXPECT_EQ(length_bucket(0), 0u);
  EXPECT_EQ(length_bucket(20), 0u);
  EXPECT_EQ(length_bucket(21), 1u);
  EXPECT_EQ(length_bucket(100), 2u);
  EXPECT_EQ(length_bucket(101), 3u);
  EXPECT_EQ(length_bucket(1000), 4u);
  EXPECT_EQ(length_bucket(1001), 5u);
}

TEST(Stats, SharesSumToHundred) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = stats(synthetic_corpus(1000 + seed * 37, seed));
    double ops = 0.0, langs = 0.0;
    for (const auto& [op, n] : s.operations) ops += s.operation_share(op);
    for (const auto& [lang, n] : s.languages) langs += s.language_share(lang);
    EXPECT_NEAR(ops, 100.0, 0.01);
    EXPECT_NEAR(langs, 100.0, 0.01);
    std::size_t regions = 0;
    for (const auto& [r, n] : s.regions) regions += n;
    EXPECT_EQ(regions + s.without_regions, s.bundles);
    EXPECT_EQ(std::accumulate(s.lengths.begin(), s.lengths.end(), std::size_t{0}), s.bundles);
  }
}

TEST(Stats, TenThousandDrawsMatchPublishedMix) {
  const auto s = stats(synthetic_corpus(10000, 0));
  EXPECT_NEAR(s.operation_share(Operation::translate), 36.5, 1.0);
  EXPECT_NEAR(s.operation_share(Operation::replace), 23.8, 1.0);
}

TEST(Stats, BundlesWithoutMetaAreSkipped) {
  TempDir tmp;
  html::MockTextService svc;
  const auto html = read_text(testsupport::source_dir() / "data/corpus/f2_three_paragraphs.html");
  html::write_bundle(tmp / "b1", html::make_pair(html, Operation::replace, 1, svc));
  html::write_bundle(tmp / "b2", html::make_pair(html, Operation::translate, 1, svc));
  std::filesystem::create_directories(tmp / "b3");
  const auto s = stats_from_bundles(tmp.path());
  EXPECT_EQ(s.bundles, 2u);
  EXPECT_EQ(s.skipped, 1u);
  EXPECT_DOUBLE_EQ(s.operation_share(Operation::translate), 50.0);
  EXPECT_NE(stats_markdown(s).find("| translate | 1 | 50.00 |"), std::string::npos);
  EXPECT_EQ(stats_json(s)["skipped"], 1);
}
