// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// `acceptance --write-digests` rewrites tests/data/determinism_digests.json from
// the current build instead of checking it.

#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <set>
#include <sstream>

#include "glyphforge/bench.hpp"
#include "glyphforge/evr.hpp"
#include "glyphforge/html/edit.hpp"
#include "glyphforge/lab.hpp"
#include "glyphforge/nft.hpp"
#include "glyphforge/reward.hpp"
#include "support.hpp"

using namespace glyphforge;
using testsupport::TempDir;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail.str("");
      detail << what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

fs::path src(const std::string& rel) { return testsupport::source_dir() / rel; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

void gradient_oracle(Outcome& o) {
  const auto t0 = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  std::size_t models = 0;
  for (std::uint64_t trial = 0; trial < 24; ++trial) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto c = static_cast<std::size_t>(rng.uniform_int(0, 3));
    std::vector<std::size_t> hidden = {static_cast<std::size_t>(rng.uniform_int(2, 8))};
    if (trial % 2 == 0) hidden.push_back(static_cast<std::size_t>(rng.uniform_int(2, 6)));
    auto model = testsupport::random_model(d, c, hidden, 7000 + trial);
    const auto old = testsupport::random_model(d, c, hidden, 8000 + trial);
    const auto batch = testsupport::random_batch(d, c, 1 + trial % 6, 9000 + trial);

    const auto fa = flow::flow_loss(model, batch).grad;
    const auto fn = testsupport::numeric_gradient(model, [&] { return flow::flow_loss(model, batch).loss; });
    worst = std::max(worst, testsupport::relative_error(fa, fn));

    std::vector<double> rewards(batch.size());
    for (auto& r : rewards) r = rng.uniform();
    const auto r = nft::optimality(rewards);
    const double beta = rng.uniform(0.05, 1.0);
    const auto na = nft::nft_loss(model, old, batch, r, beta).grad;
    const auto nn = testsupport::numeric_gradient(model, [&] { return nft::nft_loss(model, old, batch, r, beta).loss; });
    worst = std::max(worst, testsupport::relative_error(na, nn));
    ++models;
  }
  const double secs = seconds_since(t0);
  o.detail << models << " models, both losses, worst relative error " << worst << ", " << fixed(secs, 2) << " s";
  o.require(worst < 1e-4, "relative error " + std::to_string(worst) + " >= 1e-4");
  o.require(secs < 10.0, "took " + fixed(secs, 2) + " s");
}

void degeneracy(Outcome& o) {
  double diff_a = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = testsupport::random_model(3, 2, {6}, seed);
    const auto old = testsupport::random_model(3, 2, {6}, seed + 100);
    const auto batch = testsupport::random_batch(3, 2, 7, seed + 200);
    const std::vector<double> ones(batch.size(), 1.0);
    const auto a = nft::nft_loss(model, old, batch, ones, 1.0);
    const auto b = flow::flow_loss(model, batch);
    diff_a = std::max(diff_a, std::abs(a.loss - b.loss));
    for (std::size_t i = 0; i < a.grad.size(); ++i) diff_a = std::max(diff_a, std::abs(a.grad[i] - b.grad[i]));
  }
  double norm_b = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = testsupport::random_model(4, 1, {5, 5}, seed + 300);
    const auto batch = testsupport::random_batch(4, 1, 6, seed + 400);
    const std::vector<double> half(batch.size(), 0.5);
    norm_b = std::max(norm_b, l2(nft::nft_loss(model, model, batch, half, 0.1 + 0.04 * static_cast<double>(seed)).grad));
  }
  Rng rng(77);
  std::size_t inexact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v_old(3), v_theta(3);
    for (auto& v : v_old) v = static_cast<double>(static_cast<int>(rng.uniform_int(0, 16384)) - 8192) / 1024.0;
    for (auto& v : v_theta) v = static_cast<double>(static_cast<int>(rng.uniform_int(0, 16384)) - 8192) / 1024.0;
    const double beta = static_cast<double>(rng.uniform_int(1, 256)) / 256.0;
    const auto p = nft::positive_velocity(v_old, v_theta, beta);
    const auto n = nft::negative_velocity(v_old, v_theta, beta);
    for (std::size_t i = 0; i < 3; ++i)
      if (p[i] + n[i] != 2.0 * v_old[i]) ++inexact;
  }
  o.detail << "(a) max |nft-flow| " << diff_a << "; (b) max |grad| " << norm_b << "; (c) " << inexact
           << "/1000 inexact triples";
  o.require(diff_a <= 1e-10, "(a) difference " + std::to_string(diff_a));
  o.require(norm_b <= 1e-8, "(b) gradient norm " + std::to_string(norm_b));
  o.require(inexact == 0, "(c) " + std::to_string(inexact) + " triples not exact");
}

void normalization_suites(Outcome& o) {
  Rng rng(31);
  bool range_ok = true, monotone_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> rewards(2 + static_cast<std::size_t>(trial % 15));
    for (auto& v : rewards) v = rng.uniform();
    const auto r = nft::optimality(rewards);
    for (std::size_t i = 0; i < r.size(); ++i) {
      range_ok = range_ok && r[i] >= 0.0 && r[i] <= 1.0;
      for (std::size_t j = 0; j < r.size(); ++j)
        if (rewards[i] <= rewards[j]) monotone_ok = monotone_ok && r[i] <= r[j];
    }
  }
  double affine = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> rewards(8), moved(8);
    for (auto& v : rewards) v = rng.uniform();
    const double a = std::exp(rng.uniform(-3.0, 3.0)), b = rng.uniform(-10.0, 10.0);
    for (std::size_t i = 0; i < 8; ++i) moved[i] = a * rewards[i] + b;
    const auto r1 = nft::optimality(rewards), r2 = nft::optimality(moved);
    for (std::size_t i = 0; i < 8; ++i) affine = std::max(affine, std::abs(r1[i] - r2[i]));
  }
  bool tie_ok = true;
  for (double v : nft::optimality(std::vector<double>{0.4, 0.4, 0.4, 0.4})) tie_ok = tie_ok && v == 0.5;

  double shift = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    reward::ScoreDistribution d, moved;
    const double c = rng.uniform(-50.0, 50.0);
    for (std::size_t s = 0; s < 10; ++s) {
      d.logits[s] = rng.uniform(-5.0, 5.0);
      moved.logits[s] = d.logits[s] + c;
    }
    shift = std::max(shift, std::abs(reward::expected_score(d) - reward::expected_score(moved)));
  }
  const double uniform = reward::expected_score(reward::ScoreDistribution{});
  const double top = reward::expected_score(reward::ScoreDistribution::one_hot(9));
  const double bottom = reward::expected_score(reward::ScoreDistribution::one_hot(0));

  o.detail << "optimality: range, monotone, affine max diff " << affine << ", tie 0.5; expected score: shift max diff "
           << shift << ", uniform " << uniform << ", one-hot " << bottom << "/" << top;
  o.require(range_ok, "optimality left [0,1]");
  o.require(monotone_ok, "optimality not monotone within a group");
  o.require(affine <= 1e-9, "affine invariance difference " + std::to_string(affine));
  o.require(tie_ok, "zero-spread group did not give 0.5");
  o.require(shift <= 1e-12, "shift invariance difference " + std::to_string(shift));
  o.require(uniform == 0.5, "uniform distribution gave " + std::to_string(uniform));
  o.require(std::abs(top - 1.0) <= 1e-12 && std::abs(bottom) <= 1e-12, "one-hot extremes off");
}

void toy_training(Outcome& o) {
  const auto t0 = Clock::now();
  const auto sft = lab::train_two_mode({}, 0);
  const double hit = lab::mode_hit_rate(sft.model, 500, 123);
  const double sft_secs = seconds_since(t0);

  lab::GlyphRecipe recipe;
  const auto start = lab::glyph_warm_start(recipe, 0);
  const double before = lab::glyph_eval(start, 0);
  const auto rl = lab::train_glyph_rl(start, recipe.rl, 0);
  const double after = lab::glyph_eval(rl.model, 0);

  o.detail << "two-mode SFT " << fixed(sft_secs, 1) << " s, " << fixed(100.0 * hit, 1) << "% of 500 samples near a mode; RL ("
           << recipe.rl.epochs << " epochs, K=" << recipe.rl.k << ", beta=" << recipe.rl.beta << ") reward "
           << fixed(before, 4) << " -> " << fixed(after, 4);
  o.require(sft_secs < 60.0, "SFT took " + fixed(sft_secs, 1) + " s");
  o.require(hit >= 0.9, "mode hit rate " + fixed(hit, 3));
  o.require(recipe.rl.epochs <= 50 && recipe.rl.k == 8 && recipe.rl.beta == 0.1, "RL recipe differs from K=8, beta=0.1");
  o.require(after - before >= 0.05, "RL gain " + fixed(after - before, 4) + " < 0.05");
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(src("data/corpus")))
    if (e.path().extension() == ".html") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

void confinement(Outcome& o) {
  const auto t0 = Clock::now();
  html::MockTextService svc;
  std::size_t pairs = 0, violations = 0, skipped = 0;
  std::set<Operation> ops;
  for (const auto& file : corpus_files()) {
    const auto text = read_text(file);
    for (auto op : kPairOperations)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        html::EditPair pair;
        try {
          pair = html::make_pair(text, op, seed, svc);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::planning) throw;
          ++skipped;
          continue;
        }
        ++pairs;
        ops.insert(op);
        violations += html::confinement_violations(pair.source_image, pair.target_image, pair.boxes).size();
      }
  }
  const double secs = seconds_since(t0);
  o.detail << pairs << " pairs over " << ops.size() << " operations x 3 seeds (" << skipped << " unplannable), "
           << violations << " pixels outside edited boxes, " << fixed(secs, 1) << " s";
  o.require(pairs >= 200, "only " + std::to_string(pairs) + " pairs");
  o.require(ops.size() == kPairOperations.size(), "not every operation produced pairs");
  o.require(violations == 0, std::to_string(violations) + " violating pixels");
  o.require(secs < 120.0, "took " + fixed(secs, 1) + " s");
}

// Digest of a directory's content: PNG files contribute their decoded pixels so
// that the digest does not depend on the deflate implementation.
std::string content_digest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  Fnv1a64 h;
  for (const auto& f : files) {
    const auto rel = fs::relative(f, dir).generic_string();
    h.update(rel);
    h.update(std::string_view("\0", 1));
    if (f.extension() == ".png") {
      const auto img = read_png(f);
      h.update(std::to_string(img.width) + "x" + std::to_string(img.height) + "x" + std::to_string(img.channels));
      h.update(std::string_view(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size()));
    } else {
      const auto bytes = read_bytes(f);
      h.update(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    }
  }
  return hex64(h.digest());
}

std::string render_digest() {
  Fnv1a64 h;
  for (const auto& file : corpus_files()) {
    auto doc = html::parse(read_text(file));
    const auto r = html::render(doc);
    h.update(std::string_view(reinterpret_cast<const char*>(r.image.pixels.data()), r.image.pixels.size()));
  }
  return hex64(h.digest());
}

// Runs every determinism workload into `root`, returning name -> digest.
std::map<std::string, std::string> determinism_run(const fs::path& root, std::string& error) {
  std::map<std::string, std::string> out;
  out["render"] = render_digest();
  const std::vector<std::pair<std::string, std::string>> jobs = {
      {"render-glyph", "render-glyph --regions " + q(src("tests/data/regions_two.json")) +
                           " --width 160 --height 120 --out render-glyph/glyph.png"},
      {"make-pairs", "--seed 0 make-pairs --in " + q(src("data/corpus")) + " --op all --seeds 2 --out make-pairs"},
      {"bench", "--workers 4 bench --cases " + q(src("data/bench/mini")) + " --out bench"},
  };
  fs::create_directories(root / "render-glyph");
  for (const auto& [name, args] : jobs) {
    const auto r = testsupport::run_cli(args, root);
    if (r.code != 0) {
      error = name + " exited " + std::to_string(r.code) + ": " + r.output;
      return out;
    }
    out[name] = content_digest(root / name);
  }
  return out;
}

const fs::path kDigestFile = "tests/data/determinism_digests.json";

void determinism(Outcome& o) {
  TempDir a("gf-acc-a"), b("gf-acc-b");
  std::string err_a, err_b;
  const auto first = determinism_run(a.path(), err_a);
  const auto second = determinism_run(b.path(), err_b);
  o.require(err_a.empty() && err_b.empty(), err_a + err_b);
  if (!o.pass) return;
  std::size_t equal_runs = 0;
  for (const auto& [name, digest] : first) {
    o.require(second.at(name) == digest, name + " differs between two runs");
    if (second.at(name) == digest) ++equal_runs;
  }
  std::size_t golden_hits = 0;
  if (!fs::exists(src(kDigestFile.string()))) {
    o.require(false, "missing " + kDigestFile.string());
  } else {
    const auto golden = nlohmann::json::parse(read_text(src(kDigestFile.string())));
    for (const auto& [name, digest] : first) {
      const bool hit = golden.contains(name) && golden[name] == digest;
      o.require(hit, name + " digest " + digest + " does not match the checked-in value");
      if (hit) ++golden_hits;
    }
  }
  if (o.pass)
    o.detail << equal_runs << "/" << first.size() << " workloads byte-identical across two runs, " << golden_hits << "/"
             << first.size() << " match checked-in digests (render, render-glyph, make-pairs, bench)";
}

int write_digests() {
  TempDir tmp("gf-acc-w");
  std::string err;
  const auto digests = determinism_run(tmp.path(), err);
  if (!err.empty()) {
    std::cerr << err << "\n";
    return 1;
  }
  nlohmann::ordered_json j;
  for (const auto& [name, digest] : digests) j[name] = digest;
  write_text(src(kDigestFile.string()), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

void multilingual(Outcome& o) {
  html::MockTextService svc;
  const auto text = read_text(src("data/corpus/f1_coffee.html"));
  std::set<std::string> seen;
  for (auto lang : kLanguages) {
    try {
      const auto pair = html::translate_then_edit(text, std::string(lang), Operation::replace, 4, svc);
      if (pair.language == lang) seen.insert(pair.language);
      else o.require(false, "pair for " + std::string(lang) + " reports " + pair.language);
    } catch (const Error& e) {
      o.require(false, std::string(lang) + ": " + e.what());
    }
  }
  o.detail << seen.size() << "/" << kLanguages.size() << " languages produced a pair on f1_coffee";
  o.require(seen.size() == 15, "only " + std::to_string(seen.size()) + " languages");
}

void bench_golden(Outcome& o) {
  TempDir tmp("gf-acc-bench");
  const auto dir = src("data/bench/mini");
  const auto cases = bench::load_cases(dir / "cases.jsonl");
  bench::ReferenceEditor editor(cases);
  reward::MockJudge judge(0, reward::MockProfile::scripted);
  judge.load_script(nlohmann::json::parse(read_text(dir / "judge_script.json")));
  bench::BenchOptions opts;
  opts.out_dir = tmp / "out";
  opts.editor_model = "reference";
  opts.workers = 4;
  const auto results = bench::run_bench(cases, editor, judge, opts);
  bench::ReportConfig cfg;
  cfg.judge_model = judge.model_id();
  cfg.editor_model = "reference";
  const auto rep = bench::aggregate(results, cases, cfg);
  const bool md_ok = bench::report_markdown(rep) == read_text(dir / "golden/report.md");
  const bool csv_ok = bench::report_csv(rep) == read_text(dir / "golden/report.csv");

  const auto s = bench::stats(bench::synthetic_corpus(10000, 0));
  const double tr = s.operation_share(Operation::translate), rp = s.operation_share(Operation::replace);
  o.detail << cases.size() << "-case report " << (md_ok && csv_ok ? "bit-exact" : "differs")
           << "; 10k synthetic mix translate " << fixed(tr, 2) << "%, replace " << fixed(rp, 2) << "%";
  o.require(cases.size() == 48, "mini benchmark has " + std::to_string(cases.size()) + " cases");
  o.require(md_ok && csv_ok, "report differs from golden");
  o.require(std::abs(tr - 36.5) <= 1.0, "translate share " + fixed(tr, 2));
  o.require(std::abs(rp - 23.8) <= 1.0, "replace share " + fixed(rp, 2));
}

struct CrashAfter : std::runtime_error {
  CrashAfter() : std::runtime_error("simulated crash") {}
};

void retry_loop(Outcome& o) {
  TempDir tmp("gf-acc-evr");
  const auto image = testsupport::solid_image(32, 24, 200, 180, 40);
  const auto spec = [](const std::string& id) {
    return evr::CaseSpec{id, "Replace \"OPEN\" with \"CLOSED\"", Operation::replace, "en"};
  };
  const auto fail = evr::ScriptedVerifier::failing("adherence", "old word still present");
  struct Row {
    std::string id;
    std::vector<evr::Verdicts> script;
    evr::AttemptStatus status;
    std::size_t attempts;
  };
  const std::vector<Row> matrix = {
      {"pass-at-1", {evr::Verdicts::pass_all()}, evr::AttemptStatus::accepted, 1},
      {"fail-x3", {fail, fail, fail}, evr::AttemptStatus::rejected, 3},
      {"fail-then-pass", {fail, evr::Verdicts::pass_all()}, evr::AttemptStatus::accepted, 2},
  };
  for (const auto& row : matrix) {
    evr::MockExecutor exec;
    evr::ScriptedVerifier verifier;
    verifier.script(row.id, row.script);
    const auto out = evr::run_case(spec(row.id), image, {exec, verifier}, {3, true}, tmp / row.id);
    const auto scan = evr::scan_log(tmp / row.id / "log.jsonl");
    o.require(out.status == row.status && scan.final_status == row.status, row.id + ": wrong status");
    o.require(out.attempts.size() == row.attempts && scan.attempts.size() == row.attempts,
              row.id + ": " + std::to_string(scan.attempts.size()) + " logged attempts");
  }

  const std::vector<evr::Verdicts> script = {fail, evr::ScriptedVerifier::failing("legibility", "letters overlap"),
                                             evr::Verdicts::pass_all()};
  evr::MockExecutor e1;
  evr::ScriptedVerifier v1;
  v1.script("cr", script);
  const auto full = evr::run_case(spec("cr"), image, {e1, v1}, {}, tmp / "full");
  std::size_t resumes = 0;
  for (int crash_at = 1; crash_at <= 2; ++crash_at) {
    const auto dir = tmp / ("crash" + std::to_string(crash_at));
    evr::MockExecutor e2;
    evr::ScriptedVerifier v2;
    v2.script("cr", script);
    evr::RunHooks hooks;
    hooks.after_attempt = [&](const evr::Attempt& a) {
      if (a.index == crash_at) throw CrashAfter();
    };
    try {
      evr::run_case(spec("cr"), image, {e2, v2}, {}, dir, hooks);
      o.require(false, "crash hook did not fire");
    } catch (const CrashAfter&) {
    }
    evr::MockExecutor e3;
    evr::ScriptedVerifier v3;
    v3.script("cr", script);
    const auto resumed = evr::run_case(spec("cr"), image, {e3, v3}, {}, dir);
    const bool same = resumed.status == full.status && resumed.attempts.size() == full.attempts.size() &&
                      testsupport::tree_digest(dir) == testsupport::tree_digest(tmp / "full") &&
                      e3.requests().size() == full.attempts.size() - static_cast<std::size_t>(crash_at);
    o.require(same, "resume after attempt " + std::to_string(crash_at) + " diverged");
    if (same) ++resumes;
  }
  o.detail << "pass@1, fail x3, fail-then-pass give expected statuses and log lengths; " << resumes
           << "/2 crash points resume to the uninterrupted outcome";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string(argv[1]) == "--write-digests") return write_digests();

  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria = {
      {"gradient oracle", gradient_oracle},
      {"loss degeneracy", degeneracy},
      {"optimality and expected score", normalization_suites},
      {"toy SFT and RL gain", toy_training},
      {"pixel confinement", confinement},
      {"determinism", determinism},
      {"multilingual path", multilingual},
      {"bench golden and corpus mix", bench_golden},
      {"retry loop soundness", retry_loop},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail.str("");
      o.detail << "exception: " << e.what();
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
