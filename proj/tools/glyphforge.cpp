#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "glyphforge/bench.hpp"
#include "glyphforge/config.hpp"
#include "glyphforge/core.hpp"
#include "glyphforge/evr.hpp"
#include "glyphforge/flow.hpp"
#include "glyphforge/glyph.hpp"
#include "glyphforge/html/edit.hpp"
#include "glyphforge/image.hpp"
#include "glyphforge/lab.hpp"
#include "glyphforge/mini_bench.hpp"
#include "glyphforge/nft.hpp"
#include "glyphforge/parallel.hpp"
#include "glyphforge/reward.hpp"

namespace fs = std::filesystem;
namespace gf = glyphforge;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
};

gf::RunConfig resolve_config(const Globals& g) {
  gf::RunConfig c = g.config_path.empty() ? gf::RunConfig{} : gf::load_run_config(g.config_path);
  if (g.seed_opt->count()) c.seed = g.seed;
  if (g.workers_opt->count()) c.workers = g.workers;
  c.validate();
  return c;
}

std::shared_ptr<const gf::html::Dictionary> load_dictionary(const gf::RunConfig& c) {
  const fs::path path = c.dictionary_path.empty() ? gf::html::Dictionary::default_path() : fs::path(c.dictionary_path);
  return std::make_shared<gf::html::Dictionary>(gf::html::Dictionary::load(path));
}

gf::reward::PromptLibrary prompt_library(const gf::RunConfig& c) {
  return gf::reward::PromptLibrary(c.prompts_path.empty() ? gf::reward::PromptLibrary::default_dir()
                                                          : fs::path(c.prompts_path));
}

// Flag, then config, then GLYPHFORGE_JUDGE_URL.
std::string judge_url(const std::string& flag, const gf::RunConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.judge_url.empty()) return c.judge_url;
  if (const char* env = std::getenv("GLYPHFORGE_JUDGE_URL"); env && *env) return env;
  return {};
}

std::vector<gf::bench::CorpusEntry> corpus_entries(const fs::path& in) {
  if (fs::is_regular_file(in)) return gf::bench::load_corpus(in);
  if (!fs::is_directory(in)) gf::fail(gf::ErrorKind::io, "corpus", "input " + in.string() + " does not exist");
  if (fs::exists(in / "manifest.jsonl")) return gf::bench::load_corpus(in / "manifest.jsonl");
  std::vector<gf::bench::CorpusEntry> out;
  for (const auto& e : fs::directory_iterator(in))
    if (e.is_regular_file() && e.path().extension() == ".html") out.push_back({e.path().stem().string(), e.path(), "en"});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::vector<gf::Operation> parse_ops(const std::string& spec) {
  if (spec == "all") return {gf::kPairOperations.begin(), gf::kPairOperations.end()};
  std::vector<gf::Operation> ops;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const auto op = gf::require_operation(spec.substr(pos, comma - pos), "make_pairs");
    if (op == gf::Operation::reasoning)
      gf::fail(gf::ErrorKind::config, "make_pairs", "reasoning is a benchmark category and cannot be constructed");
    ops.push_back(op);
    pos = comma + 1;
  }
  return ops;
}

std::vector<std::string> split_list(const std::string& spec) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    auto comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    if (comma > pos) out.push_back(spec.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

// Runs `command <html> <png>` for both sides of a bundle.
void run_external_renderer(const std::string& command, const fs::path& bundle) {
  for (const char* side : {"src", "tgt"}) {
    const auto html = bundle / (std::string(side) + ".html");
    const auto png = bundle / (std::string(side) + ".external.png");
    const std::string cmd = command + " '" + html.string() + "' '" + png.string() + "'";
    if (std::system(cmd.c_str()) != 0)
      gf::fail(gf::ErrorKind::io, "external_renderer", "command failed: " + cmd);
  }
}

struct PairJob {
  std::string name;
  gf::bench::CorpusEntry fixture;
  gf::Operation op;
  std::uint64_t seed;
  std::string pivot;  // empty: no translate-then-edit
};

// Builds and writes every job's bundle; planning failures are recorded and
// skipped. Returns the summary written to out/summary.json.
ordered_json build_pairs(const std::vector<PairJob>& jobs, const fs::path& out, const gf::RunConfig& cfg,
                         const std::string& target_lang, const std::string& external) {
  auto dict = load_dictionary(cfg);
  std::vector<std::string> skipped(jobs.size());
  gf::parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    gf::html::MockTextService svc(dict);
    gf::html::PlanOptions opts;
    opts.source_language = job.fixture.language;
    opts.target_language = target_lang;
    const auto html = gf::read_text(job.fixture.path);
    try {
      const auto pair = job.pivot.empty() ? gf::html::make_pair(html, job.op, job.seed, svc, opts)
                                          : gf::html::translate_then_edit(html, job.pivot, job.op, job.seed, svc, opts);
      gf::html::write_bundle(out / job.name, pair);
      if (!external.empty()) run_external_renderer(external, out / job.name);
    } catch (const gf::Error& e) {
      if (e.kind() != gf::ErrorKind::planning) throw;
      skipped[i] = e.what();
    }
  });
  ordered_json summary;
  summary["bundles"] = ordered_json::array();
  summary["skipped"] = ordered_json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (skipped[i].empty()) summary["bundles"].push_back(jobs[i].name);
    else summary["skipped"].push_back({{"bundle", jobs[i].name}, {"reason", skipped[i]}});
  }
  gf::write_text(out / "summary.json", summary.dump(2) + "\n");
  return summary;
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glyphforge: text-centric image editing data, training and benchmark tools"};
  app.set_version_flag("--version", std::string("glyphforge ") + std::string(gf::kVersion) +
                                        "\nschema version " + std::to_string(gf::kSchemaVersion) +
                                        "\ncheckpoint format version " + std::to_string(gf::kCheckpointVersion));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
  g.seed_opt = app.add_option("--seed", g.seed, "Seed for all randomness");
  g.workers_opt = app.add_option("--workers", g.workers, "Maximum worker threads")->check(CLI::PositiveNumber);

  // render-glyph ------------------------------------------------------------
  auto* rg = app.add_subcommand("render-glyph", "Render a glyph prior from target regions")->fallthrough();
  std::string rg_regions, rg_out;
  int rg_w = 0, rg_h = 0;
  rg->add_option("--regions", rg_regions, "Regions JSON")->required()->check(CLI::ExistingFile);
  rg->add_option("--width", rg_w, "Canvas width")->required();
  rg->add_option("--height", rg_h, "Canvas height")->required();
  rg->add_option("--out", rg_out, "Output .png or .pgm")->required();

  // make-pairs --------------------------------------------------------------
  auto* mp = app.add_subcommand("make-pairs", "Build structured edit pairs from an HTML corpus")->fallthrough();
  std::string mp_in, mp_op = "all", mp_lang, mp_out, mp_external;
  std::size_t mp_seeds = 1;
  mp->add_option("--in", mp_in, "Corpus directory or manifest")->required();
  mp->add_option("--op", mp_op, "Operation, comma list, or 'all'");
  mp->add_option("--lang", mp_lang, "Target language for translate edits");
  mp->add_option("--seeds", mp_seeds, "Number of consecutive seeds starting at --seed")->check(CLI::PositiveNumber);
  mp->add_option("--out", mp_out, "Output directory")->required();
  mp->add_option("--external-renderer", mp_external, "Command run as CMD <html> <png> per bundle side");

  // translate-pairs ---------------------------------------------------------
  auto* tp = app.add_subcommand("translate-pairs", "Translate each document into pivot languages, then edit")
                 ->fallthrough();
  std::string tp_in, tp_langs = "all", tp_op = "replace", tp_out;
  tp->add_option("--in", tp_in, "Corpus directory or manifest")->required();
  tp->add_option("--langs", tp_langs, "Pivot languages, comma list, or 'all'");
  tp->add_option("--op", tp_op, "Operation applied after translation");
  tp->add_option("--out", tp_out, "Output directory")->required();

  // evr ---------------------------------------------------------------------
  auto* ev = app.add_subcommand("evr", "Run the edit-verify-retry loop over source images")->fallthrough();
  std::string ev_in, ev_policy, ev_out, ev_proposals, ev_verdicts, ev_lang = "en";
  std::string ev_proposer_url, ev_executor_url, ev_verifier_url;
  bool ev_harvest = false, ev_harvest_only = false;
  ev->add_option("--in", ev_in, "Directory of source PNG images");
  ev->add_option("--policy", ev_policy, "Retry policy, e.g. max=3,forward=1");
  ev->add_option("--out", ev_out, "Run directory")->required();
  ev->add_option("--proposals", ev_proposals, "Proposal fixture JSON")->check(CLI::ExistingFile);
  ev->add_option("--verdicts", ev_verdicts, "Scripted verifier JSON")->check(CLI::ExistingFile);
  ev->add_option("--language", ev_lang, "Language code recorded on each case");
  ev->add_option("--proposer-url", ev_proposer_url, "Proposer endpoint");
  ev->add_option("--executor-url", ev_executor_url, "Executor endpoint");
  ev->add_option("--verifier-url", ev_verifier_url, "Verifier endpoint");
  ev->add_flag("--harvest", ev_harvest, "Harvest accepted cases into <out>/bundles after the run");
  ev->add_flag("--harvest-only", ev_harvest_only, "Only harvest an existing run");

  // train-sft ---------------------------------------------------------------
  auto* ts = app.add_subcommand("train-sft", "Flow-matching pretraining on a lab task")->fallthrough();
  std::string ts_task = "two-mode", ts_out;
  std::size_t ts_steps = 0;
  ts->add_option("--task", ts_task, "two-mode or glyph")->check(CLI::IsMember({"two-mode", "glyph"}));
  ts->add_option("--steps", ts_steps, "Override the recipe's step count");
  ts->add_option("--out", ts_out, "Output directory")->required();

  // train-rl ----------------------------------------------------------------
  auto* tr = app.add_subcommand("train-rl", "Contrastive RL fine-tuning on the glyph task")->fallthrough();
  std::string tr_ckpt, tr_out;
  std::size_t tr_epochs = 0, tr_k = 0;
  double tr_beta = 0.0;
  bool tr_dump = false;
  tr->add_option("--checkpoint", tr_ckpt, "Starting checkpoint (default: recipe warm start)")->check(CLI::ExistingFile);
  tr->add_option("--epochs", tr_epochs, "Override epochs");
  tr->add_option("--k", tr_k, "Override group size K");
  tr->add_option("--beta", tr_beta, "Override beta");
  tr->add_flag("--dump-groups", tr_dump, "Write every scored group to groups.jsonl");
  tr->add_option("--out", tr_out, "Output directory")->required();

  // score -------------------------------------------------------------------
  auto* sc = app.add_subcommand("score", "Score one edit with the judge")->fallthrough();
  std::string sc_source, sc_edited, sc_reference, sc_op = "replace", sc_instruction, sc_judge_url, sc_out;
  sc->add_option("--source", sc_source, "Source PNG")->required()->check(CLI::ExistingFile);
  sc->add_option("--edited", sc_edited, "Edited PNG")->required()->check(CLI::ExistingFile);
  sc->add_option("--reference", sc_reference, "Reference PNG (enables the quality dimension)")->check(CLI::ExistingFile);
  sc->add_option("--operation", sc_op, "Edit operation");
  sc->add_option("--instruction", sc_instruction, "Editing instruction")->required();
  sc->add_option("--judge-url", sc_judge_url, "Judge endpoint");
  sc->add_option("--out", sc_out, "Output directory for score.json");

  // bench -------------------------------------------------------------------
  auto* bn = app.add_subcommand("bench", "Run the benchmark and write report.md / report.csv")->fallthrough();
  std::string bn_cases, bn_out, bn_editor_url, bn_editor_model, bn_judge_url, bn_judge_script, bn_build_from;
  bn->add_option("--cases", bn_cases, "Case manifest or directory holding cases.jsonl");
  bn->add_option("--out", bn_out, "Output directory")->required();
  bn->add_option("--editor-url", bn_editor_url, "Editor endpoint (default: reference editor)");
  bn->add_option("--editor-model", bn_editor_model, "Editor model id");
  bn->add_option("--judge-url", bn_judge_url, "Judge endpoint");
  bn->add_option("--judge-script", bn_judge_script, "Scripted judge responses")->check(CLI::ExistingFile);
  bn->add_option("--build-mini", bn_build_from, "Build the mini-benchmark from this corpus into --out instead");

  // stats -------------------------------------------------------------------
  auto* st = app.add_subcommand("stats", "Corpus statistics over pair bundles")->fallthrough();
  std::string st_in, st_out;
  std::size_t st_synthetic = 0;
  st->add_option("--in", st_in, "Directory of pair bundles");
  st->add_option("--synthetic", st_synthetic, "Draw N records from the published operation mix instead");
  st->add_option("--out", st_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::RequiredError& e) {
    if (!app.remaining().empty() && app.get_subcommands().empty()) {
      std::cerr << "glyphforge: unknown subcommand '" << app.remaining().front() << "'\n"
                << "Run with --help for the list of subcommands.\n";
      return 2;
    }
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const gf::RunConfig cfg = resolve_config(g);

    if (rg->parsed()) {
      const auto regions = gf::glyph::regions_from_json(gf::read_text(rg_regions));
      const auto result = gf::glyph::render_glyph(regions, rg_w, rg_h);
      for (const auto& w : result.warnings) std::cerr << "render_glyph: warning: " << w << "\n";
      const fs::path out(rg_out);
      if (out.extension() == ".pgm") gf::write_bytes(out, gf::encode_pgm(result.canvas.image));
      else gf::write_png(out, result.canvas.image);
      return 0;
    }

    if (mp->parsed()) {
      const auto fixtures = corpus_entries(mp_in);
      const auto ops = parse_ops(mp_op);
      if (!mp_lang.empty() && !gf::is_known_language(mp_lang))
        gf::fail(gf::ErrorKind::config, "make_pairs", "unknown language '" + mp_lang + "'");
      std::vector<PairJob> jobs;
      for (const auto& f : fixtures)
        for (auto op : ops)
          for (std::size_t s = 0; s < mp_seeds; ++s) {
            const auto seed = cfg.seed + s;
            jobs.push_back({f.id + "-" + std::string(gf::to_string(op)) + "-s" + std::to_string(seed), f, op, seed, {}});
          }
      const auto summary = build_pairs(jobs, mp_out, cfg, mp_lang, mp_external);
      std::cout << "make-pairs: " << summary["bundles"].size() << " bundles, " << summary["skipped"].size()
                << " skipped\n";
      return 0;
    }

    if (tp->parsed()) {
      const auto fixtures = corpus_entries(tp_in);
      std::vector<std::string> langs;
      if (tp_langs == "all") langs.assign(gf::kLanguages.begin(), gf::kLanguages.end());
      else langs = split_list(tp_langs);
      for (const auto& l : langs)
        if (!gf::is_known_language(l)) gf::fail(gf::ErrorKind::config, "translate_pairs", "unknown language '" + l + "'");
      const auto ops = parse_ops(tp_op);
      std::vector<PairJob> jobs;
      for (const auto& f : fixtures)
        for (const auto& lang : langs)
          for (auto op : ops)
            jobs.push_back({f.id + "-" + lang + "-" + std::string(gf::to_string(op)) + "-s" + std::to_string(cfg.seed), f,
                            op, cfg.seed, lang});
      const auto summary = build_pairs(jobs, tp_out, cfg, {}, {});
      std::cout << "translate-pairs: " << summary["bundles"].size() << " bundles, " << summary["skipped"].size()
                << " skipped\n";
      return 0;
    }

    if (ev->parsed()) {
      const fs::path out(ev_out);
      if (!ev_harvest_only) {
        if (ev_in.empty()) gf::fail(gf::ErrorKind::config, "evr", "--in is required unless --harvest-only is given");
        gf::evr::RetryPolicy policy = cfg.policy;
        if (!ev_policy.empty()) policy = gf::evr::RetryPolicy::parse(ev_policy);
        std::vector<std::pair<std::string, gf::Image>> images;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(ev_in))
          if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) images.emplace_back(f.stem().string(), gf::read_png(f));

        std::unique_ptr<gf::evr::Proposer> proposer;
        const std::string proposer_url = ev_proposer_url.empty() ? cfg.proposer_url : ev_proposer_url;
        if (!ev_proposals.empty()) proposer = std::make_unique<gf::evr::FixtureProposer>(gf::evr::FixtureProposer::load(ev_proposals));
        else if (!proposer_url.empty()) proposer = std::make_unique<gf::evr::HttpProposer>(proposer_url);
        else gf::fail(gf::ErrorKind::config, "evr", "need --proposals or a proposer endpoint");

        std::unique_ptr<gf::evr::Executor> executor;
        const std::string executor_url = ev_executor_url.empty() ? cfg.executor_url : ev_executor_url;
        if (!executor_url.empty()) executor = std::make_unique<gf::evr::HttpExecutor>(executor_url);
        else executor = std::make_unique<gf::evr::MockExecutor>();

        std::unique_ptr<gf::evr::Verifier> verifier;
        const std::string verifier_url = ev_verifier_url.empty() ? cfg.verifier_url : ev_verifier_url;
        if (!ev_verdicts.empty())
          verifier = std::make_unique<gf::evr::ScriptedVerifier>(
              gf::evr::ScriptedVerifier::from_json(nlohmann::json::parse(gf::read_text(ev_verdicts))));
        else if (!verifier_url.empty()) verifier = std::make_unique<gf::evr::HttpVerifier>(verifier_url);
        else verifier = std::make_unique<gf::evr::ScriptedVerifier>();

        const auto cases = gf::evr::plan_cases(images, *proposer, out, ev_lang);
        const auto outcomes = gf::evr::run_cases(cases, {*executor, *verifier}, policy, out, cfg.workers);
        ordered_json summary = ordered_json::array();
        for (const auto& o : outcomes)
          summary.push_back({{"id", o.id}, {"status", gf::evr::to_string(o.status)}, {"attempts", o.attempts.size()}});
        gf::write_text(out / "summary.json", summary.dump(2) + "\n");
        std::size_t accepted = 0;
        for (const auto& o : outcomes) accepted += o.status == gf::evr::AttemptStatus::accepted;
        std::cout << "evr: " << outcomes.size() << " cases, " << accepted << " accepted\n";
      }
      if (ev_harvest || ev_harvest_only) {
        const auto rep = gf::evr::harvest(out, out / "bundles");
        std::cout << "harvest: " << rep.cases << " cases, " << rep.bundles.size() << " bundles, " << rep.corrupt_lines
                  << " corrupt log lines skipped\n";
      }
      return 0;
    }

    if (ts->parsed()) {
      const fs::path out(ts_out);
      fs::create_directories(out);
      ordered_json summary;
      summary["task"] = ts_task;
      summary["seed"] = cfg.seed;
      gf::flow::SftResult res;
      if (ts_task == "two-mode") {
        gf::lab::TwoModeRecipe recipe;
        if (ts_steps) recipe.sft.steps = ts_steps;
        res = gf::lab::train_two_mode(recipe, cfg.seed);
        summary["mode_hit_rate"] = gf::lab::mode_hit_rate(res.model, 500, gf::derive_seed(cfg.seed, "eval"),
                                                          std::max<std::size_t>(cfg.sampler_steps, 50));
      } else {
        gf::lab::GlyphRecipe recipe;
        if (ts_steps) recipe.sft.steps = ts_steps;
        res = gf::lab::train_glyph(recipe, cfg.seed);
        summary["mean_reward"] = gf::lab::glyph_eval(res.model, cfg.seed, cfg.sampler_steps);
      }
      summary["steps"] = res.loss_trace.size();
      summary["final_loss"] = res.loss_trace.empty() ? 0.0 : res.loss_trace.back();
      gf::flow::save_checkpoint(out / "model.gfvm", res.model);
      gf::write_text(out / "loss.csv", gf::flow::loss_trace_csv(res.loss_trace));
      gf::write_text(out / "summary.json", summary.dump(2) + "\n");
      print_json(summary);
      return 0;
    }

    if (tr->parsed()) {
      const fs::path out(tr_out);
      fs::create_directories(out);
      gf::lab::GlyphRecipe recipe;
      auto config = recipe.rl;
      config.beta = tr_beta > 0.0 ? tr_beta : cfg.beta;
      config.k = tr_k ? tr_k : cfg.k;
      config.epochs = tr_epochs ? tr_epochs : cfg.epochs;
      config.inner_steps = cfg.inner_steps;
      config.learning_rate = cfg.rl_learning_rate;
      config.sampler.steps = cfg.sampler_steps;
      const auto start = tr_ckpt.empty() ? gf::lab::glyph_warm_start(recipe, cfg.seed) : gf::flow::load_checkpoint(tr_ckpt);
      if (start.data_dim() != 64 || start.cond_dim() != 64)
        gf::fail(gf::ErrorKind::shape, "train_rl", "checkpoint is not a glyph-task model (needs 64-dim data and condition)");
      std::string groups;
      gf::nft::GroupSink sink;
      if (tr_dump)
        sink = [&](std::size_t epoch, std::size_t c, const gf::nft::CandidateGroup& grp) {
          groups += gf::nft::group_dump_line(epoch, c, grp);
        };
      const double before = gf::lab::glyph_eval(start, cfg.seed, cfg.sampler_steps);
      const auto res = gf::lab::train_glyph_rl(start, config, cfg.seed, sink);
      const double after = gf::lab::glyph_eval(res.model, cfg.seed, cfg.sampler_steps);
      gf::flow::save_checkpoint(out / "model.gfvm", res.model);
      gf::write_text(out / "reward_trace.csv", gf::nft::reward_trace_csv(res.trace));
      if (tr_dump) gf::write_text(out / "groups.jsonl", groups);
      ordered_json summary;
      summary["seed"] = cfg.seed;
      summary["beta"] = config.beta;
      summary["k"] = config.k;
      summary["epochs"] = config.epochs;
      summary["reward_before"] = before;
      summary["reward_after"] = after;
      gf::write_text(out / "summary.json", summary.dump(2) + "\n");
      print_json(summary);
      return 0;
    }

    if (sc->parsed()) {
      const auto op = gf::require_operation(sc_op, "score");
      const auto source = gf::read_png(sc_source);
      const auto edited = gf::read_png(sc_edited);
      std::optional<gf::Image> reference;
      if (!sc_reference.empty()) reference = gf::read_png(sc_reference);
      std::unique_ptr<gf::reward::JudgeClient> judge;
      if (const auto url = judge_url(sc_judge_url, cfg); !url.empty())
        judge = std::make_unique<gf::reward::HttpJudge>(url, cfg.judge_model, prompt_library(cfg));
      else
        judge = std::make_unique<gf::reward::MockJudge>(cfg.seed);
      std::vector<gf::reward::JudgeRequest> requests;
      for (auto dim : gf::reward::kDimensions) {
        if (dim == gf::reward::Dimension::quality && !reference) continue;
        gf::reward::JudgeRequest req;
        req.id = "score/" + std::string(gf::reward::to_string(dim));
        req.dimension = dim;
        req.operation = op;
        req.instruction = sc_instruction;
        req.source = &source;
        req.edited = &edited;
        if (dim == gf::reward::Dimension::quality) req.reference = &*reference;
        requests.push_back(req);
      }
      const auto responses = gf::reward::judge_all(*judge, requests, std::min(cfg.max_in_flight, cfg.workers));
      gf::reward::RewardVector v;
      v.weights = cfg.lambda;
      if (!reference) v.weights.quality = 0.0;
      ordered_json result;
      for (std::size_t i = 0; i < requests.size(); ++i) {
        const double s = gf::reward::expected_score(responses[i].distribution);
        switch (requests[i].dimension) {
          case gf::reward::Dimension::adherence: v.adherence = s; break;
          case gf::reward::Dimension::clarity: v.clarity = s; break;
          case gf::reward::Dimension::preservation: v.preservation = s; break;
          case gf::reward::Dimension::quality: v.quality = s; break;
        }
        result[std::string(gf::reward::to_string(requests[i].dimension))] = {{"score", s},
                                                                            {"rationale", responses[i].rationale}};
      }
      if (!reference) result["quality"] = nullptr;
      result["composite"] = gf::reward::composite_reward(v);
      result["judge_model"] = judge->model_id();
      if (!sc_out.empty()) gf::write_text(fs::path(sc_out) / "score.json", result.dump(2) + "\n");
      print_json(result);
      return 0;
    }

    if (bn->parsed()) {
      const fs::path out(bn_out);
      if (!bn_build_from.empty()) {
        gf::html::MockTextService svc(load_dictionary(cfg));
        gf::bench::MiniBenchSpec spec;
        spec.seed = cfg.seed;
        const auto n = gf::bench::build_mini_benchmark(gf::bench::manifest_path(bn_build_from).parent_path() /
                                                           "manifest.jsonl",
                                                       out, svc, spec);
        std::cout << "bench: wrote " << n << " cases to " << out.string() << "\n";
        return 0;
      }
      if (bn_cases.empty()) gf::fail(gf::ErrorKind::config, "bench", "--cases is required");
      const auto manifest = gf::bench::manifest_path(bn_cases);
      const auto cases = gf::bench::load_cases(manifest);

      std::unique_ptr<gf::evr::Executor> editor;
      std::string editor_model;
      const std::string editor_url = bn_editor_url.empty() ? cfg.editor_url : bn_editor_url;
      if (!editor_url.empty()) {
        editor = std::make_unique<gf::evr::HttpExecutor>(editor_url);
        editor_model = bn_editor_model.empty() ? cfg.editor_model : bn_editor_model;
      } else {
        editor = std::make_unique<gf::bench::ReferenceEditor>(cases);
        editor_model = bn_editor_model.empty() ? "reference" : bn_editor_model;
      }

      std::unique_ptr<gf::reward::JudgeClient> judge;
      fs::path script = bn_judge_script;
      if (script.empty() && fs::exists(manifest.parent_path() / "judge_script.json"))
        script = manifest.parent_path() / "judge_script.json";
      if (const auto url = judge_url(bn_judge_url, cfg); !url.empty()) {
        judge = std::make_unique<gf::reward::HttpJudge>(url, cfg.judge_model, prompt_library(cfg));
      } else if (!script.empty()) {
        auto mock = std::make_unique<gf::reward::MockJudge>(cfg.seed, gf::reward::MockProfile::scripted);
        mock->load_script(nlohmann::json::parse(gf::read_text(script)));
        judge = std::move(mock);
      } else {
        judge = std::make_unique<gf::reward::MockJudge>(cfg.seed);
      }

      gf::bench::BenchOptions options{out, editor_model, std::min(cfg.workers, cfg.max_in_flight)};
      const auto results = gf::bench::run_bench(cases, *editor, *judge, options);
      gf::bench::ReportConfig rc{judge->endpoint(), judge->model_id(), editor_model, cfg.seed, cfg.lambda};
      const auto report = gf::bench::aggregate(results, cases, rc);
      gf::bench::write_report(report, out);
      std::string lines;
      for (const auto& r : results) lines += gf::bench::detail::result_json(r).dump() + "\n";
      gf::write_text(out / "results.jsonl", lines);
      std::size_t failed = 0;
      for (const auto& r : results) failed += r.failed;
      std::cout << "bench: " << results.size() << " cases, " << failed << " failed; report in " << out.string() << "\n";
      return 0;
    }

    if (st->parsed()) {
      const fs::path out(st_out);
      gf::bench::StatsReport report;
      if (st_synthetic) report = gf::bench::stats(gf::bench::synthetic_corpus(st_synthetic, cfg.seed));
      else if (!st_in.empty()) report = gf::bench::stats_from_bundles(st_in);
      else gf::fail(gf::ErrorKind::config, "stats", "need --in or --synthetic");
      fs::create_directories(out);
      gf::write_text(out / "stats.md", gf::bench::stats_markdown(report));
      gf::write_text(out / "stats.json", gf::bench::stats_json(report).dump(2) + "\n");
      std::cout << "stats: " << report.bundles << " bundles, " << report.skipped << " skipped without metadata\n";
      return 0;
    }
  } catch (const gf::Error& e) {
    std::cerr << "glyphforge: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "glyphforge: unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
