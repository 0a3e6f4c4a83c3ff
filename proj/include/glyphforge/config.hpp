#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/evr.hpp"
#include "glyphforge/image.hpp"
#include "glyphforge/reward.hpp"

namespace glyphforge {

// Shared settings for every subcommand. Loaded from JSON; command-line flags
// override individual fields afterwards.
//
// {
//   "seed": 0, "workers": 1,
//   "paths":     {"corpus", "dictionary", "prompts"},
//   "endpoints": {"judge", "judge_model", "editor", "editor_model", "executor", "verifier", "proposer"},
//   "reward":    {"lambda": {"adherence", "clarity", "preservation", "quality"}, "max_in_flight"},
//   "rl":        {"beta", "k", "epochs", "inner_steps", "learning_rate"},
//   "sampler":   {"steps"},
//   "evr":       {"max_attempts", "forward_feedback"}
// }
struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  std::string corpus_path;
  std::string dictionary_path;
  std::string prompts_path;

  std::string judge_url;
  std::string judge_model = "judge";
  std::string editor_url;
  std::string editor_model = "editor";
  std::string executor_url;
  std::string verifier_url;
  std::string proposer_url;

  reward::RewardWeights lambda{};
  std::size_t max_in_flight = 4;

  double beta = 0.1;
  std::size_t k = 8;
  std::size_t epochs = 50;
  std::size_t inner_steps = 4;
  double rl_learning_rate = 0.001;
  std::size_t sampler_steps = 20;

  evr::RetryPolicy policy{};

  void validate() const {
    if (workers < 1) fail(ErrorKind::config, "config", "workers must be at least 1");
    if (max_in_flight < 1) fail(ErrorKind::config, "config", "reward.max_in_flight must be at least 1");
    if (!(beta > 0.0)) fail(ErrorKind::config, "config", "rl.beta must be positive");
    if (k < 1) fail(ErrorKind::config, "config", "rl.k must be at least 1");
    if (sampler_steps < 1) fail(ErrorKind::config, "config", "sampler.steps must be at least 1");
    if (!(rl_learning_rate > 0.0)) fail(ErrorKind::config, "config", "rl.learning_rate must be positive");
    policy.validate();
    (void)lambda.normalized();
  }
};

namespace detail {

inline void require_object(const nlohmann::json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(ErrorKind::config, "config", where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key()))
      fail(ErrorKind::config, "config", "unknown key '" + (where.empty() ? "" : where + ".") + it.key() + "'");
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j[key];
  const std::string name = (where.empty() ? "" : where + ".") + key;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(ErrorKind::config, "config", name + " must be a string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(ErrorKind::config, "config", name + " must be a boolean");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail(ErrorKind::config, "config", name + " must be a number");
  } else {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.template get<long long>() >= 0))
      fail(ErrorKind::config, "config", name + " must be a nonnegative integer");
  }
  out = v.template get<T>();
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j) {
  using detail::read_field;
  detail::require_object(j, "", {"seed", "workers", "paths", "endpoints", "reward", "rl", "sampler", "evr"});
  RunConfig c;
  read_field(j, "seed", "", c.seed);
  read_field(j, "workers", "", c.workers);
  if (j.contains("paths")) {
    const auto& p = j["paths"];
    detail::require_object(p, "paths", {"corpus", "dictionary", "prompts"});
    read_field(p, "corpus", "paths", c.corpus_path);
    read_field(p, "dictionary", "paths", c.dictionary_path);
    read_field(p, "prompts", "paths", c.prompts_path);
  }
  if (j.contains("endpoints")) {
    const auto& e = j["endpoints"];
    detail::require_object(e, "endpoints",
                           {"judge", "judge_model", "editor", "editor_model", "executor", "verifier", "proposer"});
    read_field(e, "judge", "endpoints", c.judge_url);
    read_field(e, "judge_model", "endpoints", c.judge_model);
    read_field(e, "editor", "endpoints", c.editor_url);
    read_field(e, "editor_model", "endpoints", c.editor_model);
    read_field(e, "executor", "endpoints", c.executor_url);
    read_field(e, "verifier", "endpoints", c.verifier_url);
    read_field(e, "proposer", "endpoints", c.proposer_url);
  }
  if (j.contains("reward")) {
    const auto& r = j["reward"];
    detail::require_object(r, "reward", {"lambda", "max_in_flight"});
    read_field(r, "max_in_flight", "reward", c.max_in_flight);
    if (r.contains("lambda")) {
      const auto& l = r["lambda"];
      detail::require_object(l, "reward.lambda", {"adherence", "clarity", "preservation", "quality"});
      read_field(l, "adherence", "reward.lambda", c.lambda.adherence);
      read_field(l, "clarity", "reward.lambda", c.lambda.clarity);
      read_field(l, "preservation", "reward.lambda", c.lambda.preservation);
      read_field(l, "quality", "reward.lambda", c.lambda.quality);
      c.lambda = c.lambda.normalized();
    }
  }
  if (j.contains("rl")) {
    const auto& r = j["rl"];
    detail::require_object(r, "rl", {"beta", "k", "epochs", "inner_steps", "learning_rate"});
    read_field(r, "beta", "rl", c.beta);
    read_field(r, "k", "rl", c.k);
    read_field(r, "epochs", "rl", c.epochs);
    read_field(r, "inner_steps", "rl", c.inner_steps);
    read_field(r, "learning_rate", "rl", c.rl_learning_rate);
  }
  if (j.contains("sampler")) {
    detail::require_object(j["sampler"], "sampler", {"steps"});
    read_field(j["sampler"], "steps", "sampler", c.sampler_steps);
  }
  if (j.contains("evr")) {
    const auto& e = j["evr"];
    detail::require_object(e, "evr", {"max_attempts", "forward_feedback"});
    if (e.contains("max_attempts")) {
      if (!e["max_attempts"].is_number_integer()) fail(ErrorKind::config, "config", "evr.max_attempts must be an integer");
      c.policy.max_attempts = e["max_attempts"].get<int>();
    }
    read_field(e, "forward_feedback", "evr", c.policy.forward_feedback);
  }
  c.validate();
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, "config", path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

}  // namespace glyphforge
