#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/flow.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::nft {

using flow::FlowBatch;
using flow::FlowSchedule;
using flow::LossGrad;
using flow::Optimizer;
using flow::OptimizerKind;
using flow::SamplerConfig;
using flow::VelocityModel;

inline constexpr double kTieThreshold = 1e-12;

// Group-relative optimality probability: r = 1/2 + 1/2 clip((R - mean)/std, -1, 1)
// with the population standard deviation. A tied group maps to 1/2 everywhere.
inline std::vector<double> optimality(std::span<const double> rewards) {
  if (rewards.empty()) fail(ErrorKind::config, "optimality", "group must contain at least one reward");
  for (std::size_t i = 0; i < rewards.size(); ++i)
    if (!std::isfinite(rewards[i]))
      fail(ErrorKind::numerical, "optimality", "non-finite reward at candidate " + std::to_string(i));
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> out(rewards.size(), 0.5);
  if (sd < kTieThreshold) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    const double z = std::clamp((rewards[i] - mean) / sd, -1.0, 1.0);
    out[i] = 0.5 + 0.5 * z;
  }
  return out;
}

// v+ = (1 - beta) v_old + beta v_theta
inline std::vector<double> positive_velocity(std::span<const double> v_old, std::span<const double> v_theta,
                                             double beta) {
  if (v_old.size() != v_theta.size()) fail(ErrorKind::shape, "positive_velocity", "velocity dimensions differ");
  std::vector<double> out(v_old.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - beta) * v_old[i] + beta * v_theta[i];
  return out;
}

// v- = (1 + beta) v_old - beta v_theta
inline std::vector<double> negative_velocity(std::span<const double> v_old, std::span<const double> v_theta,
                                             double beta) {
  if (v_old.size() != v_theta.size()) fail(ErrorKind::shape, "negative_velocity", "velocity dimensions differ");
  std::vector<double> out(v_old.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 + beta) * v_old[i] - beta * v_theta[i];
  return out;
}

// Contrastive loss over re-noised candidates:
//   mean_i [ r_i ||v+ - v||^2 + (1 - r_i) ||v- - v||^2 ]
// The gradient flows through v_theta only; old_model is frozen.
inline LossGrad nft_loss(const VelocityModel& model, const VelocityModel& old_model, const FlowBatch& batch,
                         std::span<const double> r, double beta, const FlowSchedule& schedule = {}) {
  if (!model.same_architecture(old_model))
    fail(ErrorKind::config, "nft_loss", "old and current model architectures differ");
  if (!(beta > 0.0)) fail(ErrorKind::config, "nft_loss", "beta must be positive");
  if (r.size() != batch.size()) fail(ErrorKind::shape, "nft_loss", "one optimality value per sample required");
  if (batch.dim() != model.data_dim() || batch.cond_dim() != model.cond_dim())
    fail(ErrorKind::shape, "nft_loss", "batch dimensions do not match the model");
  LossGrad out;
  out.grad.assign(model.param_count(), 0.0);
  if (batch.size() == 0) return out;
  const double scale = 1.0 / static_cast<double>(batch.size());
  VelocityModel::Cache cache;
  std::vector<double> g(model.data_dim());
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const auto xt = flow::interpolate(batch.x0(s), batch.eps(s), batch.t(s), schedule);
    const auto target = flow::velocity_target(batch.x0(s), batch.eps(s), schedule);
    const auto v_old = old_model.predict(xt, batch.t(s), batch.cond(s));
    model.forward(model.make_input(xt, batch.t(s), batch.cond(s)), cache);
    const auto& v_theta = cache.activations.back();
    // With delta = v_theta - v_old: v+ = v_old + beta*delta, v- = v_old - beta*delta,
    // expanded around v_old so that delta = 0 and r = 1/2 give an exactly zero gradient.
    double pos = 0.0, neg = 0.0;
    for (std::size_t k = 0; k < v_theta.size(); ++k) {
      if (!std::isfinite(v_theta[k]))
        fail(ErrorKind::numerical, "nft_loss", "non-finite model output at sample " + std::to_string(s));
      const double base = v_old[k] - target[k];
      const double step = beta * (v_theta[k] - v_old[k]);
      const double dp = base + step;
      const double dn = base - step;
      pos += dp * dp;
      neg += dn * dn;
      g[k] = 2.0 * beta * scale * ((2.0 * r[s] - 1.0) * base + step);
    }
    out.loss += r[s] * pos + (1.0 - r[s]) * neg;
    model.backward(cache, g, out.grad);
  }
  out.loss *= scale;
  return out;
}

// K samples for one condition; each candidate gets its own seed derived from
// the group seed.
struct CandidateGroup {
  std::vector<double> cond;
  std::vector<std::vector<double>> candidates;
  std::vector<double> rewards;
  std::vector<double> r;
  std::uint64_t seed = 0;

  std::size_t k() const noexcept { return candidates.size(); }
};

inline std::uint64_t candidate_seed(std::uint64_t group_seed, std::size_t index) {
  return derive_seed(group_seed, static_cast<std::uint64_t>(index));
}

inline CandidateGroup rollout(const VelocityModel& model, std::span<const double> cond, std::size_t k,
                              const SamplerConfig& sampler) {
  if (k < 1) fail(ErrorKind::config, "rollout", "K must be at least 1");
  CandidateGroup group;
  group.cond.assign(cond.begin(), cond.end());
  group.seed = sampler.seed;
  for (std::size_t i = 0; i < k; ++i) {
    SamplerConfig cfg = sampler;
    cfg.seed = candidate_seed(sampler.seed, i);
    group.candidates.push_back(flow::sample_ode(model, cond, cfg));
  }
  return group;
}

// Maps (candidate, cond) to a task reward in [0,1].
using RewardFn = std::function<double(std::span<const double>, std::span<const double>)>;

inline void score_group(CandidateGroup& group, const RewardFn& reward, std::size_t cond_index) {
  group.rewards.clear();
  for (std::size_t i = 0; i < group.k(); ++i) {
    const double value = reward(group.candidates[i], group.cond);
    if (!(value >= 0.0 && value <= 1.0))
      fail(ErrorKind::numerical, "train_rl",
           "reward " + flow::format_double(value) + " outside [0,1] for condition " + std::to_string(cond_index) +
               ", candidate " + std::to_string(i));
    group.rewards.push_back(value);
  }
  group.r = optimality(group.rewards);
}

struct NftConfig {
  double beta = 0.1;
  std::size_t k = 8;
  std::size_t epochs = 50;
  std::size_t inner_steps = 4;
  double learning_rate = 0.001;
  OptimizerKind optimizer = OptimizerKind::adam;
  SamplerConfig sampler{};
  std::uint64_t seed = 0;

  void validate() const {
    if (!(beta > 0.0)) fail(ErrorKind::config, "nft_config", "beta must be positive");
    if (k < 1) fail(ErrorKind::config, "nft_config", "K must be at least 1");
    sampler.validate();
  }
};

struct EpochStats {
  std::size_t epoch = 0;
  double mean_reward = 0.0;
  double mean_r = 0.0;
};

struct RlResult {
  VelocityModel model;
  std::vector<EpochStats> trace;
};

// Called once per scored group; used for JSONL group dumps.
using GroupSink = std::function<void(std::size_t epoch, std::size_t cond_index, const CandidateGroup&)>;

// Per epoch: freeze the old policy, roll out K candidates per condition from
// it, score and normalize within each group, then take inner_steps gradient
// steps on the contrastive loss with fresh noise and timesteps.
inline RlResult train_rl(VelocityModel model, const std::vector<std::vector<double>>& conditions,
                         const RewardFn& reward, const NftConfig& config, const GroupSink& sink = {},
                         const FlowSchedule& schedule = {}) {
  config.validate();
  if (conditions.empty() && config.epochs > 0) fail(ErrorKind::config, "train_rl", "conditions dataset is empty");
  Rng rng(config.seed);
  RlResult result;
  const std::size_t dim = model.data_dim();
  Optimizer opt(config.optimizer, config.learning_rate, model.param_count());
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const VelocityModel old = model;
    std::vector<CandidateGroup> groups;
    groups.reserve(conditions.size());
    double reward_sum = 0.0, r_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < conditions.size(); ++c) {
      SamplerConfig sampler = config.sampler;
      sampler.seed = derive_seed(config.seed, "rollout/" + std::to_string(epoch) + "/" + std::to_string(c));
      auto group = rollout(old, conditions[c], config.k, sampler);
      score_group(group, reward, c);
      for (std::size_t i = 0; i < group.k(); ++i) {
        reward_sum += group.rewards[i];
        r_sum += group.r[i];
        ++count;
      }
      if (sink) sink(epoch, c, group);
      groups.push_back(std::move(group));
    }
    result.trace.push_back({epoch, reward_sum / static_cast<double>(count), r_sum / static_cast<double>(count)});

    std::vector<double> eps(dim);
    for (std::size_t step = 0; step < config.inner_steps; ++step) {
      FlowBatch batch(dim, model.cond_dim());
      std::vector<double> r;
      for (const auto& group : groups)
        for (std::size_t i = 0; i < group.k(); ++i) {
          for (auto& e : eps) e = rng.normal();
          batch.add(group.candidates[i], eps, rng.uniform(), group.cond);
          r.push_back(group.r[i]);
        }
      const auto lg = nft_loss(model, old, batch, r, config.beta, schedule);
      opt.step(model.params(), lg.grad);
    }
  }
  result.model = std::move(model);
  return result;
}

// Mean reward of K fresh rollouts per condition under a fixed seed, for
// before/after comparisons on identical noise.
inline double evaluate_mean_reward(const VelocityModel& model, const std::vector<std::vector<double>>& conditions,
                                   const RewardFn& reward, std::size_t k, const SamplerConfig& sampler) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    SamplerConfig cfg = sampler;
    cfg.seed = derive_seed(sampler.seed, "eval/" + std::to_string(c));
    auto group = rollout(model, conditions[c], k, cfg);
    score_group(group, reward, c);
    for (double v : group.rewards) sum += v;
    count += group.k();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

inline std::string reward_trace_csv(std::span<const EpochStats> trace) {
  std::string out = "epoch,mean_reward,mean_r\n";
  for (const auto& e : trace)
    out += std::to_string(e.epoch) + "," + flow::format_double(e.mean_reward) + "," + flow::format_double(e.mean_r) +
           "\n";
  return out;
}

inline std::string encode_vector_b64(std::span<const double> v) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(v.size() * 8);
  for (double x : v) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return base64_encode(bytes);
}

inline std::vector<double> decode_vector_b64(std::string_view text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) fail(ErrorKind::protocol, "group_dump", "vector payload is not a multiple of 8 bytes");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes[k * 8 + static_cast<std::size_t>(i)]} << (8 * i);
    std::memcpy(&out[k], &bits, sizeof bits);
  }
  return out;
}

// One JSONL record per group: {epoch, cond_id, candidates: [b64 f64le], rewards, r}.
inline std::string group_dump_line(std::size_t epoch, std::size_t cond_id, const CandidateGroup& group) {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["cond_id"] = cond_id;
  auto& cands = j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : group.candidates) cands.push_back(encode_vector_b64(c));
  j["rewards"] = group.rewards;
  j["r"] = group.r;
  return j.dump() + "\n";
}

}  // namespace glyphforge::nft
