#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "glyphforge/lab.hpp"
#include "glyphforge/nft.hpp"
#include "support.hpp"

using namespace glyphforge;
using namespace glyphforge::nft;
using flow::FlowBatch;
using flow::SamplerConfig;
using flow::SamplerMethod;
using flow::VelocityModel;
using testsupport::random_batch;
using testsupport::random_model;

static std::vector<double> random_rewards(Rng& rng, std::size_t k) {
  std::vector<double> out(k);
  for (auto& v : out) v = rng.uniform();
  return out;
}

TEST(Optimality, HandExamples) {
  const auto tied = optimality(std::vector<double>{0.3, 0.3, 0.3});
  for (double r : tied) EXPECT_EQ(r, 0.5);
  const auto two = optimality(std::vector<double>{0.2, 0.8});
  EXPECT_NEAR(two[0], 0.0, 1e-15);
  EXPECT_NEAR(two[1], 1.0, 1e-15);
  EXPECT_EQ(optimality(std::vector<double>{0.7}), std::vector<double>{0.5});
}

TEST(Optimality, Rejections) {
  EXPECT_THROW(optimality(std::vector<double>{}), Error);
  EXPECT_THROW(optimality(std::vector<double>{0.1, NAN}), Error);
  EXPECT_THROW(optimality(std::vector<double>{0.1, INFINITY}), Error);
}

TEST(Optimality, RangeAndMonotoneWithinGroup) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rewards = random_rewards(rng, 2 + trial % 15);
    const auto r = optimality(rewards);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_GE(r[i], 0.0);
      EXPECT_LE(r[i], 1.0);
      for (std::size_t j = 0; j < r.size(); ++j)
        if (rewards[i] <= rewards[j]) EXPECT_LE(r[i], r[j]);
    }
  }
}

TEST(Optimality, AffineInvariance) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rewards = random_rewards(rng, 8);
    const double a = std::exp(rng.uniform(-3.0, 3.0)), b = rng.uniform(-10.0, 10.0);
    std::vector<double> moved(rewards.size());
    for (std::size_t i = 0; i < rewards.size(); ++i) moved[i] = a * rewards[i] + b;
    const auto r1 = optimality(rewards), r2 = optimality(moved);
    for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_NEAR(r1[i], r2[i], 1e-9);
  }
}

TEST(Optimality, TinySpreadIsTreatedAsTie) {
  const auto r = optimality(std::vector<double>{0.5, 0.5 + 1e-14});
  EXPECT_EQ(r[0], 0.5);
  EXPECT_EQ(r[1], 0.5);
}

TEST(ImplicitPolicies, Examples) {
  const std::vector<double> v_old = {1, 1}, v_theta = {3, 1};
  EXPECT_EQ(positive_velocity(v_old, v_theta, 0.5), (std::vector<double>{2, 1}));
  EXPECT_EQ(negative_velocity(v_old, v_theta, 0.5), (std::vector<double>{0, 1}));
  EXPECT_EQ(positive_velocity(v_old, v_theta, 1.0), v_theta);
  EXPECT_EQ(negative_velocity(v_old, v_theta, 1.0), (std::vector<double>{-1, 1}));
  const auto p = positive_velocity(v_old, v_theta, 1e-9), n = negative_velocity(v_old, v_theta, 1e-9);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_NEAR(p[i], v_old[i], 1e-6);
    EXPECT_NEAR(n[i], v_old[i], 1e-6);
  }
  EXPECT_THROW(positive_velocity(v_old, std::vector<double>{1}, 0.5), Error);
}

// Dyadic inputs keep every product and sum exact, so the identity can be
// checked with ==.
TEST(ImplicitPolicies, SumIsTwiceOldExactly) {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v_old(4), v_theta(4);
    for (auto& v : v_old) v = static_cast<double>(static_cast<int>(rng.uniform_int(0, 16384)) - 8192) / 1024.0;
    for (auto& v : v_theta) v = static_cast<double>(static_cast<int>(rng.uniform_int(0, 16384)) - 8192) / 1024.0;
    const double beta = static_cast<double>(rng.uniform_int(1, 256)) / 256.0;
    const auto p = positive_velocity(v_old, v_theta, beta), n = negative_velocity(v_old, v_theta, beta);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(p[i] + n[i], 2.0 * v_old[i]);
  }
}

TEST(NftLoss, GradientMatchesCentralDifferences) {
  Rng rng(12);
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const auto c = static_cast<std::size_t>(rng.uniform_int(0, 2));
    const std::vector<std::size_t> hidden = {static_cast<std::size_t>(rng.uniform_int(2, 7))};
    auto model = random_model(d, c, hidden, 300 + trial);
    const auto old = random_model(d, c, hidden, 400 + trial);
    const auto batch = random_batch(d, c, 2 + trial % 5, 500 + trial);
    const auto r = optimality(random_rewards(rng, batch.size()));
    const double beta = rng.uniform(0.05, 1.0);
    const auto analytic = nft_loss(model, old, batch, r, beta).grad;
    const auto numeric = testsupport::numeric_gradient(model, [&] { return nft_loss(model, old, batch, r, beta).loss; });
    EXPECT_LT(testsupport::relative_error(analytic, numeric), 1e-4) << "trial " << trial;
  }
}

TEST(NftLoss, ReducesToFlowLossWhenAllPositiveAndBetaOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = random_model(3, 2, {6}, seed);
    const auto old = random_model(3, 2, {6}, seed + 50);
    const auto batch = random_batch(3, 2, 7, seed + 99);
    const std::vector<double> ones(batch.size(), 1.0);
    const auto a = nft_loss(model, old, batch, ones, 1.0);
    const auto b = flow::flow_loss(model, batch);
    EXPECT_NEAR(a.loss, b.loss, 1e-10);
    for (std::size_t i = 0; i < a.grad.size(); ++i) EXPECT_NEAR(a.grad[i], b.grad[i], 1e-10);
  }
}

TEST(NftLoss, NeutralSignalAtOldPolicyGivesZeroGradient) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto model = random_model(4, 1, {5, 5}, seed);
    const auto batch = random_batch(4, 1, 6, seed + 7);
    const std::vector<double> half(batch.size(), 0.5);
    const auto lg = nft_loss(model, model, batch, half, 0.1 + 0.04 * static_cast<double>(seed));
    double norm = 0.0;
    for (double g : lg.grad) norm += g * g;
    EXPECT_LE(std::sqrt(norm), 1e-8);
  }
}

// Single linear output v = b (weights zero). At theta = theta_old the bias
// gradient is 2*beta*(2r-1)*(v_old - v), so a descent step pulls v toward the
// target when r > 1/2 and pushes it away when r < 1/2.
TEST(NftLoss, DescentDirectionFollowsOptimality) {
  const double target = 1.0, start = 0.2, beta = 0.3;
  for (double r_value : {0.9, 0.1}) {
    auto model = VelocityModel::from_widths({2, 1}, {0.0, 0.0, start});
    const auto old = model;
    FlowBatch batch(1, 0);
    batch.add(std::vector<double>{0.0}, std::vector<double>{target}, 0.5, {});
    const std::vector<double> r = {r_value};
    const auto lg = nft_loss(model, old, batch, r, beta);
    EXPECT_NEAR(lg.grad[2], 2.0 * beta * (2.0 * r_value - 1.0) * (start - target), 1e-12);
    model.params()[2] -= 0.1 * lg.grad[2];
    const double before = std::abs(start - target), after = std::abs(model.params()[2] - target);
    if (r_value > 0.5) EXPECT_LT(after, before);
    else EXPECT_GT(after, before);
  }
}

TEST(NftLoss, Rejections) {
  const auto a = random_model(2, 0, {3}, 1), b = random_model(2, 0, {4}, 1);
  const auto batch = random_batch(2, 0, 2, 3);
  const std::vector<double> r = {0.5, 0.5};
  try {
    nft_loss(a, b, batch, r, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
  }
  EXPECT_THROW(nft_loss(a, a, batch, r, 0.0), Error);
  EXPECT_THROW(nft_loss(a, a, batch, std::vector<double>{0.5}, 0.1), Error);
}

TEST(Rollout, SingleCandidateMatchesSampler) {
  const auto m = random_model(3, 2, {6}, 2);
  const std::vector<double> cond = {0.5, -0.5};
  const SamplerConfig cfg{10, SamplerMethod::euler, 1234};
  const auto g = rollout(m, cond, 1, cfg);
  ASSERT_EQ(g.k(), 1u);
  SamplerConfig derived = cfg;
  derived.seed = candidate_seed(1234, 0);
  EXPECT_EQ(g.candidates[0], flow::sample_ode(m, cond, derived));
  EXPECT_THROW(rollout(m, cond, 0, cfg), Error);
}

TEST(Rollout, RepeatableAndDistinct) {
  const auto model = lab::glyph_warm_start({}, 0);
  const auto cond = lab::glyph_conditions()[0];
  const SamplerConfig cfg{20, SamplerMethod::euler, 55};
  const auto a = rollout(model, cond, 8, cfg), b = rollout(model, cond, 8, cfg);
  for (std::size_t i = 0; i < 8; ++i)
    EXPECT_EQ(std::memcmp(a.candidates[i].data(), b.candidates[i].data(), a.candidates[i].size() * sizeof(double)), 0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) {
      double dist = 0.0;
      for (std::size_t k = 0; k < cond.size(); ++k)
        dist += (a.candidates[i][k] - a.candidates[j][k]) * (a.candidates[i][k] - a.candidates[j][k]);
      EXPECT_GT(dist, 0.0);
    }
}

TEST(TrainRl, ZeroEpochsIsIdentity) {
  const auto start = random_model(64, 64, {8}, 3);
  NftConfig cfg;
  cfg.epochs = 0;
  const auto res = lab::train_glyph_rl(start, cfg, 0);
  EXPECT_TRUE(std::equal(start.params().begin(), start.params().end(), res.model.params().begin()));
  EXPECT_TRUE(res.trace.empty());
}

TEST(TrainRl, RewardOutsideUnitIntervalNamesItsSource) {
  const auto start = random_model(2, 1, {4}, 3);
  NftConfig cfg;
  cfg.epochs = 1;
  cfg.k = 2;
  try {
    train_rl(start, {{0.0}, {1.0}}, [](auto, auto) { return 1.5; }, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("condition 0, candidate 0"), std::string::npos);
  }
}

static double drift(const VelocityModel& a, const VelocityModel& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.param_count(); ++i) s += (a.params()[i] - b.params()[i]) * (a.params()[i] - b.params()[i]);
  return std::sqrt(s);
}

TEST(TrainRl, ConstantRewardBarelyMoves) {
  lab::GlyphRecipe recipe;
  const auto start = lab::glyph_warm_start(recipe, 1);
  NftConfig cfg = recipe.rl;
  cfg.epochs = 10;
  const auto informative = lab::train_glyph_rl(start, cfg, 1);
  cfg.seed = derive_seed(1, "glyph_rl/train");
  const auto flat = train_rl(start, lab::glyph_conditions(), [](auto, auto) { return 0.5; }, cfg);
  EXPECT_GT(drift(informative.model, start), 0.0);
  EXPECT_LE(drift(flat.model, start), 0.1 * drift(informative.model, start));
  for (const auto& e : flat.trace) EXPECT_EQ(e.mean_r, 0.5);
}

TEST(TrainRl, PixelMatchRewardImproves) {
  lab::GlyphRecipe recipe;
  const auto start = lab::glyph_warm_start(recipe, 0);
  NftConfig cfg = recipe.rl;
  ASSERT_EQ(cfg.epochs, 50u);
  ASSERT_EQ(cfg.k, 8u);
  ASSERT_DOUBLE_EQ(cfg.beta, 0.1);
  const double before = lab::glyph_eval(start, 0);
  const auto res = lab::train_glyph_rl(start, cfg, 0);
  const double after = lab::glyph_eval(res.model, 0);
  EXPECT_GE(after - before, 0.05);
  ASSERT_EQ(res.trace.size(), 50u);
  EXPECT_GE(res.trace.back().mean_reward - res.trace.front().mean_reward, 0.05);
}

TEST(GroupDump, RoundTrip) {
  CandidateGroup g;
  g.candidates = {{0.1, -2.5, 1e-300}, {3.0, 0.0, -0.0}};
  g.rewards = {0.25, 0.75};
  g.r = optimality(g.rewards);
  const auto j = nlohmann::json::parse(group_dump_line(3, 1, g));
  EXPECT_EQ(j["epoch"], 3);
  EXPECT_EQ(j["cond_id"], 1);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto back = decode_vector_b64(j["candidates"][i].get<std::string>());
    ASSERT_EQ(back.size(), 3u);
    EXPECT_EQ(std::memcmp(back.data(), g.candidates[i].data(), 3 * sizeof(double)), 0);
  }
  EXPECT_EQ(j["r"].get<std::vector<double>>(), g.r);
}

TEST(RewardTrace, CsvHeader) {
  const std::vector<EpochStats> trace = {{1, 0.5, 0.5}};
  EXPECT_EQ(reward_trace_csv(trace), "epoch,mean_reward,mean_r\n1,0.5,0.5\n");
}
