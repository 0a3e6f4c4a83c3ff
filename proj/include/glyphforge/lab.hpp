#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include "glyphforge/flow.hpp"
#include "glyphforge/glyph.hpp"
#include "glyphforge/nft.hpp"
#include "glyphforge/reward.hpp"

// Desk-scale tasks for the flow-matching and RL lab.
namespace glyphforge::lab {

// Two tight Gaussian modes on the x axis.
inline constexpr std::array<std::array<double, 2>, 2> kModes = {{{-2.0, 0.0}, {2.0, 0.0}}};
inline constexpr double kModeSpread = 0.05;

inline flow::Dataset two_mode_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  flow::Dataset data(2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = kModes[i % 2];
    const std::array<double, 2> x = {m[0] + kModeSpread * rng.normal(), m[1] + kModeSpread * rng.normal()};
    data.add(x, {});
  }
  return data;
}

inline double distance_to_nearest_mode(std::span<const double> x) {
  double best = INFINITY;
  for (const auto& m : kModes) best = std::min(best, std::hypot(x[0] - m[0], x[1] - m[1]));
  return best;
}

// 8x8 raster of a glyph, pixels in {0, 1}, row-major.
inline std::vector<double> glyph_raster(char32_t cp, const glyph::GlyphFont& font = glyph::GlyphFont::builtin()) {
  std::vector<double> out(64);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) out[static_cast<std::size_t>(y * 8 + x)] = font.pixel(cp, x, y) ? 1.0 : 0.0;
  return out;
}

inline constexpr std::u32string_view kGlyphTaskChars = U"ACEHLOTX";

// Conditions are the target glyph rasters themselves; data = condition.
inline std::vector<std::vector<double>> glyph_conditions(std::u32string_view chars = kGlyphTaskChars) {
  std::vector<std::vector<double>> out;
  for (char32_t c : chars) out.push_back(glyph_raster(c));
  return out;
}

inline flow::Dataset glyph_dataset(std::u32string_view chars = kGlyphTaskChars) {
  flow::Dataset data(64, 64);
  for (const auto& g : glyph_conditions(chars)) data.add(g, g);
  return data;
}

inline std::vector<double> clamp_unit(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  for (auto& x : out) x = std::clamp(x, 0.0, 1.0);
  return out;
}

// Pixel-match reward: samples are clamped to [0,1] then compared to the
// conditioning glyph.
inline double pixel_match_reward(std::span<const double> candidate, std::span<const double> cond) {
  return reward::toy_reward(clamp_unit(candidate), cond);
}

// Training recipes for the two lab tasks.
struct TwoModeRecipe {
  std::vector<std::size_t> hidden = {64, 64};
  std::size_t dataset_size = 1000;
  flow::SftConfig sft{2000, 64, 0.003, 0, flow::OptimizerKind::adam, 600, true};
};

struct GlyphRecipe {
  std::vector<std::size_t> hidden = {128, 128};
  flow::SftConfig sft{2000, 64, 0.003, 0, flow::OptimizerKind::adam, 200, true};
  // The RL stage starts from a briefly trained, smaller model so that the
  // reward has headroom.
  std::vector<std::size_t> rl_hidden = {64, 64};
  flow::SftConfig rl_warm_start{500, 64, 0.003, 0, flow::OptimizerKind::adam, 50, true};
  nft::NftConfig rl{};
};

// Fraction of `n` ODE samples that land within `radius` of a mode.
inline double mode_hit_rate(const flow::VelocityModel& model, std::size_t n, std::uint64_t seed,
                            std::size_t steps = 50, double radius = 0.5) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = flow::sample_ode(model, {}, {steps, flow::SamplerMethod::euler, derive_seed(seed, std::uint64_t{i})});
    if (distance_to_nearest_mode(x) < radius) ++hits;
  }
  return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
}

inline flow::SftResult train_two_mode(const TwoModeRecipe& recipe, std::uint64_t seed) {
  flow::VelocityModel model(2, 0, recipe.hidden);
  model.initialize(derive_seed(seed, "two_mode/init"));
  const auto data = two_mode_dataset(recipe.dataset_size, derive_seed(seed, "two_mode/data"));
  auto cfg = recipe.sft;
  cfg.seed = derive_seed(seed, "two_mode/sft");
  return flow::train_sft(std::move(model), data, cfg);
}

inline flow::SftResult train_glyph(const GlyphRecipe& recipe, std::uint64_t seed) {
  flow::VelocityModel model(64, 64, recipe.hidden);
  model.initialize(derive_seed(seed, "glyph/init"));
  auto cfg = recipe.sft;
  cfg.seed = derive_seed(seed, "glyph/sft");
  return flow::train_sft(std::move(model), glyph_dataset(), cfg);
}

// Starting checkpoint for the RL stage.
inline flow::VelocityModel glyph_warm_start(const GlyphRecipe& recipe, std::uint64_t seed) {
  flow::VelocityModel model(64, 64, recipe.rl_hidden);
  model.initialize(derive_seed(seed, "glyph_rl/init"));
  auto cfg = recipe.rl_warm_start;
  cfg.seed = derive_seed(seed, "glyph_rl/sft");
  return flow::train_sft(std::move(model), glyph_dataset(), cfg).model;
}

inline double glyph_reward(std::span<const double> candidate, std::span<const double> cond) {
  return pixel_match_reward(candidate, cond);
}

// Mean pixel-match reward of 16 rollouts per glyph on fixed evaluation noise.
inline double glyph_eval(const flow::VelocityModel& model, std::uint64_t seed, std::size_t sampler_steps = 20) {
  return nft::evaluate_mean_reward(model, glyph_conditions(), glyph_reward, 16,
                                   {sampler_steps, flow::SamplerMethod::euler, derive_seed(seed, "glyph/eval")});
}

inline nft::RlResult train_glyph_rl(const flow::VelocityModel& start, nft::NftConfig config, std::uint64_t seed,
                                    const nft::GroupSink& sink = {}) {
  config.seed = derive_seed(seed, "glyph_rl/train");
  return nft::train_rl(start, glyph_conditions(), glyph_reward, config, sink);
}

inline double pixel_mse(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace glyphforge::lab
