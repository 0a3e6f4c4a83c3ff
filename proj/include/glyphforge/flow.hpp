#pragma once

#include <cmath>
#include <numbers>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "glyphforge/core.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::flow {

// Noise schedule x_t = alpha(t) x0 + sigma(t) eps. Only the rectified
// (straight-line) schedule is provided.
enum class ScheduleKind { rectified };

struct FlowSchedule {
  ScheduleKind kind = ScheduleKind::rectified;

  double alpha(double t) const noexcept { return 1.0 - t; }
  double sigma(double t) const noexcept { return t; }
  double alpha_rate(double) const noexcept { return -1.0; }
  double sigma_rate(double) const noexcept { return 1.0; }
};

inline void require_finite(std::span<const double> v, const char* stage, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) fail(ErrorKind::numerical, stage, std::string(what) + " contains a non-finite value");
}

// Training tuples (x0, eps, t, cond), stored flat. All samples share the data
// dimension d and the conditioning dimension c.
class FlowBatch {
 public:
  FlowBatch(std::size_t dim, std::size_t cond_dim) : dim_(dim), cond_dim_(cond_dim) {
    if (dim == 0) fail(ErrorKind::shape, "flow_batch", "data dimension must be positive");
  }

  void add(std::span<const double> x0, std::span<const double> eps, double t, std::span<const double> cond) {
    if (x0.size() != dim_ || eps.size() != dim_)
      fail(ErrorKind::shape, "flow_batch",
           "x0/eps dimension " + std::to_string(x0.size()) + "/" + std::to_string(eps.size()) + " != " +
               std::to_string(dim_));
    if (cond.size() != cond_dim_) fail(ErrorKind::shape, "flow_batch", "conditioning dimension mismatch");
    if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::shape, "flow_batch", "t outside [0,1]");
    require_finite(x0, "flow_batch", "x0");
    require_finite(eps, "flow_batch", "eps");
    require_finite(cond, "flow_batch", "cond");
    x0_.insert(x0_.end(), x0.begin(), x0.end());
    eps_.insert(eps_.end(), eps.begin(), eps.end());
    cond_.insert(cond_.end(), cond.begin(), cond.end());
    t_.push_back(t);
  }

  std::size_t size() const noexcept { return t_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t cond_dim() const noexcept { return cond_dim_; }

  std::span<const double> x0(std::size_t i) const { return {x0_.data() + i * dim_, dim_}; }
  std::span<const double> eps(std::size_t i) const { return {eps_.data() + i * dim_, dim_}; }
  std::span<const double> cond(std::size_t i) const { return {cond_.data() + i * cond_dim_, cond_dim_}; }
  double t(std::size_t i) const { return t_[i]; }

 private:
  std::size_t dim_;
  std::size_t cond_dim_;
  std::vector<double> x0_, eps_, cond_, t_;
};

// x_t = alpha(t) x0 + sigma(t) eps for one sample.
inline std::vector<double> interpolate(std::span<const double> x0, std::span<const double> eps, double t,
                                       const FlowSchedule& schedule = {}) {
  if (x0.size() != eps.size()) fail(ErrorKind::shape, "interpolate", "x0 and eps differ in dimension");
  std::vector<double> out(x0.size());
  const double a = schedule.alpha(t), s = schedule.sigma(t);
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = a * x0[i] + s * eps[i];
  return out;
}

inline std::vector<std::vector<double>> interpolate(const FlowBatch& batch, const FlowSchedule& schedule = {}) {
  std::vector<std::vector<double>> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out.push_back(interpolate(batch.x0(i), batch.eps(i), batch.t(i), schedule));
  return out;
}

// Rectified target v = eps - x0 (the t-free form of d(alpha)/dt x0 + d(sigma)/dt eps).
inline std::vector<double> velocity_target(std::span<const double> x0, std::span<const double> eps,
                                           const FlowSchedule& schedule = {}) {
  if (x0.size() != eps.size()) fail(ErrorKind::shape, "velocity_target", "x0 and eps differ in dimension");
  std::vector<double> out(x0.size());
  const double da = schedule.alpha_rate(0.0), ds = schedule.sigma_rate(0.0);
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = da * x0[i] + ds * eps[i];
  return out;
}

inline std::vector<std::vector<double>> velocity_target(const FlowBatch& batch, const FlowSchedule& schedule = {}) {
  std::vector<std::vector<double>> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out.push_back(velocity_target(batch.x0(i), batch.eps(i), schedule));
  return out;
}

// ---------------------------------------------------------------------------
// VelocityModel: tanh MLP over (x_t ⊕ t ⊕ cond) -> velocity[d]
// ---------------------------------------------------------------------------

class VelocityModel {
 public:
  struct Cache {
    std::vector<std::vector<double>> activations;  // activations[0] = input, back() = output
  };

  VelocityModel() = default;

  VelocityModel(std::size_t data_dim, std::size_t cond_dim, const std::vector<std::size_t>& hidden) {
    widths_.push_back(data_dim + 1 + cond_dim);
    widths_.insert(widths_.end(), hidden.begin(), hidden.end());
    widths_.push_back(data_dim);
    validate_widths();
    params_.assign(expected_param_count(widths_), 0.0);
  }

  // widths = [input, hidden..., output]; input must equal output + 1 + cond_dim.
  static VelocityModel from_widths(std::vector<std::size_t> widths, std::vector<double> params = {}) {
    VelocityModel m;
    m.widths_ = std::move(widths);
    m.validate_widths();
    const auto n = expected_param_count(m.widths_);
    if (params.empty()) params.assign(n, 0.0);
    if (params.size() != n)
      fail(ErrorKind::config, "velocity_model",
           "parameter count " + std::to_string(params.size()) + " does not match widths (" + std::to_string(n) + ")");
    m.params_ = std::move(params);
    return m;
  }

  static std::size_t expected_param_count(const std::vector<std::size_t>& widths) {
    std::size_t n = 0;
    for (std::size_t l = 1; l < widths.size(); ++l) n += widths[l] * widths[l - 1] + widths[l];
    return n;
  }

  // Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] for weights and biases.
  void initialize(std::uint64_t seed) {
    Rng rng(seed);
    std::size_t off = 0;
    for (std::size_t l = 1; l < widths_.size(); ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(widths_[l - 1]));
      const std::size_t count = widths_[l] * widths_[l - 1] + widths_[l];
      for (std::size_t i = 0; i < count; ++i) params_[off + i] = rng.uniform(-bound, bound);
      off += count;
    }
  }

  std::size_t data_dim() const noexcept { return widths_.back(); }
  std::size_t cond_dim() const noexcept { return widths_.front() - widths_.back() - 1; }
  std::size_t input_dim() const noexcept { return widths_.front(); }
  std::size_t param_count() const noexcept { return params_.size(); }
  const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  bool same_architecture(const VelocityModel& o) const noexcept { return widths_ == o.widths_; }

  std::vector<double> make_input(std::span<const double> x, double t, std::span<const double> cond) const {
    if (x.size() != data_dim() || cond.size() != cond_dim())
      fail(ErrorKind::shape, "velocity_model", "input does not match model dimensions");
    std::vector<double> in;
    in.reserve(input_dim());
    in.insert(in.end(), x.begin(), x.end());
    in.push_back(t);
    in.insert(in.end(), cond.begin(), cond.end());
    return in;
  }

  void forward(std::vector<double> input, Cache& cache) const {
    cache.activations.resize(widths_.size());
    cache.activations[0] = std::move(input);
    std::size_t off = 0;
    for (std::size_t l = 1; l < widths_.size(); ++l) {
      const std::size_t in = widths_[l - 1], out = widths_[l];
      const double* w = params_.data() + off;
      const double* b = w + in * out;
      const auto& prev = cache.activations[l - 1];
      auto& cur = cache.activations[l];
      cur.assign(out, 0.0);
      const bool hidden = l + 1 < widths_.size();
      for (std::size_t j = 0; j < out; ++j) {
        double z = b[j];
        const double* row = w + j * in;
        for (std::size_t i = 0; i < in; ++i) z += row[i] * prev[i];
        cur[j] = hidden ? std::tanh(z) : z;
      }
      off += in * out + out;
    }
  }

  std::vector<double> predict(std::span<const double> x, double t, std::span<const double> cond) const {
    Cache cache;
    forward(make_input(x, t, cond), cache);
    return std::move(cache.activations.back());
  }

  // Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Cache& cache, std::span<const double> grad_out, std::span<double> grad) const {
    if (grad.size() != params_.size()) fail(ErrorKind::shape, "velocity_model", "gradient buffer size mismatch");
    std::vector<double> delta(grad_out.begin(), grad_out.end());
    std::size_t off = params_.size();
    for (std::size_t l = widths_.size() - 1; l >= 1; --l) {
      const std::size_t in = widths_[l - 1], out = widths_[l];
      off -= in * out + out;
      const double* w = params_.data() + off;
      double* gw = grad.data() + off;
      double* gb = gw + in * out;
      const auto& prev = cache.activations[l - 1];
      for (std::size_t j = 0; j < out; ++j) {
        gb[j] += delta[j];
        double* grow = gw + j * in;
        for (std::size_t i = 0; i < in; ++i) grow[i] += delta[j] * prev[i];
      }
      if (l == 1) break;
      std::vector<double> next(in, 0.0);
      for (std::size_t j = 0; j < out; ++j) {
        const double* row = w + j * in;
        for (std::size_t i = 0; i < in; ++i) next[i] += row[i] * delta[j];
      }
      for (std::size_t i = 0; i < in; ++i) next[i] *= 1.0 - prev[i] * prev[i];
      delta = std::move(next);
    }
  }

 private:
  void validate_widths() const {
    if (widths_.size() < 2) fail(ErrorKind::config, "velocity_model", "need at least input and output widths");
    for (auto w : widths_)
      if (w == 0) fail(ErrorKind::config, "velocity_model", "layer widths must be positive");
    if (widths_.front() < widths_.back() + 1)
      fail(ErrorKind::config, "velocity_model", "input width must be data_dim + 1 + cond_dim");
  }

  std::vector<std::size_t> widths_;
  std::vector<double> params_;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

// Mean over samples of ||v_theta(x_t, t, cond) - (eps - x0)||^2 with its
// analytic parameter gradient.
inline LossGrad flow_loss(const VelocityModel& model, const FlowBatch& batch, const FlowSchedule& schedule = {}) {
  if (batch.dim() != model.data_dim() || batch.cond_dim() != model.cond_dim())
    fail(ErrorKind::shape, "flow_loss", "batch dimensions do not match the model");
  LossGrad out;
  out.grad.assign(model.param_count(), 0.0);
  if (batch.size() == 0) return out;
  const double scale = 1.0 / static_cast<double>(batch.size());
  VelocityModel::Cache cache;
  std::vector<double> g(model.data_dim());
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const auto xt = interpolate(batch.x0(s), batch.eps(s), batch.t(s), schedule);
    const auto target = velocity_target(batch.x0(s), batch.eps(s), schedule);
    model.forward(model.make_input(xt, batch.t(s), batch.cond(s)), cache);
    const auto& v = cache.activations.back();
    double sq = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!std::isfinite(v[k]))
        fail(ErrorKind::numerical, "flow_loss", "non-finite model output at sample " + std::to_string(s));
      const double d = v[k] - target[k];
      sq += d * d;
      g[k] = 2.0 * d * scale;
    }
    out.loss += sq;
    model.backward(cache, g, out.grad);
  }
  out.loss *= scale;
  return out;
}

// ---------------------------------------------------------------------------
// ODE sampling from t=1 (noise) to t=0 (data)
// ---------------------------------------------------------------------------

enum class SamplerMethod { euler, midpoint };

struct SamplerConfig {
  std::size_t steps = 20;
  SamplerMethod method = SamplerMethod::euler;
  std::uint64_t seed = 0;

  void validate() const {
    if (steps < 1) fail(ErrorKind::config, "sampler", "steps must be at least 1");
  }
};

inline std::vector<double> initial_noise(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(dim);
  for (auto& v : x) v = rng.normal();
  return x;
}

// Integrates dx/dt = v(x, t, cond) backwards over steps uniform intervals.
// `field` may be any callable (x, t) -> velocity.
template <typename Field>
std::vector<double> integrate(std::vector<double> x, const SamplerConfig& config, Field&& field) {
  config.validate();
  const double dt = 1.0 / static_cast<double>(config.steps);
  for (std::size_t k = 0; k < config.steps; ++k) {
    const double t = 1.0 - static_cast<double>(k) * dt;
    if (config.method == SamplerMethod::euler) {
      const auto v = field(x, t);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dt * v[i];
    } else {
      const auto v1 = field(x, t);
      std::vector<double> mid(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) mid[i] = x[i] - 0.5 * dt * v1[i];
      const auto v2 = field(mid, t - 0.5 * dt);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dt * v2[i];
    }
  }
  return x;
}

inline std::vector<double> sample_ode(const VelocityModel& model, std::span<const double> cond,
                                      const SamplerConfig& config) {
  config.validate();
  auto x = integrate(initial_noise(model.data_dim(), config.seed), config,
                     [&](const std::vector<double>& xt, double t) { return model.predict(xt, t, cond); });
  require_finite(x, "sample_ode", "sample");
  return x;
}

// ---------------------------------------------------------------------------
// Supervised training
// ---------------------------------------------------------------------------

// (x0, cond) training examples.
class Dataset {
 public:
  Dataset(std::size_t dim, std::size_t cond_dim) : dim_(dim), cond_dim_(cond_dim) {}

  void add(std::span<const double> x0, std::span<const double> cond) {
    if (x0.size() != dim_ || cond.size() != cond_dim_) fail(ErrorKind::shape, "dataset", "example shape mismatch");
    x0_.insert(x0_.end(), x0.begin(), x0.end());
    cond_.insert(cond_.end(), cond.begin(), cond.end());
    ++count_;
  }

  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t cond_dim() const noexcept { return cond_dim_; }
  std::span<const double> x0(std::size_t i) const { return {x0_.data() + i * dim_, dim_}; }
  std::span<const double> cond(std::size_t i) const { return {cond_.data() + i * cond_dim_, cond_dim_}; }

 private:
  std::size_t dim_, cond_dim_, count_ = 0;
  std::vector<double> x0_, cond_;
};

enum class OptimizerKind { sgd, adam };

inline std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

inline OptimizerKind parse_optimizer(std::string_view s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  fail(ErrorKind::config, "optimizer", "unknown optimizer '" + std::string(s) + "' (expected sgd or adam)");
}

// Stateful first-order optimizer over a flat parameter vector.
class Optimizer {
 public:
  // The step size ramps linearly from lr/warmup to lr over the first
  // `warmup` steps. With a nonzero `total`, it then follows a cosine decay
  // reaching zero at step `total`.
  Optimizer(OptimizerKind kind, double learning_rate, std::size_t n, std::size_t warmup = 0, std::size_t total = 0)
      : kind_(kind),
        lr_(learning_rate),
        warmup_(warmup),
        total_(total),
        m_(kind == OptimizerKind::adam ? n : 0),
        v_(m_.size()) {}

  double current_rate() const noexcept {
    if (t_ < warmup_) return lr_ * static_cast<double>(t_ + 1) / static_cast<double>(warmup_);
    if (total_ <= warmup_) return lr_;
    const double progress =
        std::min(1.0, static_cast<double>(t_ - warmup_) / static_cast<double>(total_ - warmup_));
    return lr_ * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
  }

  void step(std::span<double> params, std::span<const double> grad) {
    const double lr = current_rate();
    if (kind_ == OptimizerKind::sgd) {
      ++t_;
      for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grad[i];
      return;
    }
    constexpr double b1 = 0.9, b2 = 0.999, tiny = 1e-8;
    ++t_;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = b1 * m_[i] + (1.0 - b1) * grad[i];
      v_[i] = b2 * v_[i] + (1.0 - b2) * grad[i] * grad[i];
      params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + tiny);
    }
  }

 private:
  OptimizerKind kind_;
  double lr_;
  std::size_t warmup_;
  std::size_t total_;
  std::vector<double> m_, v_;
  std::uint64_t t_ = 0;
};

struct SftConfig {
  std::size_t steps = 2000;
  std::size_t batch_size = 64;
  double learning_rate = 0.003;
  std::uint64_t seed = 0;
  OptimizerKind optimizer = OptimizerKind::adam;
  std::size_t warmup_steps = 0;
  bool cosine_decay = false;
};

struct SftResult {
  VelocityModel model;
  std::vector<double> loss_trace;
};

// Minibatch training; timesteps drawn uniformly on [0,1].
inline SftResult train_sft(VelocityModel model, const Dataset& data, const SftConfig& config,
                           const FlowSchedule& schedule = {}) {
  if (data.empty()) fail(ErrorKind::config, "train_sft", "training dataset is empty");
  if (config.batch_size == 0) fail(ErrorKind::config, "train_sft", "batch size must be positive");
  if (data.dim() != model.data_dim() || data.cond_dim() != model.cond_dim())
    fail(ErrorKind::shape, "train_sft", "dataset dimensions do not match the model");
  Rng rng(config.seed);
  SftResult result;
  result.loss_trace.reserve(config.steps);
  std::vector<double> eps(data.dim());
  Optimizer opt(config.optimizer, config.learning_rate, model.param_count(), config.warmup_steps,
                config.cosine_decay ? config.steps : 0);
  for (std::size_t step = 0; step < config.steps; ++step) {
    FlowBatch batch(data.dim(), data.cond_dim());
    for (std::size_t b = 0; b < config.batch_size; ++b) {
      const auto idx = static_cast<std::size_t>(rng.uniform_int(0, data.size() - 1));
      for (auto& e : eps) e = rng.normal();
      batch.add(data.x0(idx), eps, rng.uniform(), data.cond(idx));
    }
    auto lg = flow_loss(model, batch, schedule);
    opt.step(model.params(), lg.grad);
    result.loss_trace.push_back(lg.loss);
  }
  result.model = std::move(model);
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints: "GFVM", u32 version, u32 layer count, u32 widths..., f64 params
// (all little-endian).
// ---------------------------------------------------------------------------

namespace detail {
inline void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
inline std::uint32_t get_u32le(std::span<const std::uint8_t> in, std::size_t& pos) {
  if (pos + 4 > in.size()) fail(ErrorKind::io, "checkpoint", "truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{in[pos + static_cast<std::size_t>(i)]} << (8 * i);
  pos += 4;
  return v;
}
}  // namespace detail

inline std::vector<std::uint8_t> encode_checkpoint(const VelocityModel& model) {
  std::vector<std::uint8_t> out = {'G', 'F', 'V', 'M'};
  detail::put_u32le(out, kCheckpointVersion);
  detail::put_u32le(out, static_cast<std::uint32_t>(model.widths().size()));
  for (auto w : model.widths()) detail::put_u32le(out, static_cast<std::uint32_t>(w));
  for (double p : model.params()) {
    std::uint64_t bits;
    std::memcpy(&bits, &p, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  return out;
}

inline VelocityModel decode_checkpoint(std::span<const std::uint8_t> in) {
  if (in.size() < 4 || in[0] != 'G' || in[1] != 'F' || in[2] != 'V' || in[3] != 'M')
    fail(ErrorKind::io, "checkpoint", "bad magic");
  std::size_t pos = 4;
  const auto version = detail::get_u32le(in, pos);
  if (version != kCheckpointVersion) fail(ErrorKind::io, "checkpoint", "unsupported version " + std::to_string(version));
  const auto layers = detail::get_u32le(in, pos);
  std::vector<std::size_t> widths;
  for (std::uint32_t i = 0; i < layers; ++i) widths.push_back(detail::get_u32le(in, pos));
  const auto n = VelocityModel::expected_param_count(widths);
  if (in.size() - pos != n * 8) fail(ErrorKind::io, "checkpoint", "parameter payload size mismatch");
  std::vector<double> params(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{in[pos + static_cast<std::size_t>(i)]} << (8 * i);
    std::memcpy(&params[k], &bits, sizeof bits);
    pos += 8;
  }
  return VelocityModel::from_widths(std::move(widths), std::move(params));
}

inline void save_checkpoint(const std::filesystem::path& path, const VelocityModel& model) {
  write_bytes(path, encode_checkpoint(model));
}
inline VelocityModel load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_bytes(path)); }

// Shortest round-trip representation of a double.
inline std::string format_double(double v) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string loss_trace_csv(std::span<const double> trace) {
  std::string out = "step,loss\n";
  for (std::size_t i = 0; i < trace.size(); ++i) out += std::to_string(i) + "," + format_double(trace[i]) + "\n";
  return out;
}

}  // namespace glyphforge::flow
