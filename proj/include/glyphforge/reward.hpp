#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/http.hpp"
#include "glyphforge/image.hpp"
#include "glyphforge/parallel.hpp"

namespace glyphforge::reward {

enum class Dimension { adherence, clarity, preservation, quality };

inline constexpr std::array<Dimension, 4> kDimensions = {Dimension::adherence, Dimension::clarity,
                                                         Dimension::preservation, Dimension::quality};

inline std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::adherence: return "adherence";
    case Dimension::clarity: return "clarity";
    case Dimension::preservation: return "preservation";
    case Dimension::quality: return "quality";
  }
  return "?";
}

inline std::optional<Dimension> parse_dimension(std::string_view name) {
  for (auto d : kDimensions)
    if (to_string(d) == name) return d;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Logit-weighted scoring
// ---------------------------------------------------------------------------

inline constexpr int kMaxScore = 9;

// Logits over the score tokens 0..9.
struct ScoreDistribution {
  std::array<double, 10> logits{};

  static ScoreDistribution from(std::span<const double> values) {
    if (values.size() != 10)
      fail(ErrorKind::protocol, "score_distribution", "expected 10 logits, got " + std::to_string(values.size()));
    ScoreDistribution d;
    std::copy(values.begin(), values.end(), d.logits.begin());
    d.validate();
    return d;
  }

  static ScoreDistribution one_hot(int score, double mass = 40.0) {
    ScoreDistribution d;
    d.logits[static_cast<std::size_t>(score)] = mass;
    return d;
  }

  void validate() const {
    for (double z : logits)
      if (!std::isfinite(z)) fail(ErrorKind::numerical, "expected_score", "non-finite logit");
  }
};

// Softmax over the ten score tokens, expectation of the token value, divided
// by the maximum score. Uses max-logit subtraction.
inline double expected_score(const ScoreDistribution& dist) {
  dist.validate();
  const double peak = *std::max_element(dist.logits.begin(), dist.logits.end());
  double total = 0.0, weighted = 0.0;
  for (int s = 0; s <= kMaxScore; ++s) {
    const double w = std::exp(dist.logits[static_cast<std::size_t>(s)] - peak);
    total += w;
    weighted += s * w;
  }
  return weighted / (total * kMaxScore);
}

// ---------------------------------------------------------------------------
// Composite reward
// ---------------------------------------------------------------------------

struct RewardWeights {
  double adherence = 0.4;
  double clarity = 0.2;
  double preservation = 0.2;
  double quality = 0.2;

  RewardWeights normalized() const {
    for (double w : {adherence, clarity, preservation, quality})
      if (!(w >= 0.0) || !std::isfinite(w)) fail(ErrorKind::config, "reward_weights", "weights must be nonnegative");
    const double sum = adherence + clarity + preservation + quality;
    if (!(sum > 0.0)) fail(ErrorKind::config, "reward_weights", "weights must not all be zero");
    return {adherence / sum, clarity / sum, preservation / sum, quality / sum};
  }

  double operator[](Dimension d) const {
    switch (d) {
      case Dimension::adherence: return adherence;
      case Dimension::clarity: return clarity;
      case Dimension::preservation: return preservation;
      case Dimension::quality: return quality;
    }
    return 0.0;
  }
};

struct RewardVector {
  double adherence = 0.0;
  double clarity = 0.0;
  double preservation = 0.0;
  double quality = 0.0;
  RewardWeights weights{};
};

inline double composite_reward(const RewardVector& v) {
  const std::array<std::pair<const char*, double>, 4> dims = {
      {{"adherence", v.adherence}, {"clarity", v.clarity}, {"preservation", v.preservation}, {"quality", v.quality}}};
  for (const auto& [name, value] : dims)
    if (!(value >= 0.0 && value <= 1.0))
      fail(ErrorKind::numerical, "composite_reward", std::string(name) + " outside [0,1]");
  const auto w = v.weights.normalized();
  return w.adherence * v.adherence + w.clarity * v.clarity + w.preservation * v.preservation +
         w.quality * v.quality;
}

// ---------------------------------------------------------------------------
// Prompt templates: prompts/<dimension>/<operation>.txt with an {instruction}
// placeholder.
// ---------------------------------------------------------------------------

class PromptLibrary {
 public:
  explicit PromptLibrary(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::filesystem::path default_dir() {
    if (const char* env = std::getenv("GLYPHFORGE_PROMPTS")) return env;
#ifdef GLYPHFORGE_SOURCE_DIR
    return std::filesystem::path(GLYPHFORGE_SOURCE_DIR) / "prompts";
#else
    return "prompts";
#endif
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::string build(Dimension dim, Operation op, std::string_view instruction) const {
    const auto path = dir_ / std::string(to_string(dim)) / (std::string(glyphforge::to_string(op)) + ".txt");
    std::string tmpl;
    {
      std::lock_guard lock(state_->mu);
      auto& cache = state_->templates;
      auto it = cache.find(path.string());
      if (it == cache.end()) {
        if (!std::filesystem::exists(path)) fail(ErrorKind::config, "build_prompt", "missing template " + path.string());
        it = cache.emplace(path.string(), read_text(path)).first;
      }
      tmpl = it->second;
    }
    static constexpr std::string_view placeholder = "{instruction}";
    const auto at = tmpl.find(placeholder);
    if (at == std::string::npos) fail(ErrorKind::config, "build_prompt", "template lacks {instruction}: " + path.string());
    tmpl.replace(at, placeholder.size(), instruction);
    return tmpl;
  }

 private:
  std::filesystem::path dir_;
  struct State {
    std::mutex mu;
    std::map<std::string, std::string> templates;
  };
  std::shared_ptr<State> state_ = std::make_shared<State>();
};

inline std::string build_prompt(Dimension dim, Operation op, std::string_view instruction,
                                const PromptLibrary& library = PromptLibrary(PromptLibrary::default_dir())) {
  return library.build(dim, op, instruction);
}

// ---------------------------------------------------------------------------
// Judge requests and clients
// ---------------------------------------------------------------------------

struct JudgeRequest {
  std::string id;
  Dimension dimension = Dimension::adherence;
  Operation operation = Operation::replace;
  std::string instruction;
  const Image* source = nullptr;
  const Image* edited = nullptr;
  const Image* reference = nullptr;  // quality dimension only

  void validate() const {
    if (!source || !edited) fail(ErrorKind::config, "judge", "request " + id + " lacks source or edited image");
    if (dimension == Dimension::quality && !reference)
      fail(ErrorKind::config, "judge", "request " + id + ": quality dimension requires a reference image");
    if (dimension != Dimension::quality && reference)
      fail(ErrorKind::config, "judge", "request " + id + ": reference image only allowed for quality");
  }
};

struct JudgeResponse {
  std::string id;
  ScoreDistribution distribution;
  std::string rationale;
};

// 64-bit FNV-1a over the canonical request serialization: field values
// separated by 0x1F, rasters as "WxHxC:" + pixel bytes, absent reference as
// the empty field. The request id is excluded so identical content scores
// identically.
inline std::uint64_t request_hash(const JudgeRequest& req) {
  Fnv1a64 h;
  h.update("glyphforge-judge-v1").update_byte(0x1F);
  h.update(to_string(req.dimension)).update_byte(0x1F);
  h.update(glyphforge::to_string(req.operation)).update_byte(0x1F);
  h.update(req.instruction).update_byte(0x1F);
  hash_raster(h, *req.source);
  h.update_byte(0x1F);
  hash_raster(h, *req.edited);
  h.update_byte(0x1F);
  if (req.reference) hash_raster(h, *req.reference);
  return h.digest();
}

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual JudgeResponse judge(const JudgeRequest& request) = 0;
  virtual std::string model_id() const = 0;
  virtual std::string endpoint() const { return "mock"; }
};

enum class MockProfile { hashed, oracle, uniform, scripted };

// Deterministic stand-in for the judge service.
//   hashed:   SplitMix64(request_hash ^ seed) emits ten logits in [-2, 2].
//   oracle:   one-hot on 9 when the edited raster equals the registered ground
//             truth for the request id, hashed otherwise.
//   uniform:  all-zero logits.
//   scripted: logits looked up by "<id>/<dimension>".
class MockJudge : public JudgeClient {
 public:
  explicit MockJudge(std::uint64_t seed = 0, MockProfile profile = MockProfile::hashed)
      : seed_(seed), profile_(profile) {}

  void set_ground_truth(const std::string& id, Image image) { truth_[id] = std::move(image); }
  void set_script(const std::string& id, Dimension dim, ScoreDistribution dist, std::string rationale = {}) {
    script_[id + "/" + std::string(to_string(dim))] = {std::move(dist), std::move(rationale)};
  }
  // {"<id>/<dimension>": {"logits":[10], "rationale": "..."}} or {"<id>/<dimension>": score}
  void load_script(const nlohmann::json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto slash = it.key().rfind('/');
      if (slash == std::string::npos) fail(ErrorKind::config, "mock_judge", "script key '" + it.key() + "' lacks /dimension");
      auto dim = parse_dimension(it.key().substr(slash + 1));
      if (!dim) fail(ErrorKind::config, "mock_judge", "unknown dimension in script key '" + it.key() + "'");
      if (it.value().is_number_integer()) {
        const int score = it.value().get<int>();
        if (score < 0 || score > kMaxScore) fail(ErrorKind::config, "mock_judge", "scripted score out of range");
        set_script(it.key().substr(0, slash), *dim, ScoreDistribution::one_hot(score));
      } else {
        set_script(it.key().substr(0, slash), *dim,
                   ScoreDistribution::from(it.value().at("logits").get<std::vector<double>>()),
                   it.value().value("rationale", std::string{}));
      }
    }
  }

  JudgeResponse judge(const JudgeRequest& req) override {
    req.validate();
    ++calls_;
    JudgeResponse res;
    res.id = req.id;
    switch (profile_) {
      case MockProfile::uniform:
        res.rationale = "uniform mock";
        return res;
      case MockProfile::scripted: {
        auto it = script_.find(req.id + "/" + std::string(to_string(req.dimension)));
        if (it == script_.end())
          fail(ErrorKind::protocol, "judge", "no scripted response for " + req.id + "/" + std::string(to_string(req.dimension)));
        res.distribution = it->second.first;
        res.rationale = it->second.second;
        return res;
      }
      case MockProfile::oracle: {
        auto it = truth_.find(req.id);
        if (it != truth_.end() && it->second == *req.edited) {
          res.distribution = ScoreDistribution::one_hot(kMaxScore);
          res.rationale = "edited image matches ground truth";
          return res;
        }
        break;
      }
      case MockProfile::hashed: break;
    }
    SplitMix64 gen(request_hash(req) ^ seed_);
    for (auto& z : res.distribution.logits) z = -2.0 + 4.0 * gen.uniform();
    res.rationale = "mock rationale " + hex64(request_hash(req));
    return res;
  }

  std::string model_id() const override {
    static constexpr const char* names[] = {"hashed", "oracle", "uniform", "scripted"};
    return std::string("mock-") + names[static_cast<int>(profile_)] + "-seed" + std::to_string(seed_);
  }

  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::uint64_t seed_;
  MockProfile profile_;
  std::map<std::string, Image> truth_;
  std::map<std::string, std::pair<ScoreDistribution, std::string>> script_;
  std::atomic<std::size_t> calls_{0};
};

inline nlohmann::json judge_request_json(const JudgeRequest& req, const std::string& prompt) {
  nlohmann::json j;
  j["id"] = req.id;
  j["dimension"] = std::string(to_string(req.dimension));
  j["operation"] = std::string(glyphforge::to_string(req.operation));
  j["instruction"] = req.instruction;
  j["prompt"] = prompt;
  j["source_png_b64"] = base64_encode(encode_png(*req.source));
  j["edited_png_b64"] = base64_encode(encode_png(*req.edited));
  if (req.reference) j["reference_png_b64"] = base64_encode(encode_png(*req.reference));
  return j;
}

// Response: {id, logits: [10 floats], rationale}.
inline JudgeResponse parse_judge_response(const nlohmann::json& j, const std::string& expected_id) {
  if (!j.is_object() || !j.contains("logits") || !j["logits"].is_array())
    fail(ErrorKind::protocol, "judge", "response lacks a logits array");
  if (j["logits"].size() != 10)
    fail(ErrorKind::protocol, "judge", "expected 10 logits, got " + std::to_string(j["logits"].size()));
  std::vector<double> logits;
  for (const auto& v : j["logits"]) {
    if (!v.is_number()) fail(ErrorKind::protocol, "judge", "non-numeric logit");
    logits.push_back(v.get<double>());
  }
  JudgeResponse res;
  res.id = j.value("id", std::string{});
  if (res.id != expected_id)
    fail(ErrorKind::protocol, "judge", "response id '" + res.id + "' does not match request '" + expected_id + "'");
  res.distribution = ScoreDistribution::from(logits);
  res.rationale = j.value("rationale", std::string{});
  return res;
}

class HttpJudge : public JudgeClient {
 public:
  HttpJudge(std::string url, std::string model, PromptLibrary prompts, http::PostOptions options = {})
      : url_(std::move(url)), model_(std::move(model)), prompts_(std::move(prompts)), options_(options) {}

  JudgeResponse judge(const JudgeRequest& req) override {
    req.validate();
    const auto prompt = prompts_.build(req.dimension, req.operation, req.instruction);
    return parse_judge_response(http::post_json(url_, judge_request_json(req, prompt), "judge", options_), req.id);
  }
  std::string model_id() const override { return model_; }
  std::string endpoint() const override { return url_; }

 private:
  std::string url_;
  std::string model_;
  PromptLibrary prompts_;
  http::PostOptions options_;
};

// On-disk response cache keyed by (model id, request hash).
class CachedJudge : public JudgeClient {
 public:
  CachedJudge(JudgeClient& inner, std::filesystem::path dir) : inner_(inner), dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  JudgeResponse judge(const JudgeRequest& req) override {
    req.validate();
    const auto key = hex64(Fnv1a64{}.update(inner_.model_id()).update_byte(0x1F).update(hex64(request_hash(req))).digest());
    const auto path = dir_ / (key + ".json");
    if (std::filesystem::exists(path)) {
      const auto j = nlohmann::json::parse(read_text(path));
      JudgeResponse res;
      res.id = req.id;
      res.distribution = ScoreDistribution::from(j.at("logits").get<std::vector<double>>());
      res.rationale = j.value("rationale", std::string{});
      return res;
    }
    auto res = inner_.judge(req);
    nlohmann::json j;
    j["logits"] = res.distribution.logits;
    j["rationale"] = res.rationale;
    const auto tmp = dir_ / (key + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
    write_text(tmp, j.dump());
    std::filesystem::rename(tmp, path);
    return res;
  }
  std::string model_id() const override { return inner_.model_id(); }
  std::string endpoint() const override { return inner_.endpoint(); }

 private:
  JudgeClient& inner_;
  std::filesystem::path dir_;
};

// GLYPHFORGE_JUDGE_URL selects the HTTP client; otherwise the hashed mock.
inline std::unique_ptr<JudgeClient> judge_from_env(std::uint64_t seed = 0, const std::string& model = "judge") {
  if (const char* url = std::getenv("GLYPHFORGE_JUDGE_URL"); url && *url)
    return std::make_unique<HttpJudge>(url, model, PromptLibrary(PromptLibrary::default_dir()));
  return std::make_unique<MockJudge>(seed);
}

// At most max_in_flight concurrent calls; responses come back in request order.
inline std::vector<JudgeResponse> judge_all(JudgeClient& client, std::span<const JudgeRequest> requests,
                                            std::size_t max_in_flight = 4) {
  std::vector<JudgeResponse> out(requests.size());
  parallel_for(requests.size(), max_in_flight, [&](std::size_t i) { out[i] = client.judge(requests[i]); });
  return out;
}

// ---------------------------------------------------------------------------
// Programmatic reward for the desk-scale RL task
// ---------------------------------------------------------------------------

// 1 - mean |candidate - target| for rasters with pixels in [0,1].
inline double toy_reward(std::span<const double> candidate, std::span<const double> target) {
  if (candidate.size() != target.size() || candidate.empty())
    fail(ErrorKind::shape, "toy_reward", "candidate and target rasters differ in shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (!(candidate[i] >= 0.0 && candidate[i] <= 1.0) || !(target[i] >= 0.0 && target[i] <= 1.0))
      fail(ErrorKind::numerical, "toy_reward", "pixel outside [0,1] at index " + std::to_string(i));
    sum += std::abs(candidate[i] - target[i]);
  }
  return 1.0 - sum / static_cast<double>(candidate.size());
}

}  // namespace glyphforge::reward
