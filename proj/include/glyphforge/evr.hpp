#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/http.hpp"
#include "glyphforge/image.hpp"
#include "glyphforge/parallel.hpp"

namespace glyphforge::evr {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Verdicts and attempts
// ---------------------------------------------------------------------------

struct Verdict {
  bool pass = false;
  std::string feedback;
  bool operator==(const Verdict&) const = default;
};

struct Verdicts {
  Verdict adherence;
  Verdict legibility;
  Verdict preservation;

  bool all_pass() const { return adherence.pass && legibility.pass && preservation.pass; }

  // One "<check>: <feedback>" line per failing check, in fixed order. This is
  // the exact text forwarded to the next execution.
  std::string failure_feedback() const {
    std::string out;
    const std::pair<const char*, const Verdict*> checks[] = {
        {"adherence", &adherence}, {"legibility", &legibility}, {"preservation", &preservation}};
    for (const auto& [name, v] : checks) {
      if (v->pass) continue;
      if (!out.empty()) out += "\n";
      out += std::string(name) + ": " + v->feedback;
    }
    return out;
  }

  static Verdicts pass_all() { return {{true, "ok"}, {true, "ok"}, {true, "ok"}}; }
  bool operator==(const Verdicts&) const = default;
};

enum class AttemptStatus { accepted, rejected, retryable };

inline std::string_view to_string(AttemptStatus s) {
  switch (s) {
    case AttemptStatus::accepted: return "accepted";
    case AttemptStatus::rejected: return "rejected";
    case AttemptStatus::retryable: return "retryable";
  }
  return "?";
}

inline AttemptStatus parse_status(std::string_view s) {
  if (s == "accepted") return AttemptStatus::accepted;
  if (s == "rejected") return AttemptStatus::rejected;
  if (s == "retryable") return AttemptStatus::retryable;
  fail(ErrorKind::parse, "evr_log", "unknown status '" + std::string(s) + "'");
}

struct Attempt {
  int index = 1;
  std::string instruction;
  std::string feedback_sent;  // empty on the first attempt or with forwarding off
  std::string candidate;      // file name of the edited raster, empty on transport failure
  std::optional<Verdicts> verdicts;
  AttemptStatus status = AttemptStatus::rejected;
  std::string error;
};

struct RetryPolicy {
  int max_attempts = 3;
  bool forward_feedback = true;

  void validate() const {
    if (max_attempts < 1) fail(ErrorKind::config, "retry_policy", "max attempts must be at least 1");
  }

  // "max=3,forward=1"; either key may be omitted.
  static RetryPolicy parse(std::string_view text) {
    RetryPolicy p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto comma = text.find(',', pos);
      if (comma == std::string_view::npos) comma = text.size();
      const auto item = text.substr(pos, comma - pos);
      pos = comma + 1;
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) fail(ErrorKind::config, "retry_policy", "expected key=value in '" + std::string(item) + "'");
      const auto key = item.substr(0, eq);
      const std::string value(item.substr(eq + 1));
      if (key == "max") {
        try {
          std::size_t used = 0;
          p.max_attempts = std::stoi(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
          fail(ErrorKind::config, "retry_policy", "max must be an integer, got '" + value + "'");
        }
      } else if (key == "forward") {
        if (value != "0" && value != "1" && value != "true" && value != "false")
          fail(ErrorKind::config, "retry_policy", "forward must be 0/1/true/false");
        p.forward_feedback = value == "1" || value == "true";
      } else {
        fail(ErrorKind::config, "retry_policy", "unknown key '" + std::string(key) + "'");
      }
    }
    p.validate();
    return p;
  }
};

inline ordered_json to_json(const Verdict& v) { return {{"pass", v.pass}, {"feedback", v.feedback}}; }

inline Verdict verdict_from_json(const json& j, const std::string& stage) {
  if (!j.is_object() || !j.contains("pass") || !j["pass"].is_boolean())
    fail(ErrorKind::protocol, stage, "verdict lacks a boolean 'pass'");
  return {j["pass"].get<bool>(), j.value("feedback", std::string{})};
}

inline ordered_json to_json(const Verdicts& v) {
  return {{"adherence", to_json(v.adherence)}, {"legibility", to_json(v.legibility)},
          {"preservation", to_json(v.preservation)}};
}

inline Verdicts verdicts_from_json(const json& j, const std::string& stage) {
  for (const char* key : {"adherence", "legibility", "preservation"})
    if (!j.contains(key)) fail(ErrorKind::protocol, stage, std::string("missing '") + key + "' verdict");
  return {verdict_from_json(j["adherence"], stage), verdict_from_json(j["legibility"], stage),
          verdict_from_json(j["preservation"], stage)};
}

inline ordered_json to_json(const Attempt& a) {
  ordered_json j;
  j["type"] = "attempt";
  j["index"] = a.index;
  j["instruction"] = a.instruction;
  j["feedback_sent"] = a.feedback_sent;
  j["candidate"] = a.candidate;
  j["verdicts"] = a.verdicts ? to_json(*a.verdicts) : ordered_json(nullptr);
  j["status"] = to_string(a.status);
  j["error"] = a.error;
  return j;
}

inline Attempt attempt_from_json(const json& j) {
  Attempt a;
  a.index = j.at("index").get<int>();
  a.instruction = j.at("instruction").get<std::string>();
  a.feedback_sent = j.at("feedback_sent").get<std::string>();
  a.candidate = j.at("candidate").get<std::string>();
  if (!j.at("verdicts").is_null()) a.verdicts = verdicts_from_json(j["verdicts"], "evr_log");
  a.status = parse_status(j.at("status").get<std::string>());
  a.error = j.at("error").get<std::string>();
  const bool pass = a.verdicts && a.verdicts->all_pass();
  if (pass != (a.status == AttemptStatus::accepted))
    fail(ErrorKind::consistency, "evr_log", "attempt " + std::to_string(a.index) + " status disagrees with its verdicts");
  return a;
}

// ---------------------------------------------------------------------------
// Proposals
// ---------------------------------------------------------------------------

struct RawProposal {
  std::string instruction;
  std::string operation;
};

struct Proposal {
  std::string instruction;
  Operation operation = Operation::replace;
};

struct ProposalSet {
  std::vector<Proposal> accepted;
  std::vector<std::string> rejected;  // reason per dropped entry
};

// Lowercase, whitespace collapsed, trailing full stops dropped.
inline std::string normalize_instruction(std::string_view text) {
  std::string out;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::vector<RawProposal> propose(const std::string& image_id, const Image& source) = 0;
};

// Validates tags against the seven constructible operations and drops
// duplicate instructions.
inline ProposalSet propose(Proposer& proposer, const std::string& image_id, const Image& source) {
  ProposalSet set;
  std::set<std::string> seen;
  for (const auto& raw : proposer.propose(image_id, source)) {
    const auto op = parse_operation(raw.operation);
    if (!op || *op == Operation::reasoning) {
      set.rejected.push_back("unknown operation tag '" + raw.operation + "' for \"" + raw.instruction + "\"");
      continue;
    }
    const auto key = normalize_instruction(raw.instruction);
    if (key.empty()) {
      set.rejected.push_back("empty instruction");
      continue;
    }
    if (!seen.insert(key).second) continue;
    set.accepted.push_back({raw.instruction, *op});
  }
  return set;
}

inline std::vector<RawProposal> proposals_from_json(const json& arr, const std::string& stage) {
  if (!arr.is_array()) fail(ErrorKind::protocol, stage, "proposals must be an array");
  std::vector<RawProposal> out;
  for (const auto& p : arr) {
    if (!p.is_object() || !p.contains("instruction") || !p["instruction"].is_string())
      fail(ErrorKind::protocol, stage, "proposal lacks an instruction string");
    out.push_back({p["instruction"].get<std::string>(), p.value("operation", std::string{})});
  }
  return out;
}

// Replays stored proposals: {"<image id>": [{"instruction", "operation"}, ...]}.
class FixtureProposer : public Proposer {
 public:
  explicit FixtureProposer(json fixture) : fixture_(std::move(fixture)) {
    if (!fixture_.is_object()) fail(ErrorKind::config, "propose", "proposal fixture must be a JSON object");
  }
  static FixtureProposer load(const fs::path& path) { return FixtureProposer(json::parse(read_text(path))); }

  std::vector<RawProposal> propose(const std::string& image_id, const Image&) override {
    if (!fixture_.contains(image_id)) return {};
    return proposals_from_json(fixture_[image_id], "propose");
  }

 private:
  json fixture_;
};

// POST {id, source_png_b64} -> {id, proposals: [{instruction, operation}]}.
class HttpProposer : public Proposer {
 public:
  explicit HttpProposer(std::string url, http::PostOptions options = {}) : url_(std::move(url)), options_(options) {}
  std::vector<RawProposal> propose(const std::string& image_id, const Image& source) override {
    const json body = {{"id", image_id}, {"source_png_b64", base64_encode(encode_png(source))}};
    const auto res = http::post_json(url_, body, "propose", options_);
    if (res.value("id", std::string{}) != image_id) fail(ErrorKind::protocol, "propose", "response id mismatch");
    return proposals_from_json(res.value("proposals", json::array()), "propose");
  }

 private:
  std::string url_;
  http::PostOptions options_;
};

// ---------------------------------------------------------------------------
// Executor and verifier clients
// ---------------------------------------------------------------------------

struct ExecuteRequest {
  std::string id;
  int attempt = 1;
  std::string instruction;
  std::string feedback;
  const Image* source = nullptr;
};

class Executor {
 public:
  virtual ~Executor() = default;
  virtual Image execute(const ExecuteRequest& request) = 0;
};

inline ordered_json executor_request_json(const ExecuteRequest& r) {
  ordered_json j;
  j["id"] = r.id;
  j["instruction"] = r.instruction;
  if (!r.feedback.empty()) j["feedback"] = r.feedback;
  j["source_png_b64"] = base64_encode(encode_png(*r.source));
  return j;
}

inline Image parse_executor_response(const json& j, const std::string& expected_id) {
  if (!j.is_object() || j.value("id", std::string{}) != expected_id)
    fail(ErrorKind::protocol, "execute", "response id does not match request '" + expected_id + "'");
  if (!j.contains("edited_png_b64") || !j["edited_png_b64"].is_string())
    fail(ErrorKind::protocol, "execute", "response lacks edited_png_b64");
  try {
    return decode_png(base64_decode(j["edited_png_b64"].get<std::string>()));
  } catch (const Error& e) {
    fail(ErrorKind::protocol, "execute", std::string("edited image does not decode: ") + e.what());
  }
}

class HttpExecutor : public Executor {
 public:
  explicit HttpExecutor(std::string url, http::PostOptions options = {}) : url_(std::move(url)), options_(options) {}
  Image execute(const ExecuteRequest& r) override {
    return parse_executor_response(http::post_json(url_, executor_request_json(r), "execute", options_), r.id);
  }

 private:
  std::string url_;
  http::PostOptions options_;
};

struct VerifyRequest {
  std::string id;
  int attempt = 1;
  std::string instruction;
  const Image* source = nullptr;
  const Image* edited = nullptr;
};

class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual Verdicts verify(const VerifyRequest& request) = 0;
};

inline ordered_json verifier_request_json(const VerifyRequest& r) {
  ordered_json j;
  j["id"] = r.id;
  j["instruction"] = r.instruction;
  j["source_png_b64"] = base64_encode(encode_png(*r.source));
  j["edited_png_b64"] = base64_encode(encode_png(*r.edited));
  return j;
}

inline Verdicts parse_verifier_response(const json& j, const std::string& expected_id) {
  if (!j.is_object() || j.value("id", std::string{}) != expected_id)
    fail(ErrorKind::protocol, "verify", "response id does not match request '" + expected_id + "'");
  return verdicts_from_json(j, "verify");
}

class HttpVerifier : public Verifier {
 public:
  explicit HttpVerifier(std::string url, http::PostOptions options = {}) : url_(std::move(url)), options_(options) {}
  Verdicts verify(const VerifyRequest& r) override {
    return parse_verifier_response(http::post_json(url_, verifier_request_json(r), "verify", options_), r.id);
  }

 private:
  std::string url_;
  http::PostOptions options_;
};

// Offline executor. The candidate is the source with an 8x8 block inverted at
// a position hashed from (id, attempt); every request is recorded. Transport
// failures can be injected per (id, attempt).
class MockExecutor : public Executor {
 public:
  void fail_transport(const std::string& id, int attempt) { failures_.insert({id, attempt}); }

  Image execute(const ExecuteRequest& r) override {
    {
      std::lock_guard lock(mu_);
      requests_.push_back({r.id, r.attempt, r.instruction, r.feedback, nullptr});
    }
    if (failures_.contains({r.id, r.attempt})) throw TransportError("execute", "injected transport failure", 1);
    Image out = *r.source;
    if (out.width == 0 || out.height == 0) return out;
    SplitMix64 gen(fnv1a64(r.id) ^ static_cast<std::uint64_t>(r.attempt));
    const int bw = std::min(8, out.width), bh = std::min(8, out.height);
    const int x0 = static_cast<int>(gen.next() % static_cast<std::uint64_t>(out.width - bw + 1));
    const int y0 = static_cast<int>(gen.next() % static_cast<std::uint64_t>(out.height - bh + 1));
    for (int y = y0; y < y0 + bh; ++y)
      for (int x = x0; x < x0 + bw; ++x)
        for (int c = 0; c < out.channels; ++c) out.at(x, y)[c] = static_cast<std::uint8_t>(255 - out.at(x, y)[c]);
    return out;
  }

  std::vector<ExecuteRequest> requests() const {
    std::lock_guard lock(mu_);
    return requests_;
  }

 private:
  mutable std::mutex mu_;
  std::vector<ExecuteRequest> requests_;
  std::set<std::pair<std::string, int>> failures_;
};

// Verdict sequences per case id, indexed by attempt; the last entry repeats.
// Ids without a script receive the fallback.
class ScriptedVerifier : public Verifier {
 public:
  explicit ScriptedVerifier(Verdicts fallback = Verdicts::pass_all()) : fallback_(std::move(fallback)) {}
  ScriptedVerifier(ScriptedVerifier&& other) noexcept
      : fallback_(std::move(other.fallback_)), scripts_(std::move(other.scripts_)), calls_(other.calls_.load()) {}

  static Verdicts failing(std::string_view check, std::string feedback) {
    Verdicts v = Verdicts::pass_all();
    Verdict* slot = check == "adherence" ? &v.adherence : check == "legibility" ? &v.legibility : &v.preservation;
    *slot = {false, std::move(feedback)};
    return v;
  }

  void script(const std::string& id, std::vector<Verdicts> sequence) { scripts_[id] = std::move(sequence); }

  // {"<id>": [{adherence:{pass,feedback}, legibility:{...}, preservation:{...}}, ...], "*": {...}}
  static ScriptedVerifier from_json(const json& j) {
    ScriptedVerifier v;
    if (!j.is_object()) fail(ErrorKind::config, "verify", "verdict script must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "*") {
        v.fallback_ = verdicts_from_json(it.value(), "verify");
        continue;
      }
      std::vector<Verdicts> seq;
      for (const auto& e : it.value()) seq.push_back(verdicts_from_json(e, "verify"));
      if (seq.empty()) fail(ErrorKind::config, "verify", "empty verdict script for '" + it.key() + "'");
      v.scripts_[it.key()] = std::move(seq);
    }
    return v;
  }

  Verdicts verify(const VerifyRequest& r) override {
    ++calls_;
    auto it = scripts_.find(r.id);
    if (it == scripts_.end()) return fallback_;
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(r.attempt - 1), it->second.size() - 1);
    return it->second[k];
  }

  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  Verdicts fallback_;
  std::map<std::string, std::vector<Verdicts>> scripts_;
  std::atomic<std::size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Durable per-case log
// ---------------------------------------------------------------------------

// Append-only JSONL file with one fsync per record. Holds an exclusive lock
// for its lifetime so a case has a single writer.
class LogWriter {
 public:
  explicit LogWriter(const fs::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd_ < 0) fail(ErrorKind::io, "evr_log", "cannot open " + path.string() + ": " + std::strerror(errno));
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fail(ErrorKind::consistency, "evr_log", path.string() + " is held by another writer");
    }
    // A torn final line from an interrupted run becomes its own corrupt line
    // instead of swallowing the next record.
    const auto size = fs::file_size(path);
    if (size > 0) {
      const auto bytes = read_bytes(path);
      if (bytes.back() != '\n') write_all("\n");
    }
  }
  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;
  ~LogWriter() {
    if (fd_ >= 0) ::close(fd_);
  }

  void append(const ordered_json& record) {
    write_all(record.dump() + "\n");
    if (::fsync(fd_) != 0) fail(ErrorKind::io, "evr_log", "fsync failed on " + path_.string());
  }

 private:
  void write_all(const std::string& data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const auto n = ::write(fd_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(ErrorKind::io, "evr_log", "write failed on " + path_.string() + ": " + std::strerror(errno));
      }
      done += static_cast<std::size_t>(n);
    }
  }

  fs::path path_;
  int fd_ = -1;
};

struct CaseSpec {
  std::string id;
  std::string instruction;
  Operation operation = Operation::replace;
  std::string language = "en";
};

struct LogScan {
  std::optional<CaseSpec> header;
  std::vector<Attempt> attempts;
  std::optional<AttemptStatus> final_status;
  std::size_t corrupt = 0;
};

inline LogScan scan_log(const fs::path& path) {
  LogScan scan;
  if (!fs::exists(path)) return scan;
  const auto text = read_text(path);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "case") {
        scan.header = CaseSpec{j.at("id").get<std::string>(), j.at("instruction").get<std::string>(),
                               require_operation(j.at("operation").get<std::string>(), "evr_log"),
                               j.at("language").get<std::string>()};
      } else if (type == "attempt") {
        auto a = attempt_from_json(j);
        if (a.index != static_cast<int>(scan.attempts.size()) + 1) throw std::runtime_error("attempt out of sequence");
        scan.attempts.push_back(std::move(a));
      } else if (type == "final") {
        scan.final_status = parse_status(j.at("status").get<std::string>());
      } else {
        throw std::runtime_error("unknown record type");
      }
    } catch (const std::exception&) {
      ++scan.corrupt;
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Retry loop
// ---------------------------------------------------------------------------

struct Clients {
  Executor& executor;
  Verifier& verifier;
};

struct CaseOutcome {
  std::string id;
  AttemptStatus status = AttemptStatus::rejected;  // accepted or rejected
  std::vector<Attempt> attempts;
  bool resumed = false;
};

struct RunHooks {
  // Called after each attempt record is durable. Throwing aborts the run,
  // which is how tests simulate a crash between attempts.
  std::function<void(const Attempt&)> after_attempt;
};

inline std::string attempt_file(int index) { return "attempt-" + std::to_string(index) + ".png"; }

inline std::string last_failure_feedback(const std::vector<Attempt>& attempts) {
  for (auto it = attempts.rbegin(); it != attempts.rend(); ++it)
    if (it->verdicts && !it->verdicts->all_pass()) return it->verdicts->failure_feedback();
  return {};
}

// Runs (or resumes) one case in `case_dir`. Attempts are strictly sequential
// and each is logged before the next begins.
inline CaseOutcome run_case(const CaseSpec& spec, const Image& source, Clients clients, const RetryPolicy& policy,
                            const fs::path& case_dir, const RunHooks& hooks = {}) {
  policy.validate();
  fs::create_directories(case_dir);
  const auto log_path = case_dir / "log.jsonl";
  LogWriter log(log_path);
  LogScan scan = scan_log(log_path);

  CaseOutcome outcome;
  outcome.id = spec.id;
  if (scan.header) {
    if (scan.header->id != spec.id || scan.header->instruction != spec.instruction)
      fail(ErrorKind::consistency, "run_case", "log in " + case_dir.string() + " belongs to a different case");
    outcome.resumed = true;
  } else {
    write_png(case_dir / "source.png", source);
    ordered_json header;
    header["type"] = "case";
    header["id"] = spec.id;
    header["instruction"] = spec.instruction;
    header["operation"] = to_string(spec.operation);
    header["language"] = spec.language;
    log.append(header);
  }
  outcome.attempts = std::move(scan.attempts);
  if (scan.final_status) {
    outcome.status = *scan.final_status;
    return outcome;
  }

  const auto finished = [&] {
    return !outcome.attempts.empty() && outcome.attempts.back().status == AttemptStatus::accepted;
  };
  while (!finished() && static_cast<int>(outcome.attempts.size()) < policy.max_attempts) {
    Attempt a;
    a.index = static_cast<int>(outcome.attempts.size()) + 1;
    a.instruction = spec.instruction;
    if (policy.forward_feedback) a.feedback_sent = last_failure_feedback(outcome.attempts);
    try {
      const Image edited = clients.executor.execute({spec.id, a.index, spec.instruction, a.feedback_sent, &source});
      a.candidate = attempt_file(a.index);
      write_png(case_dir / a.candidate, edited);
      a.verdicts = clients.verifier.verify({spec.id, a.index, spec.instruction, &source, &edited});
      a.status = a.verdicts->all_pass() ? AttemptStatus::accepted : AttemptStatus::rejected;
    } catch (const TransportError& e) {
      a.status = AttemptStatus::retryable;
      a.verdicts.reset();
      a.error = e.what();
    }
    log.append(to_json(a));
    outcome.attempts.push_back(a);
    if (hooks.after_attempt) hooks.after_attempt(outcome.attempts.back());
  }
  outcome.status = finished() ? AttemptStatus::accepted : AttemptStatus::rejected;
  ordered_json fin;
  fin["type"] = "final";
  fin["status"] = to_string(outcome.status);
  fin["attempts"] = outcome.attempts.size();
  log.append(fin);
  return outcome;
}

struct CaseInput {
  CaseSpec spec;
  Image source;
};

// Runs cases concurrently on up to `workers` threads; case directories are
// run_dir/<id>. Results come back in input order.
inline std::vector<CaseOutcome> run_cases(const std::vector<CaseInput>& cases, Clients clients,
                                          const RetryPolicy& policy, const fs::path& run_dir, std::size_t workers = 1) {
  std::set<std::string> ids;
  for (const auto& c : cases)
    if (!ids.insert(c.spec.id).second) fail(ErrorKind::config, "evr", "duplicate case id '" + c.spec.id + "'");
  std::vector<CaseOutcome> out(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    out[i] = run_case(cases[i].spec, cases[i].source, clients, policy, run_dir / cases[i].spec.id);
  });
  return out;
}

// Proposes instructions for every image and turns them into cases named
// "<image id>-<k>". Images with no valid proposal are skipped; skips and
// rejected proposals go to run_dir/pipeline.jsonl.
inline std::vector<CaseInput> plan_cases(const std::vector<std::pair<std::string, Image>>& images, Proposer& proposer,
                                         const fs::path& run_dir, const std::string& language = "en") {
  fs::create_directories(run_dir);
  LogWriter log(run_dir / "pipeline.jsonl");
  std::vector<CaseInput> cases;
  for (const auto& [image_id, image] : images) {
    const auto set = propose(proposer, image_id, image);
    for (const auto& reason : set.rejected) {
      ordered_json rec;
      rec["type"] = "rejected_proposal";
      rec["image"] = image_id;
      rec["reason"] = reason;
      log.append(rec);
    }
    if (set.accepted.empty()) {
      ordered_json rec;
      rec["type"] = "skip";
      rec["image"] = image_id;
      rec["reason"] = "no valid proposals";
      log.append(rec);
      continue;
    }
    for (std::size_t k = 0; k < set.accepted.size(); ++k) {
      const auto& p = set.accepted[k];
      cases.push_back({{image_id + "-" + std::to_string(k + 1), p.instruction, p.operation, language}, image});
    }
  }
  return cases;
}

// ---------------------------------------------------------------------------
// Harvest
// ---------------------------------------------------------------------------

struct HarvestReport {
  std::size_t cases = 0;
  std::size_t accepted = 0;
  std::size_t corrupt_lines = 0;
  std::vector<std::string> bundles;
};

// Copies every accepted case into out_dir/<id>/ using the pair-bundle layout
// without boxes. Output depends only on the logs, so re-harvesting is
// byte-identical.
inline HarvestReport harvest(const fs::path& run_dir, const fs::path& out_dir) {
  if (!fs::is_directory(run_dir)) fail(ErrorKind::io, "harvest", "run directory " + run_dir.string() + " does not exist");
  HarvestReport report;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(run_dir))
    if (e.is_directory() && fs::exists(e.path() / "log.jsonl")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  fs::create_directories(out_dir);
  for (const auto& dir : dirs) {
    const auto scan = scan_log(dir / "log.jsonl");
    ++report.cases;
    report.corrupt_lines += scan.corrupt;
    if (!scan.header || scan.attempts.empty() || scan.attempts.back().status != AttemptStatus::accepted) continue;
    ++report.accepted;
    const auto& spec = *scan.header;
    const auto& last = scan.attempts.back();
    const auto bundle = out_dir / spec.id;
    fs::create_directories(bundle);
    write_bytes(bundle / "src.png", read_bytes(dir / "source.png"));
    write_bytes(bundle / "tgt.png", read_bytes(dir / last.candidate));
    ordered_json plan;
    plan["operation"] = to_string(spec.operation);
    plan["instruction"] = spec.instruction;
    write_text(bundle / "plan.json", plan.dump(2) + "\n");
    ordered_json meta;
    meta["operation"] = to_string(spec.operation);
    meta["language"] = spec.language;
    meta["attempts"] = scan.attempts.size();
    meta["source"] = "unstructured";
    write_text(bundle / "meta.json", meta.dump(2) + "\n");
    report.bundles.push_back(spec.id);
  }
  return report;
}

}  // namespace glyphforge::evr
