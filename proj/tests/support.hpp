#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <sys/wait.h>

#include "httplib.h"
#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/flow.hpp"
#include "glyphforge/image.hpp"

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path source_dir() { return GLYPHFORGE_SOURCE_DIR; }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "gf") {
    static std::atomic<unsigned> counter{0};
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

// Tiny random velocity model with parameters set from `seed`.
inline glyphforge::flow::VelocityModel random_model(std::size_t d, std::size_t c, std::vector<std::size_t> hidden,
                                                    std::uint64_t seed) {
  glyphforge::flow::VelocityModel m(d, c, hidden);
  m.initialize(seed);
  return m;
}

inline glyphforge::flow::FlowBatch random_batch(std::size_t d, std::size_t c, std::size_t n, std::uint64_t seed) {
  glyphforge::Rng rng(seed);
  glyphforge::flow::FlowBatch b(d, c);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> x0(d), eps(d), cond(c);
    for (auto& v : x0) v = rng.normal();
    for (auto& v : eps) v = rng.normal();
    for (auto& v : cond) v = rng.uniform(-1.0, 1.0);
    b.add(x0, eps, rng.uniform(0.0, 1.0), cond);
  }
  return b;
}

// ||a - n|| / max(||a||, ||n||, floor): whole-vector relative error of an
// analytic gradient against a numeric one.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& n, double floor = 1e-12) {
  double diff = 0.0, na = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn += n[i] * n[i];
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), floor});
}

// Central differences of `loss` over every parameter of `model`.
inline std::vector<double> numeric_gradient(glyphforge::flow::VelocityModel& model,
                                            const std::function<double()>& loss, double h = 1e-5) {
  auto params = model.params();
  std::vector<double> out(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = loss();
    params[i] = keep - h;
    const double down = loss();
    params[i] = keep;
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

inline glyphforge::Image solid_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  glyphforge::Image img;
  img.width = w;
  img.height = h;
  img.channels = 3;
  img.pixels.resize(static_cast<std::size_t>(w * h * 3));
  for (std::size_t i = 0; i < img.pixels.size(); i += 3) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
  }
  return img;
}

// Local HTTP server on an ephemeral port, running until destruction.
class LocalServer {
 public:
  using Handler = std::function<nlohmann::json(const nlohmann::json&, int& status)>;

  explicit LocalServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      int status = 200;
      nlohmann::json body;
      try {
        body = handler_(nlohmann::json::parse(req.body), status);
      } catch (const std::exception& e) {
        status = 400;
        body = {{"error", e.what()}};
      }
      res.status = status;
      res.set_content(body.is_string() ? body.get<std::string>() : body.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/"; }
  int requests() const { return requests_.load(); }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
};

// Runs the CLI with `args` from `cwd` (if given), capturing stdout+stderr.
struct CliResult {
  int code = -1;
  std::string output;
};

inline CliResult run_cli(const std::string& args, const fs::path& cwd = {}) {
  std::string cmd = std::string(GLYPHFORGE_CLI) + " " + args + " 2>&1";
  if (!cwd.empty()) cmd = "cd '" + cwd.string() + "' && " + cmd;
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Hash of every regular file under `dir`, keyed by relative path.
inline std::map<std::string, std::string> tree_digest(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) {
      const auto bytes = glyphforge::read_bytes(e.path());
      glyphforge::Fnv1a64 h;
      h.update(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      out[fs::relative(e.path(), dir).string()] = glyphforge::hex64(h.digest());
    }
  return out;
}

}  // namespace testsupport
