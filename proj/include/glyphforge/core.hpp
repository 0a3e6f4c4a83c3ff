#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace glyphforge {

inline constexpr std::string_view kVersion = "0.3.0";
inline constexpr std::uint32_t kSchemaVersion = 1;
inline constexpr std::uint32_t kCheckpointVersion = 1;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
  shape,
  numerical,
  config,
  protocol,
  transport,
  parse,
  planning,
  consistency,
  invariant,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::shape: return "shape error";
    case ErrorKind::numerical: return "numerical error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::protocol: return "protocol error";
    case ErrorKind::transport: return "transport error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::planning: return "planning error";
    case ErrorKind::consistency: return "consistency error";
    case ErrorKind::invariant: return "invariant violation";
    case ErrorKind::io: return "io error";
  }
  return "error";
}

// Every error carries the pipeline stage that raised it; what() reads
// "<stage>: <kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

// Transport failures are retryable; attempt counts the calls made so far.
class TransportError : public Error {
 public:
  TransportError(std::string stage, const std::string& message, int attempts)
      : Error(ErrorKind::transport, std::move(stage), message), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string stage, const std::string& message) {
  throw Error(kind, std::move(stage), message);
}

// ---------------------------------------------------------------------------
// Hashing and seeded randomness
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

class Fnv1a64 {
 public:
  Fnv1a64& update(std::span<const std::uint8_t> bytes) {
    for (auto b : bytes) {
      state_ ^= b;
      state_ *= kFnvPrime;
    }
    return *this;
  }
  Fnv1a64& update(std::string_view text) {
    return update({reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  }
  Fnv1a64& update_byte(std::uint8_t b) {
    state_ ^= b;
    state_ *= kFnvPrime;
    return *this;
  }
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = kFnvOffset;
};

inline std::uint64_t fnv1a64(std::string_view text) { return Fnv1a64{}.update(text).digest(); }

inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// SplitMix64: used for seed derivation and the mock judge's logit stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // 53-bit uniform in [0,1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return SplitMix64(seed ^ fnv1a64(tag)).next();
}
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ (0xa0761d6478bd642fULL * (index + 1))).next();
}

// Portable seeded generator. std::mt19937_64's output sequence is fixed by the
// standard; the distributions below are written out so sampled values do not
// depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] by rejection; unbiased.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == UINT64_MAX) return engine_();
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + draw % range;
  }

  // Box-Muller; caches the second variate.
  double normal() {
    if (spare_) {
      double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, i - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct indices from [0, n), returned in ascending order.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    shuffle(all);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// ---------------------------------------------------------------------------
// Shared enums
// ---------------------------------------------------------------------------

// Edit operations. The first seven are constructible by the data pipelines;
// reasoning exists only as a benchmark category.
enum class Operation { add, replace, remove, rearrange, translate, change_style, combined, reasoning };

inline constexpr std::array<Operation, 8> kAllOperations = {
    Operation::add,       Operation::replace,      Operation::remove,   Operation::rearrange,
    Operation::translate, Operation::change_style, Operation::combined, Operation::reasoning};

inline constexpr std::array<Operation, 7> kPairOperations = {
    Operation::add,       Operation::replace,      Operation::remove,  Operation::rearrange,
    Operation::translate, Operation::change_style, Operation::combined};

inline std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::add: return "add";
    case Operation::replace: return "replace";
    case Operation::remove: return "delete";
    case Operation::rearrange: return "rearrange";
    case Operation::translate: return "translate";
    case Operation::change_style: return "change_style";
    case Operation::combined: return "combined";
    case Operation::reasoning: return "reasoning";
  }
  return "?";
}

inline std::optional<Operation> parse_operation(std::string_view name) {
  for (auto op : kAllOperations)
    if (to_string(op) == name) return op;
  if (name == "style") return Operation::change_style;
  return std::nullopt;
}

inline Operation require_operation(std::string_view name, const std::string& stage) {
  auto op = parse_operation(name);
  if (!op) fail(ErrorKind::config, stage, "unknown operation '" + std::string(name) + "'");
  return *op;
}

// The 15 languages covered by the multilingual route, source language first.
inline constexpr std::array<std::string_view, 15> kLanguages = {
    "en", "zh", "hi", "es", "fr", "ar", "pt", "bn", "ru", "de", "ko", "ja", "th", "id", "vi"};

inline bool is_known_language(std::string_view code) {
  for (auto l : kLanguages)
    if (l == code) return true;
  return false;
}

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

inline std::u32string utf8_decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6 && i + 1 < text.size()) {
      cp = ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu);
      len = 2;
    } else if ((c >> 4) == 0xE && i + 2 < text.size()) {
      cp = ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(text[i + 2]) & 0x3Fu);
      len = 3;
    } else if ((c >> 3) == 0x1E && i + 3 < text.size()) {
      cp = ((c & 0x07u) << 18) | ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 12) |
           ((static_cast<unsigned char>(text[i + 2]) & 0x3Fu) << 6) |
           (static_cast<unsigned char>(text[i + 3]) & 0x3Fu);
      len = 4;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline std::string utf8_encode(std::u32string_view text) {
  std::string out;
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

inline std::size_t utf8_length(std::string_view text) { return utf8_decode(text).size(); }

}  // namespace glyphforge
