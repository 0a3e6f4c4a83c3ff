#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "glyphforge/core.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::html {

inline std::string_view language_name(std::string_view code) {
  static const std::map<std::string_view, std::string_view> names = {
      {"en", "English"}, {"zh", "Chinese"},    {"hi", "Hindi"},   {"es", "Spanish"}, {"fr", "French"},
      {"ar", "Arabic"},  {"pt", "Portuguese"}, {"bn", "Bengali"}, {"ru", "Russian"}, {"de", "German"},
      {"ko", "Korean"},  {"ja", "Japanese"},   {"th", "Thai"},    {"id", "Indonesian"}, {"vi", "Vietnamese"}};
  auto it = names.find(code);
  return it == names.end() ? code : it->second;
}

// Scripts written without spaces between words.
inline bool is_unspaced_language(std::string_view code) { return code == "zh" || code == "ja" || code == "th"; }

// Source of new strings for the structured pipeline.
class TextService {
 public:
  virtual ~TextService() = default;
  // A different string of similar shape to `text`.
  virtual std::string substitute(const std::string& text, std::uint64_t seed) = 0;
  // A short new phrase.
  virtual std::string compose(std::uint64_t seed) = 0;
  virtual std::vector<std::string> translate(const std::vector<std::string>& texts, const std::string& from,
                                             const std::string& to) = 0;
};

namespace detail {

inline char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c == 0x401) return 0x451;
  return c;
}

inline char32_t upcase(char32_t c) {
  if (c >= U'a' && c <= U'z') return c - 32;
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 32;
  if (c >= 0x430 && c <= 0x44F) return c - 0x20;
  if (c == 0x451) return 0x401;
  return c;
}

inline bool is_upper(char32_t c) { return fold(c) != c; }

inline bool is_separator(char32_t c) {
  if (c == U' ' || c == U'\t' || c == U'\n') return true;
  if (c < 0x80) return c != U'\'' && c != U'-' && !std::isalnum(static_cast<int>(c));
  return c == 0x3001 || c == 0x3002 || c == 0xFF01 || c == 0xFF0C || c == 0xFF1F;
}

inline std::u32string fold_all(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = fold(c);
  return out;
}

}  // namespace detail

// Word list with one English headword per row and one column per language.
class Dictionary {
 public:
  static std::filesystem::path default_path() {
    if (const char* env = std::getenv("GLYPHFORGE_DICTIONARY")) return env;
#ifdef GLYPHFORGE_SOURCE_DIR
    return std::filesystem::path(GLYPHFORGE_SOURCE_DIR) / "data" / "dictionary" / "words.tsv";
#else
    return "data/dictionary/words.tsv";
#endif
  }

  static Dictionary load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail(ErrorKind::config, "dictionary", "missing dictionary " + path.string());
    return parse(read_text(path));
  }

  static Dictionary parse(std::string_view text) {
    Dictionary d;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      auto line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      std::vector<std::string> cols;
      std::size_t p = 0;
      while (true) {
        const auto tab = line.find('\t', p);
        cols.emplace_back(line.substr(p, tab == std::string_view::npos ? std::string_view::npos : tab - p));
        if (tab == std::string_view::npos) break;
        p = tab + 1;
      }
      if (header) {
        d.languages_ = cols;
        header = false;
        continue;
      }
      if (cols.size() != d.languages_.size())
        fail(ErrorKind::parse, "dictionary", "row '" + std::string(line) + "' has the wrong column count");
      d.rows_.push_back(std::move(cols));
    }
    return d;
  }

  const std::vector<std::string>& languages() const noexcept { return languages_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool covers(std::string_view lang) const {
    return std::find(languages_.begin(), languages_.end(), lang) != languages_.end();
  }
  const std::string& entry(std::size_t row, std::string_view lang) const { return rows_[row][column(lang)]; }

  struct Result {
    std::string text;
    std::size_t translated_words = 0;
  };

  // Greedy longest-match, word by word. Untranslatable words pass through.
  Result translate(std::string_view text, std::string_view from, std::string_view to) const {
    if (from == to) return {std::string(text), 0};
    const std::size_t fc = column(from), tc = column(to);
    // Longest entries first so multi-word phrases win.
    std::vector<std::pair<std::u32string, std::u32string>> pairs;
    for (const auto& row : rows_)
      if (!row[fc].empty() && !row[tc].empty()) pairs.emplace_back(detail::fold_all(utf8_decode(row[fc])), utf8_decode(row[tc]));
    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });

    const bool src_unspaced = is_unspaced_language(from), dst_unspaced = is_unspaced_language(to);
    const std::u32string src = utf8_decode(text);
    const std::u32string folded = detail::fold_all(src);
    struct Segment {
      std::u32string text;
      bool translated;
    };
    std::vector<Segment> segs;
    std::size_t translated = 0;
    std::size_t i = 0;
    while (i < src.size()) {
      if (detail::is_separator(src[i])) {
        segs.push_back({std::u32string(1, src[i]), false});
        ++i;
        continue;
      }
      const bool word_start = src_unspaced || i == 0 || detail::is_separator(src[i - 1]);
      bool matched = false;
      if (word_start) {
        for (const auto& [key, value] : pairs) {
          if (key.size() > src.size() - i || folded.compare(i, key.size(), key) != 0) continue;
          const std::size_t end = i + key.size();
          if (!src_unspaced && end < src.size() && !detail::is_separator(src[end])) continue;
          std::u32string out = value;
          if (detail::is_upper(src[i]) && !out.empty()) out[0] = detail::upcase(out[0]);
          segs.push_back({std::move(out), true});
          ++translated;
          i = end;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      std::size_t j = i + 1;
      if (!src_unspaced)
        while (j < src.size() && !detail::is_separator(src[j])) ++j;
      segs.push_back({src.substr(i, j - i), false});
      i = j;
    }
    std::u32string out;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const auto& s = segs[k];
      if (dst_unspaced && !s.translated && s.text == U" " && k > 0 && k + 1 < segs.size() && segs[k - 1].translated &&
          segs[k + 1].translated)
        continue;
      if (!dst_unspaced && src_unspaced && s.translated && k > 0 && segs[k - 1].translated) out += U' ';
      out += s.text;
    }
    std::string result = utf8_encode(out);
    if (translated == 0) result = "[" + std::string(to) + "] " + result;
    return {std::move(result), translated};
  }

 private:
  std::size_t column(std::string_view lang) const {
    auto it = std::find(languages_.begin(), languages_.end(), lang);
    if (it == languages_.end()) fail(ErrorKind::config, "translate", "dictionary does not cover language '" + std::string(lang) + "'");
    return static_cast<std::size_t>(it - languages_.begin());
  }

  std::vector<std::string> languages_;
  std::vector<std::vector<std::string>> rows_;
};

// Deterministic offline text service: word shuffles for substitutions,
// dictionary phrases for new text, dictionary lookup for translation.
class MockTextService : public TextService {
 public:
  explicit MockTextService(std::shared_ptr<const Dictionary> dict) : dict_(std::move(dict)) {}
  MockTextService() : MockTextService(std::make_shared<Dictionary>(Dictionary::load(Dictionary::default_path()))) {}

  const Dictionary& dictionary() const noexcept { return *dict_; }

  std::string substitute(const std::string& text, std::uint64_t seed) override {
    Rng rng(seed);
    std::vector<std::string> words;
    std::size_t p = 0;
    while (p < text.size()) {
      const auto sp = text.find(' ', p);
      const auto w = text.substr(p, sp == std::string::npos ? std::string::npos : sp - p);
      if (!w.empty()) words.push_back(w);
      if (sp == std::string::npos) break;
      p = sp + 1;
    }
    auto original = words;
    rng.shuffle(words);
    if (words == original) {
      // A shuffle that changes nothing falls back to swapping one word for a
      // dictionary headword.
      const auto slot = words.empty() ? 0 : static_cast<std::size_t>(rng.uniform_int(0, words.size() - 1));
      std::string pick;
      do {
        pick = dict_->entry(static_cast<std::size_t>(rng.uniform_int(0, dict_->size() - 1)), "en");
      } while (!words.empty() && pick == words[slot]);
      if (words.empty()) words.push_back(pick);
      else words[slot] = pick;
    }
    std::string out;
    for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
    return out;
  }

  std::string compose(std::uint64_t seed) override {
    Rng rng(seed);
    const auto n = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::string out;
    for (std::size_t k = 0; k < n; ++k) {
      std::string w = dict_->entry(static_cast<std::size_t>(rng.uniform_int(0, dict_->size() - 1)), "en");
      if (k == 0 && !w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      out += (out.empty() ? "" : " ") + w;
    }
    return out;
  }

  std::vector<std::string> translate(const std::vector<std::string>& texts, const std::string& from,
                                     const std::string& to) override {
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(dict_->translate(t, from, to).text);
    return out;
  }

 private:
  std::shared_ptr<const Dictionary> dict_;
};

}  // namespace glyphforge::html
