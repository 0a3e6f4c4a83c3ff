#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "glyphforge/core.hpp"
#include "glyphforge/html/dom.hpp"
#include "glyphforge/html/render.hpp"
#include "glyphforge/html/text_service.hpp"
#include "glyphforge/image.hpp"

namespace glyphforge::html {

struct EditPlan {
  Operation operation = Operation::replace;
  std::vector<int> targets;
  // replace/translate: one new string per target; add: the inserted text.
  std::vector<std::string> texts;
  // rearrange: slot i receives the node targets[permutation[i]].
  std::vector<std::size_t> permutation;
  // change_style: whitelisted properties applied to every target.
  std::map<std::string, std::string> style;
  // translate: destination language.
  std::string language;
  // add: id given to the inserted node.
  int new_id = -1;
  std::vector<EditPlan> parts;
  std::string instruction;

  // Ids touched by this plan, including those of combined parts.
  std::vector<int> all_targets() const {
    std::vector<int> out = targets;
    for (const auto& p : parts) {
      auto sub = p.all_targets();
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
};

inline nlohmann::ordered_json plan_to_json(const EditPlan& p) {
  nlohmann::ordered_json j;
  j["operation"] = to_string(p.operation);
  j["targets"] = p.targets;
  if (!p.texts.empty()) j["texts"] = p.texts;
  if (!p.permutation.empty()) j["permutation"] = p.permutation;
  if (!p.style.empty()) {
    nlohmann::ordered_json st = nlohmann::ordered_json::object();
    for (auto key : kStyleKeys)
      if (auto it = p.style.find(std::string(key)); it != p.style.end()) st[std::string(key)] = it->second;
    j["style"] = st;
  }
  if (!p.language.empty()) j["language"] = p.language;
  if (p.new_id >= 0) j["new_id"] = p.new_id;
  if (!p.parts.empty()) {
    j["parts"] = nlohmann::ordered_json::array();
    for (const auto& part : p.parts) j["parts"].push_back(plan_to_json(part));
  }
  j["instruction"] = p.instruction;
  return j;
}

inline EditPlan plan_from_json(const nlohmann::json& j) {
  EditPlan p;
  try {
    p.operation = require_operation(j.at("operation").get<std::string>(), "plan");
    p.targets = j.at("targets").get<std::vector<int>>();
    if (j.contains("texts")) p.texts = j["texts"].get<std::vector<std::string>>();
    if (j.contains("permutation")) p.permutation = j["permutation"].get<std::vector<std::size_t>>();
    if (j.contains("style")) p.style = j["style"].get<std::map<std::string, std::string>>();
    if (j.contains("language")) p.language = j["language"].get<std::string>();
    if (j.contains("new_id")) p.new_id = j["new_id"].get<int>();
    if (j.contains("parts"))
      for (const auto& part : j["parts"]) p.parts.push_back(plan_from_json(part));
    p.instruction = j.value("instruction", "");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, "plan", std::string("malformed plan: ") + e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Planning
// ---------------------------------------------------------------------------

struct PlanOptions {
  std::string source_language = "en";
  // Destination of translate plans; empty picks German for English sources
  // and English otherwise.
  std::string target_language;
};

inline std::string default_target_language(const PlanOptions& o) {
  if (!o.target_language.empty()) return o.target_language;
  return o.source_language == "en" ? "de" : "en";
}

namespace detail {

inline std::string quote_text(const std::string& s) { return "\"" + s + "\""; }

inline std::string quoted_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? (items.size() == 2 ? " and " : ", and ") : ", ";
    out += quote_text(items[i]);
  }
  return out;
}

struct StyleChoice {
  const char* key;
  const char* value;
  const char* phrase;
};

inline constexpr StyleChoice kStyleChoices[] = {
    {"color", "#d32f2f", "red text"},           {"color", "#1976d2", "blue text"},
    {"color", "#388e3c", "green text"},         {"color", "#7b1fa2", "purple text"},
    {"background", "#fff59d", "a yellow background"}, {"background", "#bbdefb", "a light blue background"},
    {"background", "#c8e6c9", "a light green background"}, {"font-weight", "bold", "bold weight"},
    {"font-weight", "normal", "regular weight"}, {"font-size", "8px", "an 8px font size"},
    {"font-size", "16px", "a 16px font size"},  {"font-size", "24px", "a 24px font size"},
    {"text-align", "left", "left alignment"},   {"text-align", "center", "centered alignment"},
    {"text-align", "right", "right alignment"}};

struct Planner {
  const DocTree& doc;
  const ContentRecord& rec;
  TextService& svc;
  const PlanOptions& opts;
  Rng rng;
  int next_new_id;

  std::vector<std::string> texts_of(const std::vector<std::size_t>& idx) const {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(rec.texts[i].text);
    return out;
  }
  std::vector<int> ids_of(const std::vector<std::size_t>& idx) const {
    std::vector<int> out;
    for (auto i : idx) out.push_back(rec.texts[i].id);
    return out;
  }

  // k uniform in [lo, n], then k distinct entries in document order.
  std::vector<std::size_t> pick(const std::vector<std::size_t>& pool, std::size_t lo) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(lo, pool.size()));
    auto chosen = rng.choose(pool.size(), k);
    std::vector<std::size_t> out;
    for (auto c : chosen) out.push_back(pool[c]);
    return out;
  }

  EditPlan replace(const std::vector<std::size_t>& idx) {
    EditPlan p;
    p.operation = Operation::replace;
    p.targets = ids_of(idx);
    std::string ins;
    for (auto i : idx) {
      p.texts.push_back(svc.substitute(rec.texts[i].text, rng.next_u64()));
      ins += (ins.empty() ? "Replace " : "; replace ") + quote_text(rec.texts[i].text) + " with " + quote_text(p.texts.back());
    }
    p.instruction = ins;
    return p;
  }

  EditPlan translate(const std::vector<std::size_t>& idx, bool whole_document) {
    EditPlan p;
    p.operation = Operation::translate;
    p.targets = ids_of(idx);
    p.language = default_target_language(opts);
    p.texts = svc.translate(texts_of(idx), opts.source_language, p.language);
    const std::string lang(language_name(p.language));
    p.instruction = whole_document ? "Translate all text into " + lang
                                   : "Translate " + quoted_list(texts_of(idx)) + " into " + lang;
    return p;
  }

  EditPlan remove(const std::vector<std::size_t>& idx) {
    EditPlan p;
    p.operation = Operation::remove;
    p.targets = ids_of(idx);
    p.instruction = std::string(idx.size() == 1 ? "Delete the text " : "Delete the texts ") + quoted_list(texts_of(idx));
    return p;
  }

  EditPlan rearrange(const std::vector<std::size_t>& idx) {
    EditPlan p;
    p.operation = Operation::rearrange;
    p.targets = ids_of(idx);
    std::vector<std::size_t> perm(idx.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      rng.shuffle(perm);
      for (std::size_t i = 0; i < perm.size(); ++i) ok = ok || perm[i] != i;
    }
    if (!ok) fail(ErrorKind::planning, "make_plan", "could not draw a non-identity permutation in 10 attempts");
    p.permutation = perm;
    const auto before = texts_of(idx);
    if (idx.size() == 2) {
      p.instruction = "Swap the positions of " + quoted_list(before);
    } else {
      std::vector<std::string> after;
      for (auto k : perm) after.push_back(before[k]);
      p.instruction = "Reorder " + quoted_list(before) + " so they read " + quoted_list(after);
    }
    return p;
  }

  EditPlan add() {
    EditPlan p;
    p.operation = Operation::add;
    p.new_id = next_new_id++;
    p.texts = {svc.compose(rng.next_u64())};
    p.instruction = "Add the text " + quote_text(p.texts[0]) + " below the existing content";
    return p;
  }

  EditPlan change_style(const std::vector<std::size_t>& idx) {
    EditPlan p;
    p.operation = Operation::change_style;
    p.targets = ids_of(idx);
    const Node* first = doc.find(rec.texts[idx.front()].id);
    std::vector<const StyleChoice*> usable;
    for (const auto& c : kStyleChoices) {
      const auto* cur = first ? first->style_value(c.key) : nullptr;
      if (cur && *cur == c.value) continue;
      usable.push_back(&c);
    }
    const auto n = std::min<std::size_t>(usable.size(), static_cast<std::size_t>(rng.uniform_int(1, 2)));
    std::string phrase;
    std::set<std::string> keys;
    for (std::size_t k = 0; k < n; ++k) {
      const StyleChoice* c = nullptr;
      for (int tries = 0; tries < 32 && !c; ++tries) {
        const auto* cand = usable[static_cast<std::size_t>(rng.uniform_int(0, usable.size() - 1))];
        if (!keys.contains(cand->key)) c = cand;
      }
      if (!c) break;
      keys.insert(c->key);
      p.style[c->key] = c->value;
      phrase += (phrase.empty() ? "" : " and ") + std::string(c->phrase);
    }
    p.instruction = "Give " + quoted_list(texts_of(idx)) + " " + phrase;
    return p;
  }

  EditPlan combined(const std::vector<std::size_t>& all) {
    EditPlan p;
    p.operation = Operation::combined;
    std::vector<std::size_t> pool = all;
    rng.shuffle(pool);
    const auto parts = static_cast<std::size_t>(rng.uniform_int(2, 3));
    static constexpr Operation kinds[] = {Operation::replace, Operation::remove, Operation::change_style,
                                          Operation::translate, Operation::rearrange, Operation::add};
    bool used_add = false;
    for (std::size_t k = 0; k < parts; ++k) {
      std::vector<Operation> feasible;
      for (auto op : kinds) {
        if (op == Operation::add && used_add) continue;
        if (op == Operation::rearrange && pool.size() < 2) continue;
        if (op != Operation::add && pool.empty()) continue;
        feasible.push_back(op);
      }
      if (feasible.empty()) break;
      const auto op = feasible[static_cast<std::size_t>(rng.uniform_int(0, feasible.size() - 1))];
      if (op == Operation::add) {
        used_add = true;
        p.parts.push_back(add());
        continue;
      }
      // Leave entries for the remaining parts where possible.
      const std::size_t remaining = parts - k - 1;
      const std::size_t lo = op == Operation::rearrange ? 2 : 1;
      const std::size_t hi = std::max(lo, pool.size() > remaining ? pool.size() - remaining : lo);
      const auto take = static_cast<std::size_t>(rng.uniform_int(lo, std::min(hi, std::max(lo, pool.size()))));
      std::vector<std::size_t> idx(pool.end() - static_cast<std::ptrdiff_t>(take), pool.end());
      pool.resize(pool.size() - take);
      std::sort(idx.begin(), idx.end());
      switch (op) {
        case Operation::replace: p.parts.push_back(replace(idx)); break;
        case Operation::remove: p.parts.push_back(remove(idx)); break;
        case Operation::change_style: p.parts.push_back(change_style(idx)); break;
        case Operation::translate: p.parts.push_back(translate(idx, false)); break;
        case Operation::rearrange: p.parts.push_back(rearrange(idx)); break;
        default: break;
      }
    }
    for (std::size_t k = 0; k < p.parts.size(); ++k)
      p.instruction += (k == 0 ? "" : "; then ") + p.parts[k].instruction;
    return p;
  }
};

}  // namespace detail

// Draws an edit plan for `op` over the text entries of `rec`. Identical
// (document, operation, seed) always yield the same plan under a
// deterministic text service.
inline EditPlan make_plan(const DocTree& doc, const ContentRecord& rec, Operation op, std::uint64_t seed,
                          TextService& svc, const PlanOptions& opts = {}) {
  if (op == Operation::reasoning)
    fail(ErrorKind::planning, "make_plan", "reasoning is a benchmark category, not a constructible edit");
  const std::size_t n = rec.texts.size();
  if (n == 0 && op != Operation::add)
    fail(ErrorKind::planning, "make_plan", "document has no text entries for " + std::string(to_string(op)));
  detail::Planner planner{doc, rec, svc, opts, Rng(derive_seed(seed, "plan/" + std::string(to_string(op)))),
                          doc.max_id() + 1};
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  switch (op) {
    case Operation::replace: return planner.replace(planner.pick(all, 1));
    case Operation::translate: return planner.translate(all, true);
    case Operation::remove: return planner.remove(planner.pick(all, 1));
    case Operation::rearrange:
      if (n < 2) fail(ErrorKind::planning, "make_plan", "rearrange needs at least two text entries");
      return planner.rearrange(planner.pick(all, 2));
    case Operation::add: return planner.add();
    case Operation::change_style: return planner.change_style(planner.pick(all, 1));
    case Operation::combined: return planner.combined(all);
    default: break;
  }
  fail(ErrorKind::planning, "make_plan", "unsupported operation");
}

// ---------------------------------------------------------------------------
// Backfill
// ---------------------------------------------------------------------------

namespace detail {

inline Node& require_node(DocTree& doc, int id) {
  Node* n = doc.find(id);
  if (!n) fail(ErrorKind::consistency, "backfill", "target node " + std::to_string(id) + " is not in the document");
  return *n;
}

inline int content_bottom(const DocTree& doc) {
  int bottom = 0;
  const Node& body = doc.body();
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.box && n.box->h > 0) bottom = std::max(bottom, n.box->y + n.box->h);
    for (const auto& c : n.children) walk(c);
  };
  for (const auto& c : body.children) walk(c);
  return bottom;
}

inline void apply(DocTree& doc, const EditPlan& plan) {
  switch (plan.operation) {
    case Operation::replace:
    case Operation::translate:
      if (plan.texts.size() != plan.targets.size())
        fail(ErrorKind::consistency, "backfill", "plan carries " + std::to_string(plan.texts.size()) + " texts for " +
                                                     std::to_string(plan.targets.size()) + " targets");
      for (std::size_t i = 0; i < plan.targets.size(); ++i) require_node(doc, plan.targets[i]).text = plan.texts[i];
      break;
    case Operation::remove:
      for (int id : plan.targets) {
        auto loc = doc.locate(id);
        if (!loc) fail(ErrorKind::consistency, "backfill", "target node " + std::to_string(id) + " is not in the document");
        auto& siblings = loc->first->children;
        siblings.erase(siblings.begin() + static_cast<std::ptrdiff_t>(loc->second));
      }
      break;
    case Operation::rearrange: {
      const auto k = plan.targets.size();
      if (plan.permutation.size() != k)
        fail(ErrorKind::consistency, "backfill", "permutation length does not match the targets");
      std::vector<bool> seen(k, false);
      for (auto v : plan.permutation) {
        if (v >= k || seen[v]) fail(ErrorKind::consistency, "backfill", "rearrange payload is not a permutation");
        seen[v] = true;
      }
      std::vector<Node> moving;
      std::vector<std::optional<PixelBox>> slots;
      for (int id : plan.targets) {
        const Node& n = require_node(doc, id);
        moving.push_back(n);
        slots.push_back(n.box);
      }
      // Replace slot contents one at a time; ids are unique so each lookup
      // finds the original occupant before it is overwritten.
      std::vector<std::pair<Node*, std::size_t>> places;
      for (int id : plan.targets) places.push_back(*doc.locate(id));
      for (std::size_t i = 0; i < k; ++i) {
        Node incoming = moving[plan.permutation[i]];
        incoming.box = slots[i];
        places[i].first->children[places[i].second] = std::move(incoming);
      }
      break;
    }
    case Operation::add: {
      if (plan.texts.size() != 1) fail(ErrorKind::consistency, "backfill", "add plan must carry exactly one text");
      if (plan.new_id < 0 || doc.find(plan.new_id))
        fail(ErrorKind::consistency, "backfill", "add plan id " + std::to_string(plan.new_id) + " is unavailable");
      const PixelBox page = page_box(doc);
      Node n;
      n.tag = "p";
      n.id = plan.new_id;
      n.text = plan.texts[0];
      n.style["font-size"] = "16px";
      n.style["color"] = "#000000";
      n.style["margin"] = "0px";
      const int w = static_cast<int>(std::lround(0.8 * page.w));
      const int x = static_cast<int>(std::lround(0.1 * page.w));
      const int h = std::max(line_height(font_scale(16)), measure_text(utf8_decode(n.text), w, 16).height);
      const int y = std::max(0, std::min(content_bottom(doc), page.h - h));
      n.box = PixelBox{x, y, w, h};
      doc.body().children.push_back(std::move(n));
      break;
    }
    case Operation::change_style:
      for (const auto& [k, v] : plan.style) {
        if (k != "color" && k != "background" && k != "font-weight" && k != "font-size" && k != "text-align")
          fail(ErrorKind::consistency, "backfill", "style property '" + k + "' may not change after layout");
      }
      for (int id : plan.targets) {
        Node& n = require_node(doc, id);
        for (const auto& [k, v] : plan.style) n.style[k] = v;
      }
      break;
    case Operation::combined: {
      std::set<int> seen;
      for (int id : plan.all_targets())
        if (!seen.insert(id).second)
          fail(ErrorKind::consistency, "backfill", "combined parts share target " + std::to_string(id));
      for (const auto& part : plan.parts) apply(doc, part);
      break;
    }
    default:
      fail(ErrorKind::consistency, "backfill", "unsupported operation " + std::string(to_string(plan.operation)));
  }
}

}  // namespace detail

// Applies `plan` to a copy of a laid-out tree. Untouched nodes keep their
// serialization byte for byte.
inline DocTree backfill(const DocTree& doc, const EditPlan& plan) {
  DocTree out = doc;
  detail::apply(out, plan);
  return out;
}

// ---------------------------------------------------------------------------
// Pairs
// ---------------------------------------------------------------------------

struct EditPair {
  DocTree source;
  DocTree target;
  Image source_image;
  Image target_image;
  std::vector<PixelBox> boxes;
  EditPlan plan;
  std::string language;
  std::uint64_t seed = 0;
  bool clipped = false;
  std::size_t edited_chars = 0;
};

namespace detail {

inline void collect_boxes(const DocTree& src, const DocTree& tgt, const EditPlan& plan, std::vector<PixelBox>& out) {
  if (plan.operation == Operation::combined) {
    for (const auto& part : plan.parts) collect_boxes(src, tgt, part, out);
    return;
  }
  if (plan.operation == Operation::add) {
    if (const Node* n = tgt.find(plan.new_id); n && n->box) out.push_back(*n->box);
    return;
  }
  for (int id : plan.targets)
    if (const Node* n = src.find(id); n && n->box) out.push_back(*n->box);
}

inline std::size_t edited_chars(const DocTree& src, const EditPlan& plan) {
  std::size_t total = 0;
  switch (plan.operation) {
    case Operation::combined:
      for (const auto& part : plan.parts) total += edited_chars(src, part);
      return total;
    case Operation::replace:
    case Operation::translate:
    case Operation::add:
      for (const auto& t : plan.texts) total += utf8_length(t);
      return total;
    default:
      for (int id : plan.targets)
        if (const Node* n = src.find(id)) total += utf8_length(n->text);
      return total;
  }
}

inline std::vector<int> text_targets(const EditPlan& plan) {
  std::vector<int> out;
  if (plan.operation == Operation::combined) {
    for (const auto& p : plan.parts) {
      auto sub = text_targets(p);
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else if (plan.operation == Operation::add) {
    out.push_back(plan.new_id);
  } else if (plan.operation != Operation::remove) {
    out = plan.targets;
  }
  return out;
}

}  // namespace detail

// Pixels of `b` that differ from `a` and fall outside every box.
inline std::vector<std::pair<int, int>> confinement_violations(const Image& a, const Image& b,
                                                               const std::vector<PixelBox>& boxes) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : diff_pixels(a, b)) {
    const bool inside =
        std::any_of(boxes.begin(), boxes.end(), [&](const PixelBox& bx) { return bx.contains(p.first, p.second); });
    if (!inside) out.push_back(p);
  }
  return out;
}

// Builds a pair from an already parsed tree, using the plan if given.
inline EditPair make_pair_from_tree(DocTree tree, Operation op, std::uint64_t seed, TextService& svc,
                                    const PlanOptions& opts = {}, const EditPlan* forced_plan = nullptr) {
  EditPair pair;
  pair.seed = seed;
  pair.language = opts.source_language;
  auto src_render = render(tree);
  const auto record = extract(tree);
  pair.plan = forced_plan ? *forced_plan : make_plan(tree, record, op, seed, svc, opts);
  pair.target = backfill(tree, pair.plan);
  auto tgt_render = render(pair.target);
  pair.source = std::move(tree);
  pair.source_image = std::move(src_render.image);
  pair.target_image = std::move(tgt_render.image);

  const PixelBox page = page_box(pair.source);
  std::vector<PixelBox> raw;
  detail::collect_boxes(pair.source, pair.target, pair.plan, raw);
  for (const auto& b : raw) {
    const auto clipped = b.intersect(page);
    if (!clipped.empty() && std::find(pair.boxes.begin(), pair.boxes.end(), clipped) == pair.boxes.end())
      pair.boxes.push_back(clipped);
  }
  for (int id : detail::text_targets(pair.plan))
    if (tgt_render.overflowing.contains(id)) pair.clipped = true;
  pair.edited_chars = detail::edited_chars(pair.source, pair.plan);

  const auto bad = confinement_violations(pair.source_image, pair.target_image, pair.boxes);
  if (!bad.empty())
    fail(ErrorKind::invariant, "make_pair",
         std::to_string(bad.size()) + " changed pixels fall outside the edited boxes, first at (" +
             std::to_string(bad[0].first) + ", " + std::to_string(bad[0].second) + ")");
  return pair;
}

inline EditPair make_pair(std::string_view html, Operation op, std::uint64_t seed, TextService& svc,
                          const PlanOptions& opts = {}) {
  return make_pair_from_tree(parse(html), op, seed, svc, opts);
}

// Translates every text entry into `pivot`, then builds the pair on the
// translated document.
inline EditPair translate_then_edit(std::string_view html, const std::string& pivot, Operation op, std::uint64_t seed,
                                    TextService& svc, const PlanOptions& opts = {}) {
  if (!is_known_language(pivot)) fail(ErrorKind::config, "translate_then_edit", "unknown pivot language '" + pivot + "'");
  DocTree tree = parse(html);
  render(tree);
  const auto record = extract(tree);
  EditPlan to_pivot;
  to_pivot.operation = Operation::translate;
  to_pivot.language = pivot;
  std::vector<std::string> texts;
  for (const auto& t : record.texts) {
    to_pivot.targets.push_back(t.id);
    texts.push_back(t.text);
  }
  to_pivot.texts = svc.translate(texts, opts.source_language, pivot);
  DocTree pivot_tree = backfill(tree, to_pivot);
  PlanOptions pivot_opts = opts;
  pivot_opts.source_language = pivot;
  if (pivot_opts.target_language == pivot) pivot_opts.target_language.clear();
  return make_pair_from_tree(std::move(pivot_tree), op, seed, svc, pivot_opts);
}

// ---------------------------------------------------------------------------
// Bundles
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json boxes_to_json(const std::vector<PixelBox>& boxes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& b : boxes) arr.push_back({b.x, b.y, b.w, b.h});
  return arr;
}

inline nlohmann::ordered_json pair_meta(const EditPair& pair) {
  nlohmann::ordered_json meta;
  meta["operation"] = to_string(pair.plan.operation);
  meta["language"] = pair.language;
  meta["seed"] = pair.seed;
  meta["clipped"] = pair.clipped;
  meta["regions"] = pair.boxes.size();
  meta["edited_chars"] = pair.edited_chars;
  meta["source"] = "structured";
  return meta;
}

inline void write_bundle(const std::filesystem::path& dir, const EditPair& pair) {
  std::filesystem::create_directories(dir);
  write_text(dir / "src.html", serialize(pair.source));
  write_text(dir / "tgt.html", serialize(pair.target));
  write_png(dir / "src.png", pair.source_image);
  write_png(dir / "tgt.png", pair.target_image);
  write_text(dir / "plan.json", plan_to_json(pair.plan).dump(2) + "\n");
  write_text(dir / "boxes.json", boxes_to_json(pair.boxes).dump() + "\n");
  write_text(dir / "meta.json", pair_meta(pair).dump(2) + "\n");
}

}  // namespace glyphforge::html
