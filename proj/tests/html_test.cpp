#include <gtest/gtest.h>

#include <set>

#include "glyphforge/html/edit.hpp"
#include "support.hpp"

using namespace glyphforge;
using namespace glyphforge::html;

namespace {

std::string fixture(const std::string& name) { return read_text(testsupport::source_dir() / "data/corpus" / name); }

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(testsupport::source_dir() / "data/corpus"))
    if (e.path().extension() == ".html") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

MockTextService& service() {
  static MockTextService svc;
  return svc;
}

std::vector<std::string> leaf_texts(const DocTree& doc) {
  std::vector<std::string> out;
  doc.for_each([&](const Node& n) {
    if (!n.text.empty()) out.push_back(n.text);
  });
  return out;
}

bool all_white(const Image& img) {
  return std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 255; });
}

}  // namespace

TEST(Parse, SingleParagraph) {
  const auto doc = parse("<html><body><p>Hi</p></body></html>");
  EXPECT_EQ(leaf_texts(doc), (std::vector<std::string>{"Hi"}));
  EXPECT_EQ(doc.body().children.size(), 1u);
  EXPECT_EQ(doc.body().children[0].tag, "p");
}

TEST(Parse, FragmentKeepsDocumentOrder) {
  const auto doc = parse("<div><span>a</span><span>b</span></div>");
  EXPECT_EQ(leaf_texts(doc), (std::vector<std::string>{"a", "b"}));
}

TEST(Parse, ScriptDroppedWithNote) {
  const auto doc = parse("<body><script>alert(1)</script><p>ok</p></body>");
  EXPECT_EQ(leaf_texts(doc), (std::vector<std::string>{"ok"}));
  ASSERT_FALSE(doc.notes.empty());
  const bool mentions =
      std::any_of(doc.notes.begin(), doc.notes.end(), [](const auto& n) { return n.find("script") != std::string::npos; });
  EXPECT_TRUE(mentions);
}

TEST(Parse, UnknownTagBecomesDiv) {
  const auto doc = parse("<body><section><p>x</p></section></body>");
  ASSERT_EQ(doc.body().children.size(), 1u);
  EXPECT_EQ(doc.body().children[0].tag, "div");
  EXPECT_FALSE(doc.notes.empty());
}

TEST(Parse, UnbalancedStructureReportsPosition) {
  try {
    parse("<body>\n<div><p>x</p>\n  </h2></div></body>");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
    EXPECT_NE(std::string(e.what()).find("line 3, column 3"), std::string::npos) << e.what();
  }
  try {
    parse("<body><div><p>never closed");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("never closed"), std::string::npos);
  }
}

TEST(Serialize, RoundTripIsStable) {
  for (const auto& name : corpus_files()) {
    auto doc = parse(fixture(name));
    render(doc);
    const auto once = serialize(doc);
    const auto twice = serialize(parse(once));
    EXPECT_EQ(once, twice) << name;
    EXPECT_EQ(serialize(parse(twice)), twice) << name;
  }
}

TEST(Extract, CountsAndUrls) {
  auto three = parse(fixture("f2_three_paragraphs.html"));
  render(three);
  const auto rec = extract(three);
  ASSERT_EQ(rec.texts.size(), 3u);
  EXPECT_EQ(rec.texts[0].text, "The first paragraph is short.");
  EXPECT_EQ(rec.texts[2].text, "The third paragraph ends the story.");

  auto empty = parse("<html><body></body></html>");
  render(empty);
  const auto none = extract(empty);
  EXPECT_TRUE(none.texts.empty());
  EXPECT_TRUE(none.images.empty());

  auto imgs = parse(R"(<body><img src="https://example.com/a.png"><img src="htp:/broken url"></body>)");
  render(imgs);
  const auto ir = extract(imgs);
  ASSERT_EQ(ir.images.size(), 2u);
  EXPECT_TRUE(ir.images[0].valid);
  EXPECT_FALSE(ir.images[1].valid);
}

TEST(Render, EmptyBodyIsWhitePage) {
  auto doc = parse("<html><body></body></html>");
  const auto r = render(doc);
  EXPECT_EQ(r.image.width, kDefaultPageWidth);
  EXPECT_EQ(r.image.height, kDefaultPageHeight);
  EXPECT_TRUE(all_white(r.image));
}

TEST(Render, InkOnlyInsideParagraphBox) {
  auto doc = parse(R"(<body><p style="color:black;background:white">Hi</p></body>)");
  const auto r = render(doc);
  const auto rec = extract(doc);
  ASSERT_EQ(rec.texts.size(), 1u);
  const auto box = rec.texts[0].box;
  std::size_t inked = 0;
  for (int y = 0; y < r.image.height; ++y)
    for (int x = 0; x < r.image.width; ++x) {
      const auto* p = r.image.at(x, y);
      if (p[0] != 255 || p[1] != 255 || p[2] != 255) {
        ++inked;
        ASSERT_TRUE(box.contains(x, y)) << x << "," << y;
      }
    }
  EXPECT_GT(inked, 0u);
}

TEST(Render, Deterministic) {
  for (const auto& name : corpus_files()) {
    auto a = parse(fixture(name));
    auto b = parse(fixture(name));
    EXPECT_EQ(render(a).image.pixels, render(b).image.pixels) << name;
  }
}

TEST(Plan, DeterministicUnderSeed) {
  auto doc = parse(fixture("f1_coffee.html"));
  render(doc);
  const auto rec = extract(doc);
  for (auto op : kPairOperations) {
    const auto a = plan_to_json(make_plan(doc, rec, op, 42, service()));
    const auto b = plan_to_json(make_plan(doc, rec, op, 42, service()));
    EXPECT_EQ(a.dump(), b.dump()) << to_string(op);
  }
}

TEST(Plan, RearrangeOfTwoIsASwap) {
  auto doc = parse("<body><p>one</p><p>two</p></body>");
  render(doc);
  const auto rec = extract(doc);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto plan = make_plan(doc, rec, Operation::rearrange, seed, service());
    ASSERT_EQ(plan.targets.size(), 2u);
    EXPECT_EQ(plan.permutation, (std::vector<std::size_t>{1, 0}));
  }
}

TEST(Plan, TranslateCoversEveryEntry) {
  auto doc = parse(fixture("f2_three_paragraphs.html"));
  render(doc);
  const auto rec = extract(doc);
  const auto plan = make_plan(doc, rec, Operation::translate, 3, service());
  EXPECT_EQ(plan.targets.size(), 3u);
  EXPECT_EQ(plan.texts.size(), 3u);
  EXPECT_FALSE(plan.language.empty());
}

TEST(Plan, EmptyRecordRejectedExceptAdd) {
  auto doc = parse("<body></body>");
  render(doc);
  const auto rec = extract(doc);
  for (auto op : {Operation::replace, Operation::remove, Operation::translate, Operation::rearrange}) {
    try {
      make_plan(doc, rec, op, 1, service());
      FAIL() << to_string(op);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::planning);
    }
  }
  EXPECT_NO_THROW(make_plan(doc, rec, Operation::add, 1, service()));
}

TEST(Plan, JsonRoundTrip) {
  auto doc = parse(fixture("f1_coffee.html"));
  render(doc);
  const auto rec = extract(doc);
  for (auto op : kPairOperations) {
    const auto plan = make_plan(doc, rec, op, 9, service());
    EXPECT_EQ(plan_to_json(plan_from_json(nlohmann::json::parse(plan_to_json(plan).dump()))).dump(),
              plan_to_json(plan).dump());
  }
}

TEST(Backfill, IdentityPlanIsByteEqual) {
  auto doc = parse(fixture("f2_three_paragraphs.html"));
  render(doc);
  const auto rec = extract(doc);
  EditPlan plan;
  plan.operation = Operation::replace;
  for (const auto& t : rec.texts) {
    plan.targets.push_back(t.id);
    plan.texts.push_back(t.text);
  }
  EXPECT_EQ(serialize(backfill(doc, plan)), serialize(doc));
  const auto pair = make_pair_from_tree(doc, Operation::replace, 0, service(), {}, &plan);
  EXPECT_TRUE(diff_pixels(pair.source_image, pair.target_image).empty());
}

TEST(Backfill, ReplaceOneChangesOneLeaf) {
  auto doc = parse(fixture("f2_three_paragraphs.html"));
  render(doc);
  const auto rec = extract(doc);
  EditPlan plan;
  plan.operation = Operation::replace;
  plan.targets = {rec.texts[1].id};
  plan.texts = {"Something new"};
  const auto out = backfill(doc, plan);
  std::size_t changed = 0;
  doc.for_each([&](const Node& n) {
    const Node* m = out.find(n.id);
    ASSERT_NE(m, nullptr);
    if (serialize_shallow(n) != serialize_shallow(*m)) {
      ++changed;
      EXPECT_EQ(n.id, rec.texts[1].id);
    }
  });
  EXPECT_EQ(changed, 1u);
}

TEST(Backfill, DeleteKeepsSurvivorOrder) {
  auto doc = parse(fixture("f2_three_paragraphs.html"));
  render(doc);
  const auto rec = extract(doc);
  EditPlan plan;
  plan.operation = Operation::remove;
  plan.targets = {rec.texts[1].id};
  const auto out = backfill(doc, plan);
  EXPECT_EQ(out.find(rec.texts[1].id), nullptr);
  EXPECT_EQ(leaf_texts(out), (std::vector<std::string>{rec.texts[0].text, rec.texts[2].text}));
}

TEST(Backfill, VanishedTargetIsConsistencyError) {
  auto doc = parse("<body><p>a</p></body>");
  render(doc);
  EditPlan plan;
  plan.operation = Operation::replace;
  plan.targets = {999};
  plan.texts = {"x"};
  try {
    backfill(doc, plan);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::consistency);
  }
}

TEST(Backfill, UntouchedNodesSerializeIdentically) {
  for (const auto& name : corpus_files())
    for (auto op : kPairOperations)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto doc = parse(fixture(name));
        render(doc);
        EditPlan plan;
        try {
          plan = make_plan(doc, extract(doc), op, seed, service());
        } catch (const Error& e) {
          ASSERT_EQ(e.kind(), ErrorKind::planning);
          continue;
        }
        const auto out = backfill(doc, plan);
        const auto touched = plan.all_targets();
        const std::set<int> targets(touched.begin(), touched.end());
        doc.for_each([&](const Node& n) {
          if (targets.contains(n.id)) return;
          const Node* m = out.find(n.id);
          ASSERT_NE(m, nullptr) << name << " " << to_string(op) << " node " << n.id;
          EXPECT_EQ(serialize_shallow(n), serialize_shallow(*m)) << name << " " << to_string(op) << " seed " << seed;
        });
      }
}

TEST(MakePair, PixelDiffConfinedToEditedBoxes) {
  std::size_t pairs = 0;
  for (const auto& name : corpus_files())
    for (auto op : kPairOperations)
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        EditPair pair;
        try {
          pair = make_pair(fixture(name), op, seed, service());
        } catch (const Error& e) {
          ASSERT_EQ(e.kind(), ErrorKind::planning) << e.what();
          continue;
        }
        ++pairs;
        ASSERT_EQ(pair.source_image.width, pair.target_image.width);
        ASSERT_EQ(pair.source_image.height, pair.target_image.height);
        EXPECT_TRUE(confinement_violations(pair.source_image, pair.target_image, pair.boxes).empty());
        EXPECT_FALSE(pair.boxes.empty()) << name << " " << to_string(op);
      }
  EXPECT_GE(pairs, 200u);
}

TEST(MakePair, CombinedDiffInsideUnionOfPartBoxes) {
  const auto pair = make_pair(fixture("f1_coffee.html"), Operation::combined, 5, service());
  ASSERT_GE(pair.plan.parts.size(), 2u);
  std::set<int> seen;
  for (const auto& part : pair.plan.parts)
    for (int id : part.targets) EXPECT_TRUE(seen.insert(id).second) << "targets overlap at " << id;
  EXPECT_TRUE(confinement_violations(pair.source_image, pair.target_image, pair.boxes).empty());
}

TEST(MakePair, ConfinementCheckerFlagsOutsidePixels) {
  auto a = testsupport::solid_image(10, 10, 255, 255, 255);
  auto b = a;
  b.at(1, 1)[0] = 0;
  b.at(8, 8)[0] = 0;
  const auto bad = confinement_violations(a, b, {PixelBox{0, 0, 5, 5}});
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], std::make_pair(8, 8));
}

TEST(TranslateThenEdit, PivotEqualToSourceMatchesDirectPair) {
  const auto html = fixture("f1_coffee.html");
  for (auto op : {Operation::replace, Operation::change_style}) {
    const auto direct = make_pair(html, op, 11, service());
    const auto pivoted = translate_then_edit(html, "en", op, 11, service());
    EXPECT_EQ(serialize(pivoted.source), serialize(direct.source));
    EXPECT_EQ(serialize(pivoted.target), serialize(direct.target));
    EXPECT_EQ(pivoted.target_image.pixels, direct.target_image.pixels);
  }
}

TEST(TranslateThenEdit, GermanPivotShowsOnlyTranslatedStrings) {
  const auto html = fixture("f1_coffee.html");
  auto original = parse(html);
  render(original);
  std::vector<std::string> texts;
  for (const auto& t : extract(original).texts) texts.push_back(t.text);
  const auto expected = service().translate(texts, "en", "de");
  const auto pair = translate_then_edit(html, "de", Operation::replace, 2, service());
  EXPECT_EQ(pair.language, "de");
  std::vector<std::string> shown;
  for (const auto& t : extract(pair.source).texts) shown.push_back(t.text);
  EXPECT_EQ(shown, expected);
}

TEST(TranslateThenEdit, AllFifteenLanguages) {
  const auto html = fixture("f1_coffee.html");
  std::set<std::string> langs;
  for (auto lang : kLanguages) {
    const auto pair = translate_then_edit(html, std::string(lang), Operation::replace, 4, service());
    EXPECT_EQ(pair.language, lang);
    EXPECT_TRUE(confinement_violations(pair.source_image, pair.target_image, pair.boxes).empty());
    langs.insert(pair.language);
  }
  EXPECT_EQ(langs.size(), 15u);
  EXPECT_THROW(translate_then_edit(html, "xx", Operation::replace, 4, service()), Error);
}

TEST(Bundle, WritesAllFiles) {
  testsupport::TempDir tmp;
  const auto pair = make_pair(fixture("f2_three_paragraphs.html"), Operation::replace, 1, service());
  write_bundle(tmp / "b", pair);
  for (const char* f : {"src.html", "tgt.html", "src.png", "tgt.png", "plan.json", "boxes.json", "meta.json"})
    EXPECT_TRUE(std::filesystem::exists(tmp / "b" / f)) << f;
  const auto meta = nlohmann::json::parse(read_text(tmp / "b" / "meta.json"));
  EXPECT_EQ(meta["operation"], "replace");
  EXPECT_EQ(meta["seed"], 1);
  EXPECT_TRUE(meta["clipped"].is_boolean());
}
