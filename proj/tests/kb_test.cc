// Copyright 2026 The Facetalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "facetalk/kb.h"

#include <gtest/gtest.h>

#include "facetalk/error.h"
#include "generators.h"
#include "test_util.h"

namespace facetalk {
namespace {

using testing::Hotels;

std::string Doc(const std::string& slots, const std::string& items) {
  return R"({"id": "t", "slots": [)" + slots + R"(], "items": [)" + items + "]}";
}

const char* kStars = R"({"name": "stars", "kind": "numeric", "values": [1, 5]})";

TEST(LoadKnowledgeBase, BundledFixtureShape) {
  const auto& kb = Hotels();
  EXPECT_EQ(kb.id(), "hotels-sample");
  EXPECT_EQ(kb.items().size(), 20u);
  EXPECT_EQ(kb.slots().size(), 8u);
  EXPECT_TRUE(ValidateSchema(kb).ok());
}

TEST(LoadKnowledgeBase, ValueOutsideDomainNamesItemAndSlot) {
  try {
    LoadKnowledgeBase(Doc(kStars, R"({"id": "h1", "slots": {"stars": "five-stars"}})"));
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.findings().size(), 1u);
    EXPECT_NE(e.findings()[0].find("'h1'"), std::string::npos);
    EXPECT_NE(e.findings()[0].find("'stars'"), std::string::npos);
  }
}

TEST(LoadKnowledgeBase, EmptyItemsGiveZeroStats) {
  auto kb = LoadKnowledgeBase(Doc(kStars, ""));
  EXPECT_TRUE(kb.items().empty());
  for (const auto& [label, count] : kb.Stats("stars").counts) EXPECT_EQ(count, 0);
}

TEST(LoadKnowledgeBase, MalformedJsonReportsPosition) {
  try {
    LoadKnowledgeBase(R"({"id": "x", "slots": [)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.position(), 0u);
  }
}

TEST(LoadKnowledgeBase, RejectsUnknownKeys) {
  EXPECT_THROW(LoadKnowledgeBase(R"({"id": "x", "slots": [], "extra": 1})"), Error);
  EXPECT_THROW(
      LoadKnowledgeBase(Doc(R"({"name": "a", "kind": "categorical", "values": ["x"], "colour": 1})", "")),
      Error);
  EXPECT_THROW(LoadKnowledgeBase(Doc(kStars, R"({"id": "h", "size": 2})")), Error);
}

TEST(LoadKnowledgeBase, ListsEveryViolation) {
  try {
    LoadKnowledgeBase(Doc(
        std::string(kStars) +
            R"(, {"name": "tags", "kind": "multivalued", "ordinal": true, "values": ["a", "a"]})",
        R"({"id": "h", "slots": {"stars": 9, "ghost": "x"}})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_GE(e.findings().size(), 4u);
  }
}

TEST(LoadKnowledgeBase, DeterministicCanonicalForm) {
  auto text = ReadFile(testing::SourcePath("data/hotels-sample.json"));
  auto a = LoadKnowledgeBase(text).ToCanonicalJson().dump();
  auto b = LoadKnowledgeBase(text).ToCanonicalJson().dump();
  EXPECT_EQ(a, b);
  // Canonical output loads back to the same document.
  EXPECT_EQ(LoadKnowledgeBase(a).ToCanonicalJson().dump(), a);
}

TEST(ValidateSchema, TwoParentsIsNotATree) {
  std::vector<SlotSchema> slots(1);
  slots[0].name = "loc";
  slots[0].kind = SlotKind::kHierarchical;
  slots[0].root = "r";
  slots[0].children = {{"r", {"a", "b"}}, {"a", {"c"}}, {"b", {"c"}}};
  KnowledgeBase kb("t", slots, {});
  auto report = ValidateSchema(kb);
  ASSERT_FALSE(report.ok());
  bool found = false;
  for (const auto& f : report.findings) found |= f.find("not a tree") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(ValidateSchema, OrdinalMultivalued) {
  std::vector<SlotSchema> slots(1);
  slots[0].name = "tags";
  slots[0].kind = SlotKind::kMultivalued;
  slots[0].ordinal = true;
  slots[0].labels = {"a", "b"};
  auto report = ValidateSchema(KnowledgeBase("t", slots, {}));
  ASSERT_EQ(report.findings.size(), 1u);
  EXPECT_NE(report.findings[0].find("multivalued must be non-ordinal"), std::string::npos);
}

TEST(ValidateSchema, NeverMutates) {
  const auto& kb = Hotels();
  auto before = kb.ToCanonicalJson().dump();
  ValidateSchema(kb);
  EXPECT_EQ(kb.ToCanonicalJson().dump(), before);
}

TEST(Descendants, ExpandsSubtree) {
  auto kb = testing::SmallLocations();
  EXPECT_EQ(Descendants(kb, "location", "kyoto"),
            (std::vector<std::string>{"kyoto", "minami", "shimogyo", "nakagyo"}));
  EXPECT_EQ(Descendants(kb, "location", "osaka"), (std::vector<std::string>{"osaka"}));
  EXPECT_EQ(Descendants(kb, "location", "japan").size(), 6u);
}

TEST(Descendants, UnknownNodeIsNotFound) {
  auto kb = testing::SmallLocations();
  try {
    Descendants(kb, "location", "paris");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ValueStats, CountsAndRollUp) {
  auto kb = testing::SmallLocations();
  auto loc = ValueStats(kb, "location");
  EXPECT_EQ(loc.Count("kyoto"), 4);
  EXPECT_EQ(loc.Count("minami"), 2);
  EXPECT_EQ(loc.Count("shimogyo"), 1);
  EXPECT_EQ(loc.Count("japan"), 5);
  auto price = ValueStats(kb, "pricerange");
  EXPECT_EQ(price.Count("cheap"), 2);
  EXPECT_EQ(price.Count("expensive"), 1);
  EXPECT_THROW(ValueStats(kb, "ghost"), Error);
}

TEST(ValueStats, StarsOverThreeItems) {
  auto kb = LoadKnowledgeBase(Doc(kStars, R"({"id": "a", "slots": {"stars": 3}},
      {"id": "b", "slots": {"stars": 3}}, {"id": "c", "slots": {"stars": 4}})"));
  auto d = ValueStats(kb, "stars");
  EXPECT_EQ(d.Count("3"), 2);
  EXPECT_EQ(d.Count("4"), 1);
}

TEST(KnowledgeBase, ToleranceIsPopulationStdDev) {
  auto kb = LoadKnowledgeBase(Doc(kStars, R"({"id": "a", "slots": {"stars": 1}},
      {"id": "b", "slots": {"stars": 3}})"));
  EXPECT_DOUBLE_EQ(kb.Tolerance("stars"), 1.0);
}

TEST(KnowledgeBase, ToleranceOverride) {
  auto kb = LoadKnowledgeBase(Doc(
      R"({"name": "stars", "kind": "numeric", "values": [1, 5], "tolerance": 0.5})",
      R"({"id": "a", "slots": {"stars": 1}}, {"id": "b", "slots": {"stars": 3}})"));
  EXPECT_DOUBLE_EQ(kb.Tolerance("stars"), 0.5);
}

// Property: roll-up counts equal direct assignments plus the children's
// counts, and the root's subtree contains every node's subtree.
TEST(KbProperties, HierarchyRollUpAndContainment) {
  testing::Rng rng(7);
  for (int round = 0; round < 200; ++round) {
    auto kb = testing::RandomKb(rng);
    ASSERT_TRUE(ValidateSchema(kb).ok());
    for (const auto& slot : kb.slots()) {
      if (slot.kind != SlotKind::kHierarchical) continue;
      const auto& stats = kb.Stats(slot.name);
      const auto& all = kb.DescendantsOf(slot.name, slot.root);
      for (const auto& node : kb.Domain(slot.name)) {
        int direct = 0;
        for (const auto& item : kb.items()) {
          const Assignment* a = item.Find(slot.name);
          if (a && std::get<std::string>(*a) == node) ++direct;
        }
        int children = 0;
        for (const auto& [parent, kids] : slot.children) {
          if (parent != node) continue;
          for (const auto& k : kids) children += stats.Count(k);
        }
        EXPECT_EQ(stats.Count(node), direct + children) << node;
        for (const auto& d : kb.DescendantsOf(slot.name, node)) {
          EXPECT_NE(std::find(all.begin(), all.end(), d), all.end());
        }
      }
    }
  }
}

}  // namespace
}  // namespace facetalk
