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

#include "facetalk/belief.h"

#include <gtest/gtest.h>

#include <numeric>

#include "facetalk/error.h"
#include "generators.h"
#include "test_util.h"

namespace facetalk {
namespace {

using testing::SmallLocations;

Constraint C(const KnowledgeBase& kb, const std::string& text) {
  return ParseConstraint(text, kb);
}

double Sum(const SlotBelief& sb) {
  return std::accumulate(sb.probs.begin(), sb.probs.end(), 0.0);
}

TEST(InitBelief, UniformAndZero) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = InitBelief(kb);
  const SlotBelief& price = b.at("pricerange");
  ASSERT_EQ(price.probs.size(), 4u);
  for (double p : price.probs) EXPECT_DOUBLE_EQ(p, 0.25);
  const SlotBelief& amenities = b.at("amenities");
  EXPECT_TRUE(amenities.multivalued);
  for (double p : amenities.probs) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(price.last_turn, -1);
}

TEST(UpdateRegular, BlendExample) {
  KnowledgeBase kb = SmallLocations();
  auto u = UpdateRegular(InitBelief(kb), C(kb, "pricerange = cheap"), 0.9, kb, 2);
  const SlotBelief& sb = u.belief.at("pricerange");
  EXPECT_NEAR(sb.Prob("cheap"), 0.925, 1e-12);
  EXPECT_NEAR(sb.Prob("moderate"), 0.025, 1e-12);
  EXPECT_NEAR(sb.Prob("expensive"), 0.025, 1e-12);
  EXPECT_NEAR(sb.none(), 0.025, 1e-12);
  EXPECT_EQ(sb.last_turn, 2);
  EXPECT_FALSE(u.unsatisfiable);
}

TEST(UpdateRegular, FullConfidenceIsUniformOverMask) {
  KnowledgeBase kb = SmallLocations();
  auto u = UpdateRegular(InitBelief(kb), C(kb, "stars > 2"), 1.0, kb);
  const SlotBelief& sb = u.belief.at("stars");
  for (const char* v : {"3", "4", "5"}) EXPECT_EQ(sb.Prob(v), 1.0 / 3.0) << v;
  for (const char* v : {"1", "2"}) EXPECT_EQ(sb.Prob(v), 0.0) << v;
  EXPECT_EQ(sb.none(), 0.0);
}

TEST(UpdateRegular, ZeroConfidenceIsIdentity) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = UpdateRegular(InitBelief(kb), C(kb, "stars <= 2"), 0.37, kb).belief;
  auto u = UpdateRegular(b, C(kb, "stars > 2"), 0.0, kb);
  EXPECT_EQ(u.belief.at("stars").probs, b.at("stars").probs);
}

TEST(UpdateRegular, EmptyMaskFlagsAndLeavesBelief) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = InitBelief(kb);
  auto u = UpdateRegular(b, C(kb, "stars > 5"), 0.8, kb);
  EXPECT_TRUE(u.unsatisfiable);
  EXPECT_EQ(u.belief.at("stars").probs, b.at("stars").probs);
}

TEST(UpdateRegular, RejectsBadConfidence) {
  KnowledgeBase kb = SmallLocations();
  try {
    UpdateRegular(InitBelief(kb), C(kb, "stars > 2"), 1.5, kb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(ConsistencyMask, DescendantExpansion) {
  KnowledgeBase kb = SmallLocations();
  const auto& domain = kb.Domain("location");
  auto mask = ConsistencyMask(C(kb, "location = kyoto"), kb);
  auto neq = ConsistencyMask(C(kb, "location != minami"), kb);
  for (size_t i = 0; i < domain.size(); ++i) {
    bool under_kyoto = domain[i] == "kyoto" || domain[i] == "minami" ||
                       domain[i] == "shimogyo" || domain[i] == "nakagyo";
    EXPECT_EQ(mask[i], under_kyoto) << domain[i];
    EXPECT_EQ(neq[i], domain[i] != "minami") << domain[i];
  }
}

// With the japan root among the nodes the eq mask has 4 entries and the
// neq mask 5, so conf 1 gives (1/4 + 1/5) / 2 on the overlap.
TEST(UpdateHierarchical, AverageOfTraversals) {
  KnowledgeBase kb = SmallLocations();
  std::vector<Constraint> cs{C(kb, "location = kyoto"), C(kb, "location != minami")};
  auto u = UpdateHierarchical(InitBelief(kb), cs, 1.0, kb, 1);
  const SlotBelief& sb = u.belief.at("location");
  EXPECT_NEAR(sb.Prob("kyoto"), 0.225, 1e-12);
  EXPECT_NEAR(sb.Prob("shimogyo"), 0.225, 1e-12);
  EXPECT_NEAR(sb.Prob("nakagyo"), 0.225, 1e-12);
  EXPECT_NEAR(sb.Prob("minami"), 0.125, 1e-12);
  EXPECT_NEAR(sb.Prob("osaka"), 0.1, 1e-12);
  EXPECT_NEAR(sb.Prob("japan"), 0.1, 1e-12);
  EXPECT_EQ(sb.none(), 0.0);
  EXPECT_NEAR(Sum(sb), 1.0, 1e-12);
}

// Without a separate root node: kyoto is the root of a five-node tree and
// osaka hangs beside the wards, matching the node list of the example.
TEST(UpdateHierarchical, FiveNodeExample) {
  KnowledgeBase kb = LoadKnowledgeBase(R"({
    "id": "five",
    "slots": [{"name": "location", "kind": "hierarchical",
               "values": {"root": "kyoto",
                          "children": {"kyoto": ["minami", "shimogyo", "nakagyo", "osaka"]}}}],
    "items": [{"id": "x", "slots": {"location": "minami"}}]})");
  // eq kyoto would cover all five nodes, so the first mask is stated as neq osaka.
  std::vector<Constraint> cs{C(kb, "location != osaka"), C(kb, "location != minami")};
  auto u = UpdateHierarchical(InitBelief(kb), cs, 1.0, kb);
  const SlotBelief& sb = u.belief.at("location");
  EXPECT_NEAR(sb.Prob("kyoto"), 0.25, 1e-12);
  EXPECT_NEAR(sb.Prob("shimogyo"), 0.25, 1e-12);
  EXPECT_NEAR(sb.Prob("nakagyo"), 0.25, 1e-12);
  EXPECT_NEAR(sb.Prob("minami"), 0.125, 1e-12);
  EXPECT_NEAR(sb.Prob("osaka"), 0.125, 1e-12);
}

TEST(UpdateHierarchical, SingleConstraintMatchesRegular) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = InitBelief(kb);
  Constraint c = C(kb, "location = kyoto");
  auto h = UpdateHierarchical(b, std::vector<Constraint>{c}, 0.7, kb);
  auto r = UpdateRegular(b, c, 0.7, kb);
  EXPECT_EQ(h.belief.at("location").probs, r.belief.at("location").probs);
}

TEST(UpdateHierarchical, ComplementaryPair) {
  KnowledgeBase kb = SmallLocations();
  std::vector<Constraint> cs{C(kb, "location = osaka"), C(kb, "location != osaka")};
  auto u = UpdateHierarchical(InitBelief(kb), cs, 1.0, kb);
  const SlotBelief& sb = u.belief.at("location");
  EXPECT_NEAR(sb.Prob("osaka"), 0.5, 1e-12);
  EXPECT_NEAR(sb.Prob("kyoto"), 0.1, 1e-12);
}

TEST(UpdateMultivalued, DividedMass) {
  KnowledgeBase kb = SmallLocations();
  std::vector<std::string> both{"free-wifi", "non-smoking-rooms"};
  BeliefState b = UpdateMultivalued(InitBelief(kb), "amenities", both, {}, 0.8, 3);
  EXPECT_NEAR(b.at("amenities").Prob("free-wifi"), 0.4, 1e-12);
  EXPECT_NEAR(b.at("amenities").Prob("non-smoking-rooms"), 0.4, 1e-12);
  EXPECT_EQ(b.at("amenities").Prob("gym"), 0.0);
  EXPECT_EQ(b.at("amenities").last_turn, 3);
  std::vector<std::string> wifi{"free-wifi"};
  BeliefState n = UpdateMultivalued(b, "amenities", {}, wifi, 0.5);
  EXPECT_NEAR(n.at("amenities").Prob("free-wifi"), 0.2, 1e-12);
  EXPECT_NEAR(n.at("amenities").Prob("non-smoking-rooms"), 0.4, 1e-12);
  BeliefState same = UpdateMultivalued(b, "amenities", both, wifi, 0.0);
  EXPECT_EQ(same.at("amenities").probs, b.at("amenities").probs);
}

TEST(ApplyConstraints, DispatchesBySlotKind) {
  KnowledgeBase kb = SmallLocations();
  auto cs = ParseConstraintList(
      "pricerange = cheap; location = kyoto; amenities = gym; amenities != free-wifi", kb);
  auto u = ApplyConstraints(InitBelief(kb), cs, 1.0, kb, 4);
  EXPECT_EQ(u.belief.at("pricerange").Prob("cheap"), 1.0);
  EXPECT_NEAR(u.belief.at("location").Prob("kyoto"), 0.25, 1e-12);
  EXPECT_EQ(u.belief.at("amenities").Prob("gym"), 1.0);
  EXPECT_EQ(u.belief.at("amenities").Prob("free-wifi"), 0.0);
  EXPECT_EQ(u.belief.at("stars").last_turn, -1);
}

TEST(ApplyNBest, SingleHypothesisMatchesDirectUpdate) {
  KnowledgeBase kb = SmallLocations();
  std::vector<Constraint> cs{C(kb, "pricerange = cheap")};
  std::vector<std::pair<std::vector<Constraint>, double>> nbest{{cs, 0.9}};
  auto a = ApplyNBest(InitBelief(kb), nbest, kb);
  auto b = ApplyConstraints(InitBelief(kb), cs, 0.9, kb);
  EXPECT_EQ(a.belief, b.belief);
}

TEST(ConstraintSupport, Forms) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = InitBelief(kb);
  EXPECT_NEAR(ConstraintSupport(b, C(kb, "pricerange = cheap"), 0.9, kb), 0.925, 1e-12);
  EXPECT_NEAR(ConstraintSupport(b, C(kb, "amenities = gym"), 0.75, kb), 0.75, 1e-12);
  EXPECT_NEAR(ConstraintSupport(b, C(kb, "amenities != gym"), 0.75, kb), 1.0, 1e-12);
}

TEST(TopHypothesis, Cases) {
  KnowledgeBase kb = SmallLocations();
  BeliefState b = UpdateRegular(InitBelief(kb), C(kb, "pricerange = cheap"), 0.9, kb).belief;
  std::vector<std::string> both{"free-wifi", "gym"};
  b = UpdateMultivalued(b, "amenities", both, {}, 0.8);
  auto top = TopHypothesis(b, 0.6);
  EXPECT_EQ(top.at("pricerange").kind, Hypothesis::Kind::kValue);
  EXPECT_EQ(top.at("pricerange").value, "cheap");
  EXPECT_EQ(top.at("stars").kind, Hypothesis::Kind::kUndecided);
  EXPECT_EQ(top.at("amenities").kind, Hypothesis::Kind::kUndecided);
  auto low = TopHypothesis(b, 0.3);
  EXPECT_EQ(low.at("amenities").set, both);
  EXPECT_THROW(TopHypothesis(b, 0.0), Error);
  EXPECT_THROW(TopHypothesis(b, 1.5), Error);
}

TEST(BeliefJson, RoundsToNineDecimals) {
  KnowledgeBase kb = SmallLocations();
  auto js = BeliefJson(InitBelief(kb));
  EXPECT_EQ(js["pricerange"]["kind"], "distribution");
  EXPECT_EQ(js["amenities"]["kind"], "marginals");
  EXPECT_DOUBLE_EQ(js["location"]["values"]["kyoto"].get<double>(), 0.142857143);
  EXPECT_DOUBLE_EQ(RoundTo9(1.0 / 3.0), 0.333333333);
}

// Property suite over random KBs and random update sequences.
class BeliefProperty : public ::testing::Test {
 protected:
  static std::vector<std::string> SlotsOf(const KnowledgeBase& kb, SlotKind kind) {
    std::vector<std::string> out;
    for (const auto& s : kb.slots()) {
      if (s.kind == kind) out.push_back(s.name);
    }
    return out;
  }
};

void CheckNormalized(const BeliefState& b) {
  for (const auto& [name, sb] : b.slots) {
    for (double p : sb.probs) {
      ASSERT_GE(p, 0.0) << name;
      ASSERT_LE(p, 1.0) << name;
    }
    if (!sb.multivalued) ASSERT_NEAR(Sum(sb), 1.0, 1e-9) << name;
  }
}

TEST_F(BeliefProperty, RandomSequences) {
  testing::Rng rng(31);
  for (int round = 0; round < 1000; ++round) {
    KnowledgeBase kb = testing::RandomKb(rng);
    BeliefState b = InitBelief(kb);
    const int steps = testing::Uniform(rng, 1, 8);
    for (int step = 0; step < steps; ++step) {
      Constraint c = testing::RandomConstraint(rng, kb);
      const SlotSchema& slot = kb.slot(c.slot);
      const double conf = testing::Uniform(rng, 0, 100) / 100.0;
      BeliefState next;
      if (slot.kind == SlotKind::kMultivalued) {
        std::vector<std::string> m{ScalarLabel(c.value)};
        bool neg = c.op == Op::kNeq;
        next = UpdateMultivalued(b, c.slot, neg ? std::vector<std::string>{} : m,
                                 neg ? m : std::vector<std::string>{}, conf, step);
        BeliefState id = UpdateMultivalued(b, c.slot, m, {}, 0.0, step);
        ASSERT_EQ(id.at(c.slot).probs, b.at(c.slot).probs);
      } else if (slot.kind == SlotKind::kHierarchical) {
        Constraint d = testing::RandomConstraint(rng, kb);
        if (d.slot != c.slot) d = c;
        std::vector<Constraint> ab{c, d};
        std::vector<Constraint> ba{d, c};
        auto u1 = UpdateHierarchical(b, ab, conf, kb, step);
        auto u2 = UpdateHierarchical(b, ba, conf, kb, step);
        ASSERT_EQ(u1.belief, u2.belief) << round;
        auto id = UpdateHierarchical(b, ab, 0.0, kb, step);
        ASSERT_EQ(id.belief.at(c.slot).probs, b.at(c.slot).probs);
        next = u1.belief;
      } else {
        auto u = UpdateRegular(b, c, conf, kb, step);
        auto mask = ConsistencyMask(c, kb);
        const SlotBelief& before = b.at(c.slot);
        const SlotBelief& after = u.belief.at(c.slot);
        size_t k = std::count(mask.begin(), mask.end(), true);
        if (k == 0) {
          ASSERT_TRUE(u.unsatisfiable);
          ASSERT_EQ(after.probs, before.probs);
        } else {
          double m0 = 0, m1 = 0;
          for (size_t i = 0; i < mask.size(); ++i) {
            if (mask[i]) {
              m0 += before.probs[i];
              m1 += after.probs[i];
            }
          }
          ASSERT_GE(m1, m0 - 1e-12) << round;
          auto full = UpdateRegular(b, c, 1.0, kb, step).belief.at(c.slot);
          for (size_t i = 0; i < full.probs.size(); ++i) {
            double expected = i < mask.size() && mask[i] ? 1.0 / k : 0.0;
            ASSERT_EQ(full.probs[i], expected) << round;
          }
        }
        auto id = UpdateRegular(b, c, 0.0, kb, step);
        ASSERT_EQ(id.belief.at(c.slot).probs, before.probs);
        next = u.belief;
      }
      CheckNormalized(next);
      b = std::move(next);
    }
  }
}

TEST_F(BeliefProperty, HierarchicalMaskContainment) {
  testing::Rng rng(32);
  for (int round = 0; round < 300; ++round) {
    KnowledgeBase kb = testing::RandomKb(rng);
    for (const auto& name : SlotsOf(kb, SlotKind::kHierarchical)) {
      const auto& slot = kb.slot(name);
      for (const auto& [parent, children] : slot.children) {
        Constraint pc{name, Op::kEq, parent, std::nullopt};
        auto pm = ConsistencyMask(pc, kb);
        for (const auto& child : children) {
          Constraint cc{name, Op::kEq, child, std::nullopt};
          auto cm = ConsistencyMask(cc, kb);
          for (size_t i = 0; i < cm.size(); ++i) {
            if (cm[i]) ASSERT_TRUE(pm[i]) << parent << " " << child;
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace facetalk
