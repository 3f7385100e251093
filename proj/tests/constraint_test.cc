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

#include "facetalk/constraint.h"

#include <gtest/gtest.h>

#include "facetalk/error.h"
#include "oracles.h"
#include "test_util.h"

namespace facetalk {
namespace {

using testing::Hotels;

Constraint C(std::string slot, Op op, Scalar v, std::optional<Scalar> upper = {}) {
  return Constraint{std::move(slot), op, std::move(v), std::move(upper)};
}

TEST(ParseConstraint, HotelForms) {
  const auto& kb = Hotels();
  EXPECT_EQ(ParseConstraint("pricerange ~ 70", kb), C("price", Op::kAround, 70.0));
  EXPECT_EQ(ParseConstraint("stars > 2", kb), C("stars", Op::kGt, 2.0));
  EXPECT_EQ(ParseConstraint("location != minami", kb), C("location", Op::kNeq, "minami"));
  EXPECT_EQ(ParseConstraint("price between 50 and 80", kb),
            C("price", Op::kBetween, 50.0, 80.0));
  EXPECT_EQ(ParseConstraint("price not between 50 and 80", kb),
            C("price", Op::kNotBetween, 50.0, 80.0));
  EXPECT_EQ(ParseConstraint("ratings >= \"very good\"", kb),
            C("ratings", Op::kGe, "very-good"));
  EXPECT_EQ(ParseConstraint("ratings >= very good", kb), C("ratings", Op::kGe, "very-good"));
}

TEST(ParseConstraint, Errors) {
  const auto& kb = Hotels();
  auto code = [&](const char* text) {
    try {
      ParseConstraint(text, kb);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;  // no error
  };
  EXPECT_EQ(code("stars >"), ErrorCode::kParse);
  EXPECT_EQ(code("stars ?? 3"), ErrorCode::kParse);
  EXPECT_EQ(code("colour = red"), ErrorCode::kNotFound);
  EXPECT_EQ(code("location = paris"), ErrorCode::kNotFound);
  EXPECT_EQ(code("amenities > gym"), ErrorCode::kInapplicable);
  EXPECT_EQ(code("price between 80 and 50"), ErrorCode::kInvalidArgument);
}

TEST(ParseConstraint, SyntaxErrorCarriesPosition) {
  try {
    ParseConstraint("stars > > 3", Hotels());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
}

TEST(ParseConstraintList, SplitsOnSemicolons) {
  auto cs = ParseConstraintList("type = hotel; ; stars > 2", Hotels());
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[1], C("stars", Op::kGt, 2.0));
}

TEST(Applicable, OperatorsBySlotKind) {
  const auto& kb = Hotels();
  EXPECT_FALSE(Applicable(Op::kGt, kb.slot("amenities")));
  for (const auto& s : kb.slots()) {
    EXPECT_TRUE(Applicable(Op::kEq, s));
    EXPECT_TRUE(Applicable(Op::kNeq, s));
  }
  EXPECT_TRUE(Applicable(Op::kBetween, kb.slot("price")));
  EXPECT_TRUE(Applicable(Op::kAround, kb.slot("ratings")));
  EXPECT_FALSE(Applicable(Op::kLt, kb.slot("location")));
}

TEST(EvalHard, Examples) {
  const auto& kb = Hotels();
  Item item;
  item.id = "x";
  item.slots["price"] = 59.0;
  item.slots["location"] = std::string("shimogyo");
  item.slots["amenities"] = std::vector<std::string>{"free-wifi"};
  EXPECT_TRUE(EvalHard(C("price", Op::kLt, 70.0), item, kb));
  EXPECT_TRUE(EvalHard(C("location", Op::kEq, "kyoto"), item, kb));
  EXPECT_FALSE(EvalHard(C("location", Op::kNeq, "kyoto"), item, kb));
  EXPECT_FALSE(EvalHard(C("amenities", Op::kEq, "non-smoking-rooms"), item, kb));
  EXPECT_TRUE(EvalHard(C("amenities", Op::kNeq, "non-smoking-rooms"), item, kb));
  // Missing slot never satisfies.
  EXPECT_FALSE(EvalHard(C("stars", Op::kGt, 0.0), item, kb));
  EXPECT_FALSE(EvalHard(C("stars", Op::kLe, 5.0), item, kb));
}

TEST(EvalHard, AroundUsesStdDev) {
  const auto& kb = Hotels();
  const double tol = kb.Tolerance("price");
  Item item;
  item.slots["price"] = 70.0 + tol;
  EXPECT_TRUE(EvalHard(C("price", Op::kAround, 70.0), item, kb));
  item.slots["price"] = 70.0 + tol + 0.01;
  EXPECT_FALSE(EvalHard(C("price", Op::kAround, 70.0), item, kb));
  EXPECT_TRUE(EvalHard(C("price", Op::kNotAround, 70.0), item, kb));
}

TEST(Filter, EmptyConstraintsReturnAll) {
  EXPECT_EQ(Filter(Hotels(), {}).ids.size(), 20u);
}

TEST(Filter, FirstHotelTurnMatchesScan) {
  const auto& kb = Hotels();
  auto cs = ParseConstraintList(
      "type = hotel; location = kyoto; location != minami; "
      "amenities = free-wifi; amenities = non-smoking-rooms",
      kb);
  auto rs = Filter(kb, cs);
  EXPECT_EQ(rs.ids, testing::OracleFilter(kb, cs));
  EXPECT_EQ(rs.ids.size(), 14u);
  EXPECT_EQ(Filter(kb, cs, Execution::kSerial).ids, rs.ids);
}

TEST(Filter, ContradictionIsEmpty) {
  auto rs = Filter(Hotels(), ParseConstraintList("stars > 4; stars < 3", Hotels()));
  EXPECT_TRUE(rs.ids.empty());
  EXPECT_TRUE(rs.facets.empty());
}

TEST(FacetCounts, CountsAndRollUp) {
  auto kb = testing::SmallLocations();
  std::vector<std::string> ids = {"a", "b", "c"};
  auto facets = testing::AsMap(ComputeFacetCounts(ids, kb));
  EXPECT_EQ(facets["location"],
            (std::map<std::string, int>{
                {"japan", 3}, {"kyoto", 3}, {"minami", 2}, {"nakagyo", 1}}));
  EXPECT_EQ(facets["stars"], (std::map<std::string, int>{{"1", 1}, {"2", 1}, {"3", 1}}));
  EXPECT_EQ(facets["amenities"],
            (std::map<std::string, int>{{"free-wifi", 1}, {"gym", 1}}));
  EXPECT_TRUE(ComputeFacetCounts({}, kb).empty());
}

TEST(RenderConstraint, Forms) {
  EXPECT_EQ(RenderConstraint(C("price", Op::kAround, 70.0)), "price ~ 70");
  EXPECT_EQ(RenderConstraint(C("price", Op::kBetween, 50.0, 80.5)),
            "price between 50 and 80.5");
  EXPECT_EQ(RenderConstraint(C("ratings", Op::kNotBetween, "good", "very-good")),
            "ratings not between good and very-good");
  EXPECT_EQ(RenderConstraint(C("x", Op::kEq, "two words")), "x = \"two words\"");
}

TEST(Negate, Pairs) {
  EXPECT_EQ(Negate(C("s", Op::kLt, 1.0)).op, Op::kGe);
  EXPECT_EQ(Negate(C("s", Op::kLe, 1.0)).op, Op::kGt);
  EXPECT_EQ(Negate(C("s", Op::kEq, 1.0)).op, Op::kNeq);
  EXPECT_EQ(Negate(C("s", Op::kAround, 1.0)).op, Op::kNotAround);
  EXPECT_EQ(Negate(C("s", Op::kBetween, 1.0, 2.0)).op, Op::kNotBetween);
  EXPECT_EQ(Negate(Negate(C("s", Op::kGt, 1.0))), C("s", Op::kGt, 1.0));
}

}  // namespace
}  // namespace facetalk
