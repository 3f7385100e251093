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

#ifndef FACETALK_CONSTRAINT_H_
#define FACETALK_CONSTRAINT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facetalk/kb.h"

namespace facetalk {

enum class Op {
  kLt,
  kLe,
  kGt,
  kGe,
  kEq,
  kNeq,
  kAround,
  kNotAround,
  kBetween,
  kNotBetween,
};

inline constexpr Op kAllOps[] = {Op::kLt,     Op::kLe,        Op::kGt,
                                 Op::kGe,     Op::kEq,        Op::kNeq,
                                 Op::kAround, Op::kNotAround, Op::kBetween,
                                 Op::kNotBetween};

// "lt", "around", ...
const char* OpName(Op op);
// "<", "~", "between", ...
const char* OpSymbol(Op op);
bool IsRangeOp(Op op);

// A hard constraint `slot op value` or `slot [not] between value and upper`.
struct Constraint {
  std::string slot;
  Op op = Op::kEq;
  Scalar value;
  std::optional<Scalar> upper;

  bool operator==(const Constraint&) const = default;
};

// eq/neq apply to every slot; order-based operators need an ordinal slot.
bool Applicable(Op op, const SlotSchema& slot);

// Throws on undeclared slot/value, inapplicable operator or an inverted
// between range.
void CheckConstraint(const Constraint& c, const KnowledgeBase& kb);

Constraint ParseConstraint(std::string_view text, const KnowledgeBase& kb);
// Semicolon-separated list; blank entries are skipped.
std::vector<Constraint> ParseConstraintList(std::string_view text,
                                            const KnowledgeBase& kb);
std::string RenderConstraint(const Constraint& c);

// The complementary constraint (eq/neq, lt/ge, le/gt, around/not_around,
// between/not_between).
Constraint Negate(const Constraint& c);

// Whether a single domain label of the slot satisfies c. Used for belief
// masks; numeric labels are parsed back to numbers.
bool LabelSatisfies(const Constraint& c, const KnowledgeBase& kb,
                    std::string_view label);

// Items that lack the slot never satisfy a constraint.
bool EvalHard(const Constraint& c, const Item& item, const KnowledgeBase& kb);

// slot -> (value, count) in domain order, zero counts omitted, slots with no
// non-zero value omitted.
using FacetCounts =
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, int>>>>;

struct ResultSet {
  std::vector<std::string> ids;  // ascending
  FacetCounts facets;
};

enum class Execution { kSerial, kParallel };

ResultSet Filter(const KnowledgeBase& kb, std::span<const Constraint> cs,
                 Execution mode = Execution::kParallel);

FacetCounts ComputeFacetCounts(std::span<const std::string> ids,
                               const KnowledgeBase& kb);

nlohmann::json FacetCountsJson(const FacetCounts& facets);

}  // namespace facetalk

#endif  // FACETALK_CONSTRAINT_H_
