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

#ifndef FACETALK_BELIEF_H_
#define FACETALK_BELIEF_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"

namespace facetalk {

// Belief over one slot. Single-valued slots hold a distribution over
// `values` followed by the `none` hypothesis; multivalued slots hold one
// independent marginal per value.
struct SlotBelief {
  bool multivalued = false;
  std::vector<std::string> values;
  std::vector<double> probs;
  int last_turn = -1;

  double none() const { return multivalued ? 0.0 : probs.back(); }
  double Prob(std::string_view label) const;
  bool operator==(const SlotBelief&) const = default;
};

struct BeliefState {
  std::map<std::string, SlotBelief> slots;

  const SlotBelief& at(std::string_view slot) const;
  bool operator==(const BeliefState&) const = default;
};

struct BeliefUpdate {
  BeliefState belief;
  // Some constraint matched no domain value; the belief was left untouched
  // for it.
  bool unsatisfiable = false;
};

BeliefState InitBelief(const KnowledgeBase& kb);

// Domain values of c's slot consistent with c (descendant-expanded for
// hierarchies). Never includes `none`.
std::vector<bool> ConsistencyMask(const Constraint& c, const KnowledgeBase& kb);

// b'(v) = (1 - conf) b(v) + conf [v in M] / |M|.
BeliefUpdate UpdateRegular(const BeliefState& b, const Constraint& c, double conf,
                           const KnowledgeBase& kb, int turn = -1);

// One traversal per constraint from the same prior, then the per-value mean.
BeliefUpdate UpdateHierarchical(const BeliefState& b,
                                std::span<const Constraint> cs, double conf,
                                const KnowledgeBase& kb, int turn = -1);

// Mentioned values: p' = 1 - (1 - p)(1 - conf / k); negated: p' = p (1 - conf).
BeliefState UpdateMultivalued(const BeliefState& b, std::string_view slot,
                              std::span<const std::string> mentioned,
                              std::span<const std::string> negated, double conf,
                              int turn = -1);

// Groups constraints by slot and dispatches on slot kind.
BeliefUpdate ApplyConstraints(const BeliefState& b, std::span<const Constraint> cs,
                              double conf, const KnowledgeBase& kb, int turn = -1);

// Applies each hypothesis in turn, weighted by its score.
BeliefUpdate ApplyNBest(
    const BeliefState& b,
    std::span<const std::pair<std::vector<Constraint>, double>> hypotheses,
    const KnowledgeBase& kb, int turn = -1);

// How strongly the belief supports c after observing it with `conf`.
double ConstraintSupport(const BeliefState& prior, const Constraint& c,
                         double conf, const KnowledgeBase& kb);

struct Hypothesis {
  enum class Kind { kUndecided, kValue, kSet } kind = Kind::kUndecided;
  std::string value;
  std::vector<std::string> set;
};

std::map<std::string, Hypothesis> TopHypothesis(const BeliefState& b,
                                                double threshold);

// Probabilities rounded to 9 decimals.
nlohmann::json BeliefJson(const BeliefState& b);

double RoundTo9(double p);

}  // namespace facetalk

#endif  // FACETALK_BELIEF_H_
