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

#ifndef FACETALK_PREFERENCE_H_
#define FACETALK_PREFERENCE_H_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"
#include "facetalk/kernels.h"

namespace facetalk {

enum class PrefKind {
  // Value level.
  kBest,
  kWorst,
  kRelative,
  kAround,
  kNotAround,
  kBetween,
  kNotBetween,
  // Slot level.
  kPreferOver,
  kPreferSet,
};

const char* PrefKindName(PrefKind kind);

// Stands for "every other slot" as the last entry of a prefer_over chain.
inline constexpr std::string_view kAllSlots = "all";

// A soft constraint. Value-level actions target `slot` with `operands`
// (relative: preferred, dispreferred; between: low, high). Slot-level actions
// carry `slots`: prefer_over is a chain s0 > s1 > ... (last may be "all"),
// prefer_set is a group preferred over the rest.
struct PreferenceAction {
  PrefKind kind = PrefKind::kBest;
  std::string slot;
  std::vector<Scalar> operands;
  std::vector<std::string> slots;
  // Turn the action was stated in; later turns win scope ties.
  int turn = 0;

  bool slot_level() const {
    return kind == PrefKind::kPreferOver || kind == PrefKind::kPreferSet;
  }
  bool operator==(const PreferenceAction&) const = default;
};

void CheckPreference(const PreferenceAction& p, const KnowledgeBase& kb);

PreferenceAction ParsePreference(std::string_view text, const KnowledgeBase& kb);
std::vector<PreferenceAction> ParsePreferenceList(std::string_view text,
                                                  const KnowledgeBase& kb);
std::string RenderPreference(const PreferenceAction& p);

// Tier per domain value of one slot; tier 0 is most preferred.
struct RankMap {
  std::string slot;
  std::vector<std::string> values;
  std::vector<int> tiers;

  int Tier(std::string_view label) const;
  int WorstTier() const;
  // Tier an item gets on this slot: the best tier over a multivalued set,
  // WorstTier() + 1 when the slot is missing.
  int ItemTier(const Item& item, const KnowledgeBase& kb) const;
};

// Throws Error(kCycle) when relative preferences form a cycle.
RankMap ValueRank(const KnowledgeBase& kb, std::string_view slot,
                  std::span<const PreferenceAction> actions);

struct Dimension {
  std::string slot;
  RankMap ranks;
};

enum class CompositionPolicy { kPareto, kPriority };

enum class Dominance { kFirst, kSecond, kTie, kIncomparable };

Dominance Dominates(const Item& a, const Item& b, std::span<const Dimension> dims,
                    CompositionPolicy policy, const KnowledgeBase& kb);

// Dimensions and their priority grouping derived from a preference list.
struct RankingPlan {
  std::vector<Dimension> dims;
  kernels::Composition composition;
};

RankingPlan PlanRanking(std::span<const PreferenceAction> prefs,
                        const KnowledgeBase& kb);

struct PreferenceMetrics {
  std::map<std::string, double> score;
  std::map<std::string, int> wins;
};

struct BucketOrder {
  std::vector<std::vector<std::string>> buckets;
  // Input ids and the dominance relation over them ([a * n + b]: a beats b).
  std::vector<std::string> ids;
  kernels::DominanceMatrix relation;
  PreferenceMetrics metrics;

  size_t size() const { return ids.size(); }
  int BucketOf(std::string_view id) const;
};

BucketOrder ComputeBucketOrder(const ResultSet& rs,
                               std::span<const PreferenceAction> prefs,
                               const KnowledgeBase& kb,
                               Execution mode = Execution::kParallel);

PreferenceMetrics ComputePreferenceMetrics(const BucketOrder& bo);

// Slots without an active preference that still split bucket 0, by
// descending entropy over bucket 0 (ties in schema order).
std::vector<std::string> DiscriminatingSlots(
    const BucketOrder& bo, const KnowledgeBase& kb,
    std::span<const PreferenceAction> active);

// Entropy in bits of a count vector.
double Entropy(std::span<const int> counts);

}  // namespace facetalk

#endif  // FACETALK_PREFERENCE_H_
