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

#ifndef FACETALK_DIALOGUE_H_
#define FACETALK_DIALOGUE_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "facetalk/acts.h"
#include "facetalk/belief.h"
#include "facetalk/constraint.h"
#include "facetalk/kb.h"
#include "facetalk/preference.h"

namespace facetalk {

struct PolicyConfig {
  int informable_threshold = 10;
  int compare_threshold = 3;
  double fill_threshold = 0.6;
  std::vector<std::string> mandatory_slots;
  // Slots whose requests expect a preference ("I'd like excellent ratings").
  std::vector<std::string> preference_slots;
  std::string system_name = "the search assistant";
  std::string item_noun = "item";
  std::string item_noun_plural = "items";
};

PolicyConfig PolicyConfigFromJson(const nlohmann::json& js);
nlohmann::json PolicyConfigToJson(const PolicyConfig& config);
PolicyConfig LoadPolicyConfig(const std::string& path);
// Throws ValidationError when thresholds are out of range or slots unknown.
void ValidatePolicyConfig(const PolicyConfig& config, const KnowledgeBase& kb);

struct StoredConstraint {
  Constraint constraint;
  int turn = 0;
  bool operator==(const StoredConstraint&) const = default;
};

struct DialogueState {
  BeliefState belief;
  std::vector<StoredConstraint> constraints;
  std::vector<PreferenceAction> preferences;
  // Constraints whose support fell below the fill threshold, awaiting confirm.
  std::vector<StoredConstraint> pending;
  ResultSet result;
  BucketOrder buckets;
  int turn = 0;
  std::optional<SystemAct> last_system_act;
  bool bye = false;
  bool unsatisfiable = false;
  std::string relax_hint;
};

struct StateDelta {
  std::vector<Constraint> added_constraints;
  std::vector<Constraint> removed_constraints;
  std::vector<Constraint> pending_constraints;
  std::vector<PreferenceAction> added_preferences;
  std::vector<PreferenceAction> rejected_preferences;
  bool unsatisfiable = false;
};

nlohmann::json StateDeltaJson(const StateDelta& delta,
                              const DialogueState& state);

DialogueState InitialState(const KnowledgeBase& kb);

// Tracks one user turn: belief updates, constraint-store admission and
// preference bookkeeping, then recomputes results.
StateDelta ApplyUserActs(DialogueState& state, std::span<const DialogueAct> acts,
                         const KnowledgeBase& kb, const PolicyConfig& config);

void RefreshResults(DialogueState& state, const KnowledgeBase& kb,
                    Execution mode = Execution::kParallel);

// Stored preferences plus value orders derived from range constraints on
// slots promoted by slot-level preferences that carry no value-level one.
std::vector<PreferenceAction> EffectivePreferences(const DialogueState& state,
                                                   const KnowledgeBase& kb);

struct SlotFeatures {
  std::string slot;
  double belief_entropy = 0;
  double value_entropy = 0;
  // 1 - modal count / |result|: share of results dropped by fixing the slot
  // to its most common value.
  double reduction = 0;
  bool filled = false;
};

std::vector<SlotFeatures> PolicyFeatures(const DialogueState& state,
                                         const KnowledgeBase& kb,
                                         const PolicyConfig& config);

SystemAct SelectAction(const DialogueState& state, const KnowledgeBase& kb,
                       const PolicyConfig& config);

// Slots named by the store, falling back to the three highest value-entropy
// slots when fewer than two are named.
std::vector<std::string> CompareAspects(const DialogueState& state,
                                        const KnowledgeBase& kb,
                                        const PolicyConfig& config);

enum class Marker { kNone, kMin, kMax, kMid, kEqual };
const char* MarkerName(Marker m);

struct AspectValue {
  std::string slot;
  std::string value;
  Marker marker = Marker::kNone;
};

struct ItemSummary {
  std::string id;
  std::string name;
  std::string group;
  std::vector<AspectValue> aspects;
};

struct CompareSummary {
  int count = 0;
  // First hierarchical aspect, used for "two are located in ..." grouping.
  std::string group_slot;
  std::vector<std::pair<std::string, int>> groups;
  std::vector<ItemSummary> items;
};

CompareSummary SummarizeCompare(std::span<const std::string> ids,
                                std::span<const std::string> aspects,
                                const KnowledgeBase& kb);

class TemplateSet {
 public:
  // One `key: template` per line; blank lines and '#' comments skipped.
  static TemplateSet Parse(std::string_view text);
  static TemplateSet Load(const std::string& path);

  const std::string* Find(std::string_view key) const;
  // Throws Error(kGeneration) when missing.
  const std::string& Get(std::string_view key) const;
  size_t size() const { return templates_.size(); }
  // The inverse of Parse: one `key: template` line per entry, sorted by key.
  std::string ToText() const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
};

// Substitutes {name} placeholders; an unknown one throws Error(kGeneration).
std::string FillTemplate(std::string_view key, const std::string& text,
                         const std::map<std::string, std::string>& values);

struct GenerationContext {
  const KnowledgeBase& kb;
  const PolicyConfig& config;
  const TemplateSet& templates;
};

std::string GenerateText(const SystemAct& act, const GenerationContext& ctx);

}  // namespace facetalk

#endif  // FACETALK_DIALOGUE_H_
