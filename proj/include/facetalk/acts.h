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

#ifndef FACETALK_ACTS_H_
#define FACETALK_ACTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"
#include "facetalk/preference.h"

namespace facetalk {

enum class UserActType {
  kHello,
  kInformConstraints,
  kInformPreferences,
  kAnswerImportance,
  kAffirm,
  kNegate,
  kBye,
  kNull,
};

const char* UserActTypeName(UserActType type);
std::optional<UserActType> ParseUserActType(std::string_view name);

struct DialogueAct {
  UserActType type = UserActType::kNull;
  std::vector<Constraint> constraints;
  std::vector<PreferenceAction> preferences;
  double confidence = 1.0;

  bool operator==(const DialogueAct&) const = default;
};

enum class SystemActType {
  kGreet,
  kRequest,
  kAskImportance,
  kInformCompare,
  kInformCount,
  kConfirm,
  kGoodbye,
};

const char* SystemActTypeName(SystemActType type);
std::optional<SystemActType> ParseSystemActType(std::string_view name);

struct SystemAct {
  SystemActType type = SystemActType::kGreet;
  // request
  std::string slot;
  bool soft = false;
  // ask_importance
  std::vector<std::string> slots;
  // inform_compare
  std::vector<std::string> items;
  std::vector<std::string> aspects;
  // inform_count
  int count = 0;
  std::string hint;
  // confirm
  std::optional<Constraint> constraint;

  bool operator==(const SystemAct&) const = default;
};

// Constraints and preferences are stored in their rendered grammar form.
nlohmann::json ActToJson(const DialogueAct& act);
DialogueAct ActFromJson(const nlohmann::json& js, const KnowledgeBase& kb);
nlohmann::json ActsToJson(const std::vector<DialogueAct>& acts);
std::vector<DialogueAct> ActsFromJson(const nlohmann::json& js,
                                      const KnowledgeBase& kb);

nlohmann::json SystemActToJson(const SystemAct& act);
SystemAct SystemActFromJson(const nlohmann::json& js, const KnowledgeBase& kb);

}  // namespace facetalk

#endif  // FACETALK_ACTS_H_
