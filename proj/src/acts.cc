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

#include "facetalk/acts.h"

#include <array>
#include <utility>

#include "facetalk/error.h"

namespace facetalk {
namespace {

constexpr std::array<std::pair<UserActType, const char*>, 8> kUserNames{{
    {UserActType::kHello, "hello"},
    {UserActType::kInformConstraints, "inform_constraints"},
    {UserActType::kInformPreferences, "inform_preferences"},
    {UserActType::kAnswerImportance, "answer_importance"},
    {UserActType::kAffirm, "affirm"},
    {UserActType::kNegate, "negate"},
    {UserActType::kBye, "bye"},
    {UserActType::kNull, "null"},
}};

constexpr std::array<std::pair<SystemActType, const char*>, 7> kSystemNames{{
    {SystemActType::kGreet, "greet"},
    {SystemActType::kRequest, "request"},
    {SystemActType::kAskImportance, "ask_importance"},
    {SystemActType::kInformCompare, "inform_compare"},
    {SystemActType::kInformCount, "inform_count"},
    {SystemActType::kConfirm, "confirm"},
    {SystemActType::kGoodbye, "goodbye"},
}};

template <typename T>
std::vector<T> ArrayOf(const nlohmann::json& js, const char* key) {
  std::vector<T> out;
  if (auto it = js.find(key); it != js.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::kParse, std::string("'") + key + "' must be an array");
    }
    for (const auto& x : *it) out.push_back(x.get<T>());
  }
  return out;
}

}  // namespace

const char* UserActTypeName(UserActType type) {
  for (const auto& [t, name] : kUserNames) {
    if (t == type) return name;
  }
  return "null";
}

std::optional<UserActType> ParseUserActType(std::string_view name) {
  for (const auto& [t, n] : kUserNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

const char* SystemActTypeName(SystemActType type) {
  for (const auto& [t, name] : kSystemNames) {
    if (t == type) return name;
  }
  return "greet";
}

std::optional<SystemActType> ParseSystemActType(std::string_view name) {
  for (const auto& [t, n] : kSystemNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

nlohmann::json ActToJson(const DialogueAct& act) {
  nlohmann::json js;
  js["type"] = UserActTypeName(act.type);
  js["constraints"] = nlohmann::json::array();
  for (const auto& c : act.constraints) js["constraints"].push_back(RenderConstraint(c));
  js["preferences"] = nlohmann::json::array();
  for (const auto& p : act.preferences) js["preferences"].push_back(RenderPreference(p));
  js["confidence"] = act.confidence;
  return js;
}

DialogueAct ActFromJson(const nlohmann::json& js, const KnowledgeBase& kb) {
  if (!js.is_object() || !js.contains("type") || !js["type"].is_string()) {
    throw Error(ErrorCode::kParse, "dialogue act needs a string 'type'");
  }
  DialogueAct act;
  auto type = ParseUserActType(js["type"].get<std::string>());
  if (!type) {
    throw Error(ErrorCode::kParse,
                "unknown dialogue act type '" + js["type"].get<std::string>() + "'");
  }
  act.type = *type;
  for (const auto& text : ArrayOf<std::string>(js, "constraints")) {
    act.constraints.push_back(ParseConstraint(text, kb));
  }
  for (const auto& text : ArrayOf<std::string>(js, "preferences")) {
    act.preferences.push_back(ParsePreference(text, kb));
  }
  act.confidence = js.value("confidence", 1.0);
  return act;
}

nlohmann::json ActsToJson(const std::vector<DialogueAct>& acts) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& a : acts) out.push_back(ActToJson(a));
  return out;
}

std::vector<DialogueAct> ActsFromJson(const nlohmann::json& js,
                                      const KnowledgeBase& kb) {
  if (!js.is_array()) throw Error(ErrorCode::kParse, "expected an array of acts");
  std::vector<DialogueAct> out;
  for (const auto& a : js) out.push_back(ActFromJson(a, kb));
  return out;
}

nlohmann::json SystemActToJson(const SystemAct& act) {
  nlohmann::json js;
  js["type"] = SystemActTypeName(act.type);
  switch (act.type) {
    case SystemActType::kRequest:
      js["slot"] = act.slot;
      js["soft"] = act.soft;
      break;
    case SystemActType::kAskImportance:
      js["slots"] = act.slots;
      break;
    case SystemActType::kInformCompare:
      js["items"] = act.items;
      js["aspects"] = act.aspects;
      break;
    case SystemActType::kInformCount:
      js["count"] = act.count;
      js["hint"] = act.hint;
      break;
    case SystemActType::kConfirm:
      js["constraint"] = act.constraint ? RenderConstraint(*act.constraint) : "";
      break;
    default:
      break;
  }
  return js;
}

SystemAct SystemActFromJson(const nlohmann::json& js, const KnowledgeBase& kb) {
  if (!js.is_object() || !js.contains("type") || !js["type"].is_string()) {
    throw Error(ErrorCode::kParse, "system act needs a string 'type'");
  }
  SystemAct act;
  auto type = ParseSystemActType(js["type"].get<std::string>());
  if (!type) {
    throw Error(ErrorCode::kParse,
                "unknown system act type '" + js["type"].get<std::string>() + "'");
  }
  act.type = *type;
  act.slot = js.value("slot", "");
  act.soft = js.value("soft", false);
  act.slots = ArrayOf<std::string>(js, "slots");
  act.items = ArrayOf<std::string>(js, "items");
  act.aspects = ArrayOf<std::string>(js, "aspects");
  act.count = js.value("count", 0);
  act.hint = js.value("hint", "");
  if (auto it = js.find("constraint"); it != js.end() && it->is_string() &&
                                       !it->get<std::string>().empty()) {
    act.constraint = ParseConstraint(it->get<std::string>(), kb);
  }
  return act;
}

}  // namespace facetalk
