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

#ifndef FACETALK_UNDERSTANDING_H_
#define FACETALK_UNDERSTANDING_H_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "facetalk/acts.h"
#include "facetalk/kb.h"

namespace facetalk {

struct Mention {
  enum class Kind { kValue, kSlot, kNumber };
  Kind kind = Kind::kValue;
  // Empty for a number no slot word could be attached to.
  std::string slot;
  // Label for values, formatted literal for numbers, empty for slot words.
  std::string value;
  double number = 0;
  // Token span [begin, end); context starts where the previous mention ended.
  size_t begin = 0;
  size_t end = 0;
  size_t context_begin = 0;
  bool negated = false;
  // Every (slot, value) the matched phrase can stand for, chosen one first.
  std::vector<std::pair<std::string, std::string>> candidates;
};

// Lower-cased words; punctuation other than - ' . inside words is dropped.
std::vector<std::string> UtteranceTokens(std::string_view text);

// Longest-match gazetteer lookup over value labels, value synonyms and slot
// words. Numbers attach to a numeric slot named right after them, else one
// named shortly before them, else the KB's only numeric slot.
std::vector<Mention> ResolveMentions(std::span<const std::string> tokens,
                                     const KnowledgeBase& kb);

// `last_act` is the previous system act, if any; it binds bare answers to
// the slot just requested.
std::vector<DialogueAct> ParseUtterance(std::string_view text,
                                        const KnowledgeBase& kb, double conf,
                                        const SystemAct* last_act = nullptr);

}  // namespace facetalk

#endif  // FACETALK_UNDERSTANDING_H_
