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

#ifndef FACETALK_TESTS_TEST_UTIL_H_
#define FACETALK_TESTS_TEST_UTIL_H_

#include <string>

#include "facetalk/kb.h"
#include "facetalk/session.h"

namespace facetalk::testing {

inline std::string SourcePath(const std::string& relative) {
  return std::string(FACETALK_SOURCE_DIR) + "/" + relative;
}

inline const KnowledgeBase& Hotels() {
  static const KnowledgeBase kb =
      LoadKnowledgeBaseFile(SourcePath("data/hotels-sample.json"));
  return kb;
}

inline Domain HotelsDomain() {
  return MakeDomain(LoadKnowledgeBaseFile(SourcePath("data/hotels-sample.json")),
                    LoadPolicyConfig(SourcePath("data/policy.json")),
                    std::make_shared<const TemplateSet>(
                        TemplateSet::Load(SourcePath("data/templates.txt"))));
}

inline std::vector<ScriptLine> FlowScript() {
  return ParseScript(ReadFile(SourcePath("data/scripts/table1-style.script")));
}

// Five locations mirroring the worked example: kyoto{minami, shimogyo,
// nakagyo} and osaka.
inline KnowledgeBase SmallLocations() {
  return LoadKnowledgeBase(R"({
    "id": "small",
    "slots": [
      {"name": "location", "kind": "hierarchical",
       "values": {"root": "japan", "children": {
         "japan": ["kyoto", "osaka"],
         "kyoto": ["minami", "shimogyo", "nakagyo"]}}},
      {"name": "pricerange", "kind": "categorical", "ordinal": true,
       "values": ["cheap", "moderate", "expensive"]},
      {"name": "stars", "kind": "numeric", "values": [1, 5]},
      {"name": "amenities", "kind": "multivalued",
       "values": ["free-wifi", "non-smoking-rooms", "gym"]}
    ],
    "items": [
      {"id": "a", "slots": {"location": "minami", "pricerange": "cheap", "stars": 1,
                            "amenities": ["free-wifi"]}},
      {"id": "b", "slots": {"location": "minami", "pricerange": "moderate", "stars": 2,
                            "amenities": ["gym"]}},
      {"id": "c", "slots": {"location": "nakagyo", "pricerange": "expensive", "stars": 3}},
      {"id": "d", "slots": {"location": "osaka", "stars": 4,
                            "amenities": ["free-wifi", "non-smoking-rooms"]}},
      {"id": "e", "slots": {"location": "shimogyo", "pricerange": "cheap", "stars": 5}}
    ]})");
}

}  // namespace facetalk::testing

#endif  // FACETALK_TESTS_TEST_UTIL_H_
