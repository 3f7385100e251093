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

#ifndef FACETALK_KB_H_
#define FACETALK_KB_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace facetalk {

enum class SlotKind { kNumeric, kCategorical, kHierarchical, kMultivalued };

const char* SlotKindName(SlotKind kind);
std::optional<SlotKind> ParseSlotKind(std::string_view name);

// A single operand: a number for numeric slots, a label otherwise.
using Scalar = std::variant<double, std::string>;

// What an item carries for one slot: a number, a label (categorical or a
// hierarchy node), or a label set (multivalued).
using Assignment = std::variant<double, std::string, std::vector<std::string>>;

// Shortest round-trip decimal form; integral values print without a point.
std::string FormatNumber(double value);
std::string ScalarLabel(const Scalar& value);

// Ordered label -> phrases list. Keys are value labels, or the slot's own name
// for slot cue words ("pounds", "price range").
using SynonymList = std::vector<std::pair<std::string, std::vector<std::string>>>;

struct SlotSchema {
  std::string name;
  SlotKind kind = SlotKind::kCategorical;
  std::string unit;
  bool ordinal = false;
  bool mandatory = false;
  // Numeric range, inclusive.
  std::optional<double> min_value;
  std::optional<double> max_value;
  // Categorical and multivalued labels. For ordinal slots this is ascending
  // order.
  std::vector<std::string> labels;
  // Hierarchical domain: root plus adjacency in document order.
  std::string root;
  std::vector<std::pair<std::string, std::vector<std::string>>> children;
  SynonymList synonyms;
  // Overrides the std-dev "around" tolerance.
  std::optional<double> tolerance;

  bool single_valued() const { return kind != SlotKind::kMultivalued; }
};

struct Item {
  std::string id;
  std::string name;
  std::map<std::string, Assignment> slots;

  const Assignment* Find(std::string_view slot) const;
};

// Value -> count, in domain order.
struct Distribution {
  std::vector<std::pair<std::string, int>> counts;

  int Count(std::string_view label) const;
  bool operator==(const Distribution&) const = default;
};

struct ValidationReport {
  std::vector<std::string> findings;

  bool ok() const { return findings.empty(); }
};

// Immutable ontology plus item store. Construction never throws on invariant
// violations; ValidateSchema reports them. Indices are built defensively so a
// malformed hierarchy cannot loop.
class KnowledgeBase {
 public:
  KnowledgeBase(std::string id, std::vector<SlotSchema> slots,
                std::vector<Item> items);

  const std::string& id() const { return id_; }
  std::span<const SlotSchema> slots() const { return slots_; }
  std::span<const Item> items() const { return items_; }

  const SlotSchema* FindSlot(std::string_view name) const;
  // Throws NotFound.
  const SlotSchema& slot(std::string_view name) const;
  int SlotPosition(std::string_view name) const;
  const Item* FindItem(std::string_view id) const;
  // Throws NotFound.
  const Item& item(std::string_view id) const;

  // Labels a belief or rank map ranges over: declared labels, hierarchy nodes
  // in pre-order, or the distinct numeric values held by items (ascending).
  const std::vector<std::string>& Domain(std::string_view slot) const;
  // Position of a label inside Domain(slot), or -1.
  int DomainPosition(std::string_view slot, std::string_view label) const;

  // Population std-dev of the slot's item values (label positions for ordinal
  // categorical slots), unless overridden in the document.
  double Tolerance(std::string_view slot) const;

  const Distribution& Stats(std::string_view slot) const;

  // Hierarchy helpers. Pre-order, node first.
  const std::vector<std::string>& DescendantsOf(std::string_view slot,
                                                std::string_view node) const;
  int Depth(std::string_view slot, std::string_view node) const;
  bool IsNode(std::string_view slot, std::string_view node) const;
  std::vector<std::string> ParentsOf(std::string_view slot,
                                     std::string_view node) const;

  // Position of a value on the slot's order: the number itself for numeric
  // slots, the declared label index for ordinal categorical slots.
  std::optional<double> OrderKey(const SlotSchema& slot,
                                 const Scalar& value) const;

  // Label of an item's single-valued assignment (number formatted), if any.
  std::optional<std::string> SingleLabel(const Item& item,
                                         std::string_view slot) const;

  nlohmann::json ToCanonicalJson() const;

 private:
  struct SlotIndex {
    std::vector<std::string> domain;
    std::unordered_map<std::string, int> position;
    std::unordered_map<std::string, std::vector<std::string>> parents;
    std::unordered_map<std::string, std::vector<std::string>> descendants;
    std::unordered_map<std::string, int> depth;
    double tolerance = 0.0;
    Distribution stats;
  };

  const SlotIndex& index(std::string_view slot) const;
  void BuildIndex(const SlotSchema& slot, SlotIndex& idx) const;

  std::string id_;
  std::vector<SlotSchema> slots_;
  std::vector<Item> items_;
  std::unordered_map<std::string, size_t> slot_by_name_;
  std::unordered_map<std::string, size_t> item_by_id_;
  std::vector<SlotIndex> indices_;
};

// Parses a KB document without validating invariants. Throws ParseError on
// malformed JSON and Error(kParse) naming the JSON path on structural
// problems.
KnowledgeBase ParseKnowledgeBase(std::string_view document);

// Parses and validates; throws ValidationError listing every finding.
KnowledgeBase LoadKnowledgeBase(std::string_view document);
KnowledgeBase LoadKnowledgeBaseFile(const std::string& path);

ValidationReport ValidateSchema(const KnowledgeBase& kb);

// The node plus all transitive children. Throws NotFound for unknown nodes and
// InvalidArgument for non-hierarchical slots.
std::vector<std::string> Descendants(const KnowledgeBase& kb,
                                     std::string_view slot,
                                     std::string_view value);

// Throws NotFound for undeclared slots.
Distribution ValueStats(const KnowledgeBase& kb, std::string_view slot);

std::string ReadFile(const std::string& path);

}  // namespace facetalk

#endif  // FACETALK_KB_H_
