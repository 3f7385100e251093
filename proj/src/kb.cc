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

#include "facetalk/kb.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include "facetalk/error.h"

namespace facetalk {

using ordered_json = nlohmann::ordered_json;

const char* SlotKindName(SlotKind kind) {
  switch (kind) {
    case SlotKind::kNumeric: return "numeric";
    case SlotKind::kCategorical: return "categorical";
    case SlotKind::kHierarchical: return "hierarchical";
    case SlotKind::kMultivalued: return "multivalued";
  }
  return "categorical";
}

std::optional<SlotKind> ParseSlotKind(std::string_view name) {
  if (name == "numeric") return SlotKind::kNumeric;
  if (name == "categorical") return SlotKind::kCategorical;
  if (name == "hierarchical") return SlotKind::kHierarchical;
  if (name == "multivalued") return SlotKind::kMultivalued;
  return std::nullopt;
}

std::string FormatNumber(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string ScalarLabel(const Scalar& value) {
  if (const double* d = std::get_if<double>(&value)) return FormatNumber(*d);
  return std::get<std::string>(value);
}

const Assignment* Item::Find(std::string_view slot) const {
  auto it = slots.find(std::string(slot));
  return it == slots.end() ? nullptr : &it->second;
}

int Distribution::Count(std::string_view label) const {
  for (const auto& [value, count] : counts) {
    if (value == label) return count;
  }
  return 0;
}

KnowledgeBase::KnowledgeBase(std::string id, std::vector<SlotSchema> slots,
                             std::vector<Item> items)
    : id_(std::move(id)), slots_(std::move(slots)), items_(std::move(items)) {
  for (size_t i = 0; i < slots_.size(); ++i) {
    slot_by_name_.emplace(slots_[i].name, i);
  }
  for (size_t i = 0; i < items_.size(); ++i) {
    item_by_id_.emplace(items_[i].id, i);
  }
  indices_.resize(slots_.size());
  for (size_t i = 0; i < slots_.size(); ++i) BuildIndex(slots_[i], indices_[i]);
}

void KnowledgeBase::BuildIndex(const SlotSchema& slot, SlotIndex& idx) const {
  switch (slot.kind) {
    case SlotKind::kNumeric: {
      std::set<double> distinct;
      for (const auto& item : items_) {
        if (const auto* a = item.Find(slot.name)) {
          if (const double* d = std::get_if<double>(a)) distinct.insert(*d);
        }
      }
      for (double d : distinct) idx.domain.push_back(FormatNumber(d));
      break;
    }
    case SlotKind::kCategorical:
    case SlotKind::kMultivalued:
      idx.domain = slot.labels;
      break;
    case SlotKind::kHierarchical: {
      std::unordered_map<std::string, const std::vector<std::string>*> kids;
      for (const auto& [node, list] : slot.children) {
        kids.emplace(node, &list);
        for (const auto& child : list) idx.parents[child].push_back(node);
      }
      std::unordered_set<std::string> seen;
      std::function<void(const std::string&, int)> visit =
          [&](const std::string& node, int depth) {
            if (!seen.insert(node).second) return;
            idx.domain.push_back(node);
            idx.depth.emplace(node, depth);
            if (auto it = kids.find(node); it != kids.end()) {
              for (const auto& child : *it->second) visit(child, depth + 1);
            }
          };
      if (!slot.root.empty()) visit(slot.root, 0);
      // Nodes unreachable from the root still get a position so lookups stay
      // total on invalid documents.
      for (const auto& [node, list] : slot.children) {
        visit(node, 0);
        for (const auto& child : list) visit(child, 1);
      }
      for (const auto& node : idx.domain) {
        std::vector<std::string> out;
        std::unordered_set<std::string> local;
        std::function<void(const std::string&)> walk =
            [&](const std::string& n) {
              if (!local.insert(n).second) return;
              out.push_back(n);
              if (auto it = kids.find(n); it != kids.end()) {
                for (const auto& child : *it->second) walk(child);
              }
            };
        walk(node);
        idx.descendants.emplace(node, std::move(out));
      }
      break;
    }
  }
  for (size_t i = 0; i < idx.domain.size(); ++i) {
    idx.position.emplace(idx.domain[i], static_cast<int>(i));
  }

  // Value statistics.
  std::vector<int> counts(idx.domain.size(), 0);
  std::vector<double> keys;
  for (const auto& item : items_) {
    const Assignment* a = item.Find(slot.name);
    if (a == nullptr) continue;
    if (const double* d = std::get_if<double>(a)) {
      if (auto it = idx.position.find(FormatNumber(*d)); it != idx.position.end()) {
        ++counts[it->second];
      }
      keys.push_back(*d);
    } else if (const auto* s = std::get_if<std::string>(a)) {
      auto it = idx.position.find(*s);
      if (it == idx.position.end()) continue;
      if (slot.kind == SlotKind::kHierarchical) {
        // Roll the item up to every ancestor; guard against malformed cycles.
        std::unordered_set<std::string> visited;
        std::string node = *s;
        while (visited.insert(node).second) {
          ++counts[idx.position.at(node)];
          auto p = idx.parents.find(node);
          if (p == idx.parents.end() || p->second.empty()) break;
          node = p->second.front();
          if (!idx.position.count(node)) break;
        }
      } else {
        ++counts[it->second];
        keys.push_back(it->second);
      }
    } else {
      const auto& set = std::get<std::vector<std::string>>(*a);
      std::unordered_set<std::string> once;
      for (const auto& label : set) {
        auto it = idx.position.find(label);
        if (it != idx.position.end() && once.insert(label).second) {
          ++counts[it->second];
        }
      }
    }
  }
  for (size_t i = 0; i < idx.domain.size(); ++i) {
    idx.stats.counts.emplace_back(idx.domain[i], counts[i]);
  }

  if (slot.tolerance) {
    idx.tolerance = *slot.tolerance;
  } else if ((slot.kind == SlotKind::kNumeric ||
              (slot.kind == SlotKind::kCategorical && slot.ordinal)) &&
             !keys.empty()) {
    double mean = 0.0;
    for (double k : keys) mean += k;
    mean /= static_cast<double>(keys.size());
    double var = 0.0;
    for (double k : keys) var += (k - mean) * (k - mean);
    idx.tolerance = std::sqrt(var / static_cast<double>(keys.size()));
  }
}

const SlotSchema* KnowledgeBase::FindSlot(std::string_view name) const {
  auto it = slot_by_name_.find(std::string(name));
  return it == slot_by_name_.end() ? nullptr : &slots_[it->second];
}

const SlotSchema& KnowledgeBase::slot(std::string_view name) const {
  const SlotSchema* s = FindSlot(name);
  if (s == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown slot '" + std::string(name) + "'");
  }
  return *s;
}

int KnowledgeBase::SlotPosition(std::string_view name) const {
  auto it = slot_by_name_.find(std::string(name));
  return it == slot_by_name_.end() ? -1 : static_cast<int>(it->second);
}

const Item* KnowledgeBase::FindItem(std::string_view id) const {
  auto it = item_by_id_.find(std::string(id));
  return it == item_by_id_.end() ? nullptr : &items_[it->second];
}

const Item& KnowledgeBase::item(std::string_view id) const {
  const Item* i = FindItem(id);
  if (i == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown item '" + std::string(id) + "'");
  }
  return *i;
}

const KnowledgeBase::SlotIndex& KnowledgeBase::index(std::string_view slot) const {
  auto it = slot_by_name_.find(std::string(slot));
  if (it == slot_by_name_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown slot '" + std::string(slot) + "'");
  }
  return indices_[it->second];
}

const std::vector<std::string>& KnowledgeBase::Domain(std::string_view slot) const {
  return index(slot).domain;
}

int KnowledgeBase::DomainPosition(std::string_view slot,
                                  std::string_view label) const {
  const auto& idx = index(slot);
  auto it = idx.position.find(std::string(label));
  return it == idx.position.end() ? -1 : it->second;
}

double KnowledgeBase::Tolerance(std::string_view slot) const {
  return index(slot).tolerance;
}

const Distribution& KnowledgeBase::Stats(std::string_view slot) const {
  return index(slot).stats;
}

const std::vector<std::string>& KnowledgeBase::DescendantsOf(
    std::string_view slot, std::string_view node) const {
  const auto& idx = index(slot);
  auto it = idx.descendants.find(std::string(node));
  if (it == idx.descendants.end()) {
    throw Error(ErrorCode::kNotFound, "unknown node '" + std::string(node) +
                                          "' in slot '" + std::string(slot) + "'");
  }
  return it->second;
}

int KnowledgeBase::Depth(std::string_view slot, std::string_view node) const {
  const auto& idx = index(slot);
  auto it = idx.depth.find(std::string(node));
  return it == idx.depth.end() ? 0 : it->second;
}

bool KnowledgeBase::IsNode(std::string_view slot, std::string_view node) const {
  const auto& idx = index(slot);
  return idx.descendants.count(std::string(node)) > 0;
}

std::vector<std::string> KnowledgeBase::ParentsOf(std::string_view slot,
                                                  std::string_view node) const {
  const auto& idx = index(slot);
  auto it = idx.parents.find(std::string(node));
  return it == idx.parents.end() ? std::vector<std::string>{} : it->second;
}

std::optional<double> KnowledgeBase::OrderKey(const SlotSchema& slot,
                                              const Scalar& value) const {
  if (slot.kind == SlotKind::kNumeric) {
    if (const double* d = std::get_if<double>(&value)) return *d;
    return std::nullopt;
  }
  if (slot.kind == SlotKind::kCategorical && slot.ordinal) {
    if (const auto* s = std::get_if<std::string>(&value)) {
      auto it = std::find(slot.labels.begin(), slot.labels.end(), *s);
      if (it != slot.labels.end()) {
        return static_cast<double>(it - slot.labels.begin());
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> KnowledgeBase::SingleLabel(
    const Item& item, std::string_view slot) const {
  const Assignment* a = item.Find(slot);
  if (a == nullptr) return std::nullopt;
  if (const double* d = std::get_if<double>(a)) return FormatNumber(*d);
  if (const auto* s = std::get_if<std::string>(a)) return *s;
  return std::nullopt;
}

namespace {

nlohmann::json NumberJson(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 9e15) {
    return static_cast<int64_t>(v);
  }
  return v;
}

nlohmann::json AssignmentJson(const Assignment& a) {
  if (const double* d = std::get_if<double>(&a)) return NumberJson(*d);
  if (const auto* s = std::get_if<std::string>(&a)) return *s;
  return std::get<std::vector<std::string>>(a);
}

}  // namespace

nlohmann::json KnowledgeBase::ToCanonicalJson() const {
  nlohmann::json doc;
  doc["id"] = id_;
  doc["slots"] = nlohmann::json::array();
  for (const auto& s : slots_) {
    nlohmann::json js;
    js["name"] = s.name;
    js["kind"] = SlotKindName(s.kind);
    if (!s.unit.empty()) js["unit"] = s.unit;
    js["ordinal"] = s.ordinal;
    js["mandatory"] = s.mandatory;
    if (s.kind == SlotKind::kHierarchical) {
      nlohmann::json children = nlohmann::json::object();
      for (const auto& [node, list] : s.children) children[node] = list;
      js["values"] = {{"root", s.root}, {"children", children}};
    } else if (s.kind == SlotKind::kNumeric) {
      if (s.min_value && s.max_value) {
        js["values"] = {NumberJson(*s.min_value), NumberJson(*s.max_value)};
      }
    } else {
      js["values"] = s.labels;
    }
    nlohmann::json syn = nlohmann::json::object();
    for (const auto& [label, phrases] : s.synonyms) syn[label] = phrases;
    js["synonyms"] = syn;
    if (s.tolerance) js["tolerance"] = NumberJson(*s.tolerance);
    doc["slots"].push_back(js);
  }
  doc["items"] = nlohmann::json::array();
  for (const auto& item : items_) {
    nlohmann::json slots = nlohmann::json::object();
    for (const auto& [name, a] : item.slots) slots[name] = AssignmentJson(a);
    doc["items"].push_back({{"id", item.id}, {"name", item.name}, {"slots", slots}});
  }
  return doc;
}

namespace {

[[noreturn]] void Malformed(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParse, "malformed KB document at " + path + ": " + what);
}

const ordered_json& Require(const ordered_json& obj, const char* key,
                            const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) Malformed(path, std::string("missing key '") + key + "'");
  return *it;
}

std::string RequireString(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) Malformed(path, "expected string");
  return v.get<std::string>();
}

bool OptionalBool(const ordered_json& obj, const char* key, bool fallback,
                  const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) Malformed(path + "/" + key, "expected boolean");
  return it->get<bool>();
}

std::vector<std::string> StringArray(const ordered_json& v,
                                     const std::string& path) {
  if (!v.is_array()) Malformed(path, "expected array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < v.size(); ++i) {
    out.push_back(RequireString(v[i], path + "/" + std::to_string(i)));
  }
  return out;
}

void RejectUnknownKeys(const ordered_json& obj,
                       std::initializer_list<std::string_view> allowed,
                       const std::string& path) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      Malformed(path, "unknown key '" + key + "'");
    }
  }
}

SlotSchema ParseSlot(const ordered_json& js, const std::string& path) {
  if (!js.is_object()) Malformed(path, "expected object");
  RejectUnknownKeys(js,
                    {"name", "kind", "unit", "ordinal", "mandatory", "values",
                     "synonyms", "tolerance"},
                    path);
  SlotSchema s;
  s.name = RequireString(Require(js, "name", path), path + "/name");
  std::string kind = RequireString(Require(js, "kind", path), path + "/kind");
  auto parsed = ParseSlotKind(kind);
  if (!parsed) Malformed(path + "/kind", "unknown slot kind '" + kind + "'");
  s.kind = *parsed;
  if (auto it = js.find("unit"); it != js.end()) {
    s.unit = RequireString(*it, path + "/unit");
  }
  s.ordinal = OptionalBool(js, "ordinal", s.kind == SlotKind::kNumeric, path);
  s.mandatory = OptionalBool(js, "mandatory", false, path);
  if (auto it = js.find("values"); it != js.end()) {
    const std::string vpath = path + "/values";
    if (s.kind == SlotKind::kHierarchical) {
      if (!it->is_object()) Malformed(vpath, "expected {root, children}");
      RejectUnknownKeys(*it, {"root", "children"}, vpath);
      s.root = RequireString(Require(*it, "root", vpath), vpath + "/root");
      if (auto c = it->find("children"); c != it->end()) {
        if (!c->is_object()) Malformed(vpath + "/children", "expected object");
        for (const auto& [node, list] : c->items()) {
          s.children.emplace_back(
              node, StringArray(list, vpath + "/children/" + node));
        }
      }
    } else if (s.kind == SlotKind::kNumeric) {
      if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
          !(*it)[1].is_number()) {
        Malformed(vpath, "numeric domain must be [min, max]");
      }
      s.min_value = (*it)[0].get<double>();
      s.max_value = (*it)[1].get<double>();
    } else {
      s.labels = StringArray(*it, vpath);
    }
  } else if (s.kind == SlotKind::kHierarchical) {
    Malformed(path, "hierarchical slot requires values.root");
  }
  if (auto it = js.find("synonyms"); it != js.end()) {
    if (!it->is_object()) Malformed(path + "/synonyms", "expected object");
    for (const auto& [label, list] : it->items()) {
      s.synonyms.emplace_back(label,
                              StringArray(list, path + "/synonyms/" + label));
    }
  }
  if (auto it = js.find("tolerance"); it != js.end()) {
    if (!it->is_number()) Malformed(path + "/tolerance", "expected number");
    s.tolerance = it->get<double>();
  }
  return s;
}

Item ParseItem(const ordered_json& js, const std::string& path) {
  if (!js.is_object()) Malformed(path, "expected object");
  RejectUnknownKeys(js, {"id", "name", "slots"}, path);
  Item item;
  item.id = RequireString(Require(js, "id", path), path + "/id");
  if (auto it = js.find("name"); it != js.end()) {
    item.name = RequireString(*it, path + "/name");
  } else {
    item.name = item.id;
  }
  if (auto it = js.find("slots"); it != js.end()) {
    if (!it->is_object()) Malformed(path + "/slots", "expected object");
    for (const auto& [name, value] : it->items()) {
      const std::string vpath = path + "/slots/" + name;
      if (value.is_number()) {
        item.slots.emplace(name, value.get<double>());
      } else if (value.is_string()) {
        item.slots.emplace(name, value.get<std::string>());
      } else if (value.is_array()) {
        item.slots.emplace(name, StringArray(value, vpath));
      } else {
        Malformed(vpath, "expected number, string or array");
      }
    }
  }
  return item;
}

}  // namespace

KnowledgeBase ParseKnowledgeBase(std::string_view document) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed KB document: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) Malformed("/", "expected object");
  RejectUnknownKeys(doc, {"id", "slots", "items"}, "/");
  std::string id = RequireString(Require(doc, "id", "/"), "/id");
  const auto& slots_js = Require(doc, "slots", "/");
  if (!slots_js.is_array()) Malformed("/slots", "expected array");
  std::vector<SlotSchema> slots;
  for (size_t i = 0; i < slots_js.size(); ++i) {
    slots.push_back(ParseSlot(slots_js[i], "/slots/" + std::to_string(i)));
  }
  std::vector<Item> items;
  if (auto it = doc.find("items"); it != doc.end()) {
    if (!it->is_array()) Malformed("/items", "expected array");
    for (size_t i = 0; i < it->size(); ++i) {
      items.push_back(ParseItem((*it)[i], "/items/" + std::to_string(i)));
    }
  }
  return KnowledgeBase(std::move(id), std::move(slots), std::move(items));
}

KnowledgeBase LoadKnowledgeBase(std::string_view document) {
  KnowledgeBase kb = ParseKnowledgeBase(document);
  ValidationReport report = ValidateSchema(kb);
  if (!report.ok()) throw ValidationError(std::move(report.findings));
  return kb;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeBase LoadKnowledgeBaseFile(const std::string& path) {
  return LoadKnowledgeBase(ReadFile(path));
}

namespace {

void ValidateHierarchy(const SlotSchema& s, std::vector<std::string>& out) {
  const std::string where = "slot '" + s.name + "': ";
  if (s.root.empty()) {
    out.push_back(where + "hierarchy has no root");
    return;
  }
  std::map<std::string, std::vector<std::string>> parents;
  std::map<std::string, const std::vector<std::string>*> kids;
  std::set<std::string> nodes{s.root};
  for (const auto& [node, list] : s.children) {
    if (!kids.emplace(node, &list).second) {
      out.push_back(where + "node '" + node + "' listed twice in children");
    }
    nodes.insert(node);
    for (const auto& child : list) {
      parents[child].push_back(node);
      nodes.insert(child);
    }
  }
  for (const auto& [node, ps] : parents) {
    if (ps.size() > 1) {
      out.push_back(where + "not a tree: node '" + node + "' has " +
                    std::to_string(ps.size()) + " parents");
    }
    if (node == s.root) {
      out.push_back(where + "not a tree: root '" + node + "' has a parent");
    }
  }
  // Reachability and cycles from the root.
  std::set<std::string> reached;
  std::set<std::string> on_stack;
  bool cycle = false;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    if (on_stack.count(n)) {
      cycle = true;
      return;
    }
    if (!reached.insert(n).second) return;
    on_stack.insert(n);
    if (auto it = kids.find(n); it != kids.end()) {
      for (const auto& c : *it->second) visit(c);
    }
    on_stack.erase(n);
  };
  visit(s.root);
  if (cycle) out.push_back(where + "not a tree: cycle in hierarchy");
  for (const auto& n : nodes) {
    if (!reached.count(n)) {
      out.push_back(where + "not a tree: node '" + n +
                    "' is not reachable from root '" + s.root + "'");
    }
  }
}

}  // namespace

ValidationReport ValidateSchema(const KnowledgeBase& kb) {
  ValidationReport report;
  auto& out = report.findings;
  std::set<std::string> slot_names;
  for (const auto& s : kb.slots()) {
    const std::string where = "slot '" + s.name + "': ";
    if (s.name.empty()) out.push_back("slot with empty name");
    if (!slot_names.insert(s.name).second) {
      out.push_back(where + "declared more than once");
    }
    if (s.kind == SlotKind::kNumeric && !s.ordinal) {
      out.push_back(where + "numeric slots must be ordinal");
    }
    if (s.kind == SlotKind::kMultivalued && s.ordinal) {
      out.push_back(where + "multivalued must be non-ordinal");
    }
    if (s.kind == SlotKind::kHierarchical && s.ordinal) {
      out.push_back(where + "hierarchical slots have no total order");
    }
    if (s.kind == SlotKind::kNumeric && s.min_value && s.max_value &&
        *s.min_value > *s.max_value) {
      out.push_back(where + "numeric range min exceeds max");
    }
    if (s.tolerance && *s.tolerance < 0) {
      out.push_back(where + "tolerance must be non-negative");
    }
    std::vector<std::string> labels = s.labels;
    if (s.kind == SlotKind::kHierarchical) {
      ValidateHierarchy(s, out);
      labels = kb.Domain(s.name);
    } else if (s.kind != SlotKind::kNumeric && s.labels.empty()) {
      out.push_back(where + "empty value domain");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second && s.kind != SlotKind::kHierarchical) {
        out.push_back(where + "duplicate label '" + l + "'");
      }
      if (l == "none") out.push_back(where + "label 'none' is reserved");
      if (l.empty()) out.push_back(where + "empty label");
    }
    for (const auto& [label, phrases] : s.synonyms) {
      if (label != s.name && !seen.count(label)) {
        out.push_back(where + "synonyms for unknown label '" + label + "'");
      }
    }
  }

  std::set<std::string> ids;
  for (const auto& item : kb.items()) {
    const std::string where = "item '" + item.id + "'";
    if (!ids.insert(item.id).second) out.push_back(where + ": duplicate id");
    for (const auto& [name, a] : item.slots) {
      const SlotSchema* s = kb.FindSlot(name);
      if (s == nullptr) {
        out.push_back(where + ": undeclared slot '" + name + "'");
        continue;
      }
      const std::string at = where + " slot '" + name + "': ";
      switch (s->kind) {
        case SlotKind::kNumeric: {
          const double* d = std::get_if<double>(&a);
          if (d == nullptr) {
            const auto* str = std::get_if<std::string>(&a);
            out.push_back(at + "value '" + (str ? *str : std::string("[...]")) +
                          "' not in numeric domain");
          } else if ((s->min_value && *d < *s->min_value) ||
                     (s->max_value && *d > *s->max_value)) {
            out.push_back(at + "value " + FormatNumber(*d) + " out of range");
          }
          break;
        }
        case SlotKind::kCategorical:
        case SlotKind::kHierarchical: {
          const auto* str = std::get_if<std::string>(&a);
          if (str == nullptr) {
            out.push_back(at + "expected a single label");
          } else if (kb.DomainPosition(name, *str) < 0) {
            out.push_back(at + "value '" + *str + "' not in domain");
          }
          break;
        }
        case SlotKind::kMultivalued: {
          const auto* set = std::get_if<std::vector<std::string>>(&a);
          if (set == nullptr) {
            out.push_back(at + "expected a label set");
            break;
          }
          for (const auto& l : *set) {
            if (kb.DomainPosition(name, l) < 0) {
              out.push_back(at + "value '" + l + "' not in domain");
            }
          }
          break;
        }
      }
    }
  }
  return report;
}

std::vector<std::string> Descendants(const KnowledgeBase& kb,
                                     std::string_view slot,
                                     std::string_view value) {
  const SlotSchema& s = kb.slot(slot);
  if (s.kind != SlotKind::kHierarchical) {
    throw Error(ErrorCode::kInvalidArgument,
                "slot '" + s.name + "' is not hierarchical");
  }
  return kb.DescendantsOf(slot, value);
}

Distribution ValueStats(const KnowledgeBase& kb, std::string_view slot) {
  return kb.Stats(slot);
}

}  // namespace facetalk
