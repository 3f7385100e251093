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

#include "facetalk/constraint.h"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "facetalk/error.h"
#include "facetalk/kernels.h"
#include "lexer.h"

namespace facetalk {

using internal::TokenCursor;
using internal::TokenKind;

const char* OpName(Op op) {
  switch (op) {
    case Op::kLt: return "lt";
    case Op::kLe: return "le";
    case Op::kGt: return "gt";
    case Op::kGe: return "ge";
    case Op::kEq: return "eq";
    case Op::kNeq: return "neq";
    case Op::kAround: return "around";
    case Op::kNotAround: return "not_around";
    case Op::kBetween: return "between";
    case Op::kNotBetween: return "not_between";
  }
  return "eq";
}

const char* OpSymbol(Op op) {
  switch (op) {
    case Op::kLt: return "<";
    case Op::kLe: return "<=";
    case Op::kGt: return ">";
    case Op::kGe: return ">=";
    case Op::kEq: return "=";
    case Op::kNeq: return "!=";
    case Op::kAround: return "~";
    case Op::kNotAround: return "!~";
    case Op::kBetween: return "between";
    case Op::kNotBetween: return "not between";
  }
  return "=";
}

bool IsRangeOp(Op op) { return op == Op::kBetween || op == Op::kNotBetween; }

bool Applicable(Op op, const SlotSchema& slot) {
  if (op == Op::kEq || op == Op::kNeq) return true;
  return slot.ordinal;
}

namespace {

std::string Where(const Constraint& c) { return " in '" + RenderConstraint(c) + "'"; }

void CheckOperand(const Scalar& v, const SlotSchema& slot,
                  const KnowledgeBase& kb, const Constraint& c) {
  if (slot.kind == SlotKind::kNumeric) {
    if (!std::holds_alternative<double>(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "slot '" + slot.name + "' expects a number" + Where(c));
    }
    return;
  }
  const auto* label = std::get_if<std::string>(&v);
  if (label == nullptr || kb.DomainPosition(slot.name, *label) < 0) {
    throw Error(ErrorCode::kNotFound, "unknown value '" + ScalarLabel(v) +
                                          "' for slot '" + slot.name + "'");
  }
}

}  // namespace

void CheckConstraint(const Constraint& c, const KnowledgeBase& kb) {
  const SlotSchema* slot = kb.FindSlot(c.slot);
  if (slot == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown slot '" + c.slot + "'");
  }
  if (!Applicable(c.op, *slot)) {
    throw Error(ErrorCode::kInapplicable,
                std::string("operator '") + OpSymbol(c.op) +
                    "' is not applicable to non-ordinal slot '" + slot->name + "'");
  }
  CheckOperand(c.value, *slot, kb, c);
  if (IsRangeOp(c.op) != c.upper.has_value()) {
    throw Error(ErrorCode::kInvalidArgument,
                "range operand mismatch" + Where(c));
  }
  if (c.upper) {
    CheckOperand(*c.upper, *slot, kb, c);
    auto lo = kb.OrderKey(*slot, c.value);
    auto hi = kb.OrderKey(*slot, *c.upper);
    if (!lo || !hi || *lo > *hi) {
      throw Error(ErrorCode::kInvalidArgument,
                  "between bounds out of order" + Where(c));
    }
  }
}

namespace {

std::optional<Op> SymbolOp(std::string_view s) {
  if (s == "<") return Op::kLt;
  if (s == "<=") return Op::kLe;
  if (s == ">") return Op::kGt;
  if (s == ">=") return Op::kGe;
  if (s == "=") return Op::kEq;
  if (s == "!=") return Op::kNeq;
  if (s == "~") return Op::kAround;
  if (s == "!~") return Op::kNotAround;
  return std::nullopt;
}

Constraint ParseOne(std::string_view text, size_t offset,
                    const KnowledgeBase& kb) {
  std::vector<internal::Token> tokens;
  try {
    tokens = internal::Tokenize(text);
  } catch (const ParseError& e) {
    throw ParseError("invalid constraint", e.position() + offset);
  }
  for (auto& t : tokens) t.position += offset;
  TokenCursor cur(std::move(tokens));
  const auto& head = cur.Peek();
  if (head.kind != TokenKind::kWord && head.kind != TokenKind::kString) {
    throw ParseError("expected a slot name", head.position);
  }
  const SlotSchema* slot = internal::ResolveSlot(kb, head.text);
  if (slot == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown slot '" + head.text +
                                          "' at position " +
                                          std::to_string(head.position));
  }
  cur.Next();
  Constraint c;
  c.slot = slot->name;
  if (cur.PeekKeyword("between") ||
      (cur.PeekKeyword("not") && cur.PeekKeyword("between", 1))) {
    c.op = cur.AcceptKeyword("not") ? Op::kNotBetween : Op::kBetween;
    cur.ExpectKeyword("between");
  } else {
    const auto& t = cur.Peek();
    auto op = t.kind == TokenKind::kSymbol ? SymbolOp(t.text) : std::nullopt;
    if (!op) throw ParseError("expected an operator", t.position);
    cur.Next();
    c.op = *op;
  }
  if (!Applicable(c.op, *slot)) {
    throw Error(ErrorCode::kInapplicable,
                std::string("operator '") + OpSymbol(c.op) +
                    "' is not applicable to non-ordinal slot '" + slot->name + "'");
  }
  c.value = internal::ParseValue(cur, *slot, kb);
  if (IsRangeOp(c.op)) {
    cur.ExpectKeyword("and");
    c.upper = internal::ParseValue(cur, *slot, kb);
  }
  cur.ExpectEnd();
  CheckConstraint(c, kb);
  return c;
}

}  // namespace

Constraint ParseConstraint(std::string_view text, const KnowledgeBase& kb) {
  return ParseOne(text, 0, kb);
}

std::vector<Constraint> ParseConstraintList(std::string_view text,
                                            const KnowledgeBase& kb) {
  std::vector<Constraint> out;
  for (auto [piece, offset] : internal::SplitStatements(text)) {
    out.push_back(ParseOne(piece, offset, kb));
  }
  return out;
}

namespace {

std::string RenderScalar(const Scalar& v) {
  if (const double* d = std::get_if<double>(&v)) return FormatNumber(*d);
  return internal::QuoteLabel(std::get<std::string>(v));
}

}  // namespace

std::string RenderConstraint(const Constraint& c) {
  std::string out = internal::QuoteLabel(c.slot);
  out += " ";
  out += OpSymbol(c.op);
  out += " ";
  out += RenderScalar(c.value);
  if (c.upper) {
    out += " and ";
    out += RenderScalar(*c.upper);
  }
  return out;
}

Constraint Negate(const Constraint& c) {
  Constraint n = c;
  switch (c.op) {
    case Op::kLt: n.op = Op::kGe; break;
    case Op::kLe: n.op = Op::kGt; break;
    case Op::kGt: n.op = Op::kLe; break;
    case Op::kGe: n.op = Op::kLt; break;
    case Op::kEq: n.op = Op::kNeq; break;
    case Op::kNeq: n.op = Op::kEq; break;
    case Op::kAround: n.op = Op::kNotAround; break;
    case Op::kNotAround: n.op = Op::kAround; break;
    case Op::kBetween: n.op = Op::kNotBetween; break;
    case Op::kNotBetween: n.op = Op::kBetween; break;
  }
  return n;
}

namespace {

// Constraint against one single value of the slot (number or label).
bool SatisfiesSingle(const Constraint& c, const SlotSchema& slot,
                     const KnowledgeBase& kb, const Scalar& value) {
  if (slot.kind == SlotKind::kHierarchical) {
    const auto* node = std::get_if<std::string>(&value);
    const auto* target = std::get_if<std::string>(&c.value);
    if (node == nullptr || target == nullptr || !kb.IsNode(slot.name, *target)) {
      return false;
    }
    const auto& desc = kb.DescendantsOf(slot.name, *target);
    bool inside = std::find(desc.begin(), desc.end(), *node) != desc.end();
    if (c.op == Op::kEq) return inside;
    if (c.op == Op::kNeq) return !inside;
    return false;
  }
  if (!slot.ordinal) {
    bool same = value == c.value;
    if (c.op == Op::kEq) return same;
    if (c.op == Op::kNeq) return !same;
    return false;
  }
  auto v = kb.OrderKey(slot, value);
  auto x = kb.OrderKey(slot, c.value);
  if (!v || !x) return false;
  switch (c.op) {
    case Op::kLt: return *v < *x;
    case Op::kLe: return *v <= *x;
    case Op::kGt: return *v > *x;
    case Op::kGe: return *v >= *x;
    case Op::kEq: return *v == *x;
    case Op::kNeq: return *v != *x;
    case Op::kAround:
    case Op::kNotAround: {
      bool near = std::fabs(*v - *x) <= kb.Tolerance(slot.name);
      return c.op == Op::kAround ? near : !near;
    }
    case Op::kBetween:
    case Op::kNotBetween: {
      auto hi = c.upper ? kb.OrderKey(slot, *c.upper) : std::nullopt;
      if (!hi) return false;
      bool in = *v >= *x && *v <= *hi;
      return c.op == Op::kBetween ? in : !in;
    }
  }
  return false;
}

}  // namespace

bool LabelSatisfies(const Constraint& c, const KnowledgeBase& kb,
                    std::string_view label) {
  const SlotSchema& slot = kb.slot(c.slot);
  if (slot.kind == SlotKind::kNumeric) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(label.data(), label.data() + label.size(), v);
    if (ec != std::errc()) return false;
    return SatisfiesSingle(c, slot, kb, v);
  }
  if (slot.kind == SlotKind::kMultivalued) {
    // For a single member label: eq holds iff it is the operand.
    bool same = std::get_if<std::string>(&c.value) != nullptr &&
                std::get<std::string>(c.value) == label;
    return c.op == Op::kEq ? same : (c.op == Op::kNeq ? !same : false);
  }
  return SatisfiesSingle(c, slot, kb, std::string(label));
}

bool EvalHard(const Constraint& c, const Item& item, const KnowledgeBase& kb) {
  const Assignment* a = item.Find(c.slot);
  if (a == nullptr) return false;
  const SlotSchema* slot = kb.FindSlot(c.slot);
  if (slot == nullptr) return false;
  if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
    const auto* target = std::get_if<std::string>(&c.value);
    if (target == nullptr) return false;
    bool member = std::find(set->begin(), set->end(), *target) != set->end();
    if (c.op == Op::kEq) return member;
    if (c.op == Op::kNeq) return !member;
    return false;
  }
  if (const double* d = std::get_if<double>(a)) {
    return SatisfiesSingle(c, *slot, kb, *d);
  }
  return SatisfiesSingle(c, *slot, kb, std::get<std::string>(*a));
}

ResultSet Filter(const KnowledgeBase& kb, std::span<const Constraint> cs,
                 Execution mode) {
  std::vector<uint8_t> mask = mode == Execution::kParallel
                                  ? kernels::parallel::FilterMask(kb, cs)
                                  : kernels::serial::FilterMask(kb, cs);
  ResultSet rs;
  auto items = kb.items();
  for (size_t i = 0; i < items.size(); ++i) {
    if (mask[i]) rs.ids.push_back(items[i].id);
  }
  std::sort(rs.ids.begin(), rs.ids.end());
  rs.facets = ComputeFacetCounts(rs.ids, kb);
  return rs;
}

FacetCounts ComputeFacetCounts(std::span<const std::string> ids,
                               const KnowledgeBase& kb) {
  FacetCounts out;
  for (const auto& slot : kb.slots()) {
    const auto& domain = kb.Domain(slot.name);
    std::vector<int> counts(domain.size(), 0);
    for (const auto& id : ids) {
      const Item* item = kb.FindItem(id);
      if (item == nullptr) continue;
      const Assignment* a = item->Find(slot.name);
      if (a == nullptr) continue;
      if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
        std::vector<uint8_t> seen(domain.size(), 0);
        for (const auto& l : *set) {
          int p = kb.DomainPosition(slot.name, l);
          if (p >= 0 && !seen[p]) {
            seen[p] = 1;
            ++counts[p];
          }
        }
        continue;
      }
      std::string label = *kb.SingleLabel(*item, slot.name);
      if (slot.kind == SlotKind::kHierarchical) {
        // Every ancestor-or-self node whose subtree holds the item.
        for (size_t p = 0; p < domain.size(); ++p) {
          const auto& desc = kb.DescendantsOf(slot.name, domain[p]);
          if (std::find(desc.begin(), desc.end(), label) != desc.end()) ++counts[p];
        }
        continue;
      }
      int p = kb.DomainPosition(slot.name, label);
      if (p >= 0) ++counts[p];
    }
    std::vector<std::pair<std::string, int>> values;
    for (size_t p = 0; p < domain.size(); ++p) {
      if (counts[p] > 0) values.emplace_back(domain[p], counts[p]);
    }
    if (!values.empty()) out.emplace_back(slot.name, std::move(values));
  }
  return out;
}

nlohmann::json FacetCountsJson(const FacetCounts& facets) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [slot, values] : facets) {
    nlohmann::json v = nlohmann::json::object();
    for (const auto& [label, count] : values) v[label] = count;
    out[slot] = v;
  }
  return out;
}

}  // namespace facetalk
