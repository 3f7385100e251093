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

#include "facetalk/preference.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "facetalk/error.h"
#include "lexer.h"

namespace facetalk {

using internal::TokenCursor;
using internal::TokenKind;

const char* PrefKindName(PrefKind kind) {
  switch (kind) {
    case PrefKind::kBest: return "best";
    case PrefKind::kWorst: return "worst";
    case PrefKind::kRelative: return "relative";
    case PrefKind::kAround: return "around";
    case PrefKind::kNotAround: return "not_around";
    case PrefKind::kBetween: return "between";
    case PrefKind::kNotBetween: return "not_between";
    case PrefKind::kPreferOver: return "prefer_over";
    case PrefKind::kPreferSet: return "prefer_set";
  }
  return "best";
}

namespace {

bool IsRangeKind(PrefKind k) {
  return k == PrefKind::kAround || k == PrefKind::kNotAround ||
         k == PrefKind::kBetween || k == PrefKind::kNotBetween;
}

size_t OperandCount(PrefKind k) {
  switch (k) {
    case PrefKind::kRelative:
    case PrefKind::kBetween:
    case PrefKind::kNotBetween:
      return 2;
    case PrefKind::kPreferOver:
    case PrefKind::kPreferSet:
      return 0;
    default:
      return 1;
  }
}

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

void CheckPreference(const PreferenceAction& p, const KnowledgeBase& kb) {
  if (p.slot_level()) {
    if (p.slots.size() < 2) Invalid("slot-level preference needs two slots");
    std::set<std::string> seen;
    for (size_t i = 0; i < p.slots.size(); ++i) {
      const auto& s = p.slots[i];
      bool is_all = s == kAllSlots && kb.FindSlot(s) == nullptr;
      if (is_all) {
        if (p.kind != PrefKind::kPreferOver || i + 1 != p.slots.size() || i == 0) {
          Invalid("'all' may only end a prefer-over chain");
        }
        continue;
      }
      kb.slot(s);
      if (!seen.insert(s).second) Invalid("slot '" + s + "' named twice");
    }
    return;
  }
  const SlotSchema& slot = kb.slot(p.slot);
  if (p.operands.size() != OperandCount(p.kind)) {
    Invalid(std::string(PrefKindName(p.kind)) + " takes " +
            std::to_string(OperandCount(p.kind)) + " operand(s)");
  }
  if (IsRangeKind(p.kind) && !slot.ordinal) {
    throw Error(ErrorCode::kInapplicable,
                std::string(PrefKindName(p.kind)) +
                    " is not applicable to non-ordinal slot '" + slot.name + "'");
  }
  for (const auto& v : p.operands) {
    if (slot.kind == SlotKind::kNumeric) {
      const double* d = std::get_if<double>(&v);
      if (d == nullptr) Invalid("slot '" + slot.name + "' expects numbers");
      if ((slot.min_value && *d < *slot.min_value) ||
          (slot.max_value && *d > *slot.max_value)) {
        Invalid("value " + FormatNumber(*d) + " outside the domain of '" +
                slot.name + "'");
      }
    } else {
      const auto* l = std::get_if<std::string>(&v);
      if (l == nullptr || kb.DomainPosition(slot.name, *l) < 0) {
        throw Error(ErrorCode::kNotFound, "unknown value '" + ScalarLabel(v) +
                                              "' for slot '" + slot.name + "'");
      }
    }
  }
  if (p.kind == PrefKind::kRelative && p.operands[0] == p.operands[1]) {
    Invalid("relative preference must name two different values");
  }
  if (p.kind == PrefKind::kBetween || p.kind == PrefKind::kNotBetween) {
    auto lo = kb.OrderKey(slot, p.operands[0]);
    auto hi = kb.OrderKey(slot, p.operands[1]);
    if (!lo || !hi || *lo > *hi) Invalid("between bounds out of order");
  }
}

namespace {

const SlotSchema& ExpectSlot(TokenCursor& cur, const KnowledgeBase& kb) {
  const auto& t = cur.Peek();
  if (t.kind != TokenKind::kWord && t.kind != TokenKind::kString) {
    throw ParseError("expected a slot name", t.position);
  }
  const SlotSchema* s = internal::ResolveSlot(kb, t.text);
  if (s == nullptr) {
    throw Error(ErrorCode::kNotFound, "unknown slot '" + t.text +
                                          "' at position " +
                                          std::to_string(t.position));
  }
  cur.Next();
  return *s;
}

PreferenceAction ParseOne(std::string_view text, size_t offset,
                          const KnowledgeBase& kb) {
  std::vector<internal::Token> tokens;
  try {
    tokens = internal::Tokenize(text);
  } catch (const ParseError& e) {
    throw ParseError("invalid preference", e.position() + offset);
  }
  for (auto& t : tokens) t.position += offset;

  PreferenceAction p;
  if (tokens.front().kind == TokenKind::kWord &&
      internal::IEquals(tokens.front().text, "prefer")) {
    // Value-level iff the statement ends with "on <slot>".
    size_t on = tokens.size();
    for (size_t i = 0; i + 1 < tokens.size(); ++i) {
      if (tokens[i].kind == TokenKind::kWord && internal::IEquals(tokens[i].text, "on")) {
        on = i;
      }
    }
    if (on < tokens.size()) {
      TokenCursor tail(std::vector<internal::Token>(tokens.begin() + on + 1,
                                                    tokens.end()));
      const SlotSchema& slot = ExpectSlot(tail, kb);
      tail.ExpectEnd();
      std::vector<internal::Token> head(tokens.begin() + 1, tokens.begin() + on);
      internal::Token end;
      end.position = tokens[on].position;
      head.push_back(end);
      TokenCursor cur(std::move(head));
      p.kind = PrefKind::kRelative;
      p.slot = slot.name;
      p.operands.push_back(internal::ParseValue(cur, slot, kb));
      cur.ExpectKeyword("over");
      p.operands.push_back(internal::ParseValue(cur, slot, kb));
      cur.ExpectEnd();
    } else {
      TokenCursor cur(std::move(tokens));
      cur.Next();
      p.slots.push_back(ExpectSlot(cur, kb).name);
      if (cur.PeekKeyword("over")) {
        p.kind = PrefKind::kPreferOver;
        while (cur.AcceptKeyword("over")) {
          if (cur.Peek().kind == TokenKind::kWord && cur.AcceptKeyword("all")) {
            p.slots.emplace_back(kAllSlots);
            break;
          }
          p.slots.push_back(ExpectSlot(cur, kb).name);
        }
      } else if (cur.PeekKeyword("and")) {
        p.kind = PrefKind::kPreferSet;
        while (cur.AcceptKeyword("and")) p.slots.push_back(ExpectSlot(cur, kb).name);
      } else {
        throw ParseError("expected 'over' or 'and'", cur.Peek().position);
      }
      cur.ExpectEnd();
    }
  } else {
    TokenCursor cur(std::move(tokens));
    const SlotSchema& slot = ExpectSlot(cur, kb);
    p.slot = slot.name;
    if (cur.AcceptSymbol("=")) {
      p.operands.push_back(internal::ParseValue(cur, slot, kb));
      if (!cur.AcceptSymbol(":")) throw ParseError("expected ':'", cur.Peek().position);
      if (cur.AcceptKeyword("best")) {
        p.kind = PrefKind::kBest;
      } else if (cur.AcceptKeyword("worst")) {
        p.kind = PrefKind::kWorst;
      } else {
        throw ParseError("expected 'best' or 'worst'", cur.Peek().position);
      }
    } else if (cur.AcceptSymbol(":")) {
      bool negated = cur.AcceptKeyword("not");
      if (cur.AcceptKeyword("around")) {
        p.kind = negated ? PrefKind::kNotAround : PrefKind::kAround;
        p.operands.push_back(internal::ParseValue(cur, slot, kb));
      } else if (cur.AcceptKeyword("between")) {
        p.kind = negated ? PrefKind::kNotBetween : PrefKind::kBetween;
        p.operands.push_back(internal::ParseValue(cur, slot, kb));
        cur.ExpectKeyword("and");
        p.operands.push_back(internal::ParseValue(cur, slot, kb));
      } else {
        throw ParseError("expected 'around' or 'between'", cur.Peek().position);
      }
    } else {
      throw ParseError("expected '=' or ':'", cur.Peek().position);
    }
    cur.ExpectEnd();
  }
  CheckPreference(p, kb);
  return p;
}

std::string RenderOperand(const Scalar& v) {
  if (const double* d = std::get_if<double>(&v)) return FormatNumber(*d);
  return internal::QuoteLabel(std::get<std::string>(v));
}

}  // namespace

PreferenceAction ParsePreference(std::string_view text, const KnowledgeBase& kb) {
  return ParseOne(text, 0, kb);
}

std::vector<PreferenceAction> ParsePreferenceList(std::string_view text,
                                                  const KnowledgeBase& kb) {
  std::vector<PreferenceAction> out;
  for (auto [piece, offset] : internal::SplitStatements(text)) {
    out.push_back(ParseOne(piece, offset, kb));
  }
  return out;
}

std::string RenderPreference(const PreferenceAction& p) {
  const std::string slot = internal::QuoteLabel(p.slot);
  switch (p.kind) {
    case PrefKind::kBest:
      return slot + " = " + RenderOperand(p.operands[0]) + " : best";
    case PrefKind::kWorst:
      return slot + " = " + RenderOperand(p.operands[0]) + " : worst";
    case PrefKind::kRelative:
      return "prefer " + RenderOperand(p.operands[0]) + " over " +
             RenderOperand(p.operands[1]) + " on " + slot;
    case PrefKind::kAround:
      return slot + " : around " + RenderOperand(p.operands[0]);
    case PrefKind::kNotAround:
      return slot + " : not around " + RenderOperand(p.operands[0]);
    case PrefKind::kBetween:
      return slot + " : between " + RenderOperand(p.operands[0]) + " and " +
             RenderOperand(p.operands[1]);
    case PrefKind::kNotBetween:
      return slot + " : not between " + RenderOperand(p.operands[0]) + " and " +
             RenderOperand(p.operands[1]);
    case PrefKind::kPreferOver:
    case PrefKind::kPreferSet: {
      std::string out = "prefer";
      const char* sep = p.kind == PrefKind::kPreferOver ? " over " : " and ";
      for (size_t i = 0; i < p.slots.size(); ++i) {
        if (i > 0) out += sep;
        else out += " ";
        bool all = p.kind == PrefKind::kPreferOver && i + 1 == p.slots.size() &&
                   p.slots[i] == kAllSlots;
        out += all ? std::string(kAllSlots) : internal::QuoteLabel(p.slots[i]);
      }
      return out;
    }
  }
  return {};
}

int RankMap::Tier(std::string_view label) const {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == label) return tiers[i];
  }
  return -1;
}

int RankMap::WorstTier() const {
  int worst = 0;
  for (int t : tiers) worst = std::max(worst, t);
  return worst;
}

int RankMap::ItemTier(const Item& item, const KnowledgeBase& kb) const {
  const int missing = WorstTier() + 1;
  const Assignment* a = item.Find(slot);
  if (a == nullptr) return missing;
  if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
    int best = missing;
    for (const auto& l : *set) {
      int t = Tier(l);
      if (t >= 0) best = std::min(best, t);
    }
    return best;
  }
  auto label = kb.SingleLabel(item, slot);
  int t = label ? Tier(*label) : -1;
  return t < 0 ? missing : t;
}

namespace {

// Depth-first search for a cycle in a label graph; returns it closed
// (first == last) or empty.
std::vector<std::string> FindCycle(
    const std::vector<std::string>& nodes,
    const std::map<std::string, std::vector<std::string>>& edges) {
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::vector<std::string> cycle;
  std::function<bool(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = 1;
    stack.push_back(u);
    if (auto it = edges.find(u); it != edges.end()) {
      for (const auto& v : it->second) {
        if (color[v] == 1) {
          auto from = std::find(stack.begin(), stack.end(), v);
          cycle.assign(from, stack.end());
          cycle.push_back(v);
          return true;
        }
        if (color[v] == 0 && dfs(v)) return true;
      }
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (const auto& n : nodes) {
    if (color[n] == 0 && dfs(n)) return cycle;
  }
  return {};
}

[[noreturn]] void ThrowCycle(const std::string& what,
                             const std::vector<std::string>& cycle) {
  std::string msg = "cyclic " + what + ": ";
  for (size_t i = 0; i < cycle.size(); ++i) {
    if (i > 0) msg += " > ";
    msg += cycle[i];
  }
  throw Error(ErrorCode::kCycle, msg);
}

// Longest-path layer of every node in a DAG given by `edges`.
std::map<std::string, int> Layers(
    const std::vector<std::string>& nodes,
    const std::map<std::string, std::vector<std::string>>& edges) {
  std::map<std::string, int> layer;
  std::function<int(const std::string&)> depth_from_sources;
  // Reverse adjacency for "longest path ending at v".
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto& [u, vs] : edges) {
    for (const auto& v : vs) preds[v].push_back(u);
  }
  depth_from_sources = [&](const std::string& v) -> int {
    if (auto it = layer.find(v); it != layer.end()) return it->second;
    int best = 0;
    if (auto it = preds.find(v); it != preds.end()) {
      for (const auto& u : it->second) best = std::max(best, depth_from_sources(u) + 1);
    }
    layer[v] = best;
    return best;
  };
  for (const auto& n : nodes) depth_from_sources(n);
  return layer;
}

}  // namespace

RankMap ValueRank(const KnowledgeBase& kb, std::string_view slot_name,
                  std::span<const PreferenceAction> all_actions) {
  const SlotSchema& slot = kb.slot(slot_name);
  RankMap rank;
  rank.slot = slot.name;
  rank.values = kb.Domain(slot.name);
  const size_t n = rank.values.size();
  rank.tiers.assign(n, 0);

  // Stable by turn so "later" means later turn, then later in the list.
  std::vector<const PreferenceAction*> actions;
  for (const auto& a : all_actions) {
    if (!a.slot_level() && a.slot == slot.name) actions.push_back(&a);
  }
  std::stable_sort(actions.begin(), actions.end(),
                   [](const auto* a, const auto* b) { return a->turn < b->turn; });
  if (actions.empty()) return rank;

  const bool hierarchical = slot.kind == SlotKind::kHierarchical;
  auto scope_of = [&](const std::string& label) -> std::vector<std::string> {
    if (hierarchical && kb.IsNode(slot.name, label)) {
      return kb.DescendantsOf(slot.name, label);
    }
    return {label};
  };
  auto depth_of = [&](const std::string& label) {
    return hierarchical ? kb.Depth(slot.name, label) : 0;
  };

  // 1. best/worst class, deepest scope first, then latest.
  std::vector<int> cls(n, 1);
  std::vector<std::pair<int, int>> cls_rank(n, {-1, -1});  // (depth, order)
  for (size_t order = 0; order < actions.size(); ++order) {
    const auto* a = actions[order];
    if (a->kind != PrefKind::kBest && a->kind != PrefKind::kWorst) continue;
    const std::string target = ScalarLabel(a->operands[0]);
    const int depth = depth_of(target);
    for (const auto& v : scope_of(target)) {
      int p = kb.DomainPosition(slot.name, v);
      if (p < 0) continue;
      std::pair<int, int> key{depth, static_cast<int>(order)};
      if (key >= cls_rank[p]) {
        cls_rank[p] = key;
        cls[p] = a->kind == PrefKind::kBest ? 0 : 2;
      }
    }
  }

  // 2. Relative layers. Cycles among the stated pairs are errors; expanded
  // hierarchy pairs resolve by scope then recency.
  std::map<std::string, std::vector<std::string>> stated;
  std::vector<std::string> stated_nodes;
  struct PairChoice {
    bool forward;
    std::pair<int, int> key;
  };
  std::map<std::pair<std::string, std::string>, PairChoice> pairs;
  for (size_t order = 0; order < actions.size(); ++order) {
    const auto* a = actions[order];
    if (a->kind != PrefKind::kRelative) continue;
    const std::string hi = ScalarLabel(a->operands[0]);
    const std::string lo = ScalarLabel(a->operands[1]);
    stated[hi].push_back(lo);
    for (const auto& s : {hi, lo}) {
      if (std::find(stated_nodes.begin(), stated_nodes.end(), s) == stated_nodes.end()) {
        stated_nodes.push_back(s);
      }
    }
    std::vector<std::string> better = scope_of(hi);
    std::vector<std::string> worse = scope_of(lo);
    auto contains = [](const std::vector<std::string>& xs, const std::string& x) {
      return std::find(xs.begin(), xs.end(), x) != xs.end();
    };
    if (contains(better, lo)) {
      std::erase_if(better, [&](const std::string& x) { return contains(worse, x); });
    } else if (contains(worse, hi)) {
      std::erase_if(worse, [&](const std::string& x) { return contains(better, x); });
    }
    const std::pair<int, int> key{depth_of(hi) + depth_of(lo), static_cast<int>(order)};
    for (const auto& x : better) {
      for (const auto& y : worse) {
        if (x == y) continue;
        bool forward = x < y;
        auto k = forward ? std::make_pair(x, y) : std::make_pair(y, x);
        auto it = pairs.find(k);
        if (it == pairs.end() || key >= it->second.key) pairs[k] = {forward, key};
      }
    }
  }
  std::vector<int> layer(n, 0);
  if (!pairs.empty()) {
    if (auto cycle = FindCycle(stated_nodes, stated); !cycle.empty()) {
      ThrowCycle("relative preference", cycle);
    }
    std::map<std::string, std::vector<std::string>> edges;
    std::vector<std::string> nodes;
    std::set<std::string> mentioned;
    for (const auto& [k, choice] : pairs) {
      const auto& [x, y] = k;
      if (choice.forward) edges[x].push_back(y);
      else edges[y].push_back(x);
      mentioned.insert(x);
      mentioned.insert(y);
    }
    for (const auto& v : rank.values) {
      if (mentioned.count(v)) nodes.push_back(v);
    }
    if (auto cycle = FindCycle(nodes, edges); !cycle.empty()) {
      ThrowCycle("relative preference", cycle);
    }
    auto layers = Layers(nodes, edges);
    int deepest = 0;
    for (const auto& [_, l] : layers) deepest = std::max(deepest, l);
    for (size_t p = 0; p < n; ++p) {
      auto it = layers.find(rank.values[p]);
      layer[p] = it == layers.end() ? deepest + 1 : it->second;
    }
  }

  // 3. Base tier from the latest range action.
  std::vector<int> base(n, 0);
  const PreferenceAction* range = nullptr;
  for (const auto* a : actions) {
    if (IsRangeKind(a->kind)) range = a;
  }
  if (range != nullptr) {
    const double tol = kb.Tolerance(slot.name);
    std::vector<std::optional<double>> keys(n);
    for (size_t p = 0; p < n; ++p) {
      Scalar v = slot.kind == SlotKind::kNumeric
                     ? Scalar(std::stod(rank.values[p]))
                     : Scalar(rank.values[p]);
      keys[p] = kb.OrderKey(slot, v);
    }
    auto x = kb.OrderKey(slot, range->operands[0]);
    if (range->kind == PrefKind::kAround) {
      std::vector<double> in_band;
      std::vector<double> out_band;
      for (const auto& k : keys) {
        if (!k || !x) continue;
        double d = std::fabs(*k - *x);
        (d <= tol ? in_band : out_band).push_back(d);
      }
      std::sort(in_band.begin(), in_band.end());
      in_band.erase(std::unique(in_band.begin(), in_band.end()), in_band.end());
      std::sort(out_band.begin(), out_band.end());
      out_band.erase(std::unique(out_band.begin(), out_band.end()), out_band.end());
      const int t_in = static_cast<int>(in_band.size());
      for (size_t p = 0; p < n; ++p) {
        if (!keys[p] || !x) continue;
        double d = std::fabs(*keys[p] - *x);
        if (d <= tol) {
          base[p] = static_cast<int>(
              std::lower_bound(in_band.begin(), in_band.end(), d) - in_band.begin());
        } else if (tol > 0) {
          base[p] = t_in + static_cast<int>(std::floor((d - tol) / tol));
        } else {
          base[p] = t_in + static_cast<int>(std::lower_bound(out_band.begin(),
                                                              out_band.end(), d) -
                                            out_band.begin());
        }
      }
    } else if (range->kind == PrefKind::kNotAround) {
      for (size_t p = 0; p < n; ++p) {
        base[p] = keys[p] && x && std::fabs(*keys[p] - *x) <= tol ? 1 : 0;
      }
    } else {
      auto hi = kb.OrderKey(slot, range->operands[1]);
      for (size_t p = 0; p < n; ++p) {
        bool inside = keys[p] && x && hi && *keys[p] >= *x && *keys[p] <= *hi;
        bool good = range->kind == PrefKind::kBetween ? inside : !inside;
        base[p] = good ? 0 : 1;
      }
    }
  }

  // 4. Dense rank of (class, layer, base).
  std::vector<std::tuple<int, int, int>> keys(n);
  for (size_t p = 0; p < n; ++p) keys[p] = {cls[p], layer[p], base[p]};
  std::vector<std::tuple<int, int, int>> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (size_t p = 0; p < n; ++p) {
    rank.tiers[p] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), keys[p]) - sorted.begin());
  }
  return rank;
}

Dominance Dominates(const Item& a, const Item& b, std::span<const Dimension> dims,
                    CompositionPolicy policy, const KnowledgeBase& kb) {
  kernels::TierMatrix m(2, dims.size());
  for (size_t k = 0; k < dims.size(); ++k) {
    m.at(0, k) = dims[k].ranks.ItemTier(a, kb);
    m.at(1, k) = dims[k].ranks.ItemTier(b, kb);
  }
  auto composition = policy == CompositionPolicy::kPareto
                         ? kernels::Composition::Pareto(dims.size())
                         : kernels::Composition::Priority(dims.size());
  switch (kernels::Compare(m, 0, 1, composition)) {
    case kernels::Relation::kBetter: return Dominance::kFirst;
    case kernels::Relation::kWorse: return Dominance::kSecond;
    case kernels::Relation::kTie: return Dominance::kTie;
    case kernels::Relation::kIncomparable: return Dominance::kIncomparable;
  }
  return Dominance::kIncomparable;
}

RankingPlan PlanRanking(std::span<const PreferenceAction> prefs,
                        const KnowledgeBase& kb) {
  // Preference-bearing slots in first-mention order.
  std::vector<std::string> bearing;
  auto note = [](std::vector<std::string>& xs, const std::string& s) {
    if (std::find(xs.begin(), xs.end(), s) == xs.end()) xs.push_back(s);
  };
  std::vector<std::string> named;
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& p : prefs) {
    if (!p.slot_level()) {
      note(bearing, p.slot);
      continue;
    }
    for (const auto& s : p.slots) {
      if (s == kAllSlots && kb.FindSlot(s) == nullptr) continue;
      note(named, s);
    }
    if (p.kind == PrefKind::kPreferOver) {
      for (size_t i = 0; i + 1 < p.slots.size(); ++i) {
        if (p.slots[i + 1] == kAllSlots && kb.FindSlot(kAllSlots) == nullptr) break;
        auto& out = edges[p.slots[i]];
        if (std::find(out.begin(), out.end(), p.slots[i + 1]) == out.end()) {
          out.push_back(p.slots[i + 1]);
        }
      }
    }
  }
  if (auto cycle = FindCycle(named, edges); !cycle.empty()) {
    ThrowCycle("slot importance", cycle);
  }
  auto layers = Layers(named, edges);
  int deepest = -1;
  for (const auto& [_, l] : layers) deepest = std::max(deepest, l);

  std::vector<std::pair<int, std::string>> ordered;
  for (const auto& s : named) ordered.emplace_back(layers[s], s);
  for (const auto& s : bearing) {
    if (!layers.count(s)) ordered.emplace_back(deepest + 1, s);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  RankingPlan plan;
  int current = -1;
  for (const auto& [level, s] : ordered) {
    if (level != current) {
      plan.composition.levels.emplace_back();
      current = level;
    }
    plan.composition.levels.back().push_back(static_cast<int>(plan.dims.size()));
    plan.dims.push_back({s, ValueRank(kb, s, prefs)});
  }
  return plan;
}

int BucketOrder::BucketOf(std::string_view id) const {
  for (size_t b = 0; b < buckets.size(); ++b) {
    for (const auto& x : buckets[b]) {
      if (x == id) return static_cast<int>(b);
    }
  }
  return -1;
}

BucketOrder ComputeBucketOrder(const ResultSet& rs,
                               std::span<const PreferenceAction> prefs,
                               const KnowledgeBase& kb, Execution mode) {
  BucketOrder bo;
  bo.ids = rs.ids;
  const size_t n = bo.ids.size();
  RankingPlan plan = PlanRanking(prefs, kb);
  kernels::TierMatrix m(n, plan.dims.size());
  for (size_t i = 0; i < n; ++i) {
    const Item& item = kb.item(bo.ids[i]);
    for (size_t k = 0; k < plan.dims.size(); ++k) {
      m.at(i, k) = plan.dims[k].ranks.ItemTier(item, kb);
    }
  }
  kernels::Buckets buckets;
  if (mode == Execution::kParallel) {
    bo.relation = kernels::parallel::ComputeDominance(m, plan.composition);
    buckets = kernels::parallel::PeelBuckets(bo.relation, n);
  } else {
    bo.relation = kernels::serial::ComputeDominance(m, plan.composition);
    buckets = kernels::serial::PeelBuckets(bo.relation, n);
  }
  for (const auto& bucket : buckets) {
    std::vector<std::string> ids;
    for (size_t i : bucket) ids.push_back(bo.ids[i]);
    bo.buckets.push_back(std::move(ids));
  }
  bo.metrics = ComputePreferenceMetrics(bo);
  return bo;
}

PreferenceMetrics ComputePreferenceMetrics(const BucketOrder& bo) {
  PreferenceMetrics m;
  const size_t n = bo.ids.size();
  const double denom =
      std::max<double>(1.0, static_cast<double>(bo.buckets.size()) - 1.0);
  for (size_t b = 0; b < bo.buckets.size(); ++b) {
    for (const auto& id : bo.buckets[b]) {
      m.score[id] = 1.0 - static_cast<double>(b) / denom;
    }
  }
  for (size_t a = 0; a < n; ++a) {
    int wins = 0;
    if (bo.relation.size() == n * n) {
      for (size_t b = 0; b < n; ++b) wins += bo.relation[a * n + b];
    }
    m.wins[bo.ids[a]] = wins;
  }
  return m;
}

double Entropy(std::span<const int> counts) {
  double total = 0;
  for (int c : counts) total += c;
  if (total <= 0) return 0.0;
  double h = 0;
  for (int c : counts) {
    if (c <= 0) continue;
    double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::string> DiscriminatingSlots(
    const BucketOrder& bo, const KnowledgeBase& kb,
    std::span<const PreferenceAction> active) {
  if (bo.buckets.empty()) return {};
  std::set<std::string> preferred;
  for (const auto& p : active) {
    if (p.slot_level()) {
      for (const auto& s : p.slots) preferred.insert(s);
    } else {
      preferred.insert(p.slot);
    }
  }
  const auto& top = bo.buckets.front();
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& slot : kb.slots()) {
    if (preferred.count(slot.name)) continue;
    std::map<std::string, int> outcomes;
    for (const auto& id : top) {
      const Item& item = kb.item(id);
      const Assignment* a = item.Find(slot.name);
      if (a == nullptr) continue;
      std::string key;
      if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
        std::vector<std::string> sorted = *set;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& l : sorted) key += l + "|";
      } else {
        key = *kb.SingleLabel(item, slot.name);
      }
      ++outcomes[key];
    }
    if (outcomes.size() < 2) continue;
    std::vector<int> counts;
    for (const auto& [_, c] : outcomes) counts.push_back(c);
    std::sort(counts.begin(), counts.end());
    scored.emplace_back(Entropy(counts), slot.name);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<std::string> out;
  for (const auto& [_, s] : scored) out.push_back(s);
  return out;
}

}  // namespace facetalk
