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

#include "facetalk/dialogue.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "facetalk/error.h"

namespace facetalk {
namespace {

bool Contains(const std::vector<std::string>& xs, std::string_view x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::vector<std::string> StringList(const nlohmann::json& js, const char* key) {
  std::vector<std::string> out;
  if (auto it = js.find(key); it != js.end()) {
    if (!it->is_array()) {
      throw Error(ErrorCode::kParse, std::string("'") + key + "' must be an array");
    }
    for (const auto& x : *it) out.push_back(x.get<std::string>());
  }
  return out;
}

// Outcome key of an item on a slot; multivalued sets are one outcome.
std::optional<std::string> OutcomeOf(const Item& item, const SlotSchema& slot,
                                     const KnowledgeBase& kb) {
  const Assignment* a = item.Find(slot.name);
  if (a == nullptr) return std::nullopt;
  if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
    std::vector<std::string> sorted = *set;
    std::sort(sorted.begin(), sorted.end());
    std::string key;
    for (const auto& l : sorted) key += l + "|";
    return key;
  }
  return kb.SingleLabel(item, slot.name);
}

std::vector<int> OutcomeCounts(std::span<const std::string> ids,
                               const SlotSchema& slot, const KnowledgeBase& kb) {
  std::map<std::string, int> outcomes;
  for (const auto& id : ids) {
    if (auto key = OutcomeOf(kb.item(id), slot, kb)) ++outcomes[*key];
  }
  std::vector<int> counts;
  for (const auto& [_, c] : outcomes) counts.push_back(c);
  std::sort(counts.begin(), counts.end());
  return counts;
}

double BeliefEntropy(const SlotBelief& sb) {
  double h = 0;
  if (sb.multivalued) {
    for (double p : sb.probs) {
      for (double q : {p, 1.0 - p}) {
        if (q > 0) h -= q * std::log2(q);
      }
    }
    return h;
  }
  for (double p : sb.probs) {
    if (p > 0) h -= p * std::log2(p);
  }
  return h;
}

bool IsRangeConstraint(Op op) {
  return op == Op::kAround || op == Op::kNotAround || op == Op::kBetween ||
         op == Op::kNotBetween;
}

void Admit(DialogueState& state, const Constraint& c, int turn,
           const KnowledgeBase& kb, StateDelta& delta) {
  const SlotSchema& slot = kb.slot(c.slot);
  auto replaced = [&](const StoredConstraint& s) {
    if (s.constraint.slot != c.slot) return false;
    if (slot.single_valued()) return s.turn < turn;
    return s.constraint.value == c.value &&
           ((s.constraint.op == Op::kEq && c.op == Op::kNeq) ||
            (s.constraint.op == Op::kNeq && c.op == Op::kEq));
  };
  for (const auto& s : state.constraints) {
    if (replaced(s)) delta.removed_constraints.push_back(s.constraint);
  }
  std::erase_if(state.constraints, replaced);
  std::erase_if(state.pending, [&](const StoredConstraint& s) {
    return s.constraint == c;
  });
  for (const auto& s : state.constraints) {
    if (s.constraint == c) return;
  }
  state.constraints.push_back({c, turn});
  delta.added_constraints.push_back(c);
}

bool AcceptsPreference(const DialogueState& state, const PreferenceAction& p,
                       const KnowledgeBase& kb) {
  DialogueState trial;
  trial.constraints = state.constraints;
  trial.preferences = state.preferences;
  trial.preferences.push_back(p);
  try {
    CheckPreference(p, kb);
    PlanRanking(EffectivePreferences(trial, kb), kb);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string Humanize(std::string_view label) {
  std::string out(label);
  std::replace(out.begin(), out.end(), '-', ' ');
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string Capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string CountWord(int n) {
  static const char* kWords[] = {"zero", "one", "two",   "three", "four", "five",
                                 "six",  "seven", "eight", "nine",  "ten"};
  return n >= 0 && n <= 10 ? kWords[n] : std::to_string(n);
}

// "a, b, or c" / "a and b"
std::string JoinList(const std::vector<std::string>& xs, const std::string& last) {
  std::string out;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) {
      if (i + 1 == xs.size()) {
        out += xs.size() > 2 ? ", " + last + " " : " " + last + " ";
      } else {
        out += ", ";
      }
    }
    out += xs[i];
  }
  return out;
}

std::string ItemName(const Item& item) {
  return item.name.empty() ? item.id : item.name;
}

std::string ValueText(const Item& item, const SlotSchema& slot,
                      const KnowledgeBase& kb) {
  const Assignment* a = item.Find(slot.name);
  if (a == nullptr) return "unknown";
  if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
    std::vector<std::string> words;
    for (const auto& l : *set) words.push_back(Humanize(l));
    return JoinList(words, "and");
  }
  std::string label = *kb.SingleLabel(item, slot.name);
  if (slot.kind == SlotKind::kNumeric) {
    return slot.unit.empty() ? label : label + " " + slot.unit;
  }
  if (slot.kind == SlotKind::kHierarchical) return Capitalize(Humanize(label));
  return Humanize(label);
}

// Position on the slot's order used for comparative markers.
std::optional<double> CompareKey(const Item& item, const SlotSchema& slot,
                                 const KnowledgeBase& kb) {
  const Assignment* a = item.Find(slot.name);
  if (a == nullptr) return std::nullopt;
  if (const auto* set = std::get_if<std::vector<std::string>>(a)) {
    return static_cast<double>(set->size());
  }
  if (!slot.ordinal) return std::nullopt;
  if (const auto* d = std::get_if<double>(a)) return *d;
  return kb.OrderKey(slot, std::get<std::string>(*a));
}

}  // namespace

PolicyConfig PolicyConfigFromJson(const nlohmann::json& js) {
  if (!js.is_object()) throw Error(ErrorCode::kParse, "policy config must be an object");
  static const std::set<std::string> kKeys = {
      "informable_threshold", "compare_threshold", "fill_threshold",
      "mandatory_slots",      "preference_slots",  "system_name",
      "item_noun",            "item_noun_plural"};
  for (const auto& [key, _] : js.items()) {
    if (!kKeys.count(key)) {
      throw Error(ErrorCode::kParse, "unknown policy config key '" + key + "'");
    }
  }
  PolicyConfig c;
  try {
    c.informable_threshold = js.value("informable_threshold", c.informable_threshold);
    c.compare_threshold = js.value("compare_threshold", c.compare_threshold);
    c.fill_threshold = js.value("fill_threshold", c.fill_threshold);
    c.system_name = js.value("system_name", c.system_name);
    c.item_noun = js.value("item_noun", c.item_noun);
    c.item_noun_plural = js.value("item_noun_plural", c.item_noun + "s");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("policy config: ") + e.what());
  }
  c.mandatory_slots = StringList(js, "mandatory_slots");
  c.preference_slots = StringList(js, "preference_slots");
  return c;
}

nlohmann::json PolicyConfigToJson(const PolicyConfig& c) {
  return {{"informable_threshold", c.informable_threshold},
          {"compare_threshold", c.compare_threshold},
          {"fill_threshold", c.fill_threshold},
          {"mandatory_slots", c.mandatory_slots},
          {"preference_slots", c.preference_slots},
          {"system_name", c.system_name},
          {"item_noun", c.item_noun},
          {"item_noun_plural", c.item_noun_plural}};
}

PolicyConfig LoadPolicyConfig(const std::string& path) {
  auto text = ReadFile(path);
  nlohmann::json js;
  try {
    js = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("policy config: " + std::string(e.what()), e.byte);
  }
  return PolicyConfigFromJson(js);
}

void ValidatePolicyConfig(const PolicyConfig& c, const KnowledgeBase& kb) {
  std::vector<std::string> findings;
  if (c.informable_threshold < 0) findings.push_back("informable_threshold must be >= 0");
  if (c.compare_threshold < 1) findings.push_back("compare_threshold must be >= 1");
  if (!(c.fill_threshold > 0 && c.fill_threshold <= 1)) {
    findings.push_back("fill_threshold must lie in (0, 1]");
  }
  for (const auto* list : {&c.mandatory_slots, &c.preference_slots}) {
    for (const auto& s : *list) {
      if (!kb.FindSlot(s)) findings.push_back("unknown slot '" + s + "'");
    }
  }
  if (!findings.empty()) throw ValidationError(findings);
}

nlohmann::json StateDeltaJson(const StateDelta& d, const DialogueState& state) {
  auto render_cs = [](const std::vector<Constraint>& cs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : cs) out.push_back(RenderConstraint(c));
    return out;
  };
  auto render_ps = [](const std::vector<PreferenceAction>& ps) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : ps) out.push_back(RenderPreference(p));
    return out;
  };
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& b : state.buckets.buckets) sizes.push_back(b.size());
  return {{"new_constraints", render_cs(d.added_constraints)},
          {"removed_constraints", render_cs(d.removed_constraints)},
          {"pending_constraints", render_cs(d.pending_constraints)},
          {"new_preferences", render_ps(d.added_preferences)},
          {"rejected_preferences", render_ps(d.rejected_preferences)},
          {"unsatisfiable", d.unsatisfiable},
          {"result_count", state.result.ids.size()},
          {"bucket_sizes", sizes}};
}

DialogueState InitialState(const KnowledgeBase& kb) {
  DialogueState state;
  state.belief = InitBelief(kb);
  RefreshResults(state, kb);
  return state;
}

StateDelta ApplyUserActs(DialogueState& state, std::span<const DialogueAct> acts,
                         const KnowledgeBase& kb, const PolicyConfig& config) {
  StateDelta delta;
  state.turn += 1;
  state.unsatisfiable = false;
  state.relax_hint.clear();
  const int turn = state.turn;
  const BeliefState prior = state.belief;
  const bool confirming = state.last_system_act &&
                          state.last_system_act->type == SystemActType::kConfirm &&
                          !state.pending.empty();
  for (const auto& act : acts) {
    switch (act.type) {
      case UserActType::kInformConstraints: {
        auto update = ApplyConstraints(state.belief, act.constraints, act.confidence,
                                       kb, turn);
        state.belief = std::move(update.belief);
        for (const auto& c : act.constraints) {
          const SlotSchema& slot = kb.slot(c.slot);
          if (slot.single_valued()) {
            auto mask = ConsistencyMask(c, kb);
            if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; })) {
              state.unsatisfiable = true;
              state.relax_hint = c.slot;
              continue;
            }
          }
          double support = ConstraintSupport(prior, c, act.confidence, kb);
          if (support >= config.fill_threshold) {
            Admit(state, c, turn, kb, delta);
          } else {
            state.pending.push_back({c, turn});
            delta.pending_constraints.push_back(c);
          }
        }
        break;
      }
      case UserActType::kInformPreferences:
      case UserActType::kAnswerImportance:
        for (auto p : act.preferences) {
          p.turn = turn;
          if (AcceptsPreference(state, p, kb)) {
            state.preferences.push_back(p);
            delta.added_preferences.push_back(p);
          } else {
            delta.rejected_preferences.push_back(p);
          }
        }
        break;
      case UserActType::kAffirm:
        if (confirming && !state.pending.empty()) {
          StoredConstraint s = state.pending.front();
          state.pending.erase(state.pending.begin());
          Admit(state, s.constraint, turn, kb, delta);
        }
        break;
      case UserActType::kNegate:
        if (confirming && !state.pending.empty()) {
          state.pending.erase(state.pending.begin());
        }
        break;
      case UserActType::kBye:
        state.bye = true;
        break;
      case UserActType::kHello:
      case UserActType::kNull:
        break;
    }
  }
  RefreshResults(state, kb);
  if (state.result.ids.empty() && state.relax_hint.empty() &&
      !state.constraints.empty()) {
    state.relax_hint = state.constraints.back().constraint.slot;
  }
  delta.unsatisfiable = state.unsatisfiable;
  return delta;
}

void RefreshResults(DialogueState& state, const KnowledgeBase& kb, Execution mode) {
  std::vector<Constraint> cs;
  for (const auto& s : state.constraints) cs.push_back(s.constraint);
  state.result = Filter(kb, cs, mode);
  state.buckets =
      ComputeBucketOrder(state.result, EffectivePreferences(state, kb), kb, mode);
}

std::vector<PreferenceAction> EffectivePreferences(const DialogueState& state,
                                                   const KnowledgeBase& kb) {
  std::vector<PreferenceAction> out = state.preferences;
  std::vector<std::string> promoted;
  std::set<std::string> valued;
  for (const auto& p : state.preferences) {
    if (!p.slot_level()) {
      valued.insert(p.slot);
      continue;
    }
    for (const auto& s : p.slots) {
      if (kb.FindSlot(s) && !Contains(promoted, s)) promoted.push_back(s);
    }
  }
  for (const auto& slot : promoted) {
    if (valued.count(slot)) continue;
    for (const auto& s : state.constraints) {
      const Constraint& c = s.constraint;
      if (c.slot != slot || !IsRangeConstraint(c.op)) continue;
      PreferenceAction p;
      p.slot = slot;
      p.turn = s.turn;
      p.operands = {c.value};
      if (c.upper) p.operands.push_back(*c.upper);
      switch (c.op) {
        case Op::kAround: p.kind = PrefKind::kAround; break;
        case Op::kNotAround: p.kind = PrefKind::kNotAround; break;
        case Op::kBetween: p.kind = PrefKind::kBetween; break;
        default: p.kind = PrefKind::kNotBetween; break;
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<SlotFeatures> PolicyFeatures(const DialogueState& state,
                                         const KnowledgeBase& kb,
                                         const PolicyConfig& config) {
  const auto top = TopHypothesis(state.belief, config.fill_threshold);
  std::set<std::string> stored;
  for (const auto& s : state.constraints) stored.insert(s.constraint.slot);
  for (const auto& p : state.preferences) {
    if (!p.slot_level()) stored.insert(p.slot);
  }
  const auto& ids = state.result.ids;
  std::vector<SlotFeatures> out;
  for (const auto& slot : kb.slots()) {
    SlotFeatures f;
    f.slot = slot.name;
    f.belief_entropy = BeliefEntropy(state.belief.at(slot.name));
    auto counts = OutcomeCounts(ids, slot, kb);
    f.value_entropy = Entropy(counts);
    if (!ids.empty()) {
      int modal = counts.empty() ? 0 : counts.back();
      f.reduction = 1.0 - static_cast<double>(modal) / static_cast<double>(ids.size());
    }
    const Hypothesis& h = top.at(slot.name);
    f.filled = h.kind != Hypothesis::Kind::kUndecided || stored.count(slot.name) > 0;
    out.push_back(std::move(f));
  }
  return out;
}

SystemAct SelectAction(const DialogueState& state, const KnowledgeBase& kb,
                       const PolicyConfig& config) {
  SystemAct act;
  const auto& last = state.last_system_act;
  if (state.turn == 0) {
    act.type = SystemActType::kGreet;
    return act;
  }
  if (state.bye) {
    act.type = SystemActType::kGoodbye;
    return act;
  }
  const int results = static_cast<int>(state.result.ids.size());
  if (state.unsatisfiable || results == 0) {
    act.type = SystemActType::kInformCount;
    act.count = results;
    act.hint = state.relax_hint;
    return act;
  }
  if (!state.pending.empty()) {
    act.type = SystemActType::kConfirm;
    act.constraint = state.pending.front().constraint;
    return act;
  }
  if (results > config.informable_threshold) {
    auto features = PolicyFeatures(state, kb, config);
    const SlotFeatures* best = nullptr;
    for (const auto& slot : config.mandatory_slots) {
      // Asking the same question twice in a row would stall the dialogue.
      if (last && last->type == SystemActType::kRequest && last->slot == slot) continue;
      for (const auto& f : features) {
        if (f.slot != slot || f.filled) continue;
        if (best == nullptr || f.reduction > best->reduction) best = &f;
      }
    }
    if (best != nullptr) {
      act.type = SystemActType::kRequest;
      act.slot = best->slot;
      act.soft = Contains(config.preference_slots, best->slot);
      return act;
    }
  }
  const auto& first =
      state.buckets.buckets.empty() ? std::vector<std::string>{} : state.buckets.buckets.front();
  const bool asked = last && last->type == SystemActType::kAskImportance;
  if (static_cast<int>(first.size()) > config.compare_threshold && !asked) {
    auto slots = DiscriminatingSlots(state.buckets, kb, EffectivePreferences(state, kb));
    if (!slots.empty()) {
      if (slots.size() > 3) slots.resize(3);
      std::sort(slots.begin(), slots.end(), [&](const auto& a, const auto& b) {
        return kb.SlotPosition(a) < kb.SlotPosition(b);
      });
      act.type = SystemActType::kAskImportance;
      act.slots = std::move(slots);
      return act;
    }
  }
  act.type = SystemActType::kInformCompare;
  for (size_t i = 0; i < first.size() && i < 3; ++i) act.items.push_back(first[i]);
  act.aspects = CompareAspects(state, kb, config);
  return act;
}

std::vector<std::string> CompareAspects(const DialogueState& state,
                                        const KnowledgeBase& kb,
                                        const PolicyConfig& config) {
  (void)config;
  std::vector<std::string> named;
  auto note = [&](const std::string& s) {
    if (kb.FindSlot(s) && !Contains(named, s)) named.push_back(s);
  };
  for (const auto& p : state.preferences) {
    if (p.slot_level()) {
      for (const auto& s : p.slots) note(s);
    }
  }
  for (const auto& p : state.preferences) {
    if (!p.slot_level()) note(p.slot);
  }
  for (const auto& s : state.constraints) note(s.constraint.slot);
  if (named.size() >= 2) return named;

  std::vector<std::pair<double, std::string>> scored;
  for (const auto& slot : kb.slots()) {
    scored.emplace_back(Entropy(OutcomeCounts(state.result.ids, slot, kb)), slot.name);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [_, s] : scored) {
    if (named.size() >= 3) break;
    note(s);
  }
  return named;
}

const char* MarkerName(Marker m) {
  switch (m) {
    case Marker::kNone: return "none";
    case Marker::kMin: return "min";
    case Marker::kMax: return "max";
    case Marker::kMid: return "mid";
    case Marker::kEqual: return "equal";
  }
  return "none";
}

CompareSummary SummarizeCompare(std::span<const std::string> ids,
                                std::span<const std::string> aspects,
                                const KnowledgeBase& kb) {
  if (ids.empty() || ids.size() > 3) {
    throw Error(ErrorCode::kInvalidArgument, "compare needs 1 to 3 items");
  }
  CompareSummary out;
  out.count = static_cast<int>(ids.size());
  for (const auto& a : aspects) {
    if (kb.slot(a).kind == SlotKind::kHierarchical) {
      out.group_slot = a;
      break;
    }
  }
  for (const auto& id : ids) {
    const Item& item = kb.item(id);
    ItemSummary s;
    s.id = item.id;
    s.name = ItemName(item);
    if (!out.group_slot.empty()) {
      s.group = ValueText(item, kb.slot(out.group_slot), kb);
      auto it = std::find_if(out.groups.begin(), out.groups.end(),
                             [&](const auto& g) { return g.first == s.group; });
      if (it == out.groups.end()) {
        out.groups.emplace_back(s.group, 1);
      } else {
        ++it->second;
      }
    }
    out.items.push_back(std::move(s));
  }
  for (const auto& a : aspects) {
    const SlotSchema& slot = kb.slot(a);
    std::vector<std::optional<double>> keys;
    std::vector<std::string> texts;
    for (const auto& id : ids) {
      const Item& item = kb.item(id);
      keys.push_back(CompareKey(item, slot, kb));
      texts.push_back(ValueText(item, slot, kb));
    }
    const bool all_equal = std::all_of(texts.begin(), texts.end(),
                                       [&](const auto& t) { return t == texts.front(); });
    const bool ordered = std::all_of(keys.begin(), keys.end(),
                                     [](const auto& k) { return k.has_value(); });
    double lo = 0;
    double hi = 0;
    if (ordered) {
      lo = hi = *keys.front();
      for (const auto& k : keys) {
        lo = std::min(lo, *k);
        hi = std::max(hi, *k);
      }
    }
    for (size_t i = 0; i < ids.size(); ++i) {
      AspectValue v{a, texts[i], Marker::kNone};
      if (ids.size() > 1) {
        if (all_equal || (ordered && lo == hi)) {
          v.marker = Marker::kEqual;
        } else if (ordered) {
          v.marker = *keys[i] == lo ? Marker::kMin
                     : *keys[i] == hi ? Marker::kMax
                                      : Marker::kMid;
        }
      }
      out.items[i].aspects.push_back(std::move(v));
    }
  }
  return out;
}

std::string TemplateSet::ToText() const {
  std::string out;
  for (const auto& [key, body] : templates_) out += key + ": " + body + "\n";
  return out;
}

TemplateSet TemplateSet::Parse(std::string_view text) {
  TemplateSet set;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "template line " + std::to_string(number) + " lacks 'key:'");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, colon));
    std::string body = trim(line.substr(colon + 1));
    if (key.empty()) {
      throw Error(ErrorCode::kParse,
                  "template line " + std::to_string(number) + " has an empty key");
    }
    set.templates_[key] = body;
  }
  return set;
}

TemplateSet TemplateSet::Load(const std::string& path) { return Parse(ReadFile(path)); }

const std::string* TemplateSet::Find(std::string_view key) const {
  auto it = templates_.find(key);
  return it == templates_.end() ? nullptr : &it->second;
}

const std::string& TemplateSet::Get(std::string_view key) const {
  if (const auto* t = Find(key)) return *t;
  throw Error(ErrorCode::kGeneration, "missing template '" + std::string(key) + "'");
}

std::string FillTemplate(std::string_view key, const std::string& text,
                         const std::map<std::string, std::string>& values) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') {
      out.push_back(text[i]);
      continue;
    }
    auto close = text.find('}', i);
    if (close == std::string::npos) {
      throw Error(ErrorCode::kGeneration,
                  "unterminated placeholder in template '" + std::string(key) + "'");
    }
    std::string name = text.substr(i + 1, close - i - 1);
    auto it = values.find(name);
    if (it == values.end()) {
      throw Error(ErrorCode::kGeneration, "unresolved placeholder '{" + name +
                                              "}' in template '" + std::string(key) + "'");
    }
    out += it->second;
    i = close;
  }
  return out;
}

namespace {

std::string Fill(const TemplateSet& t, const std::string& key,
                 const std::map<std::string, std::string>& values) {
  return FillTemplate(key, t.Get(key), values);
}

// Most specific template first: "<base>.<slot>.<marker>" and so on.
std::string FillFirst(const TemplateSet& t, const std::vector<std::string>& keys,
                      const std::map<std::string, std::string>& values) {
  for (const auto& k : keys) {
    if (const auto* text = t.Find(k)) return FillTemplate(k, *text, values);
  }
  return Fill(t, keys.back(), values);
}

std::string CompareText(const SystemAct& act, const GenerationContext& ctx) {
  const auto& t = ctx.templates;
  auto summary = SummarizeCompare(act.items, act.aspects, ctx.kb);
  std::vector<std::string> sentences;
  const std::string noun =
      summary.count == 1 ? ctx.config.item_noun : ctx.config.item_noun_plural;
  sentences.push_back(FillFirst(
      t, {summary.count == 1 ? "compare.lead.one" : "compare.lead", "compare.lead"},
      {{"count", std::to_string(summary.count)}, {"noun", noun}}));
  if (summary.count > 1 && !summary.group_slot.empty()) {
    if (summary.groups.size() == 1) {
      sentences.push_back(
          Fill(t, "compare.group.all", {{"group", summary.groups.front().first}}));
    } else {
      std::vector<std::string> parts;
      for (size_t g = 0; g < summary.groups.size(); ++g) {
        const auto& [group, n] = summary.groups[g];
        std::map<std::string, std::string> v = {
            {"count", CountWord(n)},
            {"Count", Capitalize(CountWord(n))},
            {"be", n == 1 ? "is" : "are"},
            {"group", group}};
        parts.push_back(Fill(t, g == 0 ? "compare.group.head" : "compare.group.tail", v));
      }
      sentences.push_back(JoinList(parts, "and") + ".");
    }
  }
  for (const auto& item : summary.items) {
    std::vector<std::string> phrases;
    for (const auto& a : item.aspects) {
      if (a.slot == summary.group_slot) continue;
      if (a.marker == Marker::kEqual) continue;
      const std::string marker = MarkerName(a.marker);
      phrases.push_back(FillFirst(
          t,
          {"compare.aspect." + a.slot + "." + marker, "compare.aspect." + marker},
          {{"slot", Humanize(a.slot)}, {"value", a.value}}));
    }
    std::map<std::string, std::string> v = {{"name", item.name},
                                            {"group", item.group},
                                            {"aspects", JoinList(phrases, "and")}};
    std::string key = phrases.empty() ? "compare.item.plain" : "compare.item";
    if (summary.group_slot.empty()) key += ".nogroup";
    sentences.push_back(Fill(t, key, v));
  }
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += " ";
    out += s;
  }
  return out;
}

}  // namespace

std::string GenerateText(const SystemAct& act, const GenerationContext& ctx) {
  const auto& t = ctx.templates;
  std::map<std::string, std::string> v = {{"system_name", ctx.config.system_name},
                                          {"noun", ctx.config.item_noun},
                                          {"nouns", ctx.config.item_noun_plural}};
  switch (act.type) {
    case SystemActType::kGreet:
      return Fill(t, "greet", v);
    case SystemActType::kRequest:
      v["slot"] = Humanize(act.slot);
      return FillFirst(t, {"request." + act.slot, "request"}, v);
    case SystemActType::kAskImportance: {
      std::vector<std::string> names;
      for (const auto& s : act.slots) names.push_back(Humanize(s));
      v["slots"] = JoinList(names, "or");
      return Fill(t, "ask_importance", v);
    }
    case SystemActType::kInformCount: {
      v["count"] = std::to_string(act.count);
      v["nouns"] = act.count == 1 ? ctx.config.item_noun : ctx.config.item_noun_plural;
      std::string text = Fill(t, act.count == 0 ? "inform_count.none" : "inform_count", v);
      if (!act.hint.empty()) {
        v["slot"] = Humanize(act.hint);
        text += " " + Fill(t, "inform_count.hint", v);
      }
      return text;
    }
    case SystemActType::kConfirm:
      v["constraint"] = act.constraint ? RenderConstraint(*act.constraint) : "";
      return Fill(t, "confirm", v);
    case SystemActType::kGoodbye:
      return Fill(t, "goodbye", v);
    case SystemActType::kInformCompare:
      if (act.items.empty()) {
        throw Error(ErrorCode::kGeneration, "inform_compare without items");
      }
      return CompareText(act, ctx);
  }
  throw Error(ErrorCode::kGeneration, "unknown system act");
}

}  // namespace facetalk
