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

#include "facetalk/understanding.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <set>

#include "facetalk/error.h"

namespace facetalk {
namespace {

using Phrase = std::vector<std::string>;

struct Entry {
  std::string slot;
  std::string value;  // empty: slot word
};

constexpr const char* kNumberWords[] = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty"};

const std::set<std::string> kNegations = {"not", "no", "without", "except",
                                          "excluding", "don't", "dont",
                                          "never", "isn't", "aren't"};
const std::set<std::string> kAllWords = {"all", "everything", "anything",
                                         "others", "rest", "else"};

std::optional<double> NumberOf(const std::string& word) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec == std::errc() && ptr == word.data() + word.size()) return v;
  for (size_t i = 0; i < std::size(kNumberWords); ++i) {
    if (word == kNumberWords[i]) return static_cast<double>(i);
  }
  return std::nullopt;
}

class Lexicon {
 public:
  explicit Lexicon(const KnowledgeBase& kb) {
    for (const auto& slot : kb.slots()) {
      AddWord(slot.name, {slot.name, ""});
      if (!slot.unit.empty()) AddWord(slot.unit, {slot.name, ""});
      for (const auto& [label, phrases] : slot.synonyms) {
        if (label != slot.name) continue;
        for (const auto& p : phrases) AddWord(p, {slot.name, ""});
      }
      if (slot.kind == SlotKind::kNumeric) continue;
      for (const auto& label : kb.Domain(slot.name)) {
        AddWord(label, {slot.name, label});
      }
      for (const auto& [label, phrases] : slot.synonyms) {
        if (label == slot.name) continue;
        for (const auto& p : phrases) AddWord(p, {slot.name, label});
      }
    }
  }

  // Longest phrase starting at `pos`; returns its length (0 if none).
  size_t Match(std::span<const std::string> tokens, size_t pos,
               const std::vector<Entry>** entries) const {
    for (size_t len = std::min(longest_, tokens.size() - pos); len > 0; --len) {
      Phrase key(tokens.begin() + pos, tokens.begin() + pos + len);
      if (auto it = entries_.find(key); it != entries_.end()) {
        *entries = &it->second;
        return len;
      }
    }
    return 0;
  }

 private:
  void AddWord(const std::string& surface, const Entry& e) {
    Add(UtteranceTokens(surface), e);
    std::string spaced = surface;
    std::replace(spaced.begin(), spaced.end(), '-', ' ');
    std::replace(spaced.begin(), spaced.end(), '_', ' ');
    Add(UtteranceTokens(spaced), e);
  }

  void Add(Phrase phrase, const Entry& e) {
    if (phrase.empty()) return;
    auto& list = entries_[phrase];
    for (const auto& x : list) {
      if (x.slot == e.slot && x.value == e.value) return;
    }
    list.push_back(e);
    longest_ = std::max(longest_, phrase.size());
  }

  std::map<Phrase, std::vector<Entry>> entries_;
  size_t longest_ = 0;
};

bool Has(std::span<const std::string> tokens, size_t from, size_t to,
         std::string_view word) {
  for (size_t i = from; i < to && i < tokens.size(); ++i) {
    if (tokens[i] == word) return true;
  }
  return false;
}

// Comparison trigger in tokens[from, to); the last one wins. kEq when none.
Op TriggerOp(std::span<const std::string> tokens, size_t from, size_t to) {
  Op op = Op::kEq;
  for (size_t i = from; i < to && i < tokens.size(); ++i) {
    const std::string& w = tokens[i];
    const std::string next = i + 1 < to ? tokens[i + 1] : "";
    if (w == "around" || w == "about" || w == "approximately" ||
        w == "roughly" || w == "near") {
      op = Op::kAround;
    } else if (w == "between") {
      op = Op::kBetween;
    } else if ((w == "more" || w == "greater" || w == "higher") && next == "than") {
      op = Op::kGt;
    } else if ((w == "less" || w == "fewer" || w == "lower") && next == "than") {
      op = Op::kLt;
    } else if (w == "at" && next == "least") {
      op = Op::kGe;
    } else if (w == "at" && next == "most") {
      op = Op::kLe;
    } else if (w == "over" || w == "above") {
      op = Op::kGt;
    } else if (w == "under" || w == "below") {
      op = Op::kLt;
    }
  }
  return op;
}

bool Negated(std::span<const std::string> tokens, size_t from, size_t to) {
  for (size_t i = from; i < to && i < tokens.size(); ++i) {
    if (kNegations.count(tokens[i])) return true;
  }
  return false;
}

const SlotSchema* NumericSlot(const KnowledgeBase& kb, const std::string& name) {
  const SlotSchema* s = kb.FindSlot(name);
  return s && s->kind == SlotKind::kNumeric ? s : nullptr;
}

Scalar ValueOf(const Mention& m, const KnowledgeBase& kb) {
  if (m.kind == Mention::Kind::kNumber) return m.number;
  (void)kb;
  return m.value;
}

bool Valid(const Constraint& c, const KnowledgeBase& kb) {
  try {
    CheckConstraint(c, kb);
    return true;
  } catch (const Error&) {
    return false;
  }
}

bool Valid(const PreferenceAction& p, const KnowledgeBase& kb) {
  try {
    CheckPreference(p, kb);
    return true;
  } catch (const Error&) {
    return false;
  }
}

template <typename T>
void PushUnique(std::vector<T>& xs, T x) {
  if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(std::move(x));
}

}  // namespace

std::vector<std::string> UtteranceTokens(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    size_t b = 0;
    size_t e = word.size();
    auto trim = [](char c) { return c == '-' || c == '\'' || c == '.'; };
    while (b < e && trim(word[b])) ++b;
    while (e > b && trim(word[e - 1])) --e;
    if (e > b) out.push_back(word.substr(b, e - b));
    word.clear();
  };
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '\'' || c == '.' || c >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<Mention> ResolveMentions(std::span<const std::string> tokens,
                                     const KnowledgeBase& kb) {
  Lexicon lexicon(kb);
  std::vector<Mention> out;
  size_t prev_end = 0;
  for (size_t i = 0; i < tokens.size();) {
    const std::vector<Entry>* entries = nullptr;
    size_t len = lexicon.Match(tokens, i, &entries);
    std::optional<double> number = len == 0 ? NumberOf(tokens[i]) : std::nullopt;
    if (len == 0 && !number) {
      ++i;
      continue;
    }
    Mention m;
    m.begin = i;
    m.end = i + (len > 0 ? len : 1);
    m.context_begin = prev_end;
    m.negated = Negated(tokens, prev_end, i);
    if (len > 0) {
      // Entries come in schema order, which is document order.
      for (const auto& e : *entries) m.candidates.emplace_back(e.slot, e.value);
      m.slot = entries->front().slot;
      m.value = entries->front().value;
      m.kind = m.value.empty() ? Mention::Kind::kSlot : Mention::Kind::kValue;
    } else {
      m.kind = Mention::Kind::kNumber;
      m.number = number.value_or(0.0);
      m.value = FormatNumber(m.number);
    }
    out.push_back(std::move(m));
    prev_end = out.back().end;
    i = prev_end;
  }

  // Attach numbers to numeric slots cued nearby.
  std::vector<std::string> numeric;
  for (const auto& s : kb.slots()) {
    if (s.kind == SlotKind::kNumeric) numeric.push_back(s.name);
  }
  for (size_t k = 0; k < out.size(); ++k) {
    Mention& m = out[k];
    if (m.kind != Mention::Kind::kNumber) continue;
    auto cue_at = [&](size_t j) -> const Mention* {
      if (j >= out.size() || out[j].kind != Mention::Kind::kSlot) return nullptr;
      return NumericSlot(kb, out[j].slot) ? &out[j] : nullptr;
    };
    std::string slot;
    // "70 pounds", "between 50 and 80 pounds"
    for (size_t j = k + 1; j < out.size() && slot.empty(); ++j) {
      if (out[j].begin > out[j - 1].end + 1) break;
      if (const Mention* cue = cue_at(j)) slot = cue->slot;
      if (out[j].kind != Mention::Kind::kNumber) break;
    }
    // "price around 70", "stars of at least 3"
    for (size_t j = k; j-- > 0 && slot.empty();) {
      if (m.begin > out[j].end + 3) break;
      if (const Mention* cue = cue_at(j)) slot = cue->slot;
      if (out[j].kind != Mention::Kind::kNumber) break;
    }
    if (slot.empty() && numeric.size() == 1) slot = numeric.front();
    m.slot = slot;
    if (!slot.empty()) m.candidates = {{slot, m.value}};
  }
  return out;
}

std::vector<DialogueAct> ParseUtterance(std::string_view text,
                                        const KnowledgeBase& kb, double conf,
                                        const SystemAct* last_act) {
  if (!(conf >= 0.0 && conf <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "confidence must lie in [0, 1], got " + FormatNumber(conf));
  }
  const auto tokens = UtteranceTokens(text);
  auto single = [&](UserActType type) {
    DialogueAct act;
    act.type = type;
    act.confidence = conf;
    return std::vector<DialogueAct>{act};
  };
  if (tokens.empty()) return single(UserActType::kNull);
  if (Has(tokens, 0, tokens.size(), "bye") || Has(tokens, 0, tokens.size(), "goodbye")) {
    return single(UserActType::kBye);
  }

  auto mentions = ResolveMentions(tokens, kb);
  // Bare numbers answer the numeric slot just requested.
  if (last_act && last_act->type == SystemActType::kRequest &&
      NumericSlot(kb, last_act->slot)) {
    for (auto& m : mentions) {
      if (m.kind == Mention::Kind::kNumber && m.slot.empty()) {
        m.slot = last_act->slot;
        m.candidates = {{m.slot, m.value}};
      }
    }
  }

  bool any_value = false;
  for (const auto& m : mentions) {
    if (m.kind != Mention::Kind::kSlot && !m.slot.empty()) any_value = true;
  }
  if (!any_value) {
    const std::string& first = tokens.front();
    if (first == "yes" || first == "yeah" || first == "yep" || first == "sure" ||
        first == "correct" || first == "right") {
      return single(UserActType::kAffirm);
    }
    if (first == "no" || first == "nope" || first == "wrong") {
      return single(UserActType::kNegate);
    }
  }

  const bool asked_importance =
      last_act && last_act->type == SystemActType::kAskImportance;
  const std::string soft_slot =
      last_act && last_act->type == SystemActType::kRequest && last_act->soft
          ? last_act->slot
          : std::string();
  const bool prefer = Has(tokens, 0, tokens.size(), "prefer") ||
                      Has(tokens, 0, tokens.size(), "rather");
  const bool important = Has(tokens, 0, tokens.size(), "important") ||
                         Has(tokens, 0, tokens.size(), "matters") ||
                         Has(tokens, 0, tokens.size(), "matter");

  std::vector<Constraint> constraints;
  std::vector<PreferenceAction> preferences;
  std::vector<std::string> cues;
  std::vector<const Mention*> consumed_cues;

  // Pair up "between X and Y".
  std::vector<bool> used(mentions.size(), false);
  for (size_t k = 0; k < mentions.size(); ++k) {
    const Mention& m = mentions[k];
    if (used[k] || m.kind == Mention::Kind::kSlot) continue;
    if (m.slot.empty()) continue;
    const SlotSchema& slot = kb.slot(m.slot);
    auto op = TriggerOp(tokens, m.context_begin, m.begin);
    // In preference talk "over" separates alternatives.
    if (prefer && op == Op::kGt && Has(tokens, m.context_begin, m.begin, "over")) {
      op = Op::kEq;
    }
    std::optional<Scalar> upper;
    if (op == Op::kBetween) {
      size_t j = k + 1;
      if (j < mentions.size() && mentions[j].slot == m.slot &&
          mentions[j].kind == m.kind && Has(tokens, m.end, mentions[j].begin, "and")) {
        upper = ValueOf(mentions[j], kb);
        used[j] = true;
      } else {
        op = Op::kEq;
      }
    }
    used[k] = true;
    for (size_t j = 0; j < mentions.size(); ++j) {
      if (mentions[j].kind == Mention::Kind::kSlot && mentions[j].slot == m.slot &&
          (mentions[j].end == m.begin || mentions[j].begin == m.end ||
           mentions[j].begin == m.end + 1)) {
        consumed_cues.push_back(&mentions[j]);
      }
    }

    const bool soft = (!soft_slot.empty() && m.slot == soft_slot) ||
                      (prefer && !Has(tokens, 0, tokens.size(), "over"));
    if (soft) {
      PreferenceAction p;
      p.slot = m.slot;
      if (op == Op::kAround) {
        p.kind = m.negated ? PrefKind::kNotAround : PrefKind::kAround;
        p.operands = {ValueOf(m, kb)};
      } else if (op == Op::kBetween) {
        p.kind = m.negated ? PrefKind::kNotBetween : PrefKind::kBetween;
        p.operands = {ValueOf(m, kb), *upper};
      } else {
        p.kind = m.negated ? PrefKind::kWorst : PrefKind::kBest;
        p.operands = {ValueOf(m, kb)};
      }
      if (Valid(p, kb)) PushUnique(preferences, p);
      continue;
    }

    Constraint c;
    c.slot = m.slot;
    c.value = ValueOf(m, kb);
    c.op = op;
    if (c.op == Op::kBetween) c.upper = upper;
    if (!Applicable(c.op, slot)) c.op = Op::kEq;
    if (m.negated) c = Negate(c);
    if (Valid(c, kb)) PushUnique(constraints, c);
  }

  for (const auto& m : mentions) {
    if (m.kind != Mention::Kind::kSlot) continue;
    bool consumed = std::any_of(consumed_cues.begin(), consumed_cues.end(),
                                [&](const Mention* c) { return c == &m; });
    if (!consumed) PushUnique(cues, m.slot);
  }

  // "prefer A over B" on values of one slot, or on slots.
  const auto over_at = std::find(tokens.begin(), tokens.end(), "over");
  if (prefer && over_at != tokens.end()) {
    const size_t over = static_cast<size_t>(over_at - tokens.begin());
    std::vector<const Mention*> left;
    std::vector<const Mention*> right;
    for (const auto& m : mentions) {
      if (m.slot.empty()) continue;
      (m.begin < over ? left : right).push_back(&m);
    }
    auto only = [](const std::vector<const Mention*>& xs, Mention::Kind kind) {
      return !xs.empty() && std::all_of(xs.begin(), xs.end(), [&](const Mention* m) {
        return m->kind == kind;
      });
    };
    if (only(left, Mention::Kind::kSlot)) {
      PreferenceAction p;
      p.kind = PrefKind::kPreferOver;
      for (const auto* m : left) PushUnique(p.slots, m->slot);
      for (const auto* m : right) {
        if (m->kind == Mention::Kind::kSlot) PushUnique(p.slots, m->slot);
      }
      bool rest = false;
      for (size_t i = over + 1; i < tokens.size(); ++i) rest |= kAllWords.count(tokens[i]) > 0;
      if (rest) p.slots.emplace_back(kAllSlots);
      if (p.slots.size() >= 2 && Valid(p, kb)) PushUnique(preferences, p);
      cues.clear();
    } else if (!left.empty() && !right.empty() &&
               left.back()->kind == Mention::Kind::kValue &&
               right.front()->kind == Mention::Kind::kValue &&
               left.back()->slot == right.front()->slot) {
      PreferenceAction p;
      p.kind = PrefKind::kRelative;
      p.slot = left.back()->slot;
      p.operands = {left.back()->value, right.front()->value};
      if (Valid(p, kb)) PushUnique(preferences, p);
      // The values were read as constraints above; they are not.
      std::erase_if(constraints, [&](const Constraint& c) { return c.slot == p.slot; });
    }
  }

  const bool slot_talk = prefer || important || asked_importance;
  if (slot_talk && !cues.empty()) {
    PreferenceAction p;
    p.kind = cues.size() >= 2 ? PrefKind::kPreferSet : PrefKind::kPreferOver;
    p.slots = cues;
    if (cues.size() == 1) p.slots.emplace_back(kAllSlots);
    if (Valid(p, kb)) PushUnique(preferences, p);
  }

  std::vector<DialogueAct> acts;
  if (!constraints.empty()) {
    DialogueAct act;
    act.type = UserActType::kInformConstraints;
    act.constraints = std::move(constraints);
    act.confidence = conf;
    acts.push_back(std::move(act));
  }
  if (!preferences.empty()) {
    DialogueAct act;
    bool slot_level = std::any_of(preferences.begin(), preferences.end(),
                                  [](const auto& p) { return p.slot_level(); });
    act.type = asked_importance && slot_level ? UserActType::kAnswerImportance
                                              : UserActType::kInformPreferences;
    act.preferences = std::move(preferences);
    act.confidence = conf;
    acts.push_back(std::move(act));
  }
  if (acts.empty()) {
    for (const char* w : {"hello", "hi", "hey"}) {
      if (Has(tokens, 0, tokens.size(), w)) return single(UserActType::kHello);
    }
    return single(UserActType::kNull);
  }
  return acts;
}

}  // namespace facetalk
