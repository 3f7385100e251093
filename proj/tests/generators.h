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

// Hand-rolled random generators for property tests.

#ifndef FACETALK_TESTS_GENERATORS_H_
#define FACETALK_TESTS_GENERATORS_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"
#include "facetalk/preference.h"

namespace facetalk::testing {

using Rng = std::mt19937;

inline int Uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool Coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

template <typename T>
const T& Pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<size_t>(Uniform(rng, 0, static_cast<int>(xs.size()) - 1))];
}

inline std::vector<std::string> SampleLabels(Rng& rng, int count) {
  static const std::vector<std::string> kPool = {
      "red",  "green",     "blue",   "very-good", "two words", "x1",
      "a_b",  "it's",      "deep",   "wide",      "cheap",     "moderate",
      "zeta", "b-side",    "quiet",  "loud"};
  std::vector<std::string> pool = kPool;
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<size_t>(count));
  return pool;
}

struct KbShape {
  int max_items = 12;
  int min_slots = 2;
  int max_slots = 5;
  double missing = 0.15;
};

// A valid KB with slots s0..sk of random kinds and random assignments.
inline KnowledgeBase RandomKb(Rng& rng, const KbShape& shape = {}) {
  std::vector<SlotSchema> slots;
  const int slot_count = Uniform(rng, shape.min_slots, shape.max_slots);
  for (int s = 0; s < slot_count; ++s) {
    SlotSchema slot;
    slot.name = "s" + std::to_string(s);
    switch (Uniform(rng, 0, 3)) {
      case 0:
        slot.kind = SlotKind::kNumeric;
        slot.ordinal = true;
        slot.min_value = 0;
        slot.max_value = 20;
        break;
      case 1:
        slot.kind = SlotKind::kCategorical;
        slot.ordinal = Coin(rng);
        slot.labels = SampleLabels(rng, Uniform(rng, 2, 5));
        break;
      case 2: {
        slot.kind = SlotKind::kHierarchical;
        slot.root = "root";
        const int nodes = Uniform(rng, 2, 7);
        std::vector<std::string> names = {"root"};
        std::vector<std::vector<std::string>> kids(1);
        for (int i = 1; i <= nodes; ++i) {
          size_t parent = static_cast<size_t>(Uniform(rng, 0, i - 1));
          names.push_back("n" + std::to_string(i));
          kids.emplace_back();
          kids[parent].push_back(names.back());
        }
        for (size_t i = 0; i < names.size(); ++i) {
          if (!kids[i].empty()) slot.children.emplace_back(names[i], kids[i]);
        }
        break;
      }
      default:
        slot.kind = SlotKind::kMultivalued;
        slot.labels = SampleLabels(rng, Uniform(rng, 2, 5));
        break;
    }
    slots.push_back(std::move(slot));
  }

  std::vector<Item> items;
  const int item_count = Uniform(rng, 0, shape.max_items);
  for (int i = 0; i < item_count; ++i) {
    Item item;
    item.id = "i" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    item.name = "Item " + std::to_string(i);
    for (const auto& slot : slots) {
      if (Coin(rng, shape.missing)) continue;
      switch (slot.kind) {
        case SlotKind::kNumeric:
          item.slots[slot.name] = Uniform(rng, 0, 40) / 2.0;
          break;
        case SlotKind::kCategorical:
          item.slots[slot.name] = Pick(rng, slot.labels);
          break;
        case SlotKind::kHierarchical: {
          std::vector<std::string> nodes = {slot.root};
          for (const auto& [parent, kids] : slot.children) {
            nodes.insert(nodes.end(), kids.begin(), kids.end());
          }
          item.slots[slot.name] = Pick(rng, nodes);
          break;
        }
        case SlotKind::kMultivalued: {
          std::vector<std::string> set;
          for (const auto& l : slot.labels) {
            if (Coin(rng, 0.4)) set.push_back(l);
          }
          item.slots[slot.name] = set;
          break;
        }
      }
    }
    items.push_back(std::move(item));
  }
  return KnowledgeBase("random", std::move(slots), std::move(items));
}

// A value on the slot's domain: a held or random number for numeric slots.
inline Scalar RandomValue(Rng& rng, const SlotSchema& slot, const KnowledgeBase& kb) {
  if (slot.kind == SlotKind::kNumeric) {
    const auto& held = kb.Domain(slot.name);
    if (!held.empty() && Coin(rng)) return std::stod(Pick(rng, held));
    return Uniform(rng, 0, 40) / 2.0;
  }
  return Pick(rng, kb.Domain(slot.name));
}

inline std::pair<Scalar, Scalar> RandomRange(Rng& rng, const SlotSchema& slot,
                                             const KnowledgeBase& kb) {
  Scalar a = RandomValue(rng, slot, kb);
  Scalar b = RandomValue(rng, slot, kb);
  if (*kb.OrderKey(slot, a) > *kb.OrderKey(slot, b)) std::swap(a, b);
  return {a, b};
}

inline Constraint RandomConstraint(Rng& rng, const KnowledgeBase& kb) {
  const SlotSchema& slot =
      kb.slots()[Uniform(rng, 0, static_cast<int>(kb.slots().size()) - 1)];
  std::vector<Op> ops;
  for (Op op : kAllOps) {
    if (Applicable(op, slot)) ops.push_back(op);
  }
  Constraint c;
  c.slot = slot.name;
  c.op = Pick(rng, ops);
  if (IsRangeOp(c.op)) {
    auto [lo, hi] = RandomRange(rng, slot, kb);
    c.value = lo;
    c.upper = hi;
  } else {
    c.value = RandomValue(rng, slot, kb);
  }
  return c;
}

inline std::vector<std::string> SlotNames(const KnowledgeBase& kb) {
  std::vector<std::string> out;
  for (const auto& s : kb.slots()) out.push_back(s.name);
  return out;
}

// One value-level action on `slot` (operands valid for it).
inline PreferenceAction RandomValuePreference(Rng& rng, const SlotSchema& slot,
                                              const KnowledgeBase& kb) {
  PreferenceAction p;
  p.slot = slot.name;
  std::vector<PrefKind> kinds = {PrefKind::kBest, PrefKind::kWorst};
  if (kb.Domain(slot.name).size() >= 2) kinds.push_back(PrefKind::kRelative);
  if (slot.ordinal) {
    kinds.insert(kinds.end(), {PrefKind::kAround, PrefKind::kNotAround,
                               PrefKind::kBetween, PrefKind::kNotBetween});
  }
  p.kind = Pick(rng, kinds);
  switch (p.kind) {
    case PrefKind::kRelative: {
      auto domain = kb.Domain(slot.name);
      std::shuffle(domain.begin(), domain.end(), rng);
      auto as_value = [&](const std::string& l) -> Scalar {
        if (slot.kind == SlotKind::kNumeric) return std::stod(l);
        return l;
      };
      p.operands = {as_value(domain[0]), as_value(domain[1])};
      break;
    }
    case PrefKind::kBetween:
    case PrefKind::kNotBetween: {
      auto [lo, hi] = RandomRange(rng, slot, kb);
      p.operands = {lo, hi};
      break;
    }
    default:
      p.operands = {RandomValue(rng, slot, kb)};
      break;
  }
  return p;
}

inline PreferenceAction RandomSlotPreference(Rng& rng, const KnowledgeBase& kb) {
  auto names = SlotNames(kb);
  std::shuffle(names.begin(), names.end(), rng);
  PreferenceAction p;
  const int take = std::min<int>(static_cast<int>(names.size()), Uniform(rng, 2, 3));
  p.slots.assign(names.begin(), names.begin() + take);
  if (Coin(rng)) {
    p.kind = PrefKind::kPreferSet;
  } else {
    p.kind = PrefKind::kPreferOver;
    if (Coin(rng)) {
      p.slots.resize(1);
      p.slots.emplace_back(kAllSlots);
    } else if (Coin(rng) && static_cast<int>(names.size()) > take) {
      p.slots.emplace_back(kAllSlots);
    }
  }
  return p;
}

inline PreferenceAction RandomPreference(Rng& rng, const KnowledgeBase& kb) {
  if (kb.slots().size() >= 2 && Coin(rng, 0.3)) return RandomSlotPreference(rng, kb);
  std::vector<const SlotSchema*> usable;
  for (const auto& s : kb.slots()) {
    if (!kb.Domain(s.name).empty() || s.kind == SlotKind::kNumeric) usable.push_back(&s);
  }
  const SlotSchema& slot = *Pick(rng, usable);
  if (kb.Domain(slot.name).empty()) {
    PreferenceAction p;
    p.kind = PrefKind::kAround;
    p.slot = slot.name;
    p.operands = {Uniform(rng, 0, 40) / 2.0};
    return p;
  }
  return RandomValuePreference(rng, slot, kb);
}

}  // namespace facetalk::testing

#endif  // FACETALK_TESTS_GENERATORS_H_
