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

// Brute-force reference computations used only by tests. They share no code
// with the library beyond the data types.

#ifndef FACETALK_TESTS_ORACLES_H_
#define FACETALK_TESTS_ORACLES_H_

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "facetalk/constraint.h"
#include "facetalk/kb.h"

namespace facetalk::testing {

enum class Rel { kBetter, kWorse, kTie, kIncomparable };

// Levels are compared in order; within a level a row must be no worse on
// every dimension and better on one. Incomparable at a level is final.
inline Rel OracleCompare(const std::vector<int>& a, const std::vector<int>& b,
                         const std::vector<std::vector<int>>& levels) {
  for (const auto& level : levels) {
    bool a_wins = false;
    bool b_wins = false;
    for (int d : level) {
      if (a[d] < b[d]) a_wins = true;
      if (b[d] < a[d]) b_wins = true;
    }
    if (a_wins && b_wins) return Rel::kIncomparable;
    if (a_wins) return Rel::kBetter;
    if (b_wins) return Rel::kWorse;
  }
  return Rel::kTie;
}

// Materializes the full relation, then repeatedly removes the maximal
// elements. Buckets hold row indices in ascending order.
inline std::vector<std::vector<size_t>> OracleBuckets(
    const std::vector<std::vector<int>>& rows,
    const std::vector<std::vector<int>>& levels) {
  const size_t n = rows.size();
  std::vector<std::vector<bool>> beats(n, std::vector<bool>(n, false));
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = 0; b < n; ++b) {
      beats[a][b] = a != b && OracleCompare(rows[a], rows[b], levels) == Rel::kBetter;
    }
  }
  std::vector<bool> gone(n, false);
  std::vector<std::vector<size_t>> out;
  size_t left = n;
  while (left > 0) {
    std::vector<size_t> bucket;
    for (size_t b = 0; b < n; ++b) {
      if (gone[b]) continue;
      bool dominated = false;
      for (size_t a = 0; a < n && !dominated; ++a) {
        dominated = !gone[a] && beats[a][b];
      }
      if (!dominated) bucket.push_back(b);
    }
    if (bucket.empty()) break;  // cyclic relation; cannot happen for tiers
    for (size_t b : bucket) gone[b] = true;
    left -= bucket.size();
    out.push_back(std::move(bucket));
  }
  return out;
}

// Items satisfying every constraint, by exhaustive scan.
inline std::vector<std::string> OracleFilter(const KnowledgeBase& kb,
                                             const std::vector<Constraint>& cs) {
  std::vector<std::string> ids;
  for (const auto& item : kb.items()) {
    bool ok = std::all_of(cs.begin(), cs.end(),
                          [&](const Constraint& c) { return EvalHard(c, item, kb); });
    if (ok) ids.push_back(item.id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

// count(s, v) = |{i in ids : eval_hard((s, eq, v), i)}|, zeros dropped.
inline std::map<std::string, std::map<std::string, int>> OracleFacets(
    const KnowledgeBase& kb, const std::vector<std::string>& ids) {
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& slot : kb.slots()) {
    for (const auto& label : kb.Domain(slot.name)) {
      Constraint c;
      c.slot = slot.name;
      c.op = Op::kEq;
      if (slot.kind == SlotKind::kNumeric) {
        c.value = std::stod(label);
      } else {
        c.value = label;
      }
      int count = 0;
      for (const auto& id : ids) count += EvalHard(c, kb.item(id), kb) ? 1 : 0;
      if (count > 0) out[slot.name][label] = count;
    }
  }
  return out;
}

inline std::map<std::string, std::map<std::string, int>> AsMap(const FacetCounts& f) {
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& [slot, values] : f) {
    for (const auto& [label, count] : values) out[slot][label] = count;
  }
  return out;
}

}  // namespace facetalk::testing

#endif  // FACETALK_TESTS_ORACLES_H_
