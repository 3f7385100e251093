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

#include "facetalk/kernels.h"

namespace facetalk::kernels {

Composition Composition::Pareto(size_t dims) {
  Composition c;
  c.levels.emplace_back();
  for (size_t k = 0; k < dims; ++k) c.levels[0].push_back(static_cast<int>(k));
  return c;
}

Composition Composition::Priority(size_t dims) {
  Composition c;
  for (size_t k = 0; k < dims; ++k) c.levels.push_back({static_cast<int>(k)});
  return c;
}

Relation Compare(const TierMatrix& m, size_t a, size_t b,
                 const Composition& composition) {
  for (const auto& level : composition.levels) {
    bool better = false;
    bool worse = false;
    for (int k : level) {
      int ta = m.at(a, k);
      int tb = m.at(b, k);
      if (ta < tb) better = true;
      if (ta > tb) worse = true;
    }
    if (better && worse) return Relation::kIncomparable;
    if (better) return Relation::kBetter;
    if (worse) return Relation::kWorse;
  }
  return Relation::kTie;
}

namespace serial {

DominanceMatrix ComputeDominance(const TierMatrix& m, const Composition& c) {
  const size_t n = m.rows;
  DominanceMatrix dom(n * n, 0);
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      Relation r = Compare(m, a, b, c);
      if (r == Relation::kBetter) dom[a * n + b] = 1;
      if (r == Relation::kWorse) dom[b * n + a] = 1;
    }
  }
  return dom;
}

Buckets PeelBuckets(const DominanceMatrix& dom, size_t n) {
  Buckets buckets;
  std::vector<uint8_t> alive(n, 1);
  size_t left = n;
  while (left > 0) {
    std::vector<size_t> bucket;
    for (size_t j = 0; j < n; ++j) {
      if (!alive[j]) continue;
      bool dominated = false;
      for (size_t i = 0; i < n && !dominated; ++i) {
        dominated = alive[i] && dom[i * n + j];
      }
      if (!dominated) bucket.push_back(j);
    }
    for (size_t j : bucket) alive[j] = 0;
    left -= bucket.size();
    buckets.push_back(std::move(bucket));
  }
  return buckets;
}

std::vector<uint8_t> FilterMask(const KnowledgeBase& kb,
                                std::span<const Constraint> cs) {
  auto items = kb.items();
  std::vector<uint8_t> mask(items.size(), 1);
  for (size_t i = 0; i < items.size(); ++i) {
    for (const auto& c : cs) {
      if (!EvalHard(c, items[i], kb)) {
        mask[i] = 0;
        break;
      }
    }
  }
  return mask;
}

}  // namespace serial
}  // namespace facetalk::kernels
