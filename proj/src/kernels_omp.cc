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

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace facetalk::kernels {

int MaxThreads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

DominanceMatrix ComputeDominance(const TierMatrix& m, const Composition& c) {
  const long n = static_cast<long>(m.rows);
  DominanceMatrix dom(static_cast<size_t>(n * n), 0);
  // One unordered pair per iteration; its two cells are written by that
  // iteration only. Dynamic scheduling evens out the shrinking rows.
#pragma omp parallel for schedule(dynamic, 16)
  for (long a = 0; a < n; ++a) {
    for (long b = a + 1; b < n; ++b) {
      const Relation r = Compare(m, a, b, c);
      if (r == Relation::kBetter) dom[a * n + b] = 1;
      if (r == Relation::kWorse) dom[b * n + a] = 1;
    }
  }
  return dom;
}

Buckets PeelBuckets(const DominanceMatrix& dom, size_t n) {
  Buckets buckets;
  std::vector<uint8_t> alive(n, 1);
  std::vector<uint8_t> top(n, 0);
  size_t left = n;
  const long ln = static_cast<long>(n);
  while (left > 0) {
#pragma omp parallel for schedule(static)
    for (long j = 0; j < ln; ++j) {
      uint8_t free = alive[j];
      for (long i = 0; i < ln && free; ++i) {
        if (alive[i] && dom[i * ln + j]) free = 0;
      }
      top[j] = free;
    }
    std::vector<size_t> bucket;
    for (size_t j = 0; j < n; ++j) {
      if (top[j]) {
        bucket.push_back(j);
        alive[j] = 0;
      }
    }
    left -= bucket.size();
    buckets.push_back(std::move(bucket));
  }
  return buckets;
}

std::vector<uint8_t> FilterMask(const KnowledgeBase& kb,
                                std::span<const Constraint> cs) {
  auto items = kb.items();
  const long n = static_cast<long>(items.size());
  std::vector<uint8_t> mask(items.size(), 1);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    for (const auto& c : cs) {
      if (!EvalHard(c, items[i], kb)) {
        mask[i] = 0;
        break;
      }
    }
  }
  return mask;
}

}  // namespace parallel
}  // namespace facetalk::kernels
