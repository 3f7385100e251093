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

// Data-parallel inner loops of the engine. Each kernel has a serial reference
// in `serial` and an OpenMP version in `parallel`; both must agree exactly.

#ifndef FACETALK_KERNELS_H_
#define FACETALK_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "facetalk/constraint.h"

namespace facetalk::kernels {

// Row-major item x dimension matrix of preference tiers; lower is better.
struct TierMatrix {
  size_t rows = 0;
  size_t dims = 0;
  std::vector<int> tiers;

  TierMatrix() = default;
  TierMatrix(size_t r, size_t d) : rows(r), dims(d), tiers(r * d, 0) {}

  int& at(size_t row, size_t dim) { return tiers[row * dims + dim]; }
  int at(size_t row, size_t dim) const { return tiers[row * dims + dim]; }
};

// Dimension indices grouped into priority levels, most important first.
// Dimensions inside one level compose by Pareto dominance.
struct Composition {
  std::vector<std::vector<int>> levels;

  static Composition Pareto(size_t dims);
  static Composition Priority(size_t dims);
};

enum class Relation : int8_t { kIncomparable, kTie, kBetter, kWorse };

// Prioritized Pareto comparison of rows a and b.
Relation Compare(const TierMatrix& m, size_t a, size_t b,
                 const Composition& composition);

// Flattened n x n matrix; entry [a * n + b] is 1 iff a dominates b.
using DominanceMatrix = std::vector<uint8_t>;

// Bucket k holds row indices (ascending) not dominated by any row left after
// removing buckets 0..k-1.
using Buckets = std::vector<std::vector<size_t>>;

namespace serial {

DominanceMatrix ComputeDominance(const TierMatrix& m, const Composition& c);
Buckets PeelBuckets(const DominanceMatrix& dom, size_t n);
std::vector<uint8_t> FilterMask(const KnowledgeBase& kb,
                                std::span<const Constraint> cs);

}  // namespace serial

namespace parallel {

DominanceMatrix ComputeDominance(const TierMatrix& m, const Composition& c);
Buckets PeelBuckets(const DominanceMatrix& dom, size_t n);
std::vector<uint8_t> FilterMask(const KnowledgeBase& kb,
                                std::span<const Constraint> cs);

}  // namespace parallel

int MaxThreads();

}  // namespace facetalk::kernels

#endif  // FACETALK_KERNELS_H_
