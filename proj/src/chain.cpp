// Copyright 2026 The spatialqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spatialqa/chain.hpp"

#include <cstdlib>

namespace spatialqa {

Chain sample_chain(int k, const std::vector<EntityId>& lexicon, Rng& rng) {
  if (k < 1) throw std::invalid_argument("sample_chain: k must be >= 1");
  validate_lexicon(lexicon);
  if (static_cast<size_t>(k) + 1 > lexicon.size()) {
    throw std::invalid_argument("sample_chain: lexicon too small for k+1 unique entities");
  }

  // Partial Fisher-Yates: the first k+1 slots form a uniform ordered sample.
  std::vector<EntityId> pool = lexicon;
  Chain chain;
  chain.entities.reserve(k + 1);
  for (int i = 0; i <= k; ++i) {
    const size_t j = i + rng.index(pool.size() - i);
    std::swap(pool[i], pool[j]);
    chain.entities.push_back(pool[i]);
  }

  chain.edges.reserve(k);
  for (int i = 0; i < k; ++i) {
    const Direction dir = kAllDirections[rng.index(kAllDirections.size())];
    // entities[i+1] lies dir-of entities[i]; the coin picks the description.
    RelationTriple triple{chain.entities[i + 1], dir, chain.entities[i]};
    if (rng.coin()) triple = invert(triple);
    chain.edges.push_back(std::move(triple));
  }

  chain.coords = place_chain(chain.edges, chain.entities.front());
  return chain;
}

Question pick_question(const Chain& chain, Rng& rng) {
  const int n = static_cast<int>(chain.entities.size());
  if (n < 2) throw std::invalid_argument("pick_question: chain needs at least 2 entities");
  const int i = static_cast<int>(rng.index(n));
  int j = static_cast<int>(rng.index(n - 1));
  if (j >= i) ++j;  // uniform over ordered pairs with i != j
  Question q;
  q.target = chain.entities[i];
  q.reference = chain.entities[j];
  q.hops = std::abs(i - j);
  return q;
}

BigUint count_samples(int k, int lexicon_size) {
  if (k < 1) throw std::invalid_argument("count_samples: k must be >= 1");
  if (lexicon_size < k + 1) {
    throw std::invalid_argument("count_samples: lexicon must hold at least k+1 entities");
  }

  BigUint total(1);
  // (k+1)! ordered entity sequences over a chosen set...
  for (int i = 2; i <= k + 1; ++i) total *= static_cast<uint64_t>(i);
  // ... times C(E, k+1) sets, built with exact intermediate divisions.
  for (int i = 1; i <= k + 1; ++i) {
    total *= static_cast<uint64_t>(lexicon_size - (k + 1) + i);
    total.divide_exact(static_cast<uint32_t>(i));
  }
  // 8 relations x 2 descriptions per edge.
  for (int i = 0; i < k; ++i) total *= 16;
  // k!/2 sentence orders; the denominator is applied last.
  for (int i = 2; i <= k; ++i) total *= static_cast<uint64_t>(i);
  // 2 * C(k+1, 2) question choices, i.e. (k+1)*k ordered pairs.
  total *= static_cast<uint64_t>(k + 1) * static_cast<uint64_t>(k);
  total.divide_exact(2);  // throws if the product were ever odd
  return total;
}

}  // namespace spatialqa
