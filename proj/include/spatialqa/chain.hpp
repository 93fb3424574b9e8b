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

#ifndef SPATIALQA_CHAIN_HPP_
#define SPATIALQA_CHAIN_HPP_

#include <vector>

#include "spatialqa/bigint.hpp"
#include "spatialqa/rng.hpp"
#include "spatialqa/spatial.hpp"

namespace spatialqa {

// The ground-truth structure behind one sample: k+1 distinct entities linked
// by k unit relations. edges[i] connects entities[i] and entities[i+1]; which
// of the two appears as the triple's head is a per-edge coin flip (the "two
// ways of describing" a relation). coords places the chain with the first
// entity at the origin.
struct Chain {
  std::vector<EntityId> entities;
  std::vector<RelationTriple> edges;
  std::map<EntityId, Coord> coords;

  int k() const { return static_cast<int>(edges.size()); }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.entities == b.entities && a.edges == b.edges && a.coords == b.coords;
  }
};

// Request for the position of `target` relative to `reference`.
struct Question {
  EntityId target;
  EntityId reference;
  int hops = 0;  // chain-edge distance between the two entities

  friend bool operator==(const Question& a, const Question& b) {
    return a.target == b.target && a.reference == b.reference && a.hops == b.hops;
  }
};

// Samples a chain of k edges over k+1 unique entities: uniform direction per
// edge, fair-coin description orientation. Requires 1 <= k and k+1 <= |lexicon|.
Chain sample_chain(int k, const std::vector<EntityId>& lexicon, Rng& rng);

// Uniform unordered entity pair, then a uniform orientation.
Question pick_question(const Chain& chain, Rng& rng);

// Number of distinct samples for chain length k over a lexicon of E entities:
//   (k+1)! * C(E, k+1) * 16^k * k!/2 * 2*C(k+1, 2)
// evaluated exactly in arbitrary precision. The half-integral factor always
// cancels; integrality is asserted.
BigUint count_samples(int k, int lexicon_size);

}  // namespace spatialqa

#endif  // SPATIALQA_CHAIN_HPP_
