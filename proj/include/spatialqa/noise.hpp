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

#ifndef SPATIALQA_NOISE_HPP_
#define SPATIALQA_NOISE_HPP_

#include <set>
#include <vector>

#include "spatialqa/chain.hpp"

namespace spatialqa {

enum class NoiseType : uint8_t { Irrelevant, Disconnected, Supporting };

std::string_view to_string(NoiseType type);
std::optional<NoiseType> noise_type_from_string(std::string_view name);

// How many distracting sentences of each kind to add. Supporting noise is
// only legal on chains with at least 3 edges.
struct NoiseSpec {
  int irrelevant = 0;
  int disconnected = 0;
  int supporting = 0;
};

// One added sentence: its kind, the asserted triple, and the entities it
// introduced (none for supporting noise, which reuses chain entities).
struct NoiseAnnotation {
  NoiseType type = NoiseType::Irrelevant;
  RelationTriple triple;
  std::vector<EntityId> new_entities;

  friend bool operator==(const NoiseAnnotation& a, const NoiseAnnotation& b) {
    return a.type == b.type && a.triple == b.triple && a.new_entities == b.new_entities;
  }
};

struct NoiseResult {
  std::vector<NoiseAnnotation> annotations;
  int supporting_shortfall = 0;  // requested minus actually eligible

  std::vector<RelationTriple> triples() const {
    std::vector<RelationTriple> out;
    out.reserve(annotations.size());
    for (const auto& a : annotations) out.push_back(a.triple);
    return out;
  }
};

struct LexiconExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Branches the chain out: each sentence links one fresh entity to a uniformly
// chosen already-placed entity (chain or earlier branch). Adds exactly n
// triples and n entities; never moves anything on the question path.
std::vector<NoiseAnnotation> add_irrelevant(const Chain& chain, int n,
                                            const std::vector<EntityId>& lexicon,
                                            std::set<EntityId>& used, Rng& rng);

// Adds one independent chain of n triples over n+1 fresh entities, sharing no
// entity with the original chain.
std::vector<NoiseAnnotation> add_disconnected(const Chain& chain, int n,
                                              const std::vector<EntityId>& lexicon,
                                              std::set<EntityId>& used, Rng& rng);

struct SupportingNoise {
  std::vector<NoiseAnnotation> annotations;
  int shortfall = 0;
};

// Adds redundant edges between non-adjacent chain entities whose true
// displacement fits in the unit box (and is nonzero), so every added triple is
// coordinate-exact against the chain. Emits at most n triples; if fewer pairs
// are eligible the shortfall is reported. Requires k >= 3.
SupportingNoise add_supporting(const Chain& chain, int n, Rng& rng);

// Inclusive count ranges for the randomized per-sample noise policy.
struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct NoiseRanges {
  IntRange irrelevant{0, 3};
  IntRange disconnected{0, 3};
  IntRange supporting{0, 2};
  int supporting_min_k = 3;
};

// Draws a NoiseSpec for a chain of length k under the given policy.
NoiseSpec draw_noise_spec(int k, const NoiseRanges& ranges, Rng& rng);

// Applies all three kinds in a fixed order (irrelevant, disconnected,
// supporting) with fresh entities drawn from the unused part of the lexicon.
NoiseResult apply_noise(const Chain& chain, const NoiseSpec& spec,
                        const std::vector<EntityId>& lexicon, Rng& rng);

}  // namespace spatialqa

#endif  // SPATIALQA_NOISE_HPP_
