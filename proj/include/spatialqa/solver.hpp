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

#ifndef SPATIALQA_SOLVER_HPP_
#define SPATIALQA_SOLVER_HPP_

#include <string>
#include <vector>

#include "spatialqa/story.hpp"

namespace spatialqa {

struct UnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Entity-relation graph of a story with its connected components.
struct StoryGraph {
  std::vector<EntityId> nodes;
  std::vector<RelationTriple> edges;
  std::vector<std::vector<EntityId>> components;

  static StoryGraph build(std::span<const RelationTriple> triples);
  int component_count() const { return static_cast<int>(components.size()); }
};

// Re-derives the answer for "where is target relative to reference" from the
// given triples alone: places the component anchored at the reference and
// classifies the target's displacement. Throws UnreachableError when the two
// entities live in different components, InconsistentChainError when the
// component admits no placement, std::invalid_argument when target ==
// reference or an entity is absent.
AnswerLabel solve(std::span<const RelationTriple> triples, const EntityId& target,
                  const EntityId& reference);

// Result of re-deriving one sample end to end.
struct Certification {
  bool parse_ok = false;      // every story sentence parses to a triple
  bool triples_match = false; // parsed multiset == chain edges + noise triples
  bool noisy_answer_ok = false;  // solve over all parsed triples == stored answer
  bool chain_answer_ok = false;  // solve over chain edges only == stored answer
  std::vector<std::string> diagnostics;

  bool pass() const { return parse_ok && triples_match && noisy_answer_ok && chain_answer_ok; }
};

// Certifies a sample against its own metadata. The story text is re-parsed
// through the bank rather than trusting the recorded triples, so this also
// exercises the inverse templates.
Certification certify(const Sample& sample, const TemplateBank& bank);

}  // namespace spatialqa

#endif  // SPATIALQA_SOLVER_HPP_
