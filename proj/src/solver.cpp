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

#include "spatialqa/solver.hpp"

#include <algorithm>
#include <map>

namespace spatialqa {

StoryGraph StoryGraph::build(std::span<const RelationTriple> triples) {
  StoryGraph graph;
  graph.edges.assign(triples.begin(), triples.end());

  std::map<EntityId, std::vector<EntityId>> adjacency;
  for (const auto& t : triples) {
    adjacency[t.head].push_back(t.tail);
    adjacency[t.tail].push_back(t.head);
  }
  for (const auto& [node, _] : adjacency) graph.nodes.push_back(node);

  std::set<EntityId> seen;
  for (const auto& node : graph.nodes) {
    if (seen.count(node)) continue;
    std::vector<EntityId> component;
    std::vector<EntityId> stack{node};
    seen.insert(node);
    while (!stack.empty()) {
      EntityId current = std::move(stack.back());
      stack.pop_back();
      component.push_back(current);
      for (const auto& next : adjacency.at(component.back())) {
        if (seen.insert(next).second) stack.push_back(next);
      }
    }
    std::sort(component.begin(), component.end());
    graph.components.push_back(std::move(component));
  }
  return graph;
}

AnswerLabel solve(std::span<const RelationTriple> triples, const EntityId& target,
                  const EntityId& reference) {
  if (target == reference) {
    throw std::invalid_argument("solve: question must name two distinct entities");
  }
  const StoryGraph graph = StoryGraph::build(triples);
  const std::vector<EntityId>* home = nullptr;
  for (const auto& component : graph.components) {
    const bool has_target = std::binary_search(component.begin(), component.end(), target);
    const bool has_reference =
        std::binary_search(component.begin(), component.end(), reference);
    if (has_target && has_reference) {
      home = &component;
      break;
    }
    if (has_target || has_reference) {
      throw UnreachableError("entities " + target + " and " + reference +
                             " are not connected");
    }
  }
  if (home == nullptr) {
    throw std::invalid_argument("solve: question entities not present in the story");
  }

  // Only the home component matters; anchoring at the reference makes the
  // target's coordinate the displacement directly.
  std::vector<RelationTriple> relevant;
  for (const auto& t : triples) {
    if (std::binary_search(home->begin(), home->end(), t.head)) relevant.push_back(t);
  }
  const auto coords = place_chain(relevant, reference);
  return label_displacement(coords.at(target));
}

Certification certify(const Sample& sample, const TemplateBank& bank) {
  Certification report;

  std::vector<RelationTriple> parsed;
  parsed.reserve(sample.story.size());
  report.parse_ok = true;
  for (const auto& sentence : sample.story) {
    try {
      parsed.push_back(bank.parse(sentence));
    } catch (const std::runtime_error& e) {
      report.parse_ok = false;
      report.diagnostics.push_back(std::string("parse: ") + e.what());
    }
  }
  if (!report.parse_ok) return report;

  std::vector<RelationTriple> expected = sample.meta.chain.edges;
  for (const auto& ann : sample.meta.noise) expected.push_back(ann.triple);
  std::vector<RelationTriple> parsed_sorted = parsed;
  std::sort(parsed_sorted.begin(), parsed_sorted.end());
  std::sort(expected.begin(), expected.end());
  report.triples_match = parsed_sorted == expected;
  if (!report.triples_match) {
    report.diagnostics.push_back("parsed story triples differ from chain+noise triples");
  }

  const auto check_answer = [&](std::span<const RelationTriple> triples, bool& flag,
                                const char* which) {
    try {
      flag = solve(triples, sample.meta.question.target, sample.meta.question.reference) ==
             sample.answer;
      if (!flag) {
        report.diagnostics.push_back(std::string(which) + ": solved answer differs from stored");
      }
    } catch (const std::exception& e) {
      flag = false;
      report.diagnostics.push_back(std::string(which) + ": " + e.what());
    }
  };
  check_answer(parsed, report.noisy_answer_ok, "noisy graph");
  check_answer(sample.meta.chain.edges, report.chain_answer_ok, "chain only");
  return report;
}

}  // namespace spatialqa
