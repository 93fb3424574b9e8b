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

#include "spatialqa/spatial.hpp"

#include <cctype>
#include <deque>
#include <set>

namespace spatialqa {

Coord offset(Direction d) {
  switch (d) {
    case Direction::Top: return {0, 1};
    case Direction::Down: return {0, -1};
    case Direction::Left: return {-1, 0};
    case Direction::Right: return {1, 0};
    case Direction::TopLeft: return {-1, 1};
    case Direction::TopRight: return {1, 1};
    case Direction::DownLeft: return {-1, -1};
    case Direction::DownRight: return {1, -1};
  }
  throw std::logic_error("offset: bad direction");
}

Direction inverse(Direction d) {
  switch (d) {
    case Direction::Top: return Direction::Down;
    case Direction::Down: return Direction::Top;
    case Direction::Left: return Direction::Right;
    case Direction::Right: return Direction::Left;
    case Direction::TopLeft: return Direction::DownRight;
    case Direction::TopRight: return Direction::DownLeft;
    case Direction::DownLeft: return Direction::TopRight;
    case Direction::DownRight: return Direction::TopLeft;
  }
  throw std::logic_error("inverse: bad direction");
}

RelationTriple invert(const RelationTriple& triple) {
  return {triple.tail, inverse(triple.rel), triple.head};
}

AnswerLabel label_displacement(Coord displacement) {
  const int sx = (displacement.x > 0) - (displacement.x < 0);
  const int sy = (displacement.y > 0) - (displacement.y < 0);
  if (sx == 0 && sy == 0) return AnswerLabel::Overlap;
  if (sx == 0) return sy > 0 ? AnswerLabel::Top : AnswerLabel::Down;
  if (sy == 0) return sx > 0 ? AnswerLabel::Right : AnswerLabel::Left;
  if (sx > 0) return sy > 0 ? AnswerLabel::TopRight : AnswerLabel::DownRight;
  return sy > 0 ? AnswerLabel::TopLeft : AnswerLabel::DownLeft;
}

AnswerLabel answer_of(Direction d) { return label_displacement(offset(d)); }

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Top: return "top";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
    case Direction::TopLeft: return "top-left";
    case Direction::TopRight: return "top-right";
    case Direction::DownLeft: return "down-left";
    case Direction::DownRight: return "down-right";
  }
  throw std::logic_error("to_string: bad direction");
}

std::string_view to_string(AnswerLabel label) {
  if (label == AnswerLabel::Overlap) return "overlap";
  return to_string(static_cast<Direction>(label));
}

std::optional<Direction> direction_from_string(std::string_view name) {
  for (Direction d : kAllDirections) {
    if (to_string(d) == name) return d;
  }
  return std::nullopt;
}

std::optional<AnswerLabel> answer_from_string(std::string_view name) {
  for (AnswerLabel label : kAllAnswerLabels) {
    if (to_string(label) == name) return label;
  }
  return std::nullopt;
}

std::map<EntityId, Coord> place_chain(std::span<const RelationTriple> triples,
                                      const EntityId& anchor) {
  // Undirected adjacency; each triple contributes both traversal directions.
  std::map<EntityId, std::vector<std::pair<EntityId, Coord>>> adjacency;
  for (const auto& t : triples) {
    const Coord step = offset(t.rel);
    adjacency[t.tail].push_back({t.head, step});          // pos(head) = pos(tail) + step
    adjacency[t.head].push_back({t.tail, {-step.x, -step.y}});
  }

  std::map<EntityId, Coord> placed;
  placed[anchor] = Coord{0, 0};
  std::deque<EntityId> frontier{anchor};
  while (!frontier.empty()) {
    const EntityId current = frontier.front();
    frontier.pop_front();
    const Coord base = placed.at(current);
    auto it = adjacency.find(current);
    if (it == adjacency.end()) continue;
    for (const auto& [neighbor, step] : it->second) {
      const Coord pos = base + step;
      auto [slot, inserted] = placed.try_emplace(neighbor, pos);
      if (inserted) {
        frontier.push_back(neighbor);
      } else if (slot->second != pos) {
        throw InconsistentChainError("conflicting positions for entity " + neighbor);
      }
    }
  }

  for (const auto& [entity, neighbors] : adjacency) {
    if (!placed.count(entity)) {
      throw DisconnectedEntityError("entity " + entity + " unreachable from anchor " + anchor);
    }
  }
  return placed;
}

const std::vector<EntityId>& default_lexicon() {
  static const std::vector<EntityId> lexicon = [] {
    std::vector<EntityId> out;
    for (char c = 'A'; c <= 'Z'; ++c) out.emplace_back(1, c);
    return out;
  }();
  return lexicon;
}

void validate_lexicon(const std::vector<EntityId>& lexicon) {
  std::set<EntityId> seen;
  for (const auto& entity : lexicon) {
    if (entity.empty()) throw std::invalid_argument("lexicon: empty entity name");
    for (unsigned char c : entity) {
      if (std::isspace(c) || c == '>' || c == ';' || c == '?') {
        throw std::invalid_argument("lexicon: entity name `" + entity +
                                    "` contains whitespace or a reserved delimiter");
      }
    }
    if (!seen.insert(entity).second) {
      throw std::invalid_argument("lexicon: duplicate entity name `" + entity + "`");
    }
  }
}

}  // namespace spatialqa
