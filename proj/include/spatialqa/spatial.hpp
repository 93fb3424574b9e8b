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

#ifndef SPATIALQA_SPATIAL_HPP_
#define SPATIALQA_SPATIAL_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatialqa {

// The eight unit spatial relations between two entities.
enum class Direction : uint8_t {
  Top,
  Down,
  Left,
  Right,
  TopLeft,
  TopRight,
  DownLeft,
  DownRight,
};

inline constexpr std::array<Direction, 8> kAllDirections = {
    Direction::Top,      Direction::Down,     Direction::Left,     Direction::Right,
    Direction::TopLeft,  Direction::TopRight, Direction::DownLeft, Direction::DownRight,
};

// Answer classes: the eight directions plus overlap.
enum class AnswerLabel : uint8_t {
  Top,
  Down,
  Left,
  Right,
  TopLeft,
  TopRight,
  DownLeft,
  DownRight,
  Overlap,
};

inline constexpr std::array<AnswerLabel, 9> kAllAnswerLabels = {
    AnswerLabel::Top,      AnswerLabel::Down,      AnswerLabel::Left,
    AnswerLabel::Right,    AnswerLabel::TopLeft,   AnswerLabel::TopRight,
    AnswerLabel::DownLeft, AnswerLabel::DownRight, AnswerLabel::Overlap,
};

// Integer grid position. x grows rightward, y grows upward ("top" is +y).
struct Coord {
  int64_t x = 0;
  int64_t y = 0;

  friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y}; }
  friend Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y}; }
  friend bool operator==(Coord a, Coord b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Coord a, Coord b) { return !(a == b); }
  friend bool operator<(Coord a, Coord b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

using EntityId = std::string;

// One asserted relation: pos(head) = pos(tail) + offset(rel).
// "A is to the left of B" is the triple (A, Left, B).
struct RelationTriple {
  EntityId head;
  Direction rel = Direction::Top;
  EntityId tail;

  friend bool operator==(const RelationTriple& a, const RelationTriple& b) {
    return a.head == b.head && a.rel == b.rel && a.tail == b.tail;
  }
  friend bool operator!=(const RelationTriple& a, const RelationTriple& b) { return !(a == b); }
  friend bool operator<(const RelationTriple& a, const RelationTriple& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.tail < b.tail;
  }
};

struct InconsistentChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DisconnectedEntityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Coord offset(Direction d);
Direction inverse(Direction d);

// (tail, inverse(rel), head) -- the same geometric fact, described the other
// way around.
RelationTriple invert(const RelationTriple& triple);

// Sign classification of a displacement into one of the nine answer classes.
AnswerLabel label_displacement(Coord displacement);

AnswerLabel answer_of(Direction d);

std::string_view to_string(Direction d);
std::string_view to_string(AnswerLabel label);
std::optional<Direction> direction_from_string(std::string_view name);
std::optional<AnswerLabel> answer_from_string(std::string_view name);

// Places every entity reachable from `anchor`, which sits at the origin.
// Throws InconsistentChainError when two derivations disagree on an entity's
// position, DisconnectedEntityError when some entity in `triples` is not
// reachable from the anchor.
std::map<EntityId, Coord> place_chain(std::span<const RelationTriple> triples,
                                      const EntityId& anchor);

// The default entity lexicon: the 26 uppercase letters.
const std::vector<EntityId>& default_lexicon();

// Entity names act as sentence tokens and as fields of canonical sample
// keys, so they must be non-empty, whitespace-free, duplicate-free and must
// avoid the key delimiters '>', ';' and '?'. Throws std::invalid_argument.
void validate_lexicon(const std::vector<EntityId>& lexicon);

}  // namespace spatialqa

#endif  // SPATIALQA_SPATIAL_HPP_
