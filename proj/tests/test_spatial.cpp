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

#include <doctest.h>

#include <set>

#include "spatialqa/rng.hpp"

using namespace spatialqa;

TEST_CASE("unit offsets follow the axis convention") {
  CHECK(offset(Direction::Top) == Coord{0, 1});
  CHECK(offset(Direction::Down) == Coord{0, -1});
  CHECK(offset(Direction::Left) == Coord{-1, 0});
  CHECK(offset(Direction::Right) == Coord{1, 0});
  CHECK(offset(Direction::DownLeft) == Coord{-1, -1});
  CHECK(offset(Direction::TopRight) == Coord{1, 1});
}

TEST_CASE("every direction has a unique nonzero unit offset") {
  std::set<std::pair<int64_t, int64_t>> seen;
  for (Direction d : kAllDirections) {
    const Coord o = offset(d);
    CHECK(std::abs(o.x) <= 1);
    CHECK(std::abs(o.y) <= 1);
    CHECK(o != Coord{0, 0});
    CHECK(seen.insert({o.x, o.y}).second);
  }
  CHECK(seen.size() == 8);
}

TEST_CASE("inverse is an involution and negates the offset") {
  for (Direction d : kAllDirections) {
    CHECK(inverse(inverse(d)) == d);
    CHECK(offset(d) + offset(inverse(d)) == Coord{0, 0});
  }
}

TEST_CASE("triple inversion swaps entities and direction") {
  const RelationTriple t{"A", Direction::Left, "B"};
  CHECK(invert(t) == RelationTriple{"B", Direction::Right, "A"});
  CHECK(invert(RelationTriple{"X", Direction::TopRight, "Y"}) ==
        RelationTriple{"Y", Direction::DownLeft, "X"});
  for (Direction d : kAllDirections) {
    const RelationTriple triple{"P", d, "Q"};
    CHECK(invert(invert(triple)) == triple);
  }
}

TEST_CASE("displacement labels are sign projections") {
  CHECK(label_displacement({0, 0}) == AnswerLabel::Overlap);
  CHECK(label_displacement({3, -1}) == AnswerLabel::DownRight);
  CHECK(label_displacement({-2, 0}) == AnswerLabel::Left);
  CHECK(label_displacement({0, 7}) == AnswerLabel::Top);
  CHECK(label_displacement({-90, 90}) == AnswerLabel::TopLeft);
}

TEST_CASE("the eight directional labels are fixed points") {
  for (Direction d : kAllDirections) {
    CHECK(to_string(answer_of(d)) == to_string(d));
  }
}

TEST_CASE("name round trips") {
  for (Direction d : kAllDirections) {
    CHECK(direction_from_string(to_string(d)) == d);
  }
  for (AnswerLabel label : kAllAnswerLabels) {
    CHECK(answer_from_string(to_string(label)) == label);
  }
  CHECK(!direction_from_string("sideways").has_value());
}

TEST_CASE("place_chain accumulates coordinates from the anchor") {
  const std::vector<RelationTriple> triples{{"B", Direction::Right, "A"},
                                            {"C", Direction::Top, "B"}};
  const auto coords = place_chain(triples, "A");
  CHECK(coords.at("A") == Coord{0, 0});
  CHECK(coords.at("B") == Coord{1, 0});
  CHECK(coords.at("C") == Coord{1, 1});
}

TEST_CASE("place_chain allows entities to overlap") {
  const std::vector<RelationTriple> triples{{"B", Direction::Right, "A"},
                                            {"C", Direction::Left, "B"}};
  const auto coords = place_chain(triples, "A");
  CHECK(coords.at("C") == Coord{0, 0});
  CHECK(coords.at("C") == coords.at("A"));
}

TEST_CASE("place_chain with no triples places only the anchor") {
  const auto coords = place_chain(std::vector<RelationTriple>{}, "A");
  CHECK(coords.size() == 1);
  CHECK(coords.at("A") == Coord{0, 0});
}

TEST_CASE("place_chain rejects conflicting derivations") {
  const std::vector<RelationTriple> triples{{"B", Direction::Right, "A"},
                                            {"B", Direction::Top, "A"}};
  CHECK_THROWS_AS(place_chain(triples, "A"), InconsistentChainError);
}

TEST_CASE("place_chain rejects entities unreachable from the anchor") {
  const std::vector<RelationTriple> triples{{"B", Direction::Right, "A"},
                                            {"D", Direction::Top, "C"}};
  CHECK_THROWS_AS(place_chain(triples, "A"), DisconnectedEntityError);
}

TEST_CASE("lexicon validation rejects unusable entity names") {
  CHECK_NOTHROW(validate_lexicon(default_lexicon()));
  CHECK_NOTHROW(validate_lexicon({"box", "triangle", "red_disk"}));
  CHECK_THROWS_AS(validate_lexicon({"A", ""}), std::invalid_argument);
  CHECK_THROWS_AS(validate_lexicon({"A", "big box"}), std::invalid_argument);
  CHECK_THROWS_AS(validate_lexicon({"A", "B>C"}), std::invalid_argument);
  CHECK_THROWS_AS(validate_lexicon({"A", "B;C"}), std::invalid_argument);
  CHECK_THROWS_AS(validate_lexicon({"A", "B", "A"}), std::invalid_argument);
}

TEST_CASE("placement is invariant under inversion and order") {
  Rng rng(99);
  const auto& lexicon = default_lexicon();
  for (int round = 0; round < 300; ++round) {
    // Build a random consistent triple set: a path with occasional extra
    // consistent edges.
    const int n = 3 + static_cast<int>(rng.index(6));
    std::vector<EntityId> entities(lexicon.begin(), lexicon.begin() + n);
    rng.shuffle(entities);
    std::map<EntityId, Coord> truth;
    std::vector<RelationTriple> triples;
    truth[entities[0]] = {0, 0};
    for (int i = 1; i < n; ++i) {
      const Direction d = kAllDirections[rng.index(8)];
      truth[entities[i]] = truth[entities[i - 1]] + offset(d);
      triples.push_back({entities[i], d, entities[i - 1]});
    }

    auto mutated = triples;
    for (auto& t : mutated) {
      if (rng.coin()) t = invert(t);
    }
    rng.shuffle(mutated);

    const auto coords = place_chain(mutated, entities[0]);
    CHECK(coords == truth);
  }
}
