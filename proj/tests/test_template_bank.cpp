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

#include "spatialqa/template_bank.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace spatialqa;

namespace {

// A one-template-per-direction bank around the given left template.
std::string minimal_bank_text(const std::string& left_pattern) {
  std::string text;
  text += "top\t<HEAD> above-of <TAIL>\n";
  text += "down\t<HEAD> below-of <TAIL>\n";
  text += "left\t" + left_pattern + "\n";
  text += "right\t<HEAD> right-of <TAIL>\n";
  text += "top-left\t<HEAD> upleft-of <TAIL>\n";
  text += "top-right\t<HEAD> upright-of <TAIL>\n";
  text += "down-left\t<HEAD> downleft-of <TAIL>\n";
  text += "down-right\t<HEAD> downright-of <TAIL>\n";
  return text;
}

}  // namespace

TEST_CASE("builtin bank is valid and covers every direction") {
  const TemplateBank& bank = TemplateBank::builtin();
  CHECK(bank.version() == "builtin-1");
  for (const auto& [direction, count] : bank.stats()) {
    CAPTURE(to_string(direction));
    CHECK(count >= 3);
  }
}

TEST_CASE("single-template rendering is literal substitution") {
  const TemplateBank bank =
      TemplateBank::from_string(minimal_bank_text("<HEAD> is to the left of <TAIL>"));
  Rng rng(1);
  CHECK(bank.render({"A", Direction::Left, "B"}, rng) == "A is to the left of B");
}

TEST_CASE("rendering is deterministic under a fixed seed") {
  const TemplateBank& bank = TemplateBank::builtin();
  const RelationTriple triple{"Q", Direction::TopLeft, "J"};
  Rng rng1(42), rng2(42);
  for (int i = 0; i < 50; ++i) {
    CHECK(bank.render(triple, rng1) == bank.render(triple, rng2));
  }
}

TEST_CASE("parse inverts render") {
  const TemplateBank bank =
      TemplateBank::from_string(minimal_bank_text("<HEAD> is to the left of <TAIL>"));
  CHECK(bank.parse("A is to the left of B") == RelationTriple{"A", Direction::Left, "B"});
  CHECK_THROWS_AS(bank.parse("A flies over B"), NoMatchError);
}

TEST_CASE("parse handles tail-first templates") {
  const TemplateBank& bank = TemplateBank::builtin();
  CHECK(bank.parse("B has A to its left.") == RelationTriple{"A", Direction::Left, "B"});
  CHECK(bank.parse("Y has X above it.") == RelationTriple{"X", Direction::Top, "Y"});
}

TEST_CASE("render then parse recovers the triple for random draws") {
  const TemplateBank& bank = TemplateBank::builtin();
  const auto& lexicon = default_lexicon();
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    RelationTriple triple;
    triple.head = lexicon[rng.index(lexicon.size())];
    do {
      triple.tail = lexicon[rng.index(lexicon.size())];
    } while (triple.tail == triple.head);
    triple.rel = kAllDirections[rng.index(8)];
    const auto [parsed, id] = bank.parse_with_id(bank.render(triple, rng));
    CHECK(parsed == triple);
    CHECK(bank.by_id(id).rel == triple.rel);
  }
}

TEST_CASE("exhaustive round trip over the builtin bank") {
  const TemplateBank& bank = TemplateBank::builtin();
  const auto& lexicon = default_lexicon();
  int checked = 0;
  for (const Template& tpl : bank.templates()) {
    for (const auto& head : lexicon) {
      for (const auto& tail : lexicon) {
        if (head == tail) continue;
        const RelationTriple triple{head, tpl.rel, tail};
        REQUIRE(bank.parse(bank.render_with(triple, tpl.id)) == triple);
        ++checked;
      }
    }
  }
  CHECK(checked == 26 * 25 * static_cast<int>(bank.templates().size()));
}

TEST_CASE("malformed lines are rejected with a line number") {
  SUBCASE("missing tail placeholder") {
    try {
      TemplateBank::from_string("left\t<HEAD> is left of something\n");
      FAIL("expected TemplateParseError");
    } catch (const TemplateParseError& e) {
      CHECK(e.line == 1);
    }
  }
  SUBCASE("duplicated head placeholder") {
    CHECK_THROWS_AS(TemplateBank::from_string("left\t<HEAD> and <HEAD> near <TAIL>\n"),
                    TemplateParseError);
  }
  SUBCASE("no tab separator") {
    CHECK_THROWS_AS(TemplateBank::from_string("left <HEAD> x <TAIL>\n"), TemplateParseError);
  }
  SUBCASE("unknown direction") {
    CHECK_THROWS_AS(TemplateBank::from_string("sideways\t<HEAD> x <TAIL>\n"),
                    TemplateParseError);
  }
  SUBCASE("adjacent placeholders") {
    CHECK_THROWS_AS(TemplateBank::from_string("left\t<HEAD><TAIL> overlap\n"),
                    TemplateParseError);
  }
  SUBCASE("tab inside the pattern") {
    CHECK_THROWS_AS(TemplateBank::from_string("left\t<HEAD> is\tleft of <TAIL>\n"),
                    TemplateParseError);
  }
}

TEST_CASE("duplicate literal shapes are rejected at load") {
  // Same shape, same placeholder order.
  CHECK_THROWS_AS(
      TemplateBank::from_string("left\t<HEAD> is beside <TAIL>\nleft\t<HEAD> is beside <TAIL>\n"),
      TemplateParseError);
  // Same shape with swapped placeholders under another direction: rendering
  // (A,left,B) and (B,right,A) would produce the same sentence.
  CHECK_THROWS_AS(
      TemplateBank::from_string("left\t<HEAD> is beside <TAIL>\nright\t<TAIL> is beside <HEAD>\n"),
      TemplateParseError);
}

TEST_CASE("a direction without templates is rejected") {
  CHECK_THROWS_AS(TemplateBank::from_string("left\t<HEAD> is left of <TAIL>\n"),
                  EmptyDirectionError);
}

TEST_CASE("ambiguity from overlapping pathological templates is detected") {
  std::string text = minimal_bank_text("<HEAD> is left of <TAIL>");
  text += "top-left\t<HEAD> is left of <TAIL>x\n";  // "A is left of Bx" has two readings
  const TemplateBank bank = TemplateBank::from_string(text);
  CHECK_THROWS_AS(bank.parse("A is left of Bx"), AmbiguousMatchError);
  // Unambiguous sentences still parse.
  CHECK(bank.parse("A is left of B") == RelationTriple{"A", Direction::Left, "B"});
}

TEST_CASE("a bank mirroring the published per-direction counts loads and reports them") {
  std::string text = "# version: counted\n";
  for (int i = 0; i < 23; ++i) {
    text += "left\t<HEAD> left-variant-" + std::to_string(i) + " <TAIL>\n";
    text += "right\t<HEAD> right-variant-" + std::to_string(i) + " <TAIL>\n";
  }
  for (int i = 0; i < 27; ++i) {
    text += "top\t<HEAD> top-variant-" + std::to_string(i) + " <TAIL>\n";
    text += "down\t<HEAD> down-variant-" + std::to_string(i) + " <TAIL>\n";
  }
  for (int i = 0; i < 26; ++i) {
    text += "top-left\t<HEAD> tl-variant-" + std::to_string(i) + " <TAIL>\n";
    text += "top-right\t<HEAD> tr-variant-" + std::to_string(i) + " <TAIL>\n";
    text += "down-left\t<HEAD> dl-variant-" + std::to_string(i) + " <TAIL>\n";
    text += "down-right\t<HEAD> dr-variant-" + std::to_string(i) + " <TAIL>\n";
  }
  const TemplateBank bank = TemplateBank::from_string(text, "counted");
  const auto stats = bank.stats();
  CHECK(stats.at(Direction::Left) == 23);
  CHECK(stats.at(Direction::Right) == 23);
  CHECK(stats.at(Direction::Top) == 27);
  CHECK(stats.at(Direction::Down) == 27);
  CHECK(stats.at(Direction::TopLeft) == 26);
  CHECK(stats.at(Direction::DownRight) == 26);
  CHECK(bank.version() == "counted");
}

TEST_CASE("banks load from files with version directives") {
  const auto path = std::filesystem::temp_directory_path() / "spatialqa_bank_test.tsv";
  {
    std::ofstream out(path);
    out << "# version: disk-bank\n";
    out << "# a comment line\n\n";
    out << minimal_bank_text("<HEAD> sits left of <TAIL>");
  }
  const TemplateBank bank = TemplateBank::load(path);
  CHECK(bank.version() == "disk-bank");
  CHECK(bank.templates().size() == 8);
  CHECK(bank.parse("A sits left of B") == RelationTriple{"A", Direction::Left, "B"});
  std::filesystem::remove(path);
}
