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

#ifndef SPATIALQA_TEMPLATE_BANK_HPP_
#define SPATIALQA_TEMPLATE_BANK_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spatialqa/rng.hpp"
#include "spatialqa/spatial.hpp"

namespace spatialqa {

// Surface form for one direction. The pattern contains the placeholders
// <HEAD> and <TAIL> exactly once each.
struct Template {
  Direction rel = Direction::Top;
  std::string pattern;
  int id = 0;

  friend bool operator==(const Template& a, const Template& b) {
    return a.rel == b.rel && a.pattern == b.pattern && a.id == b.id;
  }
};

struct TemplateParseError : std::runtime_error {
  TemplateParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};
struct EmptyDirectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoMatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AmbiguousMatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Relation-indexed sentence templates. Immutable once constructed; rendering
// draws from an externally supplied RNG stream, so banks are safe to share
// across threads.
//
// Validation guarantees round-trippable parsing: besides the per-pattern
// placeholder rules, no two templates may share the same literal text shape
// (the pattern with its placeholders blanked out). Two such templates would
// render colliding sentences, e.g. a "left" template "<HEAD> is beside <TAIL>"
// and a "right" template "<TAIL> is beside <HEAD>".
class TemplateBank {
 public:
  // The shipped bank: several hand-written templates per direction.
  static const TemplateBank& builtin();

  // Loads `direction<TAB>pattern` lines; '#' starts a comment. A comment of
  // the form `# version: tag` names the bank.
  static TemplateBank load(const std::filesystem::path& file);
  static TemplateBank from_string(std::string_view text,
                                  std::string version = "unversioned");

  const std::string& version() const { return version_; }
  const std::vector<Template>& templates() const { return templates_; }
  const std::vector<int>& templates_for(Direction d) const {
    return by_direction_[static_cast<size_t>(d)];
  }
  const Template& by_id(int id) const { return templates_.at(static_cast<size_t>(id)); }

  // Template count per direction.
  std::map<Direction, int> stats() const;

  // Renders with a uniformly sampled template for the triple's direction.
  std::string render(const RelationTriple& triple, Rng& rng) const;

  // Renders with a specific template (by stable id).
  std::string render_with(const RelationTriple& triple, int template_id) const;

  // Exact inverse of render. Throws NoMatchError if no template matches and
  // AmbiguousMatchError if the sentence has more than one reading.
  RelationTriple parse(std::string_view sentence) const;

  // Like parse but also reports which template matched.
  std::pair<RelationTriple, int> parse_with_id(std::string_view sentence) const;

 private:
  TemplateBank() = default;
  void add_template(Direction d, std::string pattern, int source_line);
  void check_coverage() const;

  std::string version_ = "unversioned";
  std::vector<Template> templates_;  // index == Template::id
  std::array<std::vector<int>, 8> by_direction_{};
};

}  // namespace spatialqa

#endif  // SPATIALQA_TEMPLATE_BANK_HPP_
