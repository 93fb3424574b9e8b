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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace spatialqa {

namespace {

constexpr std::string_view kHead = "<HEAD>";
constexpr std::string_view kTail = "<TAIL>";

// A pattern split into literal text around its two placeholders.
struct PatternParts {
  std::string prefix, middle, suffix;
  bool head_first = true;
};

PatternParts split_pattern(const std::string& pattern) {
  const size_t head_pos = pattern.find(kHead);
  const size_t tail_pos = pattern.find(kTail);
  PatternParts parts;
  parts.head_first = head_pos < tail_pos;
  const size_t first = parts.head_first ? head_pos : tail_pos;
  const size_t first_len = parts.head_first ? kHead.size() : kTail.size();
  const size_t second = parts.head_first ? tail_pos : head_pos;
  const size_t second_len = parts.head_first ? kTail.size() : kHead.size();
  parts.prefix = pattern.substr(0, first);
  parts.middle = pattern.substr(first + first_len, second - first - first_len);
  parts.suffix = pattern.substr(second + second_len);
  return parts;
}

size_t count_occurrences(const std::string& text, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

bool valid_entity_token(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(),
                      [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kBuiltinBank = R"(# version: builtin-1
top	<HEAD> is above <TAIL>.
top	<HEAD> is over <TAIL>.
top	<HEAD> is placed on top of <TAIL>.
top	<TAIL> has <HEAD> above it.
down	<HEAD> is below <TAIL>.
down	<HEAD> is under <TAIL>.
down	<HEAD> is placed beneath <TAIL>.
down	<TAIL> has <HEAD> below it.
left	<HEAD> is to the left of <TAIL>.
left	<HEAD> is on the left side of <TAIL>.
left	<HEAD> is positioned left of <TAIL>.
left	<TAIL> has <HEAD> to its left.
right	<HEAD> is to the right of <TAIL>.
right	<HEAD> is on the right side of <TAIL>.
right	<HEAD> is positioned right of <TAIL>.
right	<TAIL> has <HEAD> to its right.
top-left	<HEAD> is to the top left of <TAIL>.
top-left	<HEAD> is at the upper left of <TAIL>.
top-left	<HEAD> is positioned above and to the left of <TAIL>.
top-left	<TAIL> has <HEAD> at its top left.
top-right	<HEAD> is to the top right of <TAIL>.
top-right	<HEAD> is at the upper right of <TAIL>.
top-right	<HEAD> is positioned above and to the right of <TAIL>.
top-right	<TAIL> has <HEAD> at its top right.
down-left	<HEAD> is to the bottom left of <TAIL>.
down-left	<HEAD> is at the lower left of <TAIL>.
down-left	<HEAD> is positioned below and to the left of <TAIL>.
down-left	<TAIL> has <HEAD> at its bottom left.
down-right	<HEAD> is to the bottom right of <TAIL>.
down-right	<HEAD> is at the lower right of <TAIL>.
down-right	<HEAD> is positioned below and to the right of <TAIL>.
down-right	<TAIL> has <HEAD> at its bottom right.
)";

}  // namespace

const TemplateBank& TemplateBank::builtin() {
  static const TemplateBank bank = from_string(kBuiltinBank, "builtin-1");
  return bank;
}

TemplateBank TemplateBank::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open template bank: " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_string(buffer.str(), file.stem().string());
}

TemplateBank TemplateBank::from_string(std::string_view text, std::string version) {
  TemplateBank bank;
  bank.version_ = std::move(version);
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = text.find('\n', pos);
    std::string_view line =
        end == std::string_view::npos ? text.substr(pos) : text.substr(pos, end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (trim(line).front() == '#') {
      std::string_view comment = trim(line);
      comment.remove_prefix(1);
      comment = trim(comment);
      if (comment.substr(0, 8) == "version:") {
        bank.version_ = std::string(trim(comment.substr(8)));
      }
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw TemplateParseError(line_no, "expected `direction<TAB>pattern`");
    }
    const auto direction = direction_from_string(trim(line.substr(0, tab)));
    if (!direction) {
      throw TemplateParseError(line_no,
                               "unknown direction `" + std::string(trim(line.substr(0, tab))) + "`");
    }
    bank.add_template(*direction, std::string(line.substr(tab + 1)), line_no);
  }
  bank.check_coverage();
  return bank;
}

void TemplateBank::add_template(Direction d, std::string pattern, int source_line) {
  if (count_occurrences(pattern, kHead) != 1) {
    throw TemplateParseError(source_line, "pattern must contain <HEAD> exactly once");
  }
  if (count_occurrences(pattern, kTail) != 1) {
    throw TemplateParseError(source_line, "pattern must contain <TAIL> exactly once");
  }
  if (pattern.find('\t') != std::string::npos) {
    // Rendered sentences end up in tab-delimited export lines.
    throw TemplateParseError(source_line, "pattern must not contain tab characters");
  }
  const PatternParts parts = split_pattern(pattern);
  if (parts.middle.empty()) {
    throw TemplateParseError(source_line, "placeholders must be separated by literal text");
  }
  // Reject any second template whose literal shape matches an existing one;
  // such a pair parses ambiguously no matter which directions are involved.
  for (const Template& existing : templates_) {
    const PatternParts other = split_pattern(existing.pattern);
    if (other.prefix == parts.prefix && other.middle == parts.middle &&
        other.suffix == parts.suffix) {
      throw TemplateParseError(source_line, "pattern collides with template " +
                                                std::to_string(existing.id) + " (`" +
                                                existing.pattern + "`)");
    }
  }
  const int id = static_cast<int>(templates_.size());
  templates_.push_back(Template{d, std::move(pattern), id});
  by_direction_[static_cast<size_t>(d)].push_back(id);
}

void TemplateBank::check_coverage() const {
  for (Direction d : kAllDirections) {
    if (by_direction_[static_cast<size_t>(d)].empty()) {
      throw EmptyDirectionError("no template for direction `" + std::string(to_string(d)) + "`");
    }
  }
}

std::map<Direction, int> TemplateBank::stats() const {
  std::map<Direction, int> counts;
  for (Direction d : kAllDirections) {
    counts[d] = static_cast<int>(by_direction_[static_cast<size_t>(d)].size());
  }
  return counts;
}

std::string TemplateBank::render(const RelationTriple& triple, Rng& rng) const {
  const auto& candidates = templates_for(triple.rel);
  return render_with(triple, candidates[rng.index(candidates.size())]);
}

std::string TemplateBank::render_with(const RelationTriple& triple, int template_id) const {
  const Template& tpl = by_id(template_id);
  std::string out = tpl.pattern;
  const size_t head_pos = out.find(kHead);
  out.replace(head_pos, kHead.size(), triple.head);
  const size_t tail_pos = out.find(kTail);
  out.replace(tail_pos, kTail.size(), triple.tail);
  return out;
}

std::pair<RelationTriple, int> TemplateBank::parse_with_id(std::string_view sentence) const {
  std::vector<std::pair<RelationTriple, int>> matches;
  for (const Template& tpl : templates_) {
    const PatternParts parts = split_pattern(tpl.pattern);
    const size_t fixed = parts.prefix.size() + parts.middle.size() + parts.suffix.size();
    if (sentence.size() < fixed + 2) continue;
    if (sentence.substr(0, parts.prefix.size()) != parts.prefix) continue;
    if (sentence.substr(sentence.size() - parts.suffix.size()) != parts.suffix) continue;
    const std::string_view inner =
        sentence.substr(parts.prefix.size(),
                        sentence.size() - parts.prefix.size() - parts.suffix.size());
    // Every occurrence of the middle separator is a candidate split.
    for (size_t split = inner.find(parts.middle); split != std::string_view::npos;
         split = inner.find(parts.middle, split + 1)) {
      const std::string_view first = inner.substr(0, split);
      const std::string_view second = inner.substr(split + parts.middle.size());
      if (!valid_entity_token(first) || !valid_entity_token(second)) continue;
      RelationTriple triple;
      triple.rel = tpl.rel;
      triple.head = std::string(parts.head_first ? first : second);
      triple.tail = std::string(parts.head_first ? second : first);
      matches.push_back({triple, tpl.id});
    }
  }
  if (matches.empty()) {
    throw NoMatchError("no template matches: `" + std::string(sentence) + "`");
  }
  if (matches.size() > 1) {
    throw AmbiguousMatchError("sentence has " + std::to_string(matches.size()) +
                              " readings: `" + std::string(sentence) + "`");
  }
  return matches.front();
}

RelationTriple TemplateBank::parse(std::string_view sentence) const {
  return parse_with_id(sentence).first;
}

}  // namespace spatialqa
