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

#include "spatialqa/noise.hpp"

#include <algorithm>

namespace spatialqa {

namespace {

// Unused lexicon entries, in lexicon order so draws are reproducible.
std::vector<EntityId> unused_entities(const std::vector<EntityId>& lexicon,
                                      const std::set<EntityId>& used) {
  std::vector<EntityId> out;
  for (const auto& e : lexicon) {
    if (!used.count(e)) out.push_back(e);
  }
  return out;
}

EntityId take_fresh(std::vector<EntityId>& fresh, std::set<EntityId>& used, Rng& rng) {
  const size_t i = rng.index(fresh.size());
  EntityId picked = fresh[i];
  fresh.erase(fresh.begin() + i);
  used.insert(picked);
  return picked;
}

Direction unit_direction(Coord d) {
  for (Direction dir : kAllDirections) {
    if (offset(dir) == d) return dir;
  }
  throw std::logic_error("unit_direction: displacement is not a unit step");
}

}  // namespace

std::string_view to_string(NoiseType type) {
  switch (type) {
    case NoiseType::Irrelevant: return "irrelevant";
    case NoiseType::Disconnected: return "disconnected";
    case NoiseType::Supporting: return "supporting";
  }
  throw std::logic_error("to_string: bad noise type");
}

std::optional<NoiseType> noise_type_from_string(std::string_view name) {
  if (name == "irrelevant") return NoiseType::Irrelevant;
  if (name == "disconnected") return NoiseType::Disconnected;
  if (name == "supporting") return NoiseType::Supporting;
  return std::nullopt;
}

std::vector<NoiseAnnotation> add_irrelevant(const Chain& chain, int n,
                                            const std::vector<EntityId>& lexicon,
                                            std::set<EntityId>& used, Rng& rng) {
  if (n < 0) throw std::invalid_argument("add_irrelevant: negative count");
  std::vector<EntityId> fresh = unused_entities(lexicon, used);
  if (fresh.size() < static_cast<size_t>(n)) {
    throw LexiconExhaustedError("irrelevant noise needs " + std::to_string(n) +
                                " fresh entities, lexicon has " +
                                std::to_string(fresh.size()));
  }

  std::vector<EntityId> attach_points = chain.entities;
  std::vector<NoiseAnnotation> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const EntityId anchor = attach_points[rng.index(attach_points.size())];
    const EntityId branch = take_fresh(fresh, used, rng);
    const Direction dir = kAllDirections[rng.index(kAllDirections.size())];
    RelationTriple triple{branch, dir, anchor};
    if (rng.coin()) triple = invert(triple);
    out.push_back({NoiseType::Irrelevant, std::move(triple), {branch}});
    attach_points.push_back(branch);
  }
  return out;
}

std::vector<NoiseAnnotation> add_disconnected(const Chain&, int n,
                                              const std::vector<EntityId>& lexicon,
                                              std::set<EntityId>& used, Rng& rng) {
  if (n < 0) throw std::invalid_argument("add_disconnected: negative count");
  if (n == 0) return {};
  std::vector<EntityId> fresh = unused_entities(lexicon, used);
  if (fresh.size() < static_cast<size_t>(n) + 1) {
    throw LexiconExhaustedError("disconnected noise needs " + std::to_string(n + 1) +
                                " fresh entities, lexicon has " +
                                std::to_string(fresh.size()));
  }

  std::vector<EntityId> segment;
  segment.push_back(take_fresh(fresh, used, rng));
  std::vector<NoiseAnnotation> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const EntityId next = take_fresh(fresh, used, rng);
    const Direction dir = kAllDirections[rng.index(kAllDirections.size())];
    RelationTriple triple{next, dir, segment.back()};
    if (rng.coin()) triple = invert(triple);
    NoiseAnnotation ann{NoiseType::Disconnected, std::move(triple), {}};
    if (i == 0) ann.new_entities = {segment.back(), next};
    else ann.new_entities = {next};
    out.push_back(std::move(ann));
    segment.push_back(next);
  }
  return out;
}

SupportingNoise add_supporting(const Chain& chain, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("add_supporting: negative count");
  if (chain.k() < 3) {
    throw std::invalid_argument("add_supporting: chain must have at least 3 edges");
  }

  // Non-adjacent entity pairs whose displacement is a unit step. Adjacent
  // pairs are already chain edges, so no emitted triple can duplicate one.
  std::vector<std::pair<int, int>> eligible;
  const int count = static_cast<int>(chain.entities.size());
  for (int i = 0; i + 2 < count; ++i) {
    for (int j = i + 2; j < count; ++j) {
      const Coord d = chain.coords.at(chain.entities[i]) - chain.coords.at(chain.entities[j]);
      if (d == Coord{0, 0}) continue;
      if (std::max(std::abs(d.x), std::abs(d.y)) > 1) continue;
      eligible.push_back({i, j});
    }
  }

  rng.shuffle(eligible);
  SupportingNoise result;
  const int take = std::min<int>(n, static_cast<int>(eligible.size()));
  result.shortfall = n - take;
  for (int p = 0; p < take; ++p) {
    const auto [i, j] = eligible[p];
    const EntityId& u = chain.entities[i];
    const EntityId& v = chain.entities[j];
    const Coord d = chain.coords.at(u) - chain.coords.at(v);
    RelationTriple triple{u, unit_direction(d), v};
    if (rng.coin()) triple = invert(triple);
    result.annotations.push_back({NoiseType::Supporting, std::move(triple), {}});
  }
  return result;
}

NoiseSpec draw_noise_spec(int k, const NoiseRanges& ranges, Rng& rng) {
  auto check = [](IntRange r, const char* name) {
    if (r.lo < 0 || r.hi < r.lo) {
      throw std::invalid_argument(std::string("bad noise range for ") + name);
    }
  };
  check(ranges.irrelevant, "irrelevant");
  check(ranges.disconnected, "disconnected");
  check(ranges.supporting, "supporting");
  if (ranges.supporting_min_k < 3) {
    throw std::invalid_argument("supporting noise threshold cannot go below k=3");
  }
  NoiseSpec spec;
  spec.irrelevant = rng.int_in(ranges.irrelevant.lo, ranges.irrelevant.hi);
  spec.disconnected = rng.int_in(ranges.disconnected.lo, ranges.disconnected.hi);
  spec.supporting =
      k >= ranges.supporting_min_k ? rng.int_in(ranges.supporting.lo, ranges.supporting.hi) : 0;
  return spec;
}

NoiseResult apply_noise(const Chain& chain, const NoiseSpec& spec,
                        const std::vector<EntityId>& lexicon, Rng& rng) {
  if (spec.supporting > 0 && chain.k() < 3) {
    throw std::invalid_argument("supporting noise requires a chain with k >= 3");
  }
  std::set<EntityId> used(chain.entities.begin(), chain.entities.end());
  NoiseResult result;
  for (auto& ann : add_irrelevant(chain, spec.irrelevant, lexicon, used, rng)) {
    result.annotations.push_back(std::move(ann));
  }
  for (auto& ann : add_disconnected(chain, spec.disconnected, lexicon, used, rng)) {
    result.annotations.push_back(std::move(ann));
  }
  if (spec.supporting > 0) {
    SupportingNoise supporting = add_supporting(chain, spec.supporting, rng);
    result.supporting_shortfall = supporting.shortfall;
    for (auto& ann : supporting.annotations) {
      result.annotations.push_back(std::move(ann));
    }
  }
  return result;
}

}  // namespace spatialqa
