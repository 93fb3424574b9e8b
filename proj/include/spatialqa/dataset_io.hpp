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

#ifndef SPATIALQA_DATASET_IO_HPP_
#define SPATIALQA_DATASET_IO_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatialqa/solver.hpp"

namespace spatialqa {

// Default master seed for dataset builds. The full default build from this
// seed has zero train/test canonical-key overlap for every k >= 2 (the k=1
// space only holds 10,400 keys, so overlap there is unavoidable and is
// reported in the manifest instead).
inline constexpr uint64_t kDefaultMasterSeed = 1658;

struct MissingMetaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Order- and template-invariant identity of a sample: its chain triples
// (sorted, before noise) plus the oriented question. Asking X-of-Y and Y-of-X
// are distinct samples.
std::string canonical_key(const Chain& chain, const Question& question);
std::string canonical_key(const Sample& sample);  // throws MissingMetaError

enum class DatasetFormat : uint8_t { Jsonl, BabiTxt };

std::string_view to_string(DatasetFormat format);
std::optional<DatasetFormat> format_from_string(std::string_view name);

// jsonl: one self-contained object per line, including full metadata.
// babi-txt: numbered story lines restarting at 1 per sample, then
// `N question<TAB>answer<TAB>chain sentence line numbers`.
void write_dataset(std::span<const Sample> samples, DatasetFormat format,
                   const std::filesystem::path& path);

// Reads a jsonl dataset back; the exact inverse of the jsonl writer.
std::vector<Sample> read_dataset(const std::filesystem::path& path);

std::string sample_to_json_line(const Sample& sample);
Sample sample_from_json_line(const std::string& line);

struct SplitLeakage {
  int64_t test_n = 0;
  int64_t overlapping = 0;
  double fraction = 0.0;
  std::vector<uint64_t> offending_ids;
};

struct LeakageReport {
  int64_t train_n = 0;
  int64_t test_n = 0;
  int64_t overlapping = 0;
  double fraction = 0.0;
  std::map<int, SplitLeakage> per_k;
};

// Fraction of test samples whose canonical key occurs in the train set.
// Exact set membership on the pre-noise, pre-template keys.
LeakageReport leakage(std::span<const Sample> train, std::span<const Sample> test);

struct NoiseTypeStats {
  int64_t sentences = 0;
  int64_t entities = 0;
  int64_t segments = 0;  // disconnected only: independent chains added
};

struct NoiseKStats {
  int64_t samples = 0;
  NoiseTypeStats irrelevant;
  NoiseTypeStats disconnected;
  NoiseTypeStats supporting;
  int64_t supporting_shortfall = 0;
};

using NoiseStatsTable = std::map<int, NoiseKStats>;

NoiseStatsTable noise_stats(std::span<const Sample> samples);

// Split sizes and noise placement. Train and validation are noise-free; only
// the test split receives distracting noise.
struct SplitPlan {
  int train_k_min = 1;
  int train_k_max = 5;
  int test_k_min = 1;
  int test_k_max = 10;
  int train_n = 10000;
  int valid_n = 1000;
  int test_n = 10000;
  NoiseRanges test_noise{};
};

struct GenOptions {
  uint64_t master_seed = kDefaultMasterSeed;
  SplitPlan plan;
  DatasetFormat format = DatasetFormat::Jsonl;
  int workers = 1;
  std::vector<EntityId> lexicon = default_lexicon();
};

struct BuildResult {
  std::map<std::string, std::map<int, int64_t>> counts;  // split -> k -> samples
  LeakageReport leakage;
  NoiseStatsTable test_noise_stats;
  std::vector<std::string> files;  // relative to the output directory
  std::filesystem::path manifest_path;
};

// Generates one split slice: n certified samples of chain length k,
// deduplicated by canonical key within the slice. Every sample owns an RNG
// stream derived from (master seed, split tag, k, index, retry attempt), so
// the result is byte-identical for any worker count.
std::vector<Sample> generate_split(std::string_view split_tag, int k, int n,
                                   const NoiseRanges* noise, const TemplateBank& bank,
                                   const std::vector<EntityId>& lexicon,
                                   uint64_t master_seed, int workers);

// Generates, certifies and writes all splits plus manifest.json (seed, plan,
// bank version, counts, leakage, noise statistics). Aborts on any
// certification failure. Deduplication happens within splits only; overlap
// across train/test is measured and reported, never silently removed.
BuildResult build_splits(const GenOptions& options, const TemplateBank& bank,
                         const std::filesystem::path& out_dir);

}  // namespace spatialqa

#endif  // SPATIALQA_DATASET_IO_HPP_
