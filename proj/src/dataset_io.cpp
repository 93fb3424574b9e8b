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

#include "spatialqa/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <mutex>
#include <unordered_set>

#include <json.hpp>

namespace spatialqa {

namespace {

using nlohmann::json;

// Retry ceiling per sample slot; only reachable when a split requests nearly
// the whole key space for its k.
constexpr int kMaxAttempts = 200000;

void run_indexed(int workers, std::span<const size_t> indices,
                 const std::function<void(size_t)>& work) {
  if (workers <= 1 || indices.size() <= 1) {
    for (size_t idx : indices) work(idx);
    return;
  }
  const size_t blocks = std::min<size_t>(workers, indices.size());
  std::vector<std::future<void>> futures;
  futures.reserve(blocks);
  for (size_t b = 0; b < blocks; ++b) {
    futures.push_back(std::async(std::launch::async, [&, b] {
      for (size_t i = b; i < indices.size(); i += blocks) work(indices[i]);
    }));
  }
  for (auto& f : futures) f.get();
}

json triple_to_json(const RelationTriple& t) {
  return json{{"head", t.head}, {"rel", to_string(t.rel)}, {"tail", t.tail}};
}

RelationTriple triple_from_json(const json& j) {
  RelationTriple t;
  t.head = j.at("head").get<std::string>();
  t.tail = j.at("tail").get<std::string>();
  const auto rel = direction_from_string(j.at("rel").get<std::string>());
  if (!rel) throw std::runtime_error("bad direction in triple: " + j.dump());
  t.rel = *rel;
  return t;
}

json chain_to_json(const Chain& c) {
  json coords = json::object();
  for (const auto& [entity, pos] : c.coords) coords[entity] = json::array({pos.x, pos.y});
  json edges = json::array();
  for (const auto& e : c.edges) edges.push_back(triple_to_json(e));
  return json{{"coords", std::move(coords)},
              {"edges", std::move(edges)},
              {"entities", c.entities}};
}

Chain chain_from_json(const json& j) {
  Chain c;
  c.entities = j.at("entities").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges")) c.edges.push_back(triple_from_json(e));
  for (const auto& [entity, pos] : j.at("coords").items()) {
    c.coords[entity] = Coord{pos.at(0).get<int64_t>(), pos.at(1).get<int64_t>()};
  }
  return c;
}

}  // namespace

std::string canonical_key(const Chain& chain, const Question& question) {
  std::vector<std::string> encoded;
  encoded.reserve(chain.edges.size());
  for (const auto& e : chain.edges) {
    encoded.push_back(e.head + ">" + std::string(to_string(e.rel)) + ">" + e.tail);
  }
  std::sort(encoded.begin(), encoded.end());
  std::string key;
  for (const auto& s : encoded) {
    key += s;
    key += ';';
  }
  key += '?';
  key += question.target;
  key += '>';
  key += question.reference;
  return key;
}

std::string canonical_key(const Sample& sample) {
  if (sample.meta.chain.entities.empty()) {
    throw MissingMetaError("sample " + std::to_string(sample.id) + " carries no chain metadata");
  }
  return canonical_key(sample.meta.chain, sample.meta.question);
}

std::string_view to_string(DatasetFormat format) {
  return format == DatasetFormat::Jsonl ? "jsonl" : "babi";
}

std::optional<DatasetFormat> format_from_string(std::string_view name) {
  if (name == "jsonl") return DatasetFormat::Jsonl;
  if (name == "babi" || name == "babi-txt") return DatasetFormat::BabiTxt;
  return std::nullopt;
}

std::string sample_to_json_line(const Sample& sample) {
  json noise = json::array();
  for (const auto& ann : sample.meta.noise) {
    noise.push_back(json{{"new_entities", ann.new_entities},
                         {"triple", triple_to_json(ann.triple)},
                         {"type", to_string(ann.type)}});
  }
  json origins = json::array();
  for (const auto& origin : sample.meta.origins) {
    origins.push_back(json{{"index", origin.index}, {"noise", origin.is_noise}});
  }
  json j{
      {"answer", to_string(sample.answer)},
      {"id", sample.id},
      {"k", sample.k},
      {"meta",
       json{{"chain", chain_to_json(sample.meta.chain)},
            {"noise", std::move(noise)},
            {"origins", std::move(origins)},
            {"question",
             json{{"hops", sample.meta.question.hops},
                  {"reference", sample.meta.question.reference},
                  {"target", sample.meta.question.target}}},
            {"question_template", sample.meta.question_template_id},
            {"stream_seed", sample.meta.stream_seed},
            {"supporting_shortfall", sample.meta.supporting_shortfall},
            {"template_ids", sample.meta.template_ids}}},
      {"question", sample.question_text},
      {"story", sample.story},
  };
  return j.dump();
}

Sample sample_from_json_line(const std::string& line) {
  const json j = json::parse(line);
  Sample s;
  s.id = j.at("id").get<uint64_t>();
  s.k = j.at("k").get<int>();
  s.story = j.at("story").get<std::vector<std::string>>();
  s.question_text = j.at("question").get<std::string>();
  const auto answer = answer_from_string(j.at("answer").get<std::string>());
  if (!answer) throw std::runtime_error("bad answer label in: " + line);
  s.answer = *answer;
  if (!j.contains("meta")) return s;

  const json& meta = j.at("meta");
  s.meta.chain = chain_from_json(meta.at("chain"));
  s.meta.question.target = meta.at("question").at("target").get<std::string>();
  s.meta.question.reference = meta.at("question").at("reference").get<std::string>();
  s.meta.question.hops = meta.at("question").at("hops").get<int>();
  for (const auto& ann : meta.at("noise")) {
    NoiseAnnotation a;
    const auto type = noise_type_from_string(ann.at("type").get<std::string>());
    if (!type) throw std::runtime_error("bad noise type in: " + line);
    a.type = *type;
    a.triple = triple_from_json(ann.at("triple"));
    a.new_entities = ann.at("new_entities").get<std::vector<std::string>>();
    s.meta.noise.push_back(std::move(a));
  }
  for (const auto& origin : meta.at("origins")) {
    s.meta.origins.push_back(
        SentenceOrigin{origin.at("noise").get<bool>(), origin.at("index").get<int>()});
  }
  s.meta.template_ids = meta.at("template_ids").get<std::vector<int>>();
  s.meta.question_template_id = meta.at("question_template").get<int>();
  s.meta.stream_seed = meta.at("stream_seed").get<uint64_t>();
  s.meta.supporting_shortfall = meta.at("supporting_shortfall").get<int>();
  return s;
}

namespace {

void write_jsonl(std::span<const Sample> samples, std::ostream& out) {
  for (const auto& sample : samples) out << sample_to_json_line(sample) << '\n';
}

void write_babi(std::span<const Sample> samples, std::ostream& out) {
  for (const auto& sample : samples) {
    int line_no = 1;
    for (const auto& sentence : sample.story) out << line_no++ << ' ' << sentence << '\n';
    out << line_no << ' ' << sample.question_text << '\t' << to_string(sample.answer) << '\t';
    bool first = true;
    for (size_t i = 0; i < sample.meta.origins.size(); ++i) {
      if (sample.meta.origins[i].is_noise) continue;
      if (!first) out << ' ';
      out << i + 1;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace

void write_dataset(std::span<const Sample> samples, DatasetFormat format,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  if (format == DatasetFormat::Jsonl) {
    write_jsonl(samples, out);
  } else {
    write_babi(samples, out);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Sample> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::vector<Sample> samples;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      samples.push_back(sample_from_json_line(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

LeakageReport leakage(std::span<const Sample> train, std::span<const Sample> test) {
  std::unordered_set<std::string> train_keys;
  train_keys.reserve(train.size() * 2);
  for (const auto& sample : train) train_keys.insert(canonical_key(sample));

  LeakageReport report;
  report.train_n = static_cast<int64_t>(train.size());
  report.test_n = static_cast<int64_t>(test.size());
  for (const auto& sample : test) {
    SplitLeakage& slot = report.per_k[sample.k];
    slot.test_n += 1;
    if (train_keys.count(canonical_key(sample))) {
      slot.overlapping += 1;
      slot.offending_ids.push_back(sample.id);
      report.overlapping += 1;
    }
  }
  for (auto& [k, slot] : report.per_k) {
    slot.fraction = slot.test_n == 0 ? 0.0
                                     : static_cast<double>(slot.overlapping) /
                                           static_cast<double>(slot.test_n);
  }
  report.fraction = report.test_n == 0 ? 0.0
                                       : static_cast<double>(report.overlapping) /
                                             static_cast<double>(report.test_n);
  return report;
}

NoiseStatsTable noise_stats(std::span<const Sample> samples) {
  NoiseStatsTable table;
  for (const auto& sample : samples) {
    if (sample.meta.chain.entities.empty()) {
      throw MissingMetaError("sample " + std::to_string(sample.id) +
                             " carries no noise metadata");
    }
    NoiseKStats& row = table[sample.k];
    row.samples += 1;
    row.supporting_shortfall += sample.meta.supporting_shortfall;
    for (const auto& ann : sample.meta.noise) {
      NoiseTypeStats* bucket = nullptr;
      switch (ann.type) {
        case NoiseType::Irrelevant: bucket = &row.irrelevant; break;
        case NoiseType::Disconnected: bucket = &row.disconnected; break;
        case NoiseType::Supporting: bucket = &row.supporting; break;
      }
      bucket->sentences += 1;
      bucket->entities += static_cast<int64_t>(ann.new_entities.size());
      // A disconnected triple introducing two entities opens a new segment.
      if (ann.type == NoiseType::Disconnected && ann.new_entities.size() == 2) {
        bucket->segments += 1;
      }
    }
  }
  return table;
}

namespace {

struct Candidate {
  Chain chain;
  Question question;
  std::string key;
  uint64_t stream_seed = 0;
  std::optional<Rng> rng;  // stream state after chain+question draws
};

Candidate make_candidate(uint64_t master_seed, std::string_view tag, int k, size_t index,
                         int attempt, const std::vector<EntityId>& lexicon) {
  Candidate c;
  c.stream_seed = derive_stream(master_seed, tag, static_cast<uint64_t>(k),
                                static_cast<uint64_t>(index), static_cast<uint64_t>(attempt));
  c.rng.emplace(c.stream_seed);
  c.chain = sample_chain(k, lexicon, *c.rng);
  c.question = pick_question(c.chain, *c.rng);
  c.key = canonical_key(c.chain, c.question);
  return c;
}

}  // namespace

std::vector<Sample> generate_split(std::string_view split_tag, int k, int n,
                                   const NoiseRanges* noise, const TemplateBank& bank,
                                   const std::vector<EntityId>& lexicon,
                                   uint64_t master_seed, int workers) {
  if (n < 0) throw std::invalid_argument("generate_split: negative sample count");

  std::vector<Candidate> slots(n);
  std::vector<int> attempts(n, 0);
  std::vector<size_t> unresolved(n);
  for (size_t i = 0; i < static_cast<size_t>(n); ++i) unresolved[i] = i;

  // Candidates are drawn in parallel, but acceptance into the key set is a
  // serial pass in index order, so the output never depends on scheduling.
  std::unordered_set<std::string> keys;
  keys.reserve(static_cast<size_t>(n) * 2);
  std::vector<Candidate> accepted(n);
  while (!unresolved.empty()) {
    run_indexed(workers, unresolved, [&](size_t idx) {
      slots[idx] = make_candidate(master_seed, split_tag, k, idx, attempts[idx], lexicon);
    });
    std::vector<size_t> next;
    for (size_t idx : unresolved) {
      if (keys.insert(slots[idx].key).second) {
        accepted[idx] = std::move(slots[idx]);
      } else {
        if (++attempts[idx] > kMaxAttempts) {
          throw std::runtime_error("generate_split: cannot draw " + std::to_string(n) +
                                   " distinct samples for k=" + std::to_string(k) +
                                   "; the key space is too small");
        }
        next.push_back(idx);
      }
    }
    unresolved = std::move(next);
  }

  std::vector<Sample> samples(n);
  std::vector<size_t> all(n);
  for (size_t i = 0; i < static_cast<size_t>(n); ++i) all[i] = i;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  run_indexed(workers, all, [&](size_t idx) {
    try {
      Candidate& c = accepted[idx];
      NoiseResult noise_result;
      if (noise != nullptr) {
        const NoiseSpec spec = draw_noise_spec(k, *noise, *c.rng);
        noise_result = apply_noise(c.chain, spec, lexicon, *c.rng);
      }
      Sample sample = realize(c.chain, noise_result, c.question, bank, *c.rng);
      sample.id = static_cast<uint64_t>(k) * 1000000 + idx;
      sample.meta.stream_seed = c.stream_seed;
      const Certification cert = certify(sample, bank);
      if (!cert.pass()) {
        std::string what = "certification failed for sample " + std::to_string(sample.id);
        for (const auto& d : cert.diagnostics) what += "; " + d;
        throw std::runtime_error(what);
      }
      samples[idx] = std::move(sample);
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  return samples;
}

namespace {

json leakage_to_json(const LeakageReport& report) {
  json per_k = json::object();
  for (const auto& [k, slot] : report.per_k) {
    per_k[std::to_string(k)] = json{{"fraction", slot.fraction},
                                    {"overlapping", slot.overlapping},
                                    {"test_n", slot.test_n}};
  }
  return json{{"fraction", report.fraction},
              {"overlapping", report.overlapping},
              {"per_k", std::move(per_k)},
              {"test_n", report.test_n},
              {"train_n", report.train_n}};
}

json noise_stats_to_json(const NoiseStatsTable& table) {
  json rows = json::object();
  for (const auto& [k, row] : table) {
    auto type_json = [&](const NoiseTypeStats& t, bool with_segments) {
      json j{{"entities", t.entities},
             {"mean_sentences",
              row.samples == 0 ? 0.0
                               : static_cast<double>(t.sentences) /
                                     static_cast<double>(row.samples)},
             {"sentences", t.sentences}};
      if (with_segments) j["segments"] = t.segments;
      return j;
    };
    rows[std::to_string(k)] = json{{"disconnected", type_json(row.disconnected, true)},
                                   {"irrelevant", type_json(row.irrelevant, false)},
                                   {"samples", row.samples},
                                   {"supporting", type_json(row.supporting, false)},
                                   {"supporting_shortfall", row.supporting_shortfall}};
  }
  return rows;
}

json plan_to_json(const SplitPlan& plan) {
  auto range_json = [](IntRange r) { return json::array({r.lo, r.hi}); };
  return json{{"test_k", json::array({plan.test_k_min, plan.test_k_max})},
              {"test_n", plan.test_n},
              {"test_noise",
               json{{"disconnected", range_json(plan.test_noise.disconnected)},
                    {"irrelevant", range_json(plan.test_noise.irrelevant)},
                    {"supporting", range_json(plan.test_noise.supporting)},
                    {"supporting_min_k", plan.test_noise.supporting_min_k}}},
              {"train_k", json::array({plan.train_k_min, plan.train_k_max})},
              {"train_n", plan.train_n},
              {"valid_n", plan.valid_n}};
}

}  // namespace

BuildResult build_splits(const GenOptions& options, const TemplateBank& bank,
                         const std::filesystem::path& out_dir) {
  const SplitPlan& plan = options.plan;
  if (plan.train_k_min < 1 || plan.train_k_max < plan.train_k_min || plan.test_k_min < 1 ||
      plan.test_k_max < plan.test_k_min) {
    throw std::invalid_argument("build_splits: bad k ranges");
  }
  if (plan.train_n < 0 || plan.valid_n < 0 || plan.test_n < 0) {
    throw std::invalid_argument("build_splits: negative split size");
  }

  std::filesystem::create_directories(out_dir);
  const std::string ext = options.format == DatasetFormat::Jsonl ? ".jsonl" : ".txt";

  BuildResult result;
  std::unordered_set<std::string> train_keys;
  struct TestKey {
    int k;
    uint64_t id;
    std::string key;
  };
  std::vector<TestKey> test_keys;

  auto emit = [&](const std::string& split, int k, int n, const NoiseRanges* noise) {
    std::vector<Sample> samples = generate_split(split, k, n, noise, bank, options.lexicon,
                                                 options.master_seed, options.workers);
    const std::string name = split + "_k" + std::to_string(k) + ext;
    write_dataset(samples, options.format, out_dir / name);
    result.files.push_back(name);
    result.counts[split][k] = static_cast<int64_t>(samples.size());
    if (split == "train") {
      for (const auto& s : samples) train_keys.insert(canonical_key(s));
    } else if (split == "test") {
      for (const auto& s : samples) test_keys.push_back({s.k, s.id, canonical_key(s)});
      for (const auto& [stat_k, row] : noise_stats(samples)) {
        NoiseKStats& into = result.test_noise_stats[stat_k];
        into.samples += row.samples;
        into.supporting_shortfall += row.supporting_shortfall;
        auto fold = [](NoiseTypeStats& a, const NoiseTypeStats& b) {
          a.sentences += b.sentences;
          a.entities += b.entities;
          a.segments += b.segments;
        };
        fold(into.irrelevant, row.irrelevant);
        fold(into.disconnected, row.disconnected);
        fold(into.supporting, row.supporting);
      }
    }
  };

  for (int k = plan.train_k_min; k <= plan.train_k_max; ++k) {
    emit("train", k, plan.train_n, nullptr);
  }
  for (int k = plan.train_k_min; k <= plan.train_k_max; ++k) {
    emit("valid", k, plan.valid_n, nullptr);
  }
  for (int k = plan.test_k_min; k <= plan.test_k_max; ++k) {
    emit("test", k, plan.test_n, &plan.test_noise);
  }

  LeakageReport& report = result.leakage;
  report.train_n = static_cast<int64_t>(train_keys.size());
  report.test_n = static_cast<int64_t>(test_keys.size());
  for (const auto& entry : test_keys) {
    SplitLeakage& slot = report.per_k[entry.k];
    slot.test_n += 1;
    if (train_keys.count(entry.key)) {
      slot.overlapping += 1;
      slot.offending_ids.push_back(entry.id);
      report.overlapping += 1;
    }
  }
  for (auto& [k, slot] : report.per_k) {
    slot.fraction = slot.test_n == 0 ? 0.0
                                     : static_cast<double>(slot.overlapping) /
                                           static_cast<double>(slot.test_n);
  }
  report.fraction = report.test_n == 0 ? 0.0
                                       : static_cast<double>(report.overlapping) /
                                             static_cast<double>(report.test_n);

  json counts = json::object();
  for (const auto& [split, per_k] : result.counts) {
    json row = json::object();
    for (const auto& [k, n] : per_k) row[std::to_string(k)] = n;
    counts[split] = std::move(row);
  }
  std::sort(result.files.begin(), result.files.end());
  const json manifest{{"bank_version", bank.version()},
                      {"counts", std::move(counts)},
                      {"files", result.files},
                      {"format", to_string(options.format)},
                      {"leakage", leakage_to_json(result.leakage)},
                      {"noise_stats", json{{"test", noise_stats_to_json(result.test_noise_stats)}}},
                      {"plan", plan_to_json(plan)},
                      {"seed", options.master_seed}};
  result.manifest_path = out_dir / "manifest.json";
  std::ofstream out(result.manifest_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + result.manifest_path.string());
  out << manifest.dump(2) << '\n';
  return result;
}

}  // namespace spatialqa
