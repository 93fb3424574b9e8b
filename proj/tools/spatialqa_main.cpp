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
//
// Command-line front end: dataset building, certification, leakage audits,
// noise statistics, exact sample counting, story solving, and the structural
// checks of the tensor-product memory reference.
//
// Machine-readable JSON goes to stdout; human-readable progress goes to
// stderr (silence it with SPATIALQA_VERBOSE=0). Exit codes: 0 success,
// 1 validation/check failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spatialqa/dataset_io.hpp"
#include "spatialqa/tpr.hpp"

namespace {

using nlohmann::json;
using namespace spatialqa;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool verbose() {
  const char* env = std::getenv("SPATIALQA_VERBOSE");
  return env == nullptr || std::string_view(env) != "0";
}

void note(const std::string& line) {
  if (verbose()) std::cerr << line << '\n';
}

IntRange parse_range(const std::string& text, const char* flag) {
  IntRange range;
  const size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      range.lo = range.hi = std::stoi(text);
    } else {
      range.lo = std::stoi(text.substr(0, dots));
      range.hi = std::stoi(text.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + ": expected `N` or `MIN..MAX`, got `" + text + "`");
  }
  if (range.lo < 0 || range.hi < range.lo) {
    throw UsageError(std::string(flag) + ": bad range `" + text + "`");
  }
  return range;
}

TemplateBank load_bank(const std::string& path) {
  if (path.empty()) return TemplateBank::builtin();
  if (!std::filesystem::exists(path)) throw UsageError("template bank not found: " + path);
  return TemplateBank::load(path);
}

// A dataset argument may be a jsonl file, a directory of jsonl files, or a
// build directory (in which case `prefix` selects the split files).
std::vector<Sample> load_samples(const std::string& path, std::string_view prefix) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw UsageError("dataset not found: " + path);
  std::vector<Sample> samples;
  if (fs::is_regular_file(path)) return read_dataset(path);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    const std::string name = entry.path().filename().string();
    if (!prefix.empty() && fs::exists(fs::path(path) / "manifest.json") &&
        name.rfind(prefix, 0) != 0) {
      continue;
    }
    files.push_back(entry.path());
  }
  if (files.empty()) throw UsageError("no jsonl files found under: " + path);
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    auto part = read_dataset(file);
    samples.insert(samples.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  return samples;
}

json leakage_json(const LeakageReport& report, bool with_ids) {
  json per_k = json::object();
  for (const auto& [k, slot] : report.per_k) {
    json row{{"fraction", slot.fraction},
             {"overlapping", slot.overlapping},
             {"test_n", slot.test_n}};
    if (with_ids) row["offending_ids"] = slot.offending_ids;
    per_k[std::to_string(k)] = std::move(row);
  }
  return json{{"fraction", report.fraction},
              {"overlapping", report.overlapping},
              {"per_k", std::move(per_k)},
              {"test_n", report.test_n},
              {"train_n", report.train_n}};
}

json stats_json(const NoiseStatsTable& table) {
  json rows = json::object();
  for (const auto& [k, row] : table) {
    auto type_json = [&](const NoiseTypeStats& t, bool segments) {
      json j{{"entities", t.entities},
             {"mean_sentences", row.samples == 0
                                    ? 0.0
                                    : static_cast<double>(t.sentences) / row.samples},
             {"sentences", t.sentences}};
      if (segments) j["segments"] = t.segments;
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

RelationTriple parse_triple_literal(std::string_view text) {
  auto fail = [&] {
    return UsageError("expected `(HEAD,direction,TAIL)`, got `" + std::string(text) + "`");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() < 7 || text.front() != '(' || text.back() != ')') throw fail();
  text = text.substr(1, text.size() - 2);
  const size_t c1 = text.find(',');
  const size_t c2 = text.find(',', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos) throw fail();
  RelationTriple triple;
  triple.head = std::string(trim(text.substr(0, c1)));
  triple.tail = std::string(trim(text.substr(c2 + 1)));
  const auto rel = direction_from_string(trim(text.substr(c1 + 1, c2 - c1 - 1)));
  if (!rel || triple.head.empty() || triple.tail.empty()) throw fail();
  triple.rel = *rel;
  return triple;
}

std::vector<RelationTriple> parse_story_lines(const std::vector<std::string>& lines,
                                              const TemplateBank& bank) {
  std::vector<RelationTriple> triples;
  for (const auto& raw : lines) {
    std::string_view line = raw;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (line.empty()) continue;
    if (line.front() == '(') {
      // One or more `;`-separated triple literals.
      size_t start = 0;
      while (start < line.size()) {
        size_t end = line.find(';', start);
        if (end == std::string_view::npos) end = line.size();
        triples.push_back(parse_triple_literal(line.substr(start, end - start)));
        start = end + 1;
      }
    } else {
      triples.push_back(bank.parse(line));
    }
  }
  return triples;
}

// ---------------------------------------------------------------------------

int cmd_gen(uint64_t seed, const std::string& out_dir, const std::string& bank_path,
            const SplitPlan& plan, const std::string& format_name, int workers,
            const std::string& train_noise) {
  if (train_noise == "on") {
    throw UsageError("--train-noise on is not supported: the protocol trains noise-free; "
                     "only the test split carries distracting noise");
  }
  if (train_noise != "off") throw UsageError("--train-noise expects `on` or `off`");
  const auto format = format_from_string(format_name);
  if (!format) throw UsageError("--format expects `jsonl` or `babi`");

  GenOptions options;
  options.master_seed = seed;
  options.plan = plan;
  options.format = *format;
  options.workers = workers;
  const TemplateBank bank = load_bank(bank_path);

  note("building splits into " + out_dir + " (seed " + std::to_string(seed) + ")");
  const BuildResult result = build_splits(options, bank, out_dir);
  for (const auto& [split, per_k] : result.counts) {
    int64_t total = 0;
    for (const auto& [k, n] : per_k) total += n;
    note("  " + split + ": " + std::to_string(total) + " samples");
  }
  note("  leakage: " + std::to_string(result.leakage.overlapping) + "/" +
       std::to_string(result.leakage.test_n) + " test samples overlap train");

  std::ifstream manifest(result.manifest_path);
  std::cout << manifest.rdbuf();
  return kExitOk;
}

int cmd_validate(const std::string& path, const std::string& bank_path, bool failures_only) {
  const TemplateBank bank = load_bank(bank_path);
  const std::vector<Sample> samples = load_samples(path, "");
  int64_t failures = 0;
  for (const auto& sample : samples) {
    const Certification cert = certify(sample, bank);
    if (!cert.pass()) ++failures;
    if (failures_only && cert.pass()) continue;
    json j{{"id", sample.id},
           {"k", sample.k},
           {"pass", cert.pass()},
           {"parse_ok", cert.parse_ok},
           {"triples_match", cert.triples_match},
           {"noisy_answer_ok", cert.noisy_answer_ok},
           {"chain_answer_ok", cert.chain_answer_ok}};
    if (!cert.diagnostics.empty()) j["diagnostics"] = cert.diagnostics;
    std::cout << j.dump() << '\n';
  }
  note("validated " + std::to_string(samples.size()) + " samples, " +
       std::to_string(failures) + " failures");
  return failures == 0 ? kExitOk : kExitValidationFailure;
}

int cmd_leakage(const std::string& train_path, const std::string& test_path) {
  const std::vector<Sample> train = load_samples(train_path, "train_");
  const std::vector<Sample> test = load_samples(test_path, "test_");
  const LeakageReport report = leakage(train, test);
  std::cout << leakage_json(report, true).dump() << '\n';
  std::ostringstream line;
  line << "leakage: " << report.overlapping << "/" << report.test_n << " ("
       << report.fraction * 100.0 << "%)";
  note(line.str());
  return kExitOk;
}

int cmd_stats(const std::string& path) {
  const std::vector<Sample> samples = load_samples(path, "test_");
  const NoiseStatsTable table = noise_stats(samples);
  std::cout << stats_json(table).dump() << '\n';
  for (const auto& [k, row] : table) {
    std::ostringstream line;
    line << "k=" << k << ": " << row.samples << " samples, irrelevant "
         << row.irrelevant.sentences << "s/" << row.irrelevant.entities << "e, disconnected "
         << row.disconnected.sentences << "s/" << row.disconnected.entities << "e/"
         << row.disconnected.segments << "seg, supporting " << row.supporting.sentences << "s";
    note(line.str());
  }
  return kExitOk;
}

int cmd_count(int k, int lexicon_size) {
  const BigUint count = count_samples(k, lexicon_size);
  json j{{"count", count.to_string()}, {"k", k}, {"lexicon", lexicon_size}};
  std::cout << j.dump() << '\n';
  note("count_samples(" + std::to_string(k) + ", " + std::to_string(lexicon_size) +
       ") = " + count.to_string());
  return kExitOk;
}

int cmd_solve(const std::string& story_path, const std::string& triples_arg,
              const std::string& question_arg, const std::string& bank_path) {
  const TemplateBank bank = load_bank(bank_path);
  std::vector<std::string> lines;
  if (!triples_arg.empty()) lines.push_back(triples_arg);
  if (!story_path.empty()) {
    if (!std::filesystem::exists(story_path)) {
      throw UsageError("story file not found: " + story_path);
    }
    std::ifstream in(story_path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  if (lines.empty()) throw UsageError("solve: provide a story file or --triples");

  const size_t comma = question_arg.find(',');
  if (comma == std::string::npos) throw UsageError("--question expects `TARGET,REFERENCE`");
  const std::string target = question_arg.substr(0, comma);
  const std::string reference = question_arg.substr(comma + 1);

  const std::vector<RelationTriple> triples = parse_story_lines(lines, bank);
  const AnswerLabel answer = solve(triples, target, reference);
  json j{{"answer", to_string(answer)},
         {"question", json{{"reference", reference}, {"target", target}}},
         {"triples", triples.size()}};
  std::cout << j.dump() << '\n';
  note("answer: " + std::string(to_string(answer)));
  return kExitOk;
}

int cmd_tpmann_check(int d, int entity, int relation, int hidden, int layers, uint64_t seed,
                     int trials, const std::string& bank_path) {
  const TemplateBank bank = load_bank(bank_path);
  tpr::Dims dims;
  dims.word = d;
  dims.entity = entity;
  dims.relation = relation;
  dims.hidden = hidden;
  const tpr::CheckReport report = tpr::run_structural_checks(dims, seed, bank, layers, trials);

  json checks = json::array();
  for (const auto& item : report.items) {
    checks.push_back(json{{"max_error", item.max_error}, {"name", item.name},
                          {"pass", item.pass}});
    char err[32];
    std::snprintf(err, sizeof(err), "%.3g", item.max_error);
    note(std::string(item.pass ? "PASS" : "FAIL") + " " + item.name + " (max error " + err +
         ")");
  }
  json j{{"all_pass", report.all_pass()},
         {"checks", std::move(checks)},
         {"dims", json{{"d", dims.word},
                       {"d_e", dims.entity},
                       {"d_r", dims.relation},
                       {"hidden", dims.hidden},
                       {"layers", layers}}},
         {"max_words", report.max_words},
         {"param_count", report.parameters},
         {"vocab_size", report.vocab_size}};
  std::cout << j.dump() << '\n';
  return report.all_pass() ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generator, verifier and auditor for multi-hop spatial reasoning QA benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate train/valid/test splits with a manifest");
  gen->configurable();
  uint64_t seed = kDefaultMasterSeed;
  std::string out_dir;
  std::string bank_path;
  std::string format_name = "jsonl";
  std::string k_train = "1..5", k_test = "1..10";
  std::string noise_irr = "0..3", noise_dis = "0..3", noise_sup = "0..2";
  int supporting_min_k = 3;
  int train_n = 10000, valid_n = 1000, test_n = 10000;
  int workers = 1;
  std::string train_noise = "off";
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--out", out_dir, "Output directory")->required();
  gen->add_option("--bank", bank_path, "Template bank file (default: built-in bank)");
  gen->add_option("--format", format_name, "jsonl|babi");
  gen->add_option("--k-train", k_train, "Train/valid chain lengths, MIN..MAX");
  gen->add_option("--k-test", k_test, "Test chain lengths, MIN..MAX");
  gen->add_option("--train-n", train_n, "Training samples per k");
  gen->add_option("--valid-n", valid_n, "Validation samples per k");
  gen->add_option("--test-n", test_n, "Test samples per k");
  gen->add_option("--noise-irrelevant", noise_irr, "Irrelevant sentences per test sample");
  gen->add_option("--noise-disconnected", noise_dis, "Disconnected sentences per test sample");
  gen->add_option("--noise-supporting", noise_sup, "Supporting sentences per test sample");
  gen->add_option("--supporting-min-k", supporting_min_k,
                  "Smallest k that receives supporting noise (>= 3)");
  gen->add_option("--workers", workers, "Worker threads");
  gen->add_option("--train-noise", train_noise, "off|on (on is rejected)");

  // validate
  auto* validate = app.add_subcommand("validate", "Re-certify every sample in a dataset");
  std::string validate_path, validate_bank;
  bool failures_only = false;
  validate->add_option("path", validate_path, "Dataset file or directory")->required();
  validate->add_option("--bank", validate_bank, "Template bank file");
  validate->add_flag("--failures-only", failures_only, "Only print failing samples");

  // leakage
  auto* leak = app.add_subcommand("leakage", "Train/test canonical-key overlap");
  std::string leak_train, leak_test;
  leak->add_option("train", leak_train, "Train dataset file or build directory")->required();
  leak->add_option("test", leak_test, "Test dataset file or build directory")->required();

  // stats
  auto* stats = app.add_subcommand("stats", "Noise statistics per k");
  std::string stats_path;
  stats->add_option("path", stats_path, "Dataset file or build directory")->required();

  // count
  auto* count = app.add_subcommand("count", "Exact number of distinct samples");
  int count_k = 1, count_e = 26;
  count->add_option("k", count_k, "Chain length")->required();
  count->add_option("entities", count_e, "Lexicon size")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Answer a question against a story");
  std::string solve_story, solve_triples, solve_question, solve_bank;
  solve_cmd->add_option("story", solve_story,
                        "Story file: sentences or `(A,left,B)` triple literals, one per line");
  solve_cmd->add_option("--triples", solve_triples, "Inline `;`-separated triple literals");
  solve_cmd->add_option("--question", solve_question, "TARGET,REFERENCE")->required();
  solve_cmd->add_option("--bank", solve_bank, "Template bank file");

  // tpmann-check
  auto* tpcheck = app.add_subcommand("tpmann-check", "Structural checks of the memory model");
  int tp_d = 256, tp_entity = 200, tp_relation = 80, tp_hidden = 200, tp_layers = 8;
  int tp_trials = 200;
  uint64_t tp_seed = 7;
  std::string tp_bank;
  tpcheck->add_option("--d", tp_d, "Sentence embedding width");
  tpcheck->add_option("--entity-dim", tp_entity, "Entity representation width");
  tpcheck->add_option("--relation-dim", tp_relation, "Relation representation width");
  tpcheck->add_option("--hidden", tp_hidden, "MLP hidden width");
  tpcheck->add_option("--layers", tp_layers, "Recurrent layers");
  tpcheck->add_option("--seed", tp_seed, "Parameter seed");
  tpcheck->add_option("--trials", tp_trials, "Recovery-check trials");
  tpcheck->add_option("--bank", tp_bank, "Template bank file (vocabulary source)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      SplitPlan plan;
      const IntRange ktr = parse_range(k_train, "--k-train");
      const IntRange kte = parse_range(k_test, "--k-test");
      plan.train_k_min = ktr.lo;
      plan.train_k_max = ktr.hi;
      plan.test_k_min = kte.lo;
      plan.test_k_max = kte.hi;
      plan.train_n = train_n;
      plan.valid_n = valid_n;
      plan.test_n = test_n;
      plan.test_noise.irrelevant = parse_range(noise_irr, "--noise-irrelevant");
      plan.test_noise.disconnected = parse_range(noise_dis, "--noise-disconnected");
      plan.test_noise.supporting = parse_range(noise_sup, "--noise-supporting");
      plan.test_noise.supporting_min_k = supporting_min_k;
      return cmd_gen(seed, out_dir, bank_path, plan, format_name, workers, train_noise);
    }
    if (validate->parsed()) return cmd_validate(validate_path, validate_bank, failures_only);
    if (leak->parsed()) return cmd_leakage(leak_train, leak_test);
    if (stats->parsed()) return cmd_stats(stats_path);
    if (count->parsed()) return cmd_count(count_k, count_e);
    if (solve_cmd->parsed()) {
      return cmd_solve(solve_story, solve_triples, solve_question, solve_bank);
    }
    if (tpcheck->parsed()) {
      return cmd_tpmann_check(tp_d, tp_entity, tp_relation, tp_hidden, tp_layers, tp_seed,
                              tp_trials, tp_bank);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidationFailure;
  }
  return kExitUsage;
}
