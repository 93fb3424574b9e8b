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

#include "spatialqa/tpr.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace spatialqa::tpr {

namespace {

void require(bool condition, const char* what) {
  if (!condition) throw DimensionMismatchError(what);
}

}  // namespace

// ---------------------------------------------------------------------------
// Binding, unbinding, layer norm.

Matrix bind(std::span<const FillerRolePair> pairs, Eigen::Index filler_dim,
            Eigen::Index role_dim) {
  Matrix memory = Matrix::Zero(filler_dim, role_dim);
  for (const auto& [filler, role] : pairs) {
    require(filler.size() == filler_dim, "bind: filler dimension mismatch");
    require(role.size() == role_dim, "bind: role dimension mismatch");
    memory.noalias() += filler * role.transpose();
  }
  return memory;
}

Matrix bind(std::span<const FillerRolePair> pairs) {
  require(!pairs.empty(), "bind: pair list is empty and no dimensions were given");
  return bind(pairs, pairs.front().filler.size(), pairs.front().role.size());
}

Vector unbind(const Matrix& memory, const Vector& unbinding) {
  require(memory.cols() == unbinding.size(), "unbind: unbinding dimension mismatch");
  return memory * unbinding;
}

void layer_norm_inplace(double* data, Eigen::Index size) {
  if (size == 0) return;
  Eigen::Map<Eigen::ArrayXd> values(data, size);
  const double mean = values.mean();
  values -= mean;
  const double variance = values.square().sum() / static_cast<double>(size);
  if (variance == 0.0) return;  // constant input, already all zeros
  values /= std::sqrt(variance);
}

void layer_norm(Matrix& values) { layer_norm_inplace(values.data(), values.size()); }
void layer_norm(Vector& values) { layer_norm_inplace(values.data(), values.size()); }

double gaussian(Rng& rng) {
  // Box-Muller; real01 can return 0, so flip the interval once.
  const double u = 1.0 - rng.real01();
  const double v = rng.real01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

Matrix random_orthonormal(int dim, int count, Rng& rng) {
  require(count >= 1 && count <= dim, "random_orthonormal: need 1 <= count <= dim");
  Matrix basis(dim, count);
  for (int col = 0; col < count; ++col) {
    Vector candidate(dim);
    for (int i = 0; i < dim; ++i) candidate[i] = gaussian(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (int prev = 0; prev < col; ++prev) {
        candidate -= basis.col(prev).dot(candidate) * basis.col(prev);
      }
    }
    const double norm = candidate.norm();
    if (norm < 1e-8) {
      --col;  // astronomically unlikely; just redraw
      continue;
    }
    basis.col(col) = candidate / norm;
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Tokenizer and vocabulary.

std::vector<std::string> tokenize(std::string_view text) {
  auto is_punct = [](char c) { return c == '.' || c == ',' || c == '?' || c == '!' || c == ';'; };
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (is_punct(text[i])) {
      tokens.emplace_back(1, text[i]);
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
           !is_punct(text[j])) {
      ++j;
    }
    tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

Vocabulary Vocabulary::build(const TemplateBank& bank,
                             std::span<const std::string> question_patterns,
                             std::span<const EntityId> lexicon) {
  std::set<std::string> words;
  int longest = 0;

  auto absorb_pattern = [&](std::string pattern,
                            std::span<const std::string_view> placeholders) {
    for (std::string_view ph : placeholders) {
      for (size_t pos = pattern.find(ph); pos != std::string::npos;
           pos = pattern.find(ph, pos)) {
        // Entities are single tokens; a one-letter stand-in keeps the
        // sentence-length accounting exact.
        pattern.replace(pos, ph.size(), "E");
      }
    }
    const auto tokens = tokenize(pattern);
    longest = std::max(longest, static_cast<int>(tokens.size()));
    for (const auto& token : tokens) {
      if (token != "E") words.insert(token);
    }
  };

  static constexpr std::string_view kSentencePlaceholders[] = {"<HEAD>", "<TAIL>"};
  static constexpr std::string_view kQuestionPlaceholders[] = {"<X>", "<Y>"};
  for (const auto& tpl : bank.templates()) absorb_pattern(tpl.pattern, kSentencePlaceholders);
  for (const auto& pattern : question_patterns) absorb_pattern(pattern, kQuestionPlaceholders);

  for (const auto& entity : lexicon) words.insert(entity);
  for (AnswerLabel label : kAllAnswerLabels) words.insert(std::string(to_string(label)));

  Vocabulary vocab;
  vocab.tokens_.assign(words.begin(), words.end());
  for (size_t i = 0; i < vocab.tokens_.size(); ++i) {
    vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i));
  }
  vocab.max_sentence_words_ = longest;
  return vocab;
}

Vocabulary Vocabulary::build_default() {
  return build(TemplateBank::builtin(), question_templates(), default_lexicon());
}

int Vocabulary::id(std::string_view token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) {
    throw std::out_of_range("token not in vocabulary: `" + std::string(token) + "`");
  }
  return it->second;
}

std::vector<int> Vocabulary::encode(std::string_view sentence) const {
  std::vector<int> out;
  for (const auto& token : tokenize(sentence)) out.push_back(id(token));
  return out;
}

// ---------------------------------------------------------------------------
// Parameters.

Vector Mlp::apply(const Vector& input) const {
  require(input.size() == w1.cols(), "mlp: input dimension mismatch");
  return w2 * (w1 * input + b1).cwiseMax(0.0) + b2;
}

Matrix Mlp::apply_rows(const Matrix& rows) const {
  require(rows.cols() == w1.cols(), "mlp: input dimension mismatch");
  Matrix hidden = (rows * w1.transpose()).rowwise() + b1.transpose();
  hidden = hidden.cwiseMax(0.0);
  return (hidden * w2.transpose()).rowwise() + b2.transpose();
}

long long Mlp::parameter_count() const {
  return static_cast<long long>(w1.size()) + b1.size() + w2.size() + b2.size();
}

namespace {

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Matrix out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = (rng.real01() * 2.0 - 1.0) * scale;
  }
  return out;
}

Mlp random_mlp(int in, int hidden, int out, Rng& rng) {
  Mlp mlp;
  mlp.w1 = uniform_matrix(hidden, in, 1.0 / std::sqrt(static_cast<double>(in)), rng);
  mlp.b1 = Vector::Zero(hidden);
  mlp.w2 = uniform_matrix(out, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)), rng);
  mlp.b2 = Vector::Zero(out);
  return mlp;
}

}  // namespace

ModelParams ModelParams::random(const Dims& dims, int vocab_size, int max_words,
                                uint64_t seed) {
  if (dims.word < 1 || dims.entity < 1 || dims.relation < 1 || dims.hidden < 1 ||
      vocab_size < 1 || max_words < 1) {
    throw std::invalid_argument("ModelParams: all dimensions must be positive");
  }
  Rng rng(seed);
  ModelParams p;
  p.dims = dims;
  p.vocab_size = vocab_size;
  p.max_words = max_words;
  p.embeddings = uniform_matrix(vocab_size, dims.word, 1.0, rng);
  p.positions = uniform_matrix(max_words, dims.word, 1.0, rng);
  p.entity1 = random_mlp(dims.word, dims.hidden, dims.entity, rng);
  p.entity2 = random_mlp(dims.word, dims.hidden, dims.entity, rng);
  p.relation1 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.relation2 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.relation3 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.unbind1 = random_mlp(dims.word, dims.hidden, dims.entity, rng);
  p.unbind2 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.unbind3 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.unbind4 = random_mlp(dims.word, dims.hidden, dims.relation, rng);
  p.output_proj =
      uniform_matrix(vocab_size, dims.entity, 1.0 / std::sqrt(static_cast<double>(dims.entity)), rng);
  p.initial_memory =
      Matrix::Zero(static_cast<Eigen::Index>(dims.entity) * dims.relation, dims.entity);
  return p;
}

long long ModelParams::parameter_count() const {
  long long total = 0;
  total += static_cast<long long>(embeddings.size());
  total += static_cast<long long>(positions.size());
  for (const Mlp* mlp : {&entity1, &entity2, &relation1, &relation2, &relation3, &unbind1,
                         &unbind2, &unbind3, &unbind4}) {
    total += mlp->parameter_count();
  }
  total += static_cast<long long>(output_proj.size());
  total += static_cast<long long>(initial_memory.size());
  return total;
}

long long param_count(const Dims& dims, long long vocab_size, long long max_words) {
  const long long d = dims.word, de = dims.entity, dr = dims.relation, h = dims.hidden;
  const auto mlp = [&](long long out) { return h * d + h + out * h + out; };
  long long total = 0;
  total += de * dr * de;               // initial memory tensor
  total += vocab_size * d;             // word embeddings
  total += max_words * d;              // position vectors
  total += 2 * mlp(de);                // entity networks
  total += 3 * mlp(dr);                // relation networks
  total += mlp(de) + 3 * mlp(dr);      // unbinding networks
  total += vocab_size * de;            // output projection
  return total;
}

// ---------------------------------------------------------------------------
// Forward pass.

EncodedStory encode(const std::vector<std::vector<int>>& story_tokens,
                    const std::vector<int>& question_tokens, const ModelParams& params) {
  if (story_tokens.empty()) throw std::invalid_argument("encode: story has no sentences");

  auto encode_sentence = [&](const std::vector<int>& tokens) -> Vector {
    if (tokens.empty()) throw std::invalid_argument("encode: empty sentence");
    if (static_cast<int>(tokens.size()) > params.max_words) {
      throw SentenceTooLongError("sentence has " + std::to_string(tokens.size()) +
                                 " words, position table holds " +
                                 std::to_string(params.max_words));
    }
    Vector sum = Vector::Zero(params.dims.word);
    for (size_t j = 0; j < tokens.size(); ++j) {
      const int token = tokens[j];
      if (token < 0 || token >= params.vocab_size) {
        throw TokenOutOfRangeError("token id " + std::to_string(token) +
                                   " outside vocabulary of size " +
                                   std::to_string(params.vocab_size));
      }
      sum += params.embeddings.row(token).cwiseProduct(params.positions.row(j)).transpose();
    }
    return sum / static_cast<double>(tokens.size());
  };

  EncodedStory story;
  story.sentences.resize(static_cast<Eigen::Index>(story_tokens.size()), params.dims.word);
  for (size_t s = 0; s < story_tokens.size(); ++s) {
    story.sentences.row(s) = encode_sentence(story_tokens[s]).transpose();
    story.lengths.push_back(static_cast<int>(story_tokens[s].size()));
  }
  story.question = encode_sentence(question_tokens);
  return story;
}

KeySet build_keys(const EncodedStory& story, const ModelParams& params) {
  require(story.sentences.cols() == params.dims.word, "build_keys: sentence width mismatch");
  const Eigen::Index m = story.sentences.rows();
  const Eigen::Index de = params.dims.entity;
  const Eigen::Index dr = params.dims.relation;

  KeySet keys;
  keys.entity1 = params.entity1.apply_rows(story.sentences);
  keys.entity2 = params.entity2.apply_rows(story.sentences);
  keys.rel1 = params.relation1.apply_rows(story.sentences);
  keys.rel2 = params.relation2.apply_rows(story.sentences);
  keys.rel3 = params.relation3.apply_rows(story.sentences);

  auto outer_rows = [&](const Matrix& entities, const Matrix& relations) {
    Matrix flat(m, de * dr);
    for (Eigen::Index s = 0; s < m; ++s) {
      for (Eigen::Index a = 0; a < de; ++a) {
        for (Eigen::Index b = 0; b < dr; ++b) {
          flat(s, a * dr + b) = entities(s, a) * relations(s, b);
        }
      }
    }
    return flat;
  };
  keys.key1 = outer_rows(keys.entity1, keys.rel1);
  keys.key2 = outer_rows(keys.entity1, keys.rel2);
  keys.key3 = outer_rows(keys.entity2, keys.rel3);
  return keys;
}

MemoryTensor MemoryTensor::zero(int entity_dim, int relation_dim) {
  MemoryTensor memory;
  memory.entity_dim = entity_dim;
  memory.relation_dim = relation_dim;
  memory.flat =
      Matrix::Zero(static_cast<Eigen::Index>(entity_dim) * relation_dim, entity_dim);
  return memory;
}

MemoryTensor memory_forward(const EncodedStory& story, const ModelParams& params,
                            const ForwardOptions& options) {
  if (options.layers < 1) throw std::invalid_argument("memory_forward: layers must be >= 1");
  const KeySet keys = build_keys(story, params);

  MemoryTensor memory = MemoryTensor::zero(params.dims.entity, params.dims.relation);
  if (options.use_initial_memory) {
    require(params.initial_memory.rows() == memory.flat.rows() &&
                params.initial_memory.cols() == memory.flat.cols(),
            "memory_forward: initial memory has wrong shape");
    memory.flat = params.initial_memory;
  }

  // Episodes that do not depend on the evolving memory.
  Matrix fresh = keys.key1.transpose() * keys.entity2;  // N_1
  fresh.noalias() += keys.key3.transpose() * keys.entity1;  // N_3

  for (int t = 0; t < options.layers; ++t) {
    const Matrix pseudo1 = keys.key1 * memory.flat;  // m x entity
    const Matrix pseudo2 = keys.key2 * memory.flat;
    const Matrix pseudo3 = keys.key3 * memory.flat;

    memory.flat += fresh;
    memory.flat.noalias() += keys.key2.transpose() * pseudo1;  // N_2t
    memory.flat.noalias() -= keys.key1.transpose() * pseudo1;  // O_1t
    memory.flat.noalias() -= keys.key2.transpose() * pseudo2;  // O_2t
    memory.flat.noalias() -= keys.key3.transpose() * pseudo3;  // O_3t
    layer_norm(memory.flat);
  }
  return memory;
}

Vector decode(const MemoryTensor& memory, const Vector& encoded_question,
              const ModelParams& params) {
  require(memory.entity_dim == params.dims.entity &&
              memory.relation_dim == params.dims.relation,
          "decode: memory shape mismatch");
  require(encoded_question.size() == params.dims.word, "decode: question width mismatch");
  const Eigen::Index de = params.dims.entity;
  const Eigen::Index dr = params.dims.relation;

  const Vector u1 = params.unbind1.apply(encoded_question);
  const Vector u2 = params.unbind2.apply(encoded_question);
  const Vector u3 = params.unbind3.apply(encoded_question);
  const Vector u4 = params.unbind4.apply(encoded_question);

  // One retrieval hop: contract the head axis with the query, normalize, then
  // contract the relation axis with the unbinding vector. The result lives in
  // tail-entity space and can drive the next hop.
  auto hop = [&](const Vector& head_query, const Vector& relation_unbind) -> Vector {
    Matrix plane = Matrix::Zero(dr, de);
    for (Eigen::Index a = 0; a < de; ++a) {
      plane.noalias() += head_query[a] * memory.flat.middleRows(a * dr, dr);
    }
    layer_norm(plane);
    return plane.transpose() * relation_unbind;
  };

  const Vector hop1 = hop(u1, u2);
  const Vector hop2 = hop(hop1, u3);
  const Vector hop3 = hop(hop2, u4);

  Vector logits = params.output_proj * (hop1 + hop2 + hop3);
  const double peak = logits.maxCoeff();
  Vector probs = (logits.array() - peak).exp();
  probs /= probs.sum();
  return probs;
}

// ---------------------------------------------------------------------------
// Structural checks.

bool CheckReport::all_pass() const {
  for (const auto& item : items) {
    if (!item.pass) return false;
  }
  return true;
}

CheckReport run_structural_checks(const Dims& dims, uint64_t seed, const TemplateBank& bank,
                                  int layers, int recovery_trials) {
  CheckReport report;
  report.dims = dims;

  const Vocabulary vocab = Vocabulary::build(bank, question_templates(), default_lexicon());
  report.vocab_size = vocab.size();
  report.max_words = vocab.max_sentence_words();

  const ModelParams params = ModelParams::random(dims, vocab.size(),
                                                 vocab.max_sentence_words(), seed);
  report.parameters = params.parameter_count();
  Rng rng(derive_stream(seed, "structural-checks", 0, 0));

  auto add = [&](std::string name, bool pass, double max_error) {
    report.items.push_back({std::move(name), pass, max_error});
  };

  {  // Exact recovery under orthonormal roles.
    double worst = 0.0;
    for (int trial = 0; trial < recovery_trials; ++trial) {
      const int count = 1 + static_cast<int>(rng.index(dims.relation));
      const Matrix roles = random_orthonormal(dims.relation, count, rng);
      std::vector<FillerRolePair> pairs;
      pairs.reserve(count);
      for (int i = 0; i < count; ++i) {
        Vector filler(dims.entity);
        for (int j = 0; j < dims.entity; ++j) filler[j] = rng.real01() * 2.0 - 1.0;
        pairs.push_back({std::move(filler), roles.col(i)});
      }
      const Matrix memory = tpr::bind(pairs);
      for (int i = 0; i < count; ++i) {
        const double err =
            (unbind(memory, roles.col(i)) - pairs[i].filler).cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
      }
    }
    add("orthonormal_recovery", worst <= 1e-10, worst);
  }

  {  // Layer norm moments on non-constant input.
    Matrix values = uniform_matrix(64, 64, 3.0, rng);
    layer_norm(values);
    const double mean = values.mean();
    const double variance = values.array().square().sum() / values.size() - mean * mean;
    const double err = std::max(std::abs(mean), std::abs(variance - 1.0));
    add("layer_norm_moments", err <= 1e-6, err);
  }

  {  // Closed-form parameter count vs the instantiated model.
    const long long closed = param_count(dims, vocab.size(), vocab.max_sentence_words());
    const long long actual = params.parameter_count();
    add("parameter_count_closed_form", closed == actual,
        static_cast<double>(std::llabs(closed - actual)));
  }

  // A concrete story: a k=5 chain rendered through the bank.
  Rng story_rng(derive_stream(seed, "structural-checks", 1, 0));
  const Chain chain = sample_chain(5, default_lexicon(), story_rng);
  const Question question = pick_question(chain, story_rng);
  const Sample sample = realize(chain, question, bank, story_rng);
  std::vector<std::vector<int>> story_tokens;
  for (const auto& sentence : sample.story) story_tokens.push_back(vocab.encode(sentence));
  const EncodedStory encoded = encode(story_tokens, vocab.encode(sample.question_text), params);

  {  // Same parameter set serves any number of layers.
    bool finite = true;
    for (int t : {1, 2, 4, 8}) {
      const MemoryTensor m = memory_forward(encoded, params, {t, false});
      finite = finite && m.all_finite();
    }
    const bool count_stable = params.parameter_count() == report.parameters;
    add("parameter_count_layer_invariant", finite && count_stable, 0.0);
  }

  MemoryTensor memory = memory_forward(encoded, params, {layers, false});
  {  // Forward pass and decoder produce a finite, normalized distribution.
    const Vector probs = decode(memory, encoded.question, params);
    const double norm_err = std::abs(probs.sum() - 1.0);
    const bool ok = memory.all_finite() && probs.allFinite() && probs.minCoeff() > 0.0 &&
                    norm_err <= 1e-9;
    add("forward_finite_softmax", ok, norm_err);
  }

  {  // Sentence order cannot matter: the update sums over sentences.
    std::vector<std::vector<int>> shuffled = story_tokens;
    std::vector<size_t> order(shuffled.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    std::vector<std::vector<int>> reordered;
    for (size_t idx : order) reordered.push_back(shuffled[idx]);
    const EncodedStory permuted =
        encode(reordered, vocab.encode(sample.question_text), params);
    const MemoryTensor memory2 = memory_forward(permuted, params, {layers, false});
    const double err = (memory.flat - memory2.flat).cwiseAbs().maxCoeff();
    add("sentence_order_invariance", err <= 1e-9, err);
  }

  {  // Degenerate memory still decodes cleanly.
    const MemoryTensor zero = MemoryTensor::zero(dims.entity, dims.relation);
    const Vector probs = decode(zero, encoded.question, params);
    const double norm_err = std::abs(probs.sum() - 1.0);
    add("zero_memory_decode", probs.allFinite() && norm_err <= 1e-9, norm_err);
  }

  return report;
}

}  // namespace spatialqa::tpr
