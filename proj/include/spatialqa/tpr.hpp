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
// Numeric reference for tensor-product memories: rank-2 bind/unbind, the
// sentence encoder, the recurrent rank-3 memory update, and the three-hop
// decoder. Forward evaluation only; parameters are randomly initialized and
// the module is exercised through structural and algebraic checks, not
// training.

#ifndef SPATIALQA_TPR_HPP_
#define SPATIALQA_TPR_HPP_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "spatialqa/story.hpp"

namespace spatialqa::tpr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct DimensionMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TokenOutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SentenceTooLongError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Dims {
  int word = 256;      // word/sentence embedding width (d)
  int entity = 200;    // entity representation width (d_e)
  int relation = 80;   // relation representation width (d_r)
  int hidden = 200;    // MLP hidden width
};

// ---------------------------------------------------------------------------
// Rank-2 binding and unbinding.

struct FillerRolePair {
  Vector filler;
  Vector role;
};

// M = sum_i filler_i * role_i^T. All fillers (and all roles) must share a
// dimension; an empty pair list yields the zero matrix of the given shape.
Matrix bind(std::span<const FillerRolePair> pairs, Eigen::Index filler_dim,
            Eigen::Index role_dim);
Matrix bind(std::span<const FillerRolePair> pairs);  // dims from the first pair

// M * u. Recovers filler_i exactly when the roles are orthonormal and
// u = role_i.
Vector unbind(const Matrix& memory, const Vector& unbinding);

// Normalizes the buffer to zero mean and unit variance. Constant input
// (including all zeros) maps to zeros.
void layer_norm_inplace(double* data, Eigen::Index size);
void layer_norm(Matrix& values);
void layer_norm(Vector& values);

// dim x count matrix with orthonormal columns (count <= dim), built from
// Gaussian draws by Gram-Schmidt with a re-orthogonalization pass.
Matrix random_orthonormal(int dim, int count, Rng& rng);

double gaussian(Rng& rng);

// ---------------------------------------------------------------------------
// Vocabulary over generated text.

// Splits on whitespace and peels sentence punctuation into its own tokens.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  // Collects every token a dataset built from this bank can produce: entity
  // names, template and question words, punctuation, and the answer labels.
  static Vocabulary build(const TemplateBank& bank,
                          std::span<const std::string> question_patterns,
                          std::span<const EntityId> lexicon);
  static Vocabulary build_default();

  int size() const { return static_cast<int>(tokens_.size()); }
  int max_sentence_words() const { return max_sentence_words_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  int id(std::string_view token) const;
  std::vector<int> encode(std::string_view sentence) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> ids_;
  int max_sentence_words_ = 0;
};

// ---------------------------------------------------------------------------
// Model parameters.

// One hidden layer with ReLU: out = w2 * relu(w1 * x + b1) + b2.
struct Mlp {
  Matrix w1;
  Vector b1;
  Matrix w2;
  Vector b2;

  Vector apply(const Vector& input) const;
  Matrix apply_rows(const Matrix& rows) const;
  long long parameter_count() const;
};

struct ModelParams {
  Dims dims;
  int vocab_size = 0;
  int max_words = 0;  // learnable position vectors, one per word slot

  Matrix embeddings;  // vocab_size x word
  Matrix positions;   // max_words x word
  Mlp entity1, entity2;                  // word -> entity
  Mlp relation1, relation2, relation3;   // word -> relation
  Mlp unbind1;                           // word -> entity
  Mlp unbind2, unbind3, unbind4;         // word -> relation
  Matrix output_proj;                    // vocab_size x entity
  // The initial memory is a parameter tensor (it dominates the parameter
  // count) but the forward pass starts from zeros unless asked otherwise.
  Matrix initial_memory;  // (entity*relation) x entity

  static ModelParams random(const Dims& dims, int vocab_size, int max_words, uint64_t seed);
  long long parameter_count() const;
};

// Closed-form count of trainable scalars; independent of the number of
// recurrent layers. Agrees exactly with ModelParams::parameter_count().
long long param_count(const Dims& dims, long long vocab_size, long long max_words);

// ---------------------------------------------------------------------------
// Forward pass.

struct EncodedStory {
  Matrix sentences;          // m x word
  Vector question;           // word
  std::vector<int> lengths;  // words per sentence
};

// Per-word embeddings gated by position vectors, averaged per sentence.
EncodedStory encode(const std::vector<std::vector<int>>& story_tokens,
                    const std::vector<int>& question_tokens, const ModelParams& params);

// Rank-3 memory (entity, relation, entity); row (a*relation_dim + b) of flat
// holds M[a, b, :].
struct MemoryTensor {
  int entity_dim = 0;
  int relation_dim = 0;
  Matrix flat;

  static MemoryTensor zero(int entity_dim, int relation_dim);
  double at(int a, int b, int c) const { return flat(a * relation_dim + b, c); }
  bool all_finite() const { return flat.allFinite(); }
};

// Per-sentence search keys and the entity/relation rows they pair.
struct KeySet {
  Matrix entity1, entity2;   // m x entity
  Matrix rel1, rel2, rel3;   // m x relation
  Matrix key1, key2, key3;   // m x (entity*relation)
};

KeySet build_keys(const EncodedStory& story, const ModelParams& params);

struct ForwardOptions {
  int layers = 8;                   // T
  bool use_initial_memory = false;  // start from the parameter tensor instead of zeros
};

// T recurrent layers. Each layer contracts the keys against the current
// memory into pseudo-entities, removes the episodes those keys address, and
// writes the refreshed ones, all under one layer normalization:
//   M_{t+1} = LN(M_t + N_1 + N_2t + N_3 - O_1t - O_2t - O_3t).
// With a zero initial memory the first layer reduces to storing every
// sentence as an episode.
MemoryTensor memory_forward(const EncodedStory& story, const ModelParams& params,
                            const ForwardOptions& options = {});

// Three chained unbinding hops driven by the question, then a linear map to
// a distribution over the vocabulary.
Vector decode(const MemoryTensor& memory, const Vector& encoded_question,
              const ModelParams& params);

// ---------------------------------------------------------------------------
// Structural self-checks (the tpmann-check report).

struct CheckItem {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
};

struct CheckReport {
  Dims dims;
  int vocab_size = 0;
  int max_words = 0;
  long long parameters = 0;
  std::vector<CheckItem> items;

  bool all_pass() const;
};

CheckReport run_structural_checks(const Dims& dims, uint64_t seed, const TemplateBank& bank,
                                  int layers = 8, int recovery_trials = 200);

}  // namespace spatialqa::tpr

#endif  // SPATIALQA_TPR_HPP_
