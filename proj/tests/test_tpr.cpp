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

#include <doctest.h>

using namespace spatialqa;
using namespace spatialqa::tpr;

namespace {

Vector random_vector(int dim, Rng& rng, double scale = 1.0) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = (rng.real01() * 2.0 - 1.0) * scale;
  return v;
}

Dims toy_dims() {
  Dims dims;
  dims.word = 4;
  dims.entity = 3;
  dims.relation = 2;
  dims.hidden = 4;
  return dims;
}

EncodedStory random_story(int m, int word_dim, Rng& rng, double scale) {
  EncodedStory story;
  story.sentences.resize(m, word_dim);
  for (int s = 0; s < m; ++s) story.sentences.row(s) = random_vector(word_dim, rng, scale);
  story.question = random_vector(word_dim, rng, scale);
  story.lengths.assign(m, 3);
  return story;
}

}  // namespace

TEST_CASE("binding a single pair with a basis role fills one column") {
  Rng rng(1);
  const Vector filler = random_vector(5, rng);
  Vector role = Vector::Zero(3);
  role[0] = 1.0;
  const Matrix memory = tpr::bind(std::vector<FillerRolePair>{{filler, role}});
  CHECK((memory.col(0) - filler).cwiseAbs().maxCoeff() == 0.0);
  CHECK(memory.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(memory.col(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binding an empty list gives the zero tensor") {
  const Matrix memory = tpr::bind(std::vector<FillerRolePair>{}, 4, 6);
  CHECK(memory.rows() == 4);
  CHECK(memory.cols() == 6);
  CHECK(memory.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binding is order independent") {
  Rng rng(2);
  std::vector<FillerRolePair> pairs;
  for (int i = 0; i < 6; ++i) pairs.push_back({random_vector(7, rng), random_vector(4, rng)});
  std::vector<FillerRolePair> reversed(pairs.rbegin(), pairs.rend());
  CHECK((tpr::bind(pairs) - tpr::bind(reversed)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("bind rejects mismatched dimensions") {
  Rng rng(3);
  std::vector<FillerRolePair> pairs{{random_vector(5, rng), random_vector(3, rng)},
                                    {random_vector(4, rng), random_vector(3, rng)}};
  CHECK_THROWS_AS(tpr::bind(pairs), DimensionMismatchError);
  CHECK_THROWS_AS(unbind(Matrix::Zero(5, 3), random_vector(4, rng)), DimensionMismatchError);
}

TEST_CASE("orthonormal roles recover fillers exactly") {
  Rng rng(4);
  const Matrix roles = random_orthonormal(8, 3, rng);
  std::vector<FillerRolePair> pairs;
  for (int i = 0; i < 3; ++i) pairs.push_back({random_vector(12, rng), roles.col(i)});
  const Matrix memory = tpr::bind(pairs);
  for (int i = 0; i < 3; ++i) {
    const double err = (unbind(memory, roles.col(i)) - pairs[i].filler).cwiseAbs().maxCoeff();
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("recovery at the reference dimensions stays within 1e-10") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int count = 1 + static_cast<int>(rng.index(80));
    const Matrix roles = random_orthonormal(80, count, rng);
    std::vector<FillerRolePair> pairs;
    for (int i = 0; i < count; ++i) pairs.push_back({random_vector(200, rng), roles.col(i)});
    const Matrix memory = tpr::bind(pairs);
    for (int i = 0; i < count; ++i) {
      CHECK((unbind(memory, roles.col(i)) - pairs[i].filler).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("non-orthogonal roles blend fillers by their inner products") {
  Rng rng(6);
  const Vector f1 = random_vector(5, rng);
  const Vector f2 = random_vector(5, rng);
  Vector r1 = Vector::Zero(2);
  r1[0] = 1.0;
  Vector r2(2);
  r2[0] = 1.0 / std::sqrt(2.0);
  r2[1] = 1.0 / std::sqrt(2.0);
  const Matrix memory = tpr::bind(std::vector<FillerRolePair>{{f1, r1}, {f2, r2}});
  const Vector expected = f2 + f1 / std::sqrt(2.0);
  CHECK((unbind(memory, r2) - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unbinding with the zero vector gives zero") {
  Rng rng(7);
  const Matrix memory = tpr::bind(
      std::vector<FillerRolePair>{{random_vector(4, rng), random_vector(3, rng)}});
  CHECK(unbind(memory, Vector::Zero(3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random_orthonormal produces orthonormal columns") {
  Rng rng(8);
  const Matrix basis = random_orthonormal(40, 17, rng);
  const Matrix gram = basis.transpose() * basis;
  CHECK((gram - Matrix::Identity(17, 17)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("layer norm output has zero mean and unit variance") {
  Rng rng(9);
  Matrix values(32, 16);
  for (int c = 0; c < 16; ++c) values.col(c) = random_vector(32, rng, 5.0);
  layer_norm(values);
  const double mean = values.mean();
  const double variance = values.array().square().sum() / values.size() - mean * mean;
  CHECK(std::abs(mean) <= 1e-6);
  CHECK(std::abs(variance - 1.0) <= 1e-6);
}

TEST_CASE("layer norm maps constant input to zeros") {
  Vector zeros = Vector::Zero(10);
  layer_norm(zeros);
  CHECK(zeros.cwiseAbs().maxCoeff() == 0.0);
  Vector constant = Vector::Constant(10, 3.5);
  layer_norm(constant);
  CHECK(constant.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tokenizer splits words and peels punctuation") {
  const auto tokens = tokenize("B has A to its left.");
  const std::vector<std::string> expected{"B", "has", "A", "to", "its", "left", "."};
  CHECK(tokens == expected);
  CHECK(tokenize("Where is Q relative to J?") ==
        std::vector<std::string>{"Where", "is", "Q", "relative", "to", "J", "?"});
  CHECK(tokenize("top-left") == std::vector<std::string>{"top-left"});
}

TEST_CASE("the default vocabulary covers every rendered sentence and question") {
  const Vocabulary vocab = Vocabulary::build_default();
  const TemplateBank& bank = TemplateBank::builtin();
  Rng rng(10);
  for (int round = 0; round < 500; ++round) {
    const Chain chain = sample_chain(1 + static_cast<int>(rng.index(8)), default_lexicon(), rng);
    const Sample sample = realize(chain, pick_question(chain, rng), bank, rng);
    for (const auto& sentence : sample.story) {
      const auto ids = vocab.encode(sentence);
      CHECK(static_cast<int>(ids.size()) <= vocab.max_sentence_words());
    }
    CHECK_NOTHROW(vocab.encode(sample.question_text));
    CHECK_NOTHROW(vocab.id(std::string(to_string(sample.answer))));
  }
  CHECK_THROWS_AS(vocab.id("zeppelin"), std::out_of_range);
}

TEST_CASE("toy parameter count matches the hand-derived total") {
  // memory 3*2*3 = 18, embeddings 40, positions 20, entity MLPs 2*35,
  // relation MLPs 3*30, unbinding 35 + 3*30, output 30 -> 393.
  CHECK(param_count(toy_dims(), 10, 5) == 393);
  const ModelParams params = ModelParams::random(toy_dims(), 10, 5, 1);
  CHECK(params.parameter_count() == 393);
}

TEST_CASE("closed-form count matches the instantiated model at reference size") {
  const Dims dims;  // defaults: 256/200/80/200
  const Vocabulary vocab = Vocabulary::build_default();
  const ModelParams params =
      ModelParams::random(dims, vocab.size(), vocab.max_sentence_words(), 2);
  CHECK(params.parameter_count() == param_count(dims, vocab.size(), vocab.max_sentence_words()));
  // Within the published ballpark.
  CHECK(params.parameter_count() >= 3400000);
  CHECK(params.parameter_count() <= 4600000);
}

TEST_CASE("encoding a one-word sentence is the gated embedding") {
  const ModelParams params = ModelParams::random(toy_dims(), 10, 5, 3);
  const EncodedStory story = encode({{7}}, {1}, params);
  const Vector expected =
      params.embeddings.row(7).cwiseProduct(params.positions.row(0)).transpose();
  CHECK((story.sentences.row(0).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("all-ones positions reduce encoding to the embedding mean") {
  ModelParams params = ModelParams::random(toy_dims(), 10, 5, 4);
  params.positions.setOnes();
  const EncodedStory story = encode({{2, 5, 9}}, {1}, params);
  const Vector mean =
      ((params.embeddings.row(2) + params.embeddings.row(5) + params.embeddings.row(9)) / 3.0)
          .transpose();
  CHECK((story.sentences.row(0).transpose() - mean).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("word order matters when positions differ") {
  const ModelParams params = ModelParams::random(toy_dims(), 10, 5, 5);
  const EncodedStory forward = encode({{2, 5}}, {1}, params);
  const EncodedStory backward = encode({{5, 2}}, {1}, params);
  CHECK((forward.sentences.row(0) - backward.sentences.row(0)).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("encode rejects bad tokens and oversized sentences") {
  const ModelParams params = ModelParams::random(toy_dims(), 10, 5, 6);
  CHECK_THROWS_AS(encode({{10}}, {0}, params), TokenOutOfRangeError);
  CHECK_THROWS_AS(encode({{-1}}, {0}, params), TokenOutOfRangeError);
  CHECK_THROWS_AS(encode({{0, 1, 2, 3, 4, 5}}, {0}, params), SentenceTooLongError);
  CHECK_THROWS_AS(encode({}, {0}, params), std::invalid_argument);
  CHECK_THROWS_AS(encode({{0}}, {}, params), std::invalid_argument);
}

TEST_CASE("the first layer stores the fresh episodes under layer norm") {
  Rng rng(11);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 7);
  const EncodedStory story = random_story(4, dims.word, rng, 1.0);

  const MemoryTensor once = memory_forward(story, params, {1, false});

  const KeySet keys = build_keys(story, params);
  Matrix expected = keys.key1.transpose() * keys.entity2;
  expected.noalias() += keys.key3.transpose() * keys.entity1;
  layer_norm(expected);
  CHECK((once.flat - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("memory keeps its shape for any story length and depth") {
  Rng rng(12);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 8);
  for (int m : {1, 3, 9}) {
    for (int layers : {1, 2, 5}) {
      const EncodedStory story = random_story(m, dims.word, rng, 1.0);
      const MemoryTensor memory = memory_forward(story, params, {layers, false});
      CHECK(memory.flat.rows() == dims.entity * dims.relation);
      CHECK(memory.flat.cols() == dims.entity);
      CHECK(memory.all_finite());
    }
  }
}

TEST_CASE("forward is deterministic and sentence-order invariant") {
  Rng rng(13);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 9);
  const EncodedStory story = random_story(5, dims.word, rng, 2.0);

  const MemoryTensor a = memory_forward(story, params, {4, false});
  const MemoryTensor b = memory_forward(story, params, {4, false});
  CHECK((a.flat - b.flat).cwiseAbs().maxCoeff() == 0.0);

  EncodedStory permuted = story;
  permuted.sentences.row(0) = story.sentences.row(4);
  permuted.sentences.row(4) = story.sentences.row(0);
  const MemoryTensor c = memory_forward(permuted, params, {4, false});
  CHECK((a.flat - c.flat).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("deeper recurrence changes the memory but not the parameters") {
  Rng rng(14);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 10);
  const EncodedStory story = random_story(4, dims.word, rng, 1.0);
  const long long count = params.parameter_count();
  const MemoryTensor t1 = memory_forward(story, params, {1, false});
  const MemoryTensor t8 = memory_forward(story, params, {8, false});
  CHECK(params.parameter_count() == count);
  CHECK((t1.flat - t8.flat).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("the initial-memory switch changes the starting point") {
  Rng rng(15);
  const Dims dims = toy_dims();
  ModelParams params = ModelParams::random(dims, 10, 5, 11);
  const EncodedStory story = random_story(3, dims.word, rng, 1.0);
  const MemoryTensor from_zero = memory_forward(story, params, {2, false});
  // With a zero parameter tensor the switch is a no-op.
  const MemoryTensor from_param = memory_forward(story, params, {2, true});
  CHECK((from_zero.flat - from_param.flat).cwiseAbs().maxCoeff() == 0.0);
  // A nonzero initial memory flows through the update.
  for (Eigen::Index i = 0; i < params.initial_memory.size(); ++i) {
    params.initial_memory.data()[i] = (rng.real01() - 0.5);
  }
  const MemoryTensor seeded = memory_forward(story, params, {2, true});
  CHECK((seeded.flat - from_zero.flat).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("decode yields a strictly positive distribution summing to one") {
  Rng rng(16);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 12);
  const EncodedStory story = random_story(4, dims.word, rng, 1.0);
  const MemoryTensor memory = memory_forward(story, params, {3, false});
  const Vector probs = decode(memory, story.question, params);
  REQUIRE(probs.size() == 10);
  CHECK(std::abs(probs.sum() - 1.0) <= 1e-9);
  CHECK(probs.minCoeff() > 0.0);
}

TEST_CASE("decoding a zero memory is finite and normalized") {
  Rng rng(17);
  const Dims dims = toy_dims();
  const ModelParams params = ModelParams::random(dims, 10, 5, 13);
  const MemoryTensor zero = MemoryTensor::zero(dims.entity, dims.relation);
  const Vector probs = decode(zero, random_vector(dims.word, rng), params);
  CHECK(probs.allFinite());
  CHECK(std::abs(probs.sum() - 1.0) <= 1e-9);
}

TEST_CASE("scaling the output projection preserves the argmax") {
  Rng rng(18);
  const Dims dims = toy_dims();
  ModelParams params = ModelParams::random(dims, 10, 5, 14);
  const EncodedStory story = random_story(4, dims.word, rng, 1.0);
  const MemoryTensor memory = memory_forward(story, params, {2, false});
  const Vector before = decode(memory, story.question, params);
  params.output_proj *= 3.7;
  const Vector after = decode(memory, story.question, params);
  Eigen::Index argmax_before, argmax_after;
  before.maxCoeff(&argmax_before);
  after.maxCoeff(&argmax_after);
  CHECK(argmax_before == argmax_after);
  CHECK((before - after).cwiseAbs().maxCoeff() > 1e-12);  // probabilities do move
}

TEST_CASE("forward outputs stay finite for bounded random inputs") {
  const Dims dims = toy_dims();
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    const ModelParams params = ModelParams::random(dims, 10, 5, seed + 10000);
    const EncodedStory story = random_story(1 + static_cast<int>(rng.index(6)), dims.word,
                                            rng, 10.0);
    const MemoryTensor memory = memory_forward(story, params, {3, false});
    REQUIRE(memory.all_finite());
    const Vector probs = decode(memory, story.question, params);
    REQUIRE(probs.allFinite());
    REQUIRE(std::abs(probs.sum() - 1.0) <= 1e-9);
  }
}

TEST_CASE("structural checks pass at toy scale") {
  const CheckReport report =
      run_structural_checks(toy_dims(), 21, TemplateBank::builtin(), 4, 25);
  for (const auto& item : report.items) {
    CAPTURE(item.name);
    CAPTURE(item.max_error);
    CHECK(item.pass);
  }
  CHECK(report.all_pass());
  CHECK(report.parameters == param_count(toy_dims(), report.vocab_size, report.max_words));
}
