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

#ifndef SPATIALQA_STORY_HPP_
#define SPATIALQA_STORY_HPP_

#include <string>
#include <vector>

#include "spatialqa/noise.hpp"
#include "spatialqa/template_bank.hpp"

namespace spatialqa {

// Where a story sentence came from: a chain edge or a noise annotation.
struct SentenceOrigin {
  bool is_noise = false;
  int index = 0;  // into Chain::edges or NoiseResult::annotations

  friend bool operator==(const SentenceOrigin& a, const SentenceOrigin& b) {
    return a.is_noise == b.is_noise && a.index == b.index;
  }
};

// Full provenance kept with every sample so it can be re-derived and audited.
struct SampleMeta {
  Chain chain;
  Question question;
  std::vector<NoiseAnnotation> noise;
  int supporting_shortfall = 0;
  std::vector<int> template_ids;        // per story sentence
  std::vector<SentenceOrigin> origins;  // per story sentence
  int question_template_id = 0;
  uint64_t stream_seed = 0;

  friend bool operator==(const SampleMeta& a, const SampleMeta& b) = default;
};

struct Sample {
  uint64_t id = 0;
  int k = 0;
  std::vector<std::string> story;
  std::string question_text;
  AnswerLabel answer = AnswerLabel::Overlap;
  SampleMeta meta;

  friend bool operator==(const Sample& a, const Sample& b) = default;
};

// The question surface forms; <X> asks for the entity whose position is
// requested, <Y> is the reference.
const std::vector<std::string>& question_templates();

std::string render_question(const Question& question, int template_id);

// Renders chain and noise triples, shuffles the sentences together, renders
// the question, and derives the answer from the original chain coordinates
// (never from the noisy graph).
Sample realize(const Chain& chain, const NoiseResult& noise, const Question& question,
               const TemplateBank& bank, Rng& rng);

Sample realize(const Chain& chain, const Question& question, const TemplateBank& bank,
               Rng& rng);

}  // namespace spatialqa

#endif  // SPATIALQA_STORY_HPP_
