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

#include "spatialqa/story.hpp"

#include <numeric>

namespace spatialqa {

const std::vector<std::string>& question_templates() {
  static const std::vector<std::string> templates = {
      "What is the relation of <X> to <Y>?",
      "Where is <X> relative to <Y>?",
      "How is <X> positioned in relation to <Y>?",
  };
  return templates;
}

std::string render_question(const Question& question, int template_id) {
  std::string out = question_templates().at(static_cast<size_t>(template_id));
  const size_t x = out.find("<X>");
  out.replace(x, 3, question.target);
  const size_t y = out.find("<Y>");
  out.replace(y, 3, question.reference);
  return out;
}

Sample realize(const Chain& chain, const NoiseResult& noise, const Question& question,
               const TemplateBank& bank, Rng& rng) {
  const int total = chain.k() + static_cast<int>(noise.annotations.size());

  std::vector<std::string> sentences;
  std::vector<int> template_ids;
  std::vector<SentenceOrigin> origins;
  sentences.reserve(total);
  template_ids.reserve(total);
  origins.reserve(total);

  auto render_one = [&](const RelationTriple& triple, SentenceOrigin origin) {
    const auto& candidates = bank.templates_for(triple.rel);
    const int tpl = candidates[rng.index(candidates.size())];
    sentences.push_back(bank.render_with(triple, tpl));
    template_ids.push_back(tpl);
    origins.push_back(origin);
  };

  for (int i = 0; i < chain.k(); ++i) {
    render_one(chain.edges[i], {false, i});
  }
  for (size_t i = 0; i < noise.annotations.size(); ++i) {
    render_one(noise.annotations[i].triple, {true, static_cast<int>(i)});
  }

  // One permutation applied to sentences, template ids and origins alike.
  std::vector<int> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  Sample sample;
  sample.k = chain.k();
  sample.story.reserve(sentences.size());
  sample.meta.template_ids.reserve(sentences.size());
  sample.meta.origins.reserve(sentences.size());
  for (int idx : order) {
    sample.story.push_back(std::move(sentences[idx]));
    sample.meta.template_ids.push_back(template_ids[idx]);
    sample.meta.origins.push_back(origins[idx]);
  }

  sample.meta.question_template_id = static_cast<int>(rng.index(question_templates().size()));
  sample.question_text = render_question(question, sample.meta.question_template_id);

  // The answer comes from the original chain only; noise never moves it.
  const Coord displacement =
      chain.coords.at(question.target) - chain.coords.at(question.reference);
  sample.answer = label_displacement(displacement);

  sample.meta.chain = chain;
  sample.meta.question = question;
  sample.meta.noise = noise.annotations;
  sample.meta.supporting_shortfall = noise.supporting_shortfall;
  return sample;
}

Sample realize(const Chain& chain, const Question& question, const TemplateBank& bank,
               Rng& rng) {
  return realize(chain, NoiseResult{}, question, bank, rng);
}

}  // namespace spatialqa
