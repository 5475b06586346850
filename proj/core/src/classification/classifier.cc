// Copyright 2026 The Triage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triage/classification/classifier.h"

#include <chrono>
#include <future>

#include "triage/common/error.h"

namespace triage::classification {

void ClassifierConfig::Validate() const {
  if (rounds < 1) throw Error(ErrorCode::kConfig, "rounds must be >= 1");
  if (temperature < 0) throw Error(ErrorCode::kConfig, "temperature must be >= 0");
  if (!(top_p > 0 && top_p <= 1)) {
    throw Error(ErrorCode::kConfig, "top_p must be in (0, 1]");
  }
  if (max_retries_on_unparseable < 0) {
    throw Error(ErrorCode::kConfig, "max_retries_on_unparseable must be >= 0");
  }
}

Classifier::Classifier(taxonomy::Taxonomy const& taxonomy, PromptTemplate prompt,
                       std::vector<Exemplar> exemplars,
                       std::vector<std::string> delimiters)
    : taxonomy_(taxonomy),
      prompt_(std::move(prompt)),
      exemplars_(std::move(exemplars)),
      delimiters_(std::move(delimiters)) {
  prompt_.Validate();
}

std::string Classifier::RenderFor(std::string_view utterance) const {
  if (prompt_.kind == PromptKind::kZeroShot) {
    return RenderPrompt(prompt_, utterance, std::nullopt, taxonomy_);
  }
  return RenderPrompt(prompt_, utterance,
                      std::span<Exemplar const>(exemplars_), taxonomy_);
}

Verdict Classifier::RunRound(std::string const& prompt, std::string_view utterance,
                             int round_index, ClassifierConfig const& config,
                             ChatBackend& backend) const {
  ChatRequest request;
  request.model = config.model;
  request.user = prompt;
  request.temperature = config.temperature;
  request.top_p = config.top_p;
  request.task = Task::kClassify;
  request.hints["utterance"] = std::string(utterance);

  Verdict verdict;
  verdict.round_index = round_index;
  verdict.backend_id = backend.id();
  for (int attempt = 0; attempt <= config.max_retries_on_unparseable; ++attempt) {
    request.sample_index = attempt * config.rounds + (round_index - 1);
    auto const start = std::chrono::steady_clock::now();
    verdict.raw_text = backend.Complete(request);
    verdict.latency_ms += std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    verdict.labels = taxonomy_.ParseLabels(verdict.raw_text, delimiters_);
    if (verdict.labels) break;
  }
  return verdict;
}

std::vector<Verdict> Classifier::Classify(std::string_view utterance,
                                          ClassifierConfig const& config,
                                          ChatBackend& backend) const {
  config.Validate();
  auto const prompt = RenderFor(utterance);
  std::vector<Verdict> verdicts;
  verdicts.reserve(config.rounds);
  if (!config.parallel_rounds || config.rounds == 1) {
    for (int r = 1; r <= config.rounds; ++r) {
      verdicts.push_back(RunRound(prompt, utterance, r, config, backend));
    }
    return verdicts;
  }
  std::vector<std::future<Verdict>> pending;
  pending.reserve(config.rounds);
  for (int r = 1; r <= config.rounds; ++r) {
    pending.push_back(std::async(std::launch::async, [&, r] {
      return RunRound(prompt, utterance, r, config, backend);
    }));
  }
  // Collect in issue order; get() rethrows a round's failure.
  for (auto& f : pending) verdicts.push_back(f.get());
  return verdicts;
}

}  // namespace triage::classification
