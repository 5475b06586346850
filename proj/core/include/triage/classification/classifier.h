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

#ifndef TRIAGE_CLASSIFICATION_CLASSIFIER_H_
#define TRIAGE_CLASSIFICATION_CLASSIFIER_H_

#include <string>
#include <string_view>
#include <vector>

#include "triage/classification/backend.h"
#include "triage/classification/prompt.h"
#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::classification {

struct ClassifierConfig {
  std::string backend_id;
  std::string model;
  double temperature = 1.0;
  double top_p = 1.0;
  /// Independent samples per utterance; evaluation uses 3, serving uses 1.
  int rounds = 3;
  int max_retries_on_unparseable = 0;
  /// Issue the rounds of one utterance concurrently. Round numbering and
  /// replay results are unaffected.
  bool parallel_rounds = false;

  /// Throws Error(kConfig) when a field is out of range.
  void Validate() const;
};

/// One round's outcome. `labels` is std::nullopt when the answer could not be
/// parsed; that state is explicit and never collapses into {Irrelevant}.
struct Verdict {
  int round_index = 0;  // 1-based
  std::string raw_text;
  Prediction labels;
  double latency_ms = 0;
  std::string backend_id;
};

/// Renders prompts and elicits labels over several independent rounds.
class Classifier {
 public:
  /// `exemplars` must be empty for a zero-shot template.
  Classifier(taxonomy::Taxonomy const& taxonomy, PromptTemplate prompt,
             std::vector<Exemplar> exemplars = {},
             std::vector<std::string> delimiters =
                 taxonomy::DefaultLabelDelimiters());

  std::string RenderFor(std::string_view utterance) const;

  /// One Verdict per round, ordered by round_index. Backend failures surface
  /// as Error(kBackendUnavailable); unparseable answers are retried up to
  /// max_retries_on_unparseable times and then recorded as such.
  ///
  /// Sample numbering for replay: attempt k (0-based) of round r uses
  /// sample_index = k * rounds + (r - 1).
  std::vector<Verdict> Classify(std::string_view utterance,
                                ClassifierConfig const& config,
                                ChatBackend& backend) const;

  taxonomy::Taxonomy const& taxonomy() const { return taxonomy_; }

 private:
  Verdict RunRound(std::string const& prompt, std::string_view utterance,
                   int round_index, ClassifierConfig const& config,
                   ChatBackend& backend) const;

  taxonomy::Taxonomy const& taxonomy_;
  PromptTemplate prompt_;
  std::vector<Exemplar> exemplars_;
  std::vector<std::string> delimiters_;
};

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_CLASSIFIER_H_
