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

#ifndef TRIAGE_CLASSIFICATION_PROMPT_H_
#define TRIAGE_CLASSIFICATION_PROMPT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triage/taxonomy/label_set.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::classification {

/// Substitutes every `{{name}}` in `body` in a single left-to-right pass, so
/// text inserted for one placeholder is never scanned again. Unknown or
/// unfilled placeholders are kInvalidArgument errors.
std::string RenderTemplate(std::string_view body,
                           std::map<std::string, std::string> const& values);

/// Names of the placeholders that occur in `body`, in order of appearance.
std::vector<std::string> PlaceholdersIn(std::string_view body);

enum class PromptKind { kZeroShot, kFewShot };

std::string_view PromptKindName(PromptKind kind);

struct PromptTemplate {
  PromptKind kind;
  taxonomy::Language language;
  std::string body;

  /// Checks the slot set: {{taxonomy}} and {{utterance}} always,
  /// {{exemplars}} exactly when few-shot.
  void Validate() const;

  /// Loads prompts/classify_<kind>.<lang>.txt from an asset directory.
  static PromptTemplate Load(std::filesystem::path const& asset_dir,
                             PromptKind kind, taxonomy::Language language);
};

struct Exemplar {
  std::string utterance;
  LabelSet gold_labels;
};

/// The few-shot bank always holds exactly this many fixed exemplars.
inline constexpr std::size_t kExemplarBankSize = 13;

/// Reads exemplars.json: [{"utterance": ..., "labels": [keys]}, ...]. Bank
/// size is checked when rendering, not here.
std::vector<Exemplar> LoadExemplars(std::filesystem::path const& path);

/// Renders a classification prompt. Few-shot requires the full 13-exemplar
/// bank (rendered in bank order); zero-shot requires that no exemplars are
/// passed. Output is a pure function of the inputs.
std::string RenderPrompt(PromptTemplate const& prompt, std::string_view utterance,
                         std::optional<std::span<Exemplar const>> exemplars,
                         taxonomy::Taxonomy const& taxonomy);

/// The numbered category list placed in the {{taxonomy}} slot.
std::string RenderTaxonomyBlock(taxonomy::Taxonomy const& taxonomy,
                                taxonomy::Language language);

}  // namespace triage::classification

#endif  // TRIAGE_CLASSIFICATION_PROMPT_H_
