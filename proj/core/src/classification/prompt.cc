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

#include "triage/classification/prompt.h"

#include <algorithm>

#include "triage/common/error.h"
#include "triage/common/json_io.h"

namespace triage::classification {

namespace {

constexpr std::string_view kOpen = "{{";
constexpr std::string_view kClose = "}}";

bool IsPlaceholderName(std::string_view name) {
  return !name.empty() &&
         std::all_of(name.begin(), name.end(), [](char c) {
           return (c >= 'a' && c <= 'z') || c == '_';
         });
}

Error Invalid(std::string const& what) {
  return Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace

std::vector<std::string> PlaceholdersIn(std::string_view body) {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = body.find(kOpen, pos)) != std::string_view::npos) {
    auto const close = body.find(kClose, pos + kOpen.size());
    if (close == std::string_view::npos) break;
    auto const name = body.substr(pos + kOpen.size(), close - pos - kOpen.size());
    if (IsPlaceholderName(name)) {
      names.emplace_back(name);
      pos = close + kClose.size();
    } else {
      pos += kOpen.size();
    }
  }
  return names;
}

std::string RenderTemplate(std::string_view body,
                           std::map<std::string, std::string> const& values) {
  std::string out;
  out.reserve(body.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    auto const open = body.find(kOpen, pos);
    if (open == std::string_view::npos) break;
    auto const close = body.find(kClose, open + kOpen.size());
    if (close == std::string_view::npos) break;
    auto const name =
        body.substr(open + kOpen.size(), close - open - kOpen.size());
    if (!IsPlaceholderName(name)) {
      out.append(body.substr(pos, open + kOpen.size() - pos));
      pos = open + kOpen.size();
      continue;
    }
    auto it = values.find(std::string(name));
    if (it == values.end()) {
      throw Invalid("template placeholder {{" + std::string(name) +
                    "}} has no value");
    }
    out.append(body.substr(pos, open - pos));
    out.append(it->second);
    pos = close + kClose.size();
  }
  out.append(body.substr(pos));
  return out;
}

std::string_view PromptKindName(PromptKind kind) {
  return kind == PromptKind::kZeroShot ? "zero_shot" : "few_shot";
}

void PromptTemplate::Validate() const {
  auto const names = PlaceholdersIn(body);
  auto count = [&](std::string_view n) {
    return std::count(names.begin(), names.end(), n);
  };
  if (count("taxonomy") != 1 || count("utterance") != 1) {
    throw Error(ErrorCode::kConfig,
                "prompt template needs {{taxonomy}} and {{utterance}} exactly once");
  }
  auto const want_exemplars = kind == PromptKind::kFewShot ? 1 : 0;
  if (count("exemplars") != want_exemplars) {
    throw Error(ErrorCode::kConfig,
                kind == PromptKind::kFewShot
                    ? "few-shot template needs {{exemplars}} exactly once"
                    : "zero-shot template must not contain {{exemplars}}");
  }
  for (auto const& n : names) {
    if (n != "taxonomy" && n != "utterance" && n != "exemplars") {
      throw Error(ErrorCode::kConfig, "unknown prompt placeholder {{" + n + "}}");
    }
  }
}

PromptTemplate PromptTemplate::Load(std::filesystem::path const& asset_dir,
                                    PromptKind kind,
                                    taxonomy::Language language) {
  auto const file = "classify_" + std::string(PromptKindName(kind)) + "." +
                    (language == taxonomy::Language::kZh ? "zh" : "en") +
                    ".txt";
  PromptTemplate t{kind, language, ReadTextFile(asset_dir / "prompts" / file)};
  t.Validate();
  return t;
}

std::vector<Exemplar> LoadExemplars(std::filesystem::path const& path) {
  auto const doc = ReadJsonFile(path);
  if (!doc.is_array()) throw Error(ErrorCode::kConfig, "exemplars: expected array");
  std::vector<Exemplar> bank;
  for (auto const& e : doc) {
    try {
      bank.push_back({e.at("utterance").get<std::string>(),
                      LabelSet::FromKeys(e.at("labels").get<std::vector<std::string>>())});
    } catch (nlohmann::json::exception const& ex) {
      throw Error(ErrorCode::kConfig, std::string("exemplars: ") + ex.what());
    }
  }
  return bank;
}

std::string RenderTaxonomyBlock(taxonomy::Taxonomy const& taxonomy,
                                taxonomy::Language language) {
  std::string block;
  int n = 0;
  for (auto const& c : taxonomy.categories()) {
    block += std::to_string(++n) + ". ";
    if (language == taxonomy::Language::kZh) {
      block += c.name_zh + "（" + c.name_en + "）：";
    } else {
      block += c.name_en + ": ";
    }
    block += c.definition;
    block += '\n';
  }
  if (!block.empty()) block.pop_back();
  return block;
}

std::string RenderPrompt(PromptTemplate const& prompt, std::string_view utterance,
                         std::optional<std::span<Exemplar const>> exemplars,
                         taxonomy::Taxonomy const& taxonomy) {
  prompt.Validate();
  std::map<std::string, std::string> values = {
      {"taxonomy", RenderTaxonomyBlock(taxonomy, prompt.language)},
      {"utterance", std::string(utterance)},
  };
  bool const zh = prompt.language == taxonomy::Language::kZh;
  if (prompt.kind == PromptKind::kFewShot) {
    if (!exemplars || exemplars->size() != kExemplarBankSize) {
      throw Invalid("few-shot prompt requires the " +
                    std::to_string(kExemplarBankSize) + "-exemplar bank, got " +
                    std::to_string(exemplars ? exemplars->size() : 0));
    }
    std::string block;
    for (std::size_t i = 0; i < exemplars->size(); ++i) {
      auto const& ex = (*exemplars)[i];
      if (i > 0) block += "\n\n";
      block += zh ? "示例" + std::to_string(i + 1) + "\n用户：" + ex.utterance +
                        "\n标签：" +
                        taxonomy.FormatLabels(ex.gold_labels,
                                              taxonomy::Language::kZh, "，")
                  : "Example " + std::to_string(i + 1) + "\nUser: " +
                        ex.utterance + "\nLabel: " +
                        taxonomy.FormatLabels(ex.gold_labels,
                                              taxonomy::Language::kEn, ", ");
    }
    values["exemplars"] = std::move(block);
  } else if (exemplars && !exemplars->empty()) {
    throw Invalid("zero-shot prompt takes no exemplars");
  }
  return RenderTemplate(prompt.body, values);
}

}  // namespace triage::classification
