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

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.h"
#include "triage/annotation/ingest.h"
#include "triage/annotation/kappa.h"
#include "triage/classification/cassette.h"
#include "triage/classification/classifier.h"
#include "triage/classification/http_backend.h"
#include "triage/classification/prompt.h"
#include "triage/classification/rule_baseline.h"
#include "triage/common/assets.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/evaluation/records.h"
#include "triage/evaluation/report.h"
#include "triage/evaluation/split.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::tools {

namespace fs = std::filesystem;
using classification::PromptKind;
using taxonomy::Language;

namespace {

taxonomy::Taxonomy LoadTaxonomy(std::string const& path, fs::path const& asset_dir) {
  return taxonomy::Taxonomy::Load(path.empty() ? asset_dir / "taxonomy.json" : fs::path(path));
}

fs::path AssetDir(std::string const& flag) {
  return flag.empty() ? DefaultAssetDir() : fs::path(flag);
}

std::vector<double> ParseRatio(std::string const& text) {
  std::vector<double> parts;
  std::size_t at = 0;
  while (at <= text.size()) {
    auto const colon = text.find(':', at);
    auto const piece = text.substr(at, colon == std::string::npos ? std::string::npos : colon - at);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (std::exception const&) {
      throw Error(ErrorCode::kInvalidArgument, "bad ratio '" + text + "'");
    }
    if (colon == std::string::npos) break;
    at = colon + 1;
  }
  if (parts.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "ratio needs three parts, e.g. 8:1:1");
  }
  return parts;
}

}  // namespace

Action AddIngest(CLI::App& app) {
  struct Opts {
    std::string in, out, rules;
    bool no_redact = false;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("ingest", "Deduplicate and redact raw utterances");
  cmd->add_option("--in", o->in, "Input JSON Lines records")->required();
  cmd->add_option("--out", o->out, "Output JSON Lines records")->required();
  cmd->add_option("--rules", o->rules, "Redaction rules (default: shipped rules)");
  cmd->add_flag("--no-redact", o->no_redact, "Only deduplicate");
  return [o] {
    auto const records = evaluation::LoadDataset(o->in);
    auto kept = annotation::Dedup(records);
    std::size_t changed = 0;
    if (!o->no_redact) {
      auto const redactor = o->rules.empty() ? annotation::Redactor::Default()
                                             : annotation::Redactor::Load(o->rules);
      for (auto& r : kept) {
        auto const before = r.text;
        r = redactor.Redact(std::move(r));
        if (r.text != before) ++changed;
      }
    }
    evaluation::SaveDataset(o->out, kept);
    std::cout << Json{{"read", records.size()},
                      {"kept", kept.size()},
                      {"duplicates", records.size() - kept.size()},
                      {"redacted", changed}}
                     .dump()
              << '\n';
    return 0;
  };
}

Action AddSplit(CLI::App& app) {
  struct Opts {
    std::string in, out_dir, ratio = "8:1:1";
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("split", "Stratified train/val/test split");
  cmd->add_option("--in", o->in, "Labeled JSON Lines dataset")->required();
  cmd->add_option("--out-dir", o->out_dir, "Directory for train/val/test.jsonl")->required();
  cmd->add_option("--seed", o->seed, "Shuffle seed")->capture_default_str();
  cmd->add_option("--ratio", o->ratio, "train:val:test weights")->capture_default_str();
  return [o] {
    auto const parts = ParseRatio(o->ratio);
    evaluation::SplitSpec spec{parts[0], parts[1], parts[2], o->seed};
    auto const dataset = evaluation::LoadDataset(o->in);
    auto const split = evaluation::StratifiedSplit(dataset, spec);
    fs::create_directories(o->out_dir);
    evaluation::SaveDataset(fs::path(o->out_dir) / "train.jsonl", split.train);
    evaluation::SaveDataset(fs::path(o->out_dir) / "val.jsonl", split.val);
    evaluation::SaveDataset(fs::path(o->out_dir) / "test.jsonl", split.test);
    std::cout << Json{{"seed", o->seed},
                      {"train", split.train.size()},
                      {"val", split.val.size()},
                      {"test", split.test.size()}}
                     .dump()
              << '\n';
    return 0;
  };
}

Action AddClassify(CLI::App& app) {
  struct Opts {
    std::string in, out, backend = "rule", cassette, backend_config, record, prompt = "zero_shot",
                          language = "zh", model, asset_dir, taxonomy;
    int rounds = 3;
    int retries = 0;
    std::optional<double> temperature, top_p;
    bool parallel = false;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("classify", "Classify every utterance of a dataset");
  cmd->add_option("--in", o->in, "JSON Lines dataset")->required();
  cmd->add_option("--out", o->out, "Predictions JSON Lines")->required();
  cmd->add_option("--backend", o->backend, "rule | cassette | http")
      ->check(CLI::IsMember({"rule", "cassette", "http"}))
      ->capture_default_str();
  cmd->add_option("--cassette", o->cassette, "Recorded responses for --backend cassette");
  cmd->add_option("--backend-config", o->backend_config, "JSON config for --backend http");
  cmd->add_option("--record", o->record, "Write every backend exchange to this cassette");
  cmd->add_option("--prompt", o->prompt, "zero_shot | few_shot")
      ->check(CLI::IsMember({"zero_shot", "few_shot"}))
      ->capture_default_str();
  cmd->add_option("--language", o->language, "Prompt language: zh | en")
      ->check(CLI::IsMember({"zh", "en"}))
      ->capture_default_str();
  cmd->add_option("--model", o->model, "Model name sent to the backend");
  cmd->add_option("--temperature", o->temperature, "Sampling temperature");
  cmd->add_option("--top-p", o->top_p, "Nucleus sampling mass");
  cmd->add_option("--rounds", o->rounds, "Independent rounds")->capture_default_str();
  cmd->add_option("--retries", o->retries, "Retries per unparseable answer")
      ->capture_default_str();
  cmd->add_flag("--parallel", o->parallel, "Issue the rounds of an utterance concurrently");
  cmd->add_option("--asset-dir", o->asset_dir, "Asset directory");
  cmd->add_option("--taxonomy", o->taxonomy, "Taxonomy JSON");
  return [o] {
    auto const assets = AssetDir(o->asset_dir);
    auto const tax = LoadTaxonomy(o->taxonomy, assets);
    auto const lang = o->language == "zh" ? Language::kZh : Language::kEn;
    auto const kind = o->prompt == "few_shot" ? PromptKind::kFewShot : PromptKind::kZeroShot;

    classification::ClassifierConfig config;
    config.rounds = o->rounds;
    config.max_retries_on_unparseable = o->retries;
    config.parallel_rounds = o->parallel;
    config.model = o->model;

    std::unique_ptr<classification::ChatBackend> backend;
    if (o->backend == "rule") {
      backend = std::make_unique<classification::RuleBackend>(
          classification::RuleTable::Load(assets / "rule_patterns.json"), tax);
    } else if (o->backend == "cassette") {
      if (o->cassette.empty()) throw Error(ErrorCode::kConfig, "--cassette is required");
      backend = std::make_unique<classification::ReplayBackend>(
          classification::Cassette::Load(o->cassette));
    } else {
      if (o->backend_config.empty()) {
        throw Error(ErrorCode::kConfig, "--backend-config is required");
      }
      auto http = classification::HttpBackendConfig::FromJson(ReadJsonFile(o->backend_config));
      if (config.model.empty()) config.model = http.model;
      config.temperature = http.temperature;
      config.top_p = http.top_p;
      backend = std::make_unique<classification::HttpChatBackend>(std::move(http));
    }
    if (o->temperature) config.temperature = *o->temperature;
    if (o->top_p) config.top_p = *o->top_p;
    config.backend_id = backend->id();
    config.Validate();

    std::unique_ptr<classification::RecordingBackend> recorder;
    classification::ChatBackend* active = backend.get();
    if (!o->record.empty()) {
      recorder = std::make_unique<classification::RecordingBackend>(*backend);
      active = recorder.get();
    }

    auto prompt = classification::PromptTemplate::Load(assets, kind, lang);
    std::vector<classification::Exemplar> exemplars;
    if (kind == PromptKind::kFewShot) {
      exemplars = classification::LoadExemplars(assets / "exemplars.json");
    }
    classification::Classifier classifier(tax, std::move(prompt), std::move(exemplars));

    auto const dataset = evaluation::LoadDataset(o->in);
    std::vector<evaluation::PredictionRow> rows;
    std::size_t unparseable = 0;
    for (auto const& record : dataset) {
      for (auto& v : classifier.Classify(record.text, config, *active)) {
        if (!v.labels) ++unparseable;
        rows.push_back({record.id, v.round_index, v.labels, std::move(v.raw_text)});
      }
    }
    WriteTextFileAtomic(o->out, evaluation::SerializePredictions(rows));
    if (recorder) recorder->cassette().Save(o->record);
    std::cout << Json{{"utterances", dataset.size()},
                      {"rounds", config.rounds},
                      {"predictions", rows.size()},
                      {"unparseable", unparseable},
                      {"backend", config.backend_id}}
                     .dump()
              << '\n';
    return 0;
  };
}

Action AddEval(CLI::App& app) {
  struct Opts {
    std::string gold, pred, model = "model", out;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("eval", "Score predictions against gold labels");
  cmd->add_option("--gold", o->gold, "Labeled JSON Lines dataset")->required();
  cmd->add_option("--pred", o->pred, "Predictions JSON Lines")->required();
  cmd->add_option("--model", o->model, "Name for the report row")->capture_default_str();
  cmd->add_option("--out", o->out, "Write the full JSON report here");
  return [o] {
    auto const gold = evaluation::LoadDataset(o->gold);
    auto const rows = evaluation::LoadPredictions(o->pred);
    auto const runs = evaluation::GroupByRound(rows);
    auto const report = evaluation::Evaluate(gold, runs, o->model);
    if (!o->out.empty()) {
      WriteTextFileAtomic(o->out, evaluation::ReportToJson(report).dump(2) + "\n");
    }
    std::cout << evaluation::TableHeader() << '\n' << evaluation::TableRow(report) << '\n';
    return 0;
  };
}

Action AddKappa(CLI::App& app) {
  struct Opts {
    std::string votes, taxonomy, asset_dir;
    double threshold = annotation::kDefaultGateThreshold;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("kappa", "Fleiss' kappa and the quality gate for a vote file");
  cmd->add_option("--votes", o->votes, "JSON Lines votes")->required();
  cmd->add_option("--threshold", o->threshold, "Gate threshold")->capture_default_str();
  cmd->add_option("--asset-dir", o->asset_dir, "Asset directory");
  cmd->add_option("--taxonomy", o->taxonomy, "Taxonomy JSON");
  return [o] {
    auto const tax = LoadTaxonomy(o->taxonomy, AssetDir(o->asset_dir));
    std::vector<annotation::Vote> votes;
    std::vector<std::string> ids;
    std::map<std::string, std::vector<annotation::Vote>> by_instance;
    for (auto const& doc : ReadJsonLines(o->votes)) {
      auto v = annotation::VoteFromJson(doc);
      if (!by_instance.contains(v.instance_id)) ids.push_back(v.instance_id);
      by_instance[v.instance_id].push_back(std::move(v));
    }
    for (auto const& id : ids) {
      for (auto const& v : by_instance[id]) votes.push_back(v);
    }
    auto const kappa = annotation::ComputeBatchKappa(ids, votes, tax);
    auto const gate = annotation::QualityGate(kappa.overall.kappa, o->threshold);
    std::cout << Json{{"kappa", annotation::BatchKappaToJson(kappa)},
                      {"threshold", o->threshold},
                      {"decision", annotation::GateDecisionName(gate)}}
                     .dump()
              << '\n';
    return gate == annotation::GateDecision::kAccepted ? 0 : 3;
  };
}

}  // namespace triage::tools
