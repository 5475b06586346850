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

#include <gtest/gtest.h>

#include <fstream>

#include "test_support.h"
#include "triage/classification/rule_baseline.h"
#include "triage/common/error.h"
#include "triage/common/json_io.h"
#include "triage/risk/notifier.h"
#include "triage/service/config.h"
#include "triage/service/event.h"
#include "triage/service/journal.h"
#include "triage/service/service.h"
#include "triage/service/state.h"

namespace triage::service {
namespace {

using risk::SessionState;
using taxonomy::RoutingKind;
using taxonomy::Taxonomy;
using triage::testing::ScriptedBackend;
using triage::testing::TempDir;

Event MakeEvent(std::uint64_t seq, std::string const& id) {
  return Event{seq,
               EventKind::kMessageIngested,
               {{"message_id", id}, {"user_id", "u"}, {"text", "t"}, {"received_ms", 1}},
               static_cast<std::int64_t>(seq)};
}


TEST(EventTest, KindNamesRoundTrip) {
  for (auto k : {EventKind::kMessageIngested, EventKind::kVerdictRecorded,
                 EventKind::kSessionStateChanged, EventKind::kEscalationDispatched,
                 EventKind::kVoteSubmitted, EventKind::kBatchGated,
                 EventKind::kResolutionRecorded, EventKind::kBatchCreated}) {
    EXPECT_EQ(EventKindFromName(EventKindName(k)), k);
  }
  EXPECT_THROW(EventFromJson(Json{{"seq", 1}, {"kind", "Nope"}}), Error);
}

TEST(JournalTest, AppendThenScan) {
  TempDir dir;
  auto const path = dir / "j.log";
  {
    JournalScan scan;
    auto j = Journal::Open(path, &scan, false);
    EXPECT_TRUE(scan.events.empty());
    for (std::uint64_t s = 1; s <= 5; ++s) j->Append(MakeEvent(s, "m" + std::to_string(s)));
  }
  auto const scan = ReadJournal(path);
  ASSERT_EQ(scan.events.size(), 5u);
  EXPECT_FALSE(scan.truncated);
  EXPECT_EQ(scan.events[4].payload.at("message_id"), "m5");
}

TEST(JournalTest, EveryTornTailIsDropped) {
  std::string bytes;
  for (std::uint64_t s = 1; s <= 3; ++s) bytes += EncodeRecord(MakeEvent(s, "x"));
  auto const full = ScanJournal(bytes).valid_bytes;
  ASSERT_EQ(full, bytes.size());
  auto const two = EncodeRecord(MakeEvent(1, "x")).size() + EncodeRecord(MakeEvent(2, "x")).size();
  for (std::size_t cut = two; cut < bytes.size(); ++cut) {
    auto const scan = ScanJournal(std::string_view(bytes).substr(0, cut));
    EXPECT_EQ(scan.events.size(), 2u) << cut;
    EXPECT_EQ(scan.valid_bytes, two);
    EXPECT_EQ(scan.truncated, cut > two);
  }
}

TEST(JournalTest, CorruptionStopsTheScan) {
  std::string bytes;
  for (std::uint64_t s = 1; s <= 3; ++s) bytes += EncodeRecord(MakeEvent(s, "x"));
  auto const first = EncodeRecord(MakeEvent(1, "x")).size();
  auto flipped = bytes;
  flipped[first + kRecordHeaderBytes + 3] ^= 0x01;
  auto const scan = ScanJournal(flipped);
  EXPECT_EQ(scan.events.size(), 1u);
  EXPECT_TRUE(scan.truncated);

  auto gap = EncodeRecord(MakeEvent(1, "x")) + EncodeRecord(MakeEvent(3, "x"));
  EXPECT_EQ(ScanJournal(gap).events.size(), 1u);
}

TEST(JournalTest, OpenCutsTheBadTail) {
  TempDir dir;
  auto const path = dir / "j.log";
  {
    std::ofstream out(path, std::ios::binary);
    out << EncodeRecord(MakeEvent(1, "a")) << "garbage";
  }
  JournalScan scan;
  auto j = Journal::Open(path, &scan, false);
  EXPECT_TRUE(scan.truncated);
  j->Append(MakeEvent(2, "b"));
  j.reset();
  auto const again = ReadJournal(path);
  EXPECT_EQ(again.events.size(), 2u);
  EXPECT_FALSE(again.truncated);
}

TEST(StateTest, RejectsSequenceGaps) {
  ServiceState s(Taxonomy::Default());
  s.Apply(MakeEvent(1, "m000000"));
  EXPECT_THROW(s.Apply(MakeEvent(3, "m000001")), Error);
  EXPECT_EQ(s.last_seq(), 1u);
  EXPECT_EQ(s.NextMessageId(), "m000002");  // 1-based ordinal
}

TEST(StateTest, HashIsAFunctionOfTheEvents) {
  ServiceState a(Taxonomy::Default()), b(Taxonomy::Default());
  for (std::uint64_t i = 1; i <= 4; ++i) {
    a.Apply(MakeEvent(i, "m" + std::to_string(i)));
    b.Apply(MakeEvent(i, "m" + std::to_string(i)));
  }
  EXPECT_EQ(a.Hash(), b.Hash());
  b.Apply(MakeEvent(5, "m5"));
  EXPECT_NE(a.Hash(), b.Hash());
}

TEST(StateTest, LabelsJson) {
  EXPECT_EQ(LabelsToJson(std::nullopt), "UNPARSEABLE");
  EXPECT_FALSE(LabelsFromJson("UNPARSEABLE").has_value());
  auto const l = LabelSet::Of({CategoryId::kSuicidalPlan});
  EXPECT_EQ(LabelsFromJson(LabelsToJson(l)), l);
}

TEST(ConfigTest, ParsesAndRejects) {
  auto const c = ServiceConfig::FromJson(
      Json{{"port", 9000}, {"prompt", "few_shot"}, {"language", "en"}, {"gate_threshold", 0.7}});
  EXPECT_EQ(c.port, 9000);
  EXPECT_EQ(c.prompt_kind, classification::PromptKind::kFewShot);
  EXPECT_EQ(c.language, taxonomy::Language::kEn);
  EXPECT_EQ(c.gate_threshold.value(), 0.7);
  EXPECT_EQ(ServiceConfig::FromJson(c.ToJson()).ToJson(), c.ToJson());

  EXPECT_THROW(ServiceConfig::FromJson(Json{{"prot", 1}}), Error);
  EXPECT_THROW(ServiceConfig::FromJson(Json{{"port", 70000}}), Error);
  EXPECT_THROW(ServiceConfig::FromJson(Json{{"language", "fr"}}), Error);
  EXPECT_THROW(ServiceConfig::FromJson(Json{{"gate_threshold", 2}}), Error);
  EXPECT_THROW(ServiceConfig::FromJson(Json::array()), Error);
}

/// A service over a fresh data directory with a deterministic clock.
struct Harness {
  explicit Harness(classification::ChatBackend* backend = nullptr,
                   std::function<void(ServiceConfig&)> tweak = {})
      : rule(classification::RuleTable::Default(), Taxonomy::Default()) {
    config.asset_dir = triage::testing::SourceAssetDir();
    config.data_dir = dir.path() / "data";
    config.journal_sync = false;
    config.snapshot_every = 5;
    if (tweak) tweak(config);
    active = backend != nullptr ? backend : &rule;
    Reopen();
  }

  void Reopen() {
    svc.reset();
    svc = std::make_unique<TriageService>(config, Taxonomy::Default(), *active, notifier,
                                          [this] { return ++now; });
    svc->Open();
  }

  TempDir dir;
  ServiceConfig config;
  classification::RuleBackend rule;
  classification::ChatBackend* active;
  risk::MemoryNotifier notifier;
  std::int64_t now = 1000;
  std::unique_ptr<TriageService> svc;
};

TEST(ServiceTest, IrrelevantIsMonitored) {
  Harness h;
  auto const r = h.svc->PostMessage("u", "今天天气不错");
  EXPECT_TRUE(r.classified);
  ASSERT_TRUE(r.routing.has_value());
  EXPECT_EQ(r.routing->kind, RoutingKind::kMonitor);
  EXPECT_TRUE(r.session_id.empty());
  EXPECT_TRUE(h.notifier.sent().empty());
}

TEST(ServiceTest, AttemptEscalatesAndNotifiesOnce) {
  Harness h;
  auto const r = h.svc->PostMessage("u", "我上个月吞了安眠药");
  ASSERT_TRUE(r.escalation.has_value());
  EXPECT_EQ(r.routing->kind, RoutingKind::kEscalate);
  ASSERT_TRUE(r.delivery.has_value());
  EXPECT_TRUE(r.delivery->delivered);
  ASSERT_EQ(h.notifier.sent().size(), 1u);
  EXPECT_EQ(h.notifier.sent()[0].idempotency_key, "esc-" + r.message_id);
  EXPECT_EQ(h.svc->Recover().redispatched, 0u);
  EXPECT_EQ(h.notifier.sent().size(), 1u);
}

TEST(ServiceTest, RiskOpensScreeningSession) {
  Harness h;
  auto const r = h.svc->PostMessage("u", "我想自杀");
  ASSERT_FALSE(r.session_id.empty());
  ASSERT_TRUE(r.prompt.has_value());
  auto s = h.svc->GetSession(r.session_id);
  EXPECT_EQ(s.state, SessionState::kAwaitingUser);
  EXPECT_EQ(s.detected_category, CategoryId::kActiveSuicidalIdeation);

  int replies = 0;
  while (h.svc->GetSession(r.session_id).state == SessionState::kAwaitingUser) {
    auto const reply = h.svc->PostReply(r.session_id, "没有");
    EXPECT_TRUE(reply.classified);
    ++replies;
    ASSERT_LT(replies, 20);
  }
  s = h.svc->GetSession(r.session_id);
  EXPECT_EQ(s.state, SessionState::kClosed);
  ASSERT_TRUE(s.report.has_value());
  EXPECT_EQ(static_cast<std::size_t>(replies), s.questions_asked.size());
  try {
    h.svc->PostReply(r.session_id, "再说一句");
    FAIL() << "expected kWrongState";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongState);
  }
}

TEST(ServiceTest, AttemptInsideSessionEscalates) {
  Harness h;
  auto const r = h.svc->PostMessage("u", "有时候觉得死了就好了");
  auto const reply = h.svc->PostReply(r.session_id, "其实我自杀未遂过一次");
  ASSERT_TRUE(reply.escalation.has_value());
  EXPECT_EQ(reply.escalation->session_id, r.session_id);
  EXPECT_EQ(h.svc->GetSession(r.session_id).state, SessionState::kEscalated);
  EXPECT_EQ(h.notifier.DistinctKeys(), 1u);
}

TEST(ServiceTest, AggressionAgainstUsersAlertsCounselor) {
  Harness h;
  auto const r = h.svc->PostMessage("u", "同学天天欺负我");
  ASSERT_FALSE(r.session_id.empty());
  ASSERT_EQ(h.notifier.sent().size(), 1u);
  EXPECT_EQ(h.notifier.sent()[0].idempotency_key, "alert-" + r.session_id);
}

TEST(ServiceTest, BackendFailureIsPendingWithFailSafe) {
  ScriptedBackend down;
  down.SetDown(true);
  Harness h(&down);
  auto const r = h.svc->PostMessage("u", "我想自杀");
  EXPECT_FALSE(r.classified);
  EXPECT_EQ(r.fail_safe_action, risk::RecommendedAction::kReferCounselor);
  EXPECT_FALSE(r.routing.has_value());
  EXPECT_FALSE(r.error.empty());
  EXPECT_EQ(h.svc->Health().at("pending_messages"), 1);
}

TEST(ServiceTest, UnparseableVerdictIsReferred) {
  ScriptedBackend backend({}, "no idea");
  Harness h(&backend);
  auto const r = h.svc->PostMessage("u", "hmm");
  EXPECT_TRUE(r.classified);
  EXPECT_FALSE(r.labels.has_value());
  EXPECT_EQ(r.fail_safe_action, risk::RecommendedAction::kReferCounselor);
  EXPECT_FALSE(r.routing.has_value());
}

TEST(ServiceTest, ReplyFailureLeavesSessionWaiting) {
  ScriptedBackend backend({}, "Suicidal Plan");
  Harness h(&backend);
  auto const r = h.svc->PostMessage("u", "x");
  ASSERT_EQ(h.svc->GetSession(r.session_id).state, SessionState::kAwaitingUser);
  backend.SetDown(true);
  auto const reply = h.svc->PostReply(r.session_id, "有");
  EXPECT_FALSE(reply.classified);
  EXPECT_EQ(h.svc->GetSession(r.session_id).state, SessionState::kAwaitingUser);
}

TEST(ServiceTest, TextValidation) {
  Harness h(nullptr, [](ServiceConfig& c) { c.max_message_chars = 5; });
  auto code = [&](std::string const& text) {
    try {
      h.svc->PostMessage("u", text);
    } catch (Error const& e) {
      return e.code();
    }
    return ErrorCode::kConfig;
  };
  EXPECT_EQ(code("   "), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code("一二三四五六"), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code(std::string("\xff\xfe")), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(h.svc->PostMessage("u", "一二三四五"));
  try {
    h.svc->PostReply("nope", "hi");
    FAIL() << "expected kNotFound";
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(ServiceTest, RestartReplaysToTheSameState) {
  Harness h;
  h.svc->PostMessage("u1", "我想自杀");
  h.svc->PostMessage("u2", "我上个月吞了安眠药");
  h.svc->PostMessage("u3", "今天天气不错");
  auto const hash = h.svc->StateHash();
  auto const seq = h.svc->last_seq();
  h.Reopen();
  EXPECT_EQ(h.svc->StateHash(), hash);
  EXPECT_EQ(h.svc->last_seq(), seq);
  EXPECT_EQ(ReplayDataDir(h.config.data_dir, Taxonomy::Default()).Hash(), hash);
  EXPECT_TRUE(std::filesystem::exists(h.config.data_dir / kSnapshotFile));
}

TEST(ServiceTest, UndeliveredNotificationIsRedeliveredWithSameKey) {
  Harness h;
  h.notifier.FailNext(1);
  auto const r = h.svc->PostMessage("u", "我自杀未遂过");
  ASSERT_TRUE(r.delivery.has_value());
  EXPECT_FALSE(r.delivery->delivered);
  EXPECT_TRUE(h.notifier.sent().empty());
  EXPECT_EQ(h.svc->Health().at("undelivered_notifications"), 1);

  h.Reopen();
  auto const rec = h.svc->Recover();
  EXPECT_EQ(rec.redispatched, 1u);
  ASSERT_EQ(h.notifier.sent().size(), 1u);
  EXPECT_EQ(h.notifier.sent()[0].idempotency_key, "esc-" + r.message_id);
  EXPECT_EQ(h.svc->Recover().redispatched, 0u);
}

TEST(ServiceTest, SnapshotMismatchIsDetected) {
  Harness h;
  for (int i = 0; i < 3; ++i) h.svc->PostMessage("u", "今天天气不错");
  auto const path = h.config.data_dir / kSnapshotFile;
  ASSERT_TRUE(std::filesystem::exists(path));
  auto doc = ReadJsonFile(path);
  doc["hash"] = std::string(64, '0');
  WriteTextFileAtomic(path, doc.dump());
  EXPECT_THROW(ReplayDataDir(h.config.data_dir, Taxonomy::Default()), Error);
}

Json BatchBody(std::string const& id, int n, std::optional<double> threshold = std::nullopt) {
  Json instances = Json::array();
  for (int i = 0; i < n; ++i) {
    instances.push_back({{"id", id + "-" + std::to_string(i)}, {"text", "文本" + std::to_string(i)}});
  }
  Json body = {{"batch_id", id},
          {"phase", "mini_batch"},
          {"annotators", {"a1", "a2", "a3"}},
          {"instances", instances}};
  if (threshold) body["gate_threshold"] = *threshold;
  return body;
}

TEST(ServiceTest, AnnotationRoundTripSurvivesRestart) {
  Harness h;
  // Two unanimous items and one three-way split: kappa = 0.4375.
  auto const created = h.svc->CreateBatch(BatchBody("b", 3, 0.4));
  EXPECT_EQ(created.at("batch_id"), "b");
  std::string const labels[3][3] = {
      {"suicidal_plan", "suicidal_plan", "suicidal_plan"},
      {"irrelevant", "irrelevant", "irrelevant"},
      {"suicidal_plan", "self_injury_behavior", "irrelevant"}};
  std::string const annotators[3] = {"a1", "a2", "a3"};
  Json votes = Json::array();
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a) {
      votes.push_back({{"annotator_id", annotators[a]},
                       {"instance_id", "b-" + std::to_string(i)},
                       {"labels", {labels[i][a]}}});
    }
  }
  EXPECT_THROW(h.svc->BatchKappa("b"), Error);
  EXPECT_EQ(h.svc->SubmitVotes("b", votes).at("accepted"), 9);
  auto const kappa = h.svc->BatchKappa("b");
  EXPECT_TRUE(kappa.at("would_pass").get<bool>());
  auto const closed = h.svc->CloseBatch("b");
  EXPECT_EQ(closed.at("decision"), "accepted");
  EXPECT_NEAR(closed.at("threshold").get<double>(), 0.4, 1e-15);
  auto const hash = h.svc->StateHash();
  h.Reopen();
  EXPECT_EQ(h.svc->StateHash(), hash);

  auto const discussions = h.svc->Discussions().at("discussions");
  ASSERT_EQ(discussions.size(), 1u);
  EXPECT_EQ(discussions[0].at("instance_id"), "b-2");
  h.svc->SubmitResolution("b-2", Json{{"final_labels", {"suicidal_plan"}},
                                      {"acknowledged_by", {"a1", "a2", "a3"}}});
  EXPECT_TRUE(h.svc->Discussions().at("discussions").empty());
  auto const exported = h.svc->ExportJsonl();
  EXPECT_EQ(std::count(exported.begin(), exported.end(), '\n'), 3);
  auto const page = h.svc->Page("b", "a1", 0, 10);
  ASSERT_EQ(page.at("items").size(), 3u);
  EXPECT_TRUE(page.at("items")[0].contains("my_vote"));
}

TEST(ServiceTest, BatchErrorsDoNotChangeState) {
  Harness h;
  h.svc->CreateBatch(BatchBody("b", 2));
  auto const seq = h.svc->last_seq();
  EXPECT_THROW(h.svc->CreateBatch(BatchBody("b", 2)), Error);
  EXPECT_THROW(h.svc->CloseBatch("b"), Error);
  EXPECT_THROW(h.svc->BatchKappa("b"), Error);
  EXPECT_THROW(h.svc->SubmitVotes("b", Json::array()), Error);
  EXPECT_THROW(h.svc->SubmitVotes("missing", Json{{"annotator_id", "a1"},
                                                  {"instance_id", "b-0"},
                                                  {"labels", {"irrelevant"}}}),
               Error);
  EXPECT_EQ(h.svc->last_seq(), seq);
}

TEST(ServiceTest, ConfigThresholdAppliesToNewBatches) {
  Harness h(nullptr, [](ServiceConfig& c) { c.gate_threshold = 0.8; });
  EXPECT_EQ(h.svc->CreateBatch(BatchBody("b", 1)).at("gate_threshold"), 0.8);
  EXPECT_EQ(h.svc->CreateBatch(BatchBody("c", 1, 0.3)).at("gate_threshold"), 0.3);
  EXPECT_EQ(h.svc->Page("b", "a1", 0, 1).at("total"), 1);
  EXPECT_EQ(h.svc->Snapshot().at("hash"), h.svc->StateHash());
}

}  // namespace
}  // namespace triage::service
