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

#include <pthread.h>
#include <signal.h>

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "commands.h"
#include "triage/common/assets.h"
#include "triage/common/json_io.h"
#include "triage/service/config.h"
#include "triage/service/http_api.h"
#include "triage/service/service.h"
#include "triage/taxonomy/taxonomy.h"

namespace triage::tools {

Action AddServe(CLI::App& app) {
  struct Opts {
    std::string config;
    std::optional<int> port;
    std::string data_dir;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("serve", "Run the /v1 HTTP service");
  cmd->add_option("--config", o->config, "Service config JSON")->required();
  cmd->add_option("--port", o->port, "Override the configured port (0 picks one)");
  cmd->add_option("--data-dir", o->data_dir, "Override the configured data directory");
  return [o] {
    auto config = service::ServiceConfig::Load(o->config);
    if (o->port) config.port = *o->port;
    if (!o->data_dir.empty()) config.data_dir = o->data_dir;

    // Block the stop signals before any thread starts so only the waiter
    // below receives them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGINT);
    sigaddset(&stop_signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    auto const tax = taxonomy::Taxonomy::Load(config.ResolvedTaxonomyPath());
    auto backend = service::MakeBackend(config.backend, tax, config.ResolvedAssetDir());
    auto notifier = service::MakeNotifier(config);
    service::TriageService svc(config, tax, *backend, *notifier);
    svc.Open();
    auto const recovered = svc.Recover();
    service::HttpApi api(svc);
    int const port = api.Bind(config.bind_address, config.port);
    std::cout << Json{{"listening", config.bind_address + ":" + std::to_string(port)},
                      {"port", port},
                      {"last_seq", svc.last_seq()},
                      {"redispatched", recovered.redispatched},
                      {"sessions_resumed", recovered.sessions_resumed}}
                     .dump()
              << std::endl;

    std::thread waiter([&api, stop_signals] {
      int sig = 0;
      sigwait(&stop_signals, &sig);
      api.Stop();
    });
    api.Serve();
    // Serve() also returns on a bind failure; wake the waiter either way.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    return 0;
  };
}

Action AddReplay(CLI::App& app) {
  struct Opts {
    std::string data_dir, taxonomy;
    bool state = false;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("replay", "Rebuild service state from a data directory");
  cmd->add_option("--data-dir", o->data_dir, "Service data directory")->required();
  cmd->add_option("--taxonomy", o->taxonomy, "Taxonomy JSON");
  cmd->add_flag("--state", o->state, "Print the full folded state");
  return [o] {
    auto const tax = taxonomy::Taxonomy::Load(
        o->taxonomy.empty() ? DefaultAssetDir() / "taxonomy.json" : std::filesystem::path(o->taxonomy));
    service::JournalScan scan;
    auto const state = service::ReplayDataDir(o->data_dir, tax, &scan);
    Json doc = {{"seq", state.last_seq()},
                {"hash", state.Hash()},
                {"events", scan.events.size()},
                {"valid_bytes", scan.valid_bytes},
                {"truncated", scan.truncated}};
    if (o->state) doc["state"] = state.ToJson();
    std::cout << doc.dump() << '\n';
    return 0;
  };
}

}  // namespace triage::tools
