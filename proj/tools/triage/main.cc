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

// triage: dataset preparation, classification, evaluation and the service.

#include <iostream>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "commands.h"
#include "triage/common/error.h"

namespace {

void PrintError(std::string_view code, std::string const& message) {
  nlohmann::json doc = {{"error", {{"code", code}, {"message", message}}}};
  std::cerr << doc.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crisis-message triage toolkit"};
  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, triage::tools::Action>> commands;
  auto add = [&](auto adder) {
    auto const before = app.get_subcommands({}).size();
    auto action = adder(app);
    commands.emplace_back(app.get_subcommands({})[before], std::move(action));
  };
  add(triage::tools::AddIngest);
  add(triage::tools::AddSplit);
  add(triage::tools::AddClassify);
  add(triage::tools::AddEval);
  add(triage::tools::AddKappa);
  add(triage::tools::AddServe);
  add(triage::tools::AddReplay);

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e);
  }
  try {
    for (auto const& [sub, action] : commands) {
      if (sub->parsed()) return action();
    }
  } catch (triage::Error const& e) {
    PrintError(triage::ErrorCodeName(e.code()), e.what());
    return 1;
  } catch (std::exception const& e) {
    PrintError("INTERNAL", e.what());
    return 1;
  }
  return 2;
}
