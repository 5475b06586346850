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

#ifndef TRIAGE_TOOLS_COMMANDS_H_
#define TRIAGE_TOOLS_COMMANDS_H_

#include <CLI11.hpp>

#include <functional>

namespace triage::tools {

/// Each Add* registers a subcommand and returns the action to run when it
/// was selected. Actions return the process exit code.
using Action = std::function<int()>;

Action AddIngest(CLI::App& app);
Action AddSplit(CLI::App& app);
Action AddClassify(CLI::App& app);
Action AddEval(CLI::App& app);
Action AddKappa(CLI::App& app);
Action AddServe(CLI::App& app);
Action AddReplay(CLI::App& app);

}  // namespace triage::tools

#endif  // TRIAGE_TOOLS_COMMANDS_H_
