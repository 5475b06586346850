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

#include "triage/common/rng.h"

#include <limits>

namespace triage {

std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  auto const max = std::numeric_limits<std::uint64_t>::max();
  auto const limit = max - (max % bound);
  while (true) {
    auto const draw = rng();
    if (draw < limit) return draw % bound;
  }
}

}  // namespace triage
