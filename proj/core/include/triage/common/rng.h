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

#ifndef TRIAGE_COMMON_RNG_H_
#define TRIAGE_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace triage {

// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so seeded partitions would differ between standard libraries. mt19937_64's
// output sequence is fixed by the standard; everything below derives from it.

/// Unbiased draw from [0, bound) by rejection.
std::uint64_t UniformIndex(std::mt19937_64& rng, std::uint64_t bound);

template <typename T>
void SeededShuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto const j = static_cast<std::size_t>(UniformIndex(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace triage

#endif  // TRIAGE_COMMON_RNG_H_
