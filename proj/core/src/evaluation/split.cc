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

#include "triage/evaluation/split.h"

#include <array>
#include <cmath>
#include <random>

#include "triage/common/error.h"
#include "triage/common/rng.h"

namespace triage::evaluation {

namespace {

enum class Part : std::uint8_t { kTrain, kVal, kTest };

bool IsSmallInteger(double w) {
  return w == std::floor(w) && w < 1e9;
}

void CutGroup(std::vector<std::size_t>& group, SplitSpec const& spec,
              std::mt19937_64& rng, std::vector<Part>& assignment) {
  SeededShuffle(std::span<std::size_t>(group), rng);
  auto const n = group.size();
  auto const n_test = PartSize(n, spec.test, spec);
  auto const n_val = PartSize(n, spec.val, spec);
  for (std::size_t i = 0; i < n; ++i) {
    assignment[group[i]] = i < n_test           ? Part::kTest
                           : i < n_test + n_val ? Part::kVal
                                                : Part::kTrain;
  }
}

}  // namespace

void SplitSpec::Validate() const {
  if (!(train > 0 && val > 0 && test > 0) || !std::isfinite(train + val + test)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratios must be positive");
  }
}

std::size_t PartSize(std::size_t n, double part, SplitSpec const& spec) {
  if (IsSmallInteger(spec.train) && IsSmallInteger(spec.val) &&
      IsSmallInteger(spec.test)) {
    auto const sum = static_cast<std::uint64_t>(spec.train + spec.val + spec.test);
    return static_cast<std::size_t>(n * static_cast<std::uint64_t>(part) / sum);
  }
  // Fractional weights such as 0.8/0.1/0.1: nudge by a relative epsilon so
  // that an exact product like 10 * 0.1 is not floored to 0.
  auto const exact = static_cast<double>(n) * part / (spec.train + spec.val + spec.test);
  return static_cast<std::size_t>(std::floor(exact * (1 + 1e-12)));
}

Split StratifiedSplit(std::span<UtteranceRecord const> dataset, SplitSpec const& spec) {
  spec.Validate();
  std::array<std::vector<std::size_t>, kCategoryCount> single;
  std::vector<std::size_t> multi;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto const& labels = dataset[i].gold_labels;
    if (!labels) {
      throw Error(ErrorCode::kUnlabeledRecord,
                  "record '" + dataset[i].id + "' has no gold labels");
    }
    if (labels->IsMultiLabel()) {
      multi.push_back(i);
    } else {
      single[IndexOf(labels->Members().front())].push_back(i);
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<Part> assignment(dataset.size(), Part::kTrain);
  for (auto& group : single) CutGroup(group, spec, rng, assignment);
  CutGroup(multi, spec, rng, assignment);

  Split out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    switch (assignment[i]) {
      case Part::kTrain: out.train.push_back(dataset[i]); break;
      case Part::kVal: out.val.push_back(dataset[i]); break;
      case Part::kTest: out.test.push_back(dataset[i]); break;
    }
  }
  return out;
}

}  // namespace triage::evaluation
