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

#ifndef TRIAGE_EVALUATION_SPLIT_H_
#define TRIAGE_EVALUATION_SPLIT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "triage/evaluation/records.h"

namespace triage::evaluation {

struct SplitSpec {
  // Relative weights; they need not sum to one.
  double train = 8;
  double val = 1;
  double test = 1;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct Split {
  std::vector<UtteranceRecord> train;
  std::vector<UtteranceRecord> val;
  std::vector<UtteranceRecord> test;
};

/// floor(n * part / (train + val + test)). Integral weights are evaluated in
/// exact integer arithmetic.
std::size_t PartSize(std::size_t n, double part, SplitSpec const& spec);

/// Stratified split. Single-label records are grouped by their category and
/// every group is shuffled and cut separately (test first, then val, the
/// remainder is train); multi-label records form one extra pool cut the same
/// way. Each output keeps the input order. Throws kUnlabeledRecord when a
/// record has no gold labels.
Split StratifiedSplit(std::span<UtteranceRecord const> dataset, SplitSpec const& spec);

}  // namespace triage::evaluation

#endif  // TRIAGE_EVALUATION_SPLIT_H_
