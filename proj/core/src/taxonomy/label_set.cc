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

#include "triage/taxonomy/label_set.h"

#include <bit>

#include "triage/common/error.h"

namespace triage {

namespace {

constexpr std::array<std::string_view, kCategoryCount> kKeys = {
    "suicide_attempt",
    "suicidal_preparatory_act",
    "suicidal_plan",
    "active_suicidal_ideation",
    "passive_suicidal_ideation",
    "self_injury_behavior",
    "self_injury_ideation",
    "aggression_against_others",
    "aggression_against_users",
    "exploration_about_suicide",
    "irrelevant",
};

}  // namespace

std::string_view CategoryKey(CategoryId id) { return kKeys[IndexOf(id)]; }

std::optional<CategoryId> CategoryFromKey(std::string_view key) {
  for (auto id : kAllCategories) {
    if (kKeys[IndexOf(id)] == key) return id;
  }
  return std::nullopt;
}

bool LabelSet::IsValidMask(Mask mask) {
  if (mask == 0 || (mask & ~kAllBits) != 0) return false;
  return (mask & kIrrelevantBit) == 0 || mask == kIrrelevantBit;
}

std::optional<LabelSet> LabelSet::FromMask(Mask mask) {
  if (!IsValidMask(mask)) return std::nullopt;
  return LabelSet(mask);
}

LabelSet LabelSet::Of(std::initializer_list<CategoryId> ids) {
  return Of(std::vector<CategoryId>(ids));
}

LabelSet LabelSet::Of(std::vector<CategoryId> const& ids) {
  Mask mask = 0;
  for (auto id : ids) mask |= static_cast<Mask>(Mask{1} << IndexOf(id));
  if (!IsValidMask(mask)) {
    throw Error(ErrorCode::kInvalidLabelSet,
                mask == 0 ? "label set is empty"
                          : "irrelevant cannot be combined with other labels");
  }
  return LabelSet(mask);
}

LabelSet LabelSet::FromKeys(std::vector<std::string> const& keys) {
  std::vector<CategoryId> ids;
  ids.reserve(keys.size());
  for (auto const& key : keys) {
    auto id = CategoryFromKey(key);
    if (!id) {
      throw Error(ErrorCode::kInvalidLabelSet, "unknown category '" + key + "'");
    }
    ids.push_back(*id);
  }
  return Of(ids);
}

std::size_t LabelSet::size() const {
  return static_cast<std::size_t>(std::popcount(mask_));
}

std::vector<CategoryId> LabelSet::Members() const {
  std::vector<CategoryId> out;
  for (auto id : kAllCategories) {
    if (Contains(id)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> LabelSet::Keys() const {
  std::vector<std::string> out;
  for (auto id : Members()) out.emplace_back(CategoryKey(id));
  return out;
}

}  // namespace triage
