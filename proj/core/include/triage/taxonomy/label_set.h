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

#ifndef TRIAGE_TAXONOMY_LABEL_SET_H_
#define TRIAGE_TAXONOMY_LABEL_SET_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace triage {

/// The eleven categories. Enumerator order is the fixed id order used to
/// break risk-rank ties and to lay out every per-category table.
enum class CategoryId : std::uint8_t {
  kSuicideAttempt = 0,
  kSuicidalPreparatoryAct,
  kSuicidalPlan,
  kActiveSuicidalIdeation,
  kPassiveSuicidalIdeation,
  kSelfInjuryBehavior,
  kSelfInjuryIdeation,
  kAggressionAgainstOthers,
  kAggressionAgainstUsers,
  kExplorationAboutSuicide,
  kIrrelevant,
};

inline constexpr std::size_t kCategoryCount = 11;

inline constexpr std::array<CategoryId, kCategoryCount> kAllCategories = {
    CategoryId::kSuicideAttempt,          CategoryId::kSuicidalPreparatoryAct,
    CategoryId::kSuicidalPlan,            CategoryId::kActiveSuicidalIdeation,
    CategoryId::kPassiveSuicidalIdeation, CategoryId::kSelfInjuryBehavior,
    CategoryId::kSelfInjuryIdeation,      CategoryId::kAggressionAgainstOthers,
    CategoryId::kAggressionAgainstUsers,  CategoryId::kExplorationAboutSuicide,
    CategoryId::kIrrelevant,
};

constexpr std::size_t IndexOf(CategoryId id) {
  return static_cast<std::size_t>(id);
}

/// Stable machine key, e.g. "suicide_attempt". Used in every file format.
std::string_view CategoryKey(CategoryId id);
std::optional<CategoryId> CategoryFromKey(std::string_view key);

/// A non-empty set of categories in which Irrelevant never co-occurs with
/// another category. Instances can only be obtained through the validating
/// factories, so holding a LabelSet means holding a valid one.
class LabelSet {
 public:
  using Mask = std::uint16_t;

  static constexpr Mask kIrrelevantBit = Mask{1} << IndexOf(CategoryId::kIrrelevant);
  static constexpr Mask kAllBits = (Mask{1} << kCategoryCount) - 1;

  /// Throws Error(kInvalidLabelSet) on an empty or contradictory set.
  static LabelSet Of(std::initializer_list<CategoryId> ids);
  static LabelSet Of(std::vector<CategoryId> const& ids);
  static std::optional<LabelSet> FromMask(Mask mask);
  static bool IsValidMask(Mask mask);

  /// Parses a list of category keys; throws on unknown keys or invalid sets.
  static LabelSet FromKeys(std::vector<std::string> const& keys);

  bool Contains(CategoryId id) const {
    return (mask_ >> IndexOf(id)) & 1U;
  }
  std::size_t size() const;
  Mask mask() const { return mask_; }
  bool IsMultiLabel() const { return size() > 1; }
  bool IsIrrelevantOnly() const { return mask_ == kIrrelevantBit; }

  /// Members in id order.
  std::vector<CategoryId> Members() const;
  std::vector<std::string> Keys() const;

  friend bool operator==(LabelSet, LabelSet) = default;

 private:
  explicit LabelSet(Mask mask) : mask_(mask) {}
  Mask mask_;
};

/// A classifier output for one instance; std::nullopt means the raw output
/// could not be parsed into a valid LabelSet.
using Prediction = std::optional<LabelSet>;

}  // namespace triage

#endif  // TRIAGE_TAXONOMY_LABEL_SET_H_
