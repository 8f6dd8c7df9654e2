// Copyright 2026 The Privleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVLEAK_CORE_SCHEMA_H_
#define PRIVLEAK_CORE_SCHEMA_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privleak {

// Joins per-attribute levels into one intersectional label, e.g.
// "female|black|severe|low".
inline constexpr char kJointLabelSeparator = '|';

// Joins attribute names into a subset key, e.g. "sex+disability".
inline constexpr char kSubsetKeySeparator = '+';

// One component of the protected profile, or the observable itself.
// Categorical attributes carry ordered, distinct levels. Continuous
// attributes carry closed bounds [lower, upper] with lower < upper.
class AttributeSpec {
 public:
  static absl::StatusOr<AttributeSpec> Categorical(
      std::string name, std::vector<std::string> levels);
  static absl::StatusOr<AttributeSpec> Continuous(std::string name,
                                                  double lower, double upper);

  const std::string& name() const { return name_; }
  bool is_categorical() const { return categorical_; }
  const std::vector<std::string>& levels() const { return levels_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  std::optional<int> LevelIndex(absl::string_view label) const;
  bool Contains(double value) const;

  friend bool operator==(const AttributeSpec&, const AttributeSpec&) = default;

 private:
  AttributeSpec() = default;

  std::string name_;
  bool categorical_ = true;
  std::vector<std::string> levels_;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

// The protected vector S = (S1, ..., Sm) together with the observable X.
// Column order used throughout the library: protected attributes in
// declaration order, then the observable.
class ProfileSchema {
 public:
  static absl::StatusOr<ProfileSchema> Create(
      std::vector<AttributeSpec> attributes, AttributeSpec observable);

  const std::vector<AttributeSpec>& attributes() const { return attributes_; }
  const AttributeSpec& observable() const { return columns_.back(); }
  size_t protected_count() const { return attributes_.size(); }

  size_t column_count() const { return columns_.size(); }
  size_t observable_column() const { return columns_.size() - 1; }
  const AttributeSpec& column(size_t c) const { return columns_[c]; }
  std::optional<size_t> FindColumn(absl::string_view name) const;

  bool all_categorical() const;

  friend bool operator==(const ProfileSchema&, const ProfileSchema&) = default;

 private:
  ProfileSchema() = default;

  std::vector<AttributeSpec> attributes_;
  std::vector<AttributeSpec> columns_;
};

// Schema documents are JSON objects:
//   {"attributes": [{"name": "sex", "kind": "categorical",
//                    "levels": ["male", "female"]},
//                   {"name": "disability", "kind": "continuous",
//                    "range": [0, 1]}],
//    "observable": {"name": "hour", "kind": "categorical",
//                   "levels": ["morning", "evening"]}}
absl::StatusOr<ProfileSchema> ParseSchemaJson(absl::string_view json);
absl::StatusOr<ProfileSchema> LoadSchema(const std::string& path);
std::string SchemaToJson(const ProfileSchema& schema);

// Cartesian product of the protected attributes' levels, first attribute
// varying slowest. Fails if any protected attribute is continuous.
absl::StatusOr<std::vector<std::string>> BuildIntersectionLabels(
    const ProfileSchema& schema);

// Observations of (S, X). Stored column-major: categorical columns as level
// indices, continuous columns as reals.
class SampleSet {
 public:
  using Value = std::variant<std::string, double>;

  // Each row holds one value per schema column, in column order.
  static absl::StatusOr<SampleSet> FromRows(
      ProfileSchema schema, const std::vector<std::vector<Value>>& rows);

  // `codes[c]` must be filled for categorical columns and `reals[c]` for
  // continuous ones; the other vector of the pair stays empty.
  static absl::StatusOr<SampleSet> FromColumns(
      ProfileSchema schema, std::vector<std::vector<int>> codes,
      std::vector<std::vector<double>> reals);

  const ProfileSchema& schema() const { return schema_; }
  size_t size() const { return n_; }
  const std::vector<int>& codes(size_t column) const { return codes_[column]; }
  const std::vector<double>& reals(size_t column) const {
    return reals_[column];
  }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  SampleSet(ProfileSchema schema) : schema_(std::move(schema)) {}

  ProfileSchema schema_;
  std::vector<std::vector<int>> codes_;
  std::vector<std::vector<double>> reals_;
  size_t n_ = 0;
};

// Header-labelled comma-separated samples. Column order in the file is
// free; every schema attribute must appear exactly once and no other
// column may appear. Missing values are errors.
absl::StatusOr<SampleSet> ParseSamplesCsv(absl::string_view text,
                                          const ProfileSchema& schema);
absl::StatusOr<SampleSet> LoadSamples(const std::string& path,
                                      const ProfileSchema& schema);
std::string SamplesToCsv(const SampleSet& samples);

struct BinningRule {
  enum class Kind { kEqualWidth, kQuantile, kExplicit };

  static absl::StatusOr<BinningRule> EqualWidth(int bins);
  static absl::StatusOr<BinningRule> Quantile(int bins);
  static absl::StatusOr<BinningRule> Explicit(std::vector<double> cuts);

  Kind kind = Kind::kEqualWidth;
  int bins = 0;
  std::vector<double> cuts;  // kExplicit only
};

class BinningPolicy {
 public:
  absl::Status Set(std::string attribute, BinningRule rule);
  const BinningRule* Find(absl::string_view attribute) const;
  const std::map<std::string, BinningRule, std::less<>>& rules() const {
    return rules_;
  }

 private:
  std::map<std::string, BinningRule, std::less<>> rules_;
};

// "disability=equal:4;age=quantile:3;score=cuts:0.33,0.66"
absl::StatusOr<BinningPolicy> ParseBinningSpec(absl::string_view spec);

// Cut points c_1 < ... < c_{k-1} for one continuous attribute. Quantile
// cuts fall strictly between the last value of a lower group and the next
// larger distinct value, so tied values always stay in the lower bin.
absl::StatusOr<std::vector<double>> ResolveCutPoints(
    const AttributeSpec& attribute, const BinningRule& rule,
    std::span<const double> values);

// Number of cuts <= x: bins are [c_{i}, c_{i+1}) with the last bin closed.
int BinIndex(std::span<const double> cuts, double x);

struct Discretization {
  SampleSet samples;
  std::map<std::string, std::vector<double>> cuts;
};

// Replaces every continuous attribute (observable included) with a
// categorical one whose levels are "bin0" ... "bin{k-1}".
absl::StatusOr<Discretization> Discretize(const SampleSet& samples,
                                          const BinningPolicy& policy);

}  // namespace privleak

#endif  // PRIVLEAK_CORE_SCHEMA_H_
